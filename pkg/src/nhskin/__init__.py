"""Non-Hermitian tight-binding toolkit.

Builds lattice models with arbitrary complex hoppings in any dimension,
verifies their internal symmetries, diagonalizes them under open and periodic
boundaries, classifies skin-mode localization (including modes pinned at two
opposite boundaries at once), evaluates and minimizes the Ronkin function of
the associated amoeba, and computes argument-principle winding invariants.
"""

from .amoeba import (
    OBCMembership,
    RonkinEvaluation,
    RonkinMinimum,
    WindingReport,
    amoeba_obc_test,
    ronkin_gradient,
    ronkin_minimize,
    ronkin_value,
    winding_number,
)
from .bands import (
    BandLoop,
    BandPairing,
    NuReport,
    band_winding,
    nu_invariant,
    pair_bands_trs_dagger,
    pbc_winding_vanishes_trs_dagger,
    track_bands,
)
from .errors import (
    AmbiguousSelector,
    BranchAmbiguity,
    DegenerateFit,
    DimensionError,
    InvariantViolation,
    LatticeTooSmall,
    MaxIterations,
    NHSkinError,
    NoIntertwiner,
    NonIntegerPhase,
    NotDegenerate,
    PairingFailure,
    ParseError,
    PartnerNotFound,
    SolverError,
    TooSingular,
    UnknownId,
    UnknownParameter,
)
from .lattice import (
    ComplexMomentum,
    HoppingTerm,
    TightBindingModel,
    bloch_grid,
    bloch_hamiltonian,
    generalized_bloch,
    obc_hamiltonian,
)
from .modelfile import load_model, save_model
from .spectral import (
    FitConfig,
    LocalizationReport,
    SpectralResult,
    degenerate_group_localize,
    density_profile,
    fit_decay_factor,
    obc_spectrum,
    pbc_spectrum,
)
from .symmetry import (
    PartnerPrediction,
    SymmetryKind,
    SymmetryOperator,
    check_symmetry,
    find_intertwiner,
    partner_prediction,
    spectral_relation,
    transform_hopping,
    winding_identity,
)
from .verify import (
    PartnerCheckResult,
    ScanEntry,
    ScanSummary,
    bidirectional_scan,
    classify_spectrum,
    table1_check,
)
from . import zoo

__version__ = "0.1.0"
