"""Exception types shared across the package."""


class NHSkinError(Exception):
    """Base class for all package errors."""

    code = "error"


class DimensionError(NHSkinError):
    """A vector or matrix does not match the model's dimension or orbital count."""

    code = "dimension"


class LatticeTooSmall(NHSkinError):
    """A hopping vector does not fit inside the requested finite lattice."""

    code = "lattice_too_small"


class SolverError(NHSkinError):
    """The dense eigensolver failed to converge."""

    code = "solver"


class AmbiguousSelector(NHSkinError):
    """An eigenvalue selector matched two or more non-degenerate eigenvalues."""

    code = "ambiguous_selector"


class NotDegenerate(NHSkinError):
    """Fewer than two eigenvalues matched a requested degenerate group."""

    code = "not_degenerate"


class DegenerateFit(NHSkinError):
    """A density marginal contains zeros that prevent a log-linear fit."""

    code = "degenerate_fit"


class NoIntertwiner(NHSkinError):
    """The intertwiner equations admit no unitary solution."""

    code = "no_intertwiner"


class NonIntegerPhase(NHSkinError):
    """Accumulated loop phase is not close to an integer multiple of 2*pi."""

    code = "non_integer_phase"


class TooSingular(NHSkinError):
    """Too many quadrature nodes fell on near-zeros of the determinant."""

    code = "too_singular"


class MaxIterations(NHSkinError):
    """Iterative minimization hit its iteration or search-box limit."""

    code = "max_iterations"

    def __init__(self, message, mu_best=None, value_best=None):
        super().__init__(message)
        self.mu_best = mu_best
        self.value_best = value_best


class BranchAmbiguity(NHSkinError):
    """Band tracking could not disambiguate branches near an eigenvalue collision."""

    code = "branch_ambiguity"


class PairingFailure(NHSkinError):
    """Band loops admit no perfect pairing under the conjugation image."""

    code = "pairing_failure"


class PartnerNotFound(NHSkinError):
    """No eigenvalue lies within tolerance of a predicted partner energy."""

    code = "partner_not_found"


class UnknownId(NHSkinError):
    """Unknown model-zoo identifier."""

    code = "unknown_id"


class UnknownParameter(NHSkinError):
    """Override for a parameter a zoo entry does not declare."""

    code = "unknown_parameter"


class ParseError(NHSkinError):
    """A model file failed to parse."""

    code = "parse"


class InvariantViolation(NHSkinError):
    """A model file parsed but violates a type invariant."""

    code = "invariant"
