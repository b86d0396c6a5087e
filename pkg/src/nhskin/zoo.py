"""Named example models with published parameter defaults and reference data.

Every entry ships the parameter set used in the source figures, the internal
symmetries it carries (verified at build time in the test suite), and the
figure-quoted OBC eigenvalues as golden reference data.

Two-band entries follow a common layout: the second orbital is the momentum
reverse of the first, which is what makes the symmetry constraints below hold
exactly on the hopping matrices.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import UnknownId, UnknownParameter
from .lattice import TightBindingModel
from .symmetry import SymmetryKind, SymmetryOperator

__all__ = ["ZooEntry", "ENTRIES", "ids", "entry", "build", "analytic_bands_s47"]

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]])
ISIGMA_Y = np.array([[0.0, 1.0], [-1.0, 0.0]])


@dataclass(frozen=True)
class ZooEntry:
    """Constructor metadata for one example model."""

    id: str
    citation: str
    defaults: dict
    builder: object
    symmetries: tuple = ()  # (SymmetryKind, unitary) pairs
    reference: tuple = ()   # (quantity, value, provenance) triples
    match_tol: float = 0.02

    def build(self, **overrides):
        params = dict(self.defaults)
        for key, value in overrides.items():
            if key not in params:
                raise UnknownParameter(f"{self.id} has no parameter {key!r}")
            params[key] = float(value)
        return self.builder(**params)

    def operators(self):
        return [SymmetryOperator(kind, u) for kind, u in self.symmetries]

    def golden_energies(self):
        return [value for quantity, value, _ in self.reference if quantity == "obc_eigenvalue"]


def _eq16(t1, tm1, w1, wm1, p1, pm1, c):
    hop = {
        (0, 0): [[0, c], [c, 0]],
        (1, 0): [[t1, 0], [0, w1]],
        (-1, 0): [[tm1, 0], [0, wm1]],
        (0, 1): [[0, 0], [p1, 0]],
        (0, -1): [[0, pm1], [0, 0]],
    }
    return TightBindingModel(2, 2, hop, name="eq16")


def _eq18(tp, tm, gamma):
    hop = {
        (0,): [[0, gamma], [gamma, 0]],
        (1,): [[tp, 0], [0, tm]],
        (-1,): [[tm, 0], [0, tp]],
    }
    return TightBindingModel(1, 2, hop, name="eq18")


def _s37(m, gamma, tx, ty, t, tt):
    onsite = [[m + 1j * gamma, t], [tt, -m - 1j * gamma]]
    hop = {
        (0, 0): onsite,
        (1, 0): [[tx, 0], [0, 0]],
        (-1, 0): [[0, 0], [0, -tx]],
        (0, 1): [[ty, 0], [0, 0]],
        (0, -1): [[0, 0], [0, -ty]],
    }
    return TightBindingModel(2, 2, hop, name="s37")


def _s39(m, tx, ty, t, tt):
    model = _s37(m, 0.0, tx, ty, t, tt)
    return TightBindingModel(2, 2, model.hoppings, name="s39")


def _s41(tt0, t0, tx, ty, gamma):
    hop = {
        (0, 0): [[1j * gamma, t0], [tt0, -2j * gamma]],
        (-1, 0): [[0, tx], [0, 0]],
        (1, 0): [[0, 0], [tx, 0]],
        (0, -1): [[0, ty], [0, 0]],
        (0, 1): [[0, 0], [ty, 0]],
    }
    return TightBindingModel(2, 2, hop, name="s41")


def _s43(t0, m, gamma1, gamma2, t1, tm1, w1, wm1):
    hop = {
        (0, 0): [[0, t0 + m + 1j * gamma1], [t0 - m + 1j * gamma2, 0]],
        (-1, 0): [[0, tm1], [0, 0]],
        (1, 0): [[0, 0], [t1, 0]],
        (0, -1): [[0, wm1], [0, 0]],
        (0, 1): [[0, 0], [w1, 0]],
    }
    return TightBindingModel(2, 2, hop, name="s43")


def _s45(t0, gamma, m1, m2, t1, tm1, w):
    hop = {
        (0, 0): [[t0 + 1j * gamma, m1], [m2, t0 - 1j * gamma]],
        (1, 0): [[t1, 0], [0, tm1]],
        (-1, 0): [[tm1, 0], [0, t1]],
        (0, 1): [[0, w], [w, 0]],
        (0, -1): [[0, w], [w, 0]],
    }
    return TightBindingModel(2, 2, hop, name="s45")


def _s47(t1, tm1, w1, wm1, gamma):
    hop = {
        (0, 0): [[0, gamma], [gamma, 0]],
        (1, 0): [[t1, 0], [0, tm1]],
        (-1, 0): [[tm1, 0], [0, t1]],
        (0, 1): [[w1, 0], [0, wm1]],
        (0, -1): [[wm1, 0], [0, w1]],
    }
    return TightBindingModel(2, 2, hop, name="s47")


def _hatano_nelson(tp, tm):
    hop = {(1,): [[tp]], (-1,): [[tm]]}
    return TightBindingModel(1, 1, hop, name="hatano_nelson")


ENTRIES = {}


def _register(entry_obj):
    ENTRIES[entry_obj.id] = entry_obj


_register(ZooEntry(
    id="eq16",
    citation="2D two-band model with time-reversal symmetry (Fig. 1)",
    defaults=dict(t1=2.0, tm1=1.0, w1=1.5, wm1=3.3, p1=1.8, pm1=2.6, c=0.5),
    builder=_eq16,
    symmetries=((SymmetryKind.TRS, np.eye(2)),),
    reference=(
        ("obc_eigenvalue", -1.5 - 0.195j, "fig1"),
        ("obc_eigenvalue", -1.5 + 0.195j, "fig1"),
    ),
))

_register(ZooEntry(
    id="eq18",
    citation="1D two-band model with TRS-dagger; bidirectional modes (Figs. 2-3)",
    defaults=dict(tp=1.0, tm=2.0, gamma=0.0),
    builder=_eq18,
    symmetries=((SymmetryKind.TRS_DAGGER, SIGMA_X),),
    reference=(
        ("obc_eigenvalue_gamma0", 2.53, "fig2"),
        ("obc_eigenvalue_gamma0.1", 1.87 + 0.64j, "fig3"),
    ),
))

_register(ZooEntry(
    id="s37",
    citation="2D two-band model with particle-hole symmetry (Fig. S1)",
    defaults=dict(m=1.5, gamma=1.0, tx=3.0, ty=2.5, t=1.0, tt=2.0),
    builder=_s37,
    symmetries=((SymmetryKind.PHS, ISIGMA_Y),),
    reference=(
        ("obc_eigenvalue", 2.24 + 5.05j, "figS1"),
        ("obc_eigenvalue", -2.24 - 5.05j, "figS1"),
    ),
))

_register(ZooEntry(
    id="s39",
    citation="2D two-band model with chiral symmetry (Fig. S2)",
    defaults=dict(m=1.5, tx=3.0, ty=2.5, t=1.0, tt=2.0),
    builder=_s39,
    symmetries=((SymmetryKind.CS, ISIGMA_Y),),
    reference=(
        ("obc_eigenvalue", 4.36 + 3.21j, "figS2"),
        ("obc_eigenvalue", -4.36 + 3.21j, "figS2"),
    ),
))

_register(ZooEntry(
    id="s41",
    citation="2D two-band model with PHS-dagger (Fig. S3)",
    defaults=dict(tt0=-1.0, t0=3.0, tx=2.0, ty=2.3, gamma=2.0),
    builder=_s41,
    symmetries=((SymmetryKind.PHS_DAGGER, np.diag([1.0, -1.0])),),
    reference=(
        ("obc_eigenvalue", 1.37 - 3.33j, "figS3"),
        ("obc_eigenvalue", -1.37 - 3.33j, "figS3"),
    ),
))

_register(ZooEntry(
    id="s43",
    citation="2D two-band model with sublattice symmetry (Fig. S4)",
    defaults=dict(t0=3.0, m=1.5, gamma1=1.0, gamma2=-2.0, t1=2.0, tm1=3.0, w1=2.3, wm1=4.0),
    builder=_s43,
    symmetries=((SymmetryKind.SLS, np.diag([1.0, -1.0])),),
    reference=(
        ("obc_eigenvalue", -4.87 + 0.70j, "figS4"),
        ("obc_eigenvalue", 4.87 - 0.70j, "figS4"),
    ),
))

_register(ZooEntry(
    id="s45",
    citation="2D two-band model with pseudo-Hermitian symmetry (Fig. S5)",
    defaults=dict(t0=3.0, gamma=2.0, m1=1.5, m2=-3.0, t1=2.0, tm1=3.0, w=2.3),
    builder=_s45,
    symmetries=((SymmetryKind.PSEUDO_HERMITIAN, SIGMA_X),),
    reference=(
        ("obc_eigenvalue", 3.19 + 0.80j, "figS5"),
        ("obc_eigenvalue", 3.19 - 0.80j, "figS5"),
    ),
))

_register(ZooEntry(
    id="s47",
    citation="2D two-band model with TRS-dagger; bidirectional modes (Figs. S6-S9)",
    defaults=dict(t1=1.0, tm1=3.0, w1=1.0, wm1=2.0, gamma=0.0),
    builder=_s47,
    symmetries=((SymmetryKind.TRS_DAGGER, SIGMA_X),),
    reference=(
        ("obc_eigenvalue_gamma0", 2.29, "figS6"),
        ("obc_eigenvalue_gamma0.1", 2.35 + 1.68j, "figS7"),
        ("obc_eigenvalue_gamma2", 2.65 + 1j, "figS8"),
        ("obc_eigenvalue_gamma2", -8.09, "figS8"),
    ),
))

_register(ZooEntry(
    id="hatano_nelson",
    citation="single-band asymmetric-hopping chain (closed-form oracle model)",
    defaults=dict(tp=1.0, tm=2.0),
    builder=_hatano_nelson,
    symmetries=(),
    reference=(),
))


def ids():
    """Sorted list of known model ids."""
    return sorted(ENTRIES)


def entry(model_id):
    try:
        return ENTRIES[model_id]
    except KeyError:
        raise UnknownId(f"unknown zoo id {model_id!r}; known: {', '.join(ids())}") from None


def build(model_id, **overrides):
    """Instantiate a zoo model, optionally overriding declared parameters."""
    return entry(model_id).build(**overrides)


def analytic_bands_s47(kx, ky, t1=1.0, tm1=3.0, w1=1.0, wm1=2.0, gamma=0.0):
    """Closed-form bands of the s47 model (principal square root).

    Returns the pair ``E+(kx, ky), E-(kx, ky)``; broadcasts over array input.
    """
    kx = np.asarray(kx, dtype=float)
    ky = np.asarray(ky, dtype=float)
    base = (t1 + tm1) * np.cos(kx) + (w1 + wm1) * np.cos(ky)
    rad = gamma**2 - ((t1 - tm1) * np.sin(kx) + (w1 - wm1) * np.sin(ky)) ** 2
    root = np.sqrt(rad.astype(complex))
    return base + root, base - root
