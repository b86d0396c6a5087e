"""The seven internal symmetries of non-Hermitian lattice models.

Each symmetry is a unitary ``U`` (possibly composed with complex conjugation)
that constrains every hopping matrix.  The constraint is expressed directly on
the hopping map: ``U t_j U^{-1}`` must equal a kind-specific image of the
hoppings, which keeps verification exact and independent of any momentum grid.

Rule table (``target_j`` for each kind)::

    trs               conj(t_j)
    phs              -transpose(t_{-j})
    cs               -conj(transpose(t_{-j}))
    trs_dagger        transpose(t_{-j})
    phs_dagger       -conj(t_j)
    sls              -t_j
    pseudo_hermitian  conj(transpose(t_{-j}))

Every bundled example model verifies against this table at machine precision
with its published unitary.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DimensionError, NoIntertwiner
from .lattice import TightBindingModel

__all__ = [
    "SymmetryKind",
    "SymmetryOperator",
    "PartnerPrediction",
    "transform_hopping",
    "symmetry_target",
    "check_symmetry",
    "find_intertwiner",
    "partner_prediction",
    "spectral_relation",
    "winding_identity",
]

UNITARITY_TOL = 1e-10


class SymmetryKind(enum.Enum):
    TRS = "trs"
    PHS = "phs"
    CS = "cs"
    TRS_DAGGER = "trs_dagger"
    PHS_DAGGER = "phs_dagger"
    SLS = "sls"
    PSEUDO_HERMITIAN = "pseudo_hermitian"

    @property
    def antiunitary(self):
        """Whether the operator involves complex conjugation."""
        return self in _ANTIUNITARY

    @classmethod
    def from_string(cls, text):
        try:
            return cls(str(text).strip().lower())
        except ValueError:
            raise DimensionError(f"unknown symmetry kind {text!r}") from None


_ANTIUNITARY = {SymmetryKind.TRS, SymmetryKind.TRS_DAGGER, SymmetryKind.CS, SymmetryKind.SLS}

# target_j = sign * op(t_{-j if flip else j}); op in {1, conj, T, dagger}
_RULES = {
    SymmetryKind.TRS: (False, "conj", +1),
    SymmetryKind.PHS: (True, "T", -1),
    SymmetryKind.CS: (True, "dagger", -1),
    SymmetryKind.TRS_DAGGER: (True, "T", +1),
    SymmetryKind.PHS_DAGGER: (False, "conj", -1),
    SymmetryKind.SLS: (False, "none", -1),
    SymmetryKind.PSEUDO_HERMITIAN: (True, "dagger", +1),
}

_OPS = {
    "none": lambda m: m,
    "conj": lambda m: m.conj(),
    "T": lambda m: m.T,
    "dagger": lambda m: m.conj().T,
}


@dataclass(frozen=True)
class SymmetryOperator:
    """A symmetry kind together with its unitary matrix."""

    kind: SymmetryKind
    u: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=complex)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise DimensionError(f"symmetry unitary must be square, got shape {u.shape}")
        defect = np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0])))
        if defect > UNITARITY_TOL:
            raise DimensionError(f"matrix is not unitary (defect {defect:.2e})")
        u = u.copy()
        u.flags.writeable = False
        object.__setattr__(self, "kind", SymmetryKind(self.kind))
        object.__setattr__(self, "u", u)


class SymmetryCheck(NamedTuple):
    ok: bool
    residual: float


@dataclass(frozen=True)
class PartnerPrediction:
    """How a skin mode's energy and decay factor map to its symmetry partner."""

    energy_map: str  # one of "E", "-E", "E*", "-E*"
    mu_sign: int

    def apply(self, energy):
        return apply_energy_map(self.energy_map, energy)


def apply_energy_map(name, energy):
    energy = complex(energy)
    if name == "E":
        return energy
    if name == "-E":
        return -energy
    if name == "E*":
        return energy.conjugate()
    if name == "-E*":
        return -energy.conjugate()
    raise DimensionError(f"unknown energy map {name!r}")


# Table I of partner constraints: (energy_map, mu_sign).
_PARTNER_TABLE = {
    SymmetryKind.TRS: ("E*", +1),
    SymmetryKind.PHS: ("-E", -1),
    SymmetryKind.CS: ("-E*", -1),
    SymmetryKind.TRS_DAGGER: ("E", -1),
    SymmetryKind.PHS_DAGGER: ("-E*", +1),
    SymmetryKind.SLS: ("-E", +1),
    SymmetryKind.PSEUDO_HERMITIAN: ("E*", -1),
}

# Induced identity on determinant windings: w(E, mu) = sign * w(emap(E), mu_sign*mu).
# Follows from the hopping rule table above by the substitution j.(mu+ik).
_WINDING_IDENTITY = {
    SymmetryKind.TRS: ("E*", +1, +1),
    SymmetryKind.PHS: ("-E", -1, -1),
    SymmetryKind.CS: ("-E*", -1, -1),
    SymmetryKind.TRS_DAGGER: ("E", -1, -1),
    SymmetryKind.PHS_DAGGER: ("-E*", +1, +1),
    SymmetryKind.SLS: ("-E", +1, +1),
    SymmetryKind.PSEUDO_HERMITIAN: ("E*", -1, -1),
}

# Induced relation between Bloch spectra: multiset eig H(k) = emap(multiset eig H(k_sign*k)).
_SPECTRAL_RELATION = {
    SymmetryKind.TRS: (-1, "E*"),
    SymmetryKind.PHS: (-1, "-E"),
    SymmetryKind.CS: (+1, "-E*"),
    SymmetryKind.TRS_DAGGER: (-1, "E"),
    SymmetryKind.PHS_DAGGER: (-1, "-E*"),
    SymmetryKind.SLS: (+1, "-E"),
    SymmetryKind.PSEUDO_HERMITIAN: (+1, "E*"),
}


def partner_prediction(kind):
    """Energy map and decay-factor sign of the symmetry-enforced partner mode."""
    emap, sign = _PARTNER_TABLE[SymmetryKind(kind)]
    return PartnerPrediction(emap, sign)


def spectral_relation(kind):
    """(k sign, energy map) relating Bloch spectra at ``k`` and ``k_sign * k``."""
    return _SPECTRAL_RELATION[SymmetryKind(kind)]


def winding_identity(kind):
    """(energy map, mu sign, overall sign) of the induced winding-number identity."""
    return _WINDING_IDENTITY[SymmetryKind(kind)]


def _check_sides(op, model):
    if op.u.shape[0] != model.orbitals:
        raise DimensionError(
            f"unitary side {op.u.shape[0]} does not match model orbitals {model.orbitals}"
        )


def transform_hopping(op, model):
    """Conjugate every hopping matrix: returns the model with ``t_j -> U t_j U^{-1}``.

    Compare the result against :func:`symmetry_target` to test a symmetry.
    """
    _check_sides(op, model)
    u = op.u
    uinv = u.conj().T
    return model.map_hoppings(lambda vec, mat: u @ mat @ uinv,
                              name=f"{op.kind.value}({model.name})")


def symmetry_target(kind, model):
    """Kind-specific image of the hopping map, as a dict over the support union.

    Missing hoppings count as zero, so the support is the union of the model's
    hopping vectors and their negatives.
    """
    kind = SymmetryKind(kind)
    flip, opname, sign = _RULES[kind]
    apply = _OPS[opname]
    zero = np.zeros((model.orbitals, model.orbitals), dtype=complex)
    support = set(model.hoppings)
    support |= {tuple(-v for v in vec) for vec in support}
    out = {}
    for vec in support:
        src = tuple(-v for v in vec) if flip else vec
        out[vec] = sign * apply(model.hoppings.get(src, zero))
    return out


def check_symmetry(op, model, tol=1e-10):
    """Does ``U t_j U^{-1}`` match the kind's target for every hopping vector?

    Returns ``(ok, residual)`` where ``residual`` is the largest entrywise
    mismatch over the support union.
    """
    _check_sides(op, model)
    if tol <= 0:
        raise DimensionError("tol must be positive")
    u = op.u
    uinv = u.conj().T
    target = symmetry_target(op.kind, model)
    zero = np.zeros((model.orbitals, model.orbitals), dtype=complex)
    residual = 0.0
    for vec, tgt in target.items():
        mat = model.hoppings.get(vec, zero)
        residual = max(residual, float(np.max(np.abs(u @ mat @ uinv - tgt))))
    return SymmetryCheck(residual <= tol, residual)


def _phase_normalize(u, floor=1e-10):
    flat = u.reshape(-1)
    big = np.abs(flat) > floor * max(1.0, float(np.max(np.abs(flat))))
    idx = int(np.argmax(big))
    phase = flat[idx] / abs(flat[idx])
    return u / phase


def find_intertwiner(kind, model, tol=1e-9):
    """Search for a unitary ``U`` realizing the symmetry on the model's hoppings.

    Builds the linear system ``U t_j = target_j U`` over all hopping vectors,
    extracts its null space by SVD thresholding at ``tol``, and polar-decomposes
    candidate solutions.  A returned operator always re-verifies through
    :func:`check_symmetry` at ``10 * tol``.

    Raises
    ------
    NoIntertwiner
        If the solution space is empty or contains no unitary element.
    """
    kind = SymmetryKind(kind)
    if tol <= 0:
        raise DimensionError("tol must be positive")
    s = model.orbitals
    target = symmetry_target(kind, model)
    zero = np.zeros((s, s), dtype=complex)
    eye = np.eye(s)
    blocks = []
    for vec, tgt in target.items():
        mat = model.hoppings.get(vec, zero)
        # vec(U t_j - target_j U) = (I kron t_j^T - target_j kron I) vec(U)
        blocks.append(np.kron(eye, mat.T) - np.kron(tgt, eye))
    system = np.vstack(blocks)
    _, sing, vh = np.linalg.svd(system)
    smax = sing[0] if sing.size else 0.0
    null = vh[sing <= tol * max(1.0, smax)] if sing.size else vh
    if null.shape[0] == 0:
        raise NoIntertwiner(f"no solution space for {kind.value} on {model.name!r}")

    basis = null.conj()  # rows span the solution space for vec(U)
    candidates = []
    coeff_id = basis @ np.eye(s).reshape(-1).conj()
    if np.linalg.norm(coeff_id) > 1e-8:
        candidates.append(coeff_id @ basis)
    candidates.extend(basis)
    rng = np.random.default_rng(7)
    for _ in range(8):
        w = rng.normal(size=basis.shape[0]) + 1j * rng.normal(size=basis.shape[0])
        candidates.append(w @ basis)

    for cand in candidates:
        m = cand.reshape(s, s)
        uu, sv, vvh = np.linalg.svd(m)
        if sv[-1] <= tol * max(1.0, sv[0]):
            continue  # singular beyond tolerance: not invertible, skip
        u = _phase_normalize(uu @ vvh)
        op = SymmetryOperator(kind, u)
        if check_symmetry(op, model, 10 * tol).ok:
            return op
    raise NoIntertwiner(f"solution space of {kind.value} on {model.name!r} contains no unitary")
