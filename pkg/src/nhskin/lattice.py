"""Tight-binding models with complex hopping matrices.

A model is a finite collection of hopping matrices ``t_j`` indexed by integer
displacement vectors ``j``.  It can be evaluated as a Bloch matrix
``H(k) = sum_j t_j exp(i k.j)``, as its analytic continuation
``H(e^{mu+ik}) = sum_j t_j exp(j.(mu+ik))``, or as a dense real-space matrix
on a finite open-boundary lattice.

Conventions (fixed throughout the package):

* lattice constant 1 in every direction, so ``mu`` is a per-site log scale;
* OBC site ordering is row-major over ``(x_1, ..., x_d)`` with the orbital
  index fastest;
* the real-space block coupling row site ``x`` to column site ``x'`` is
  ``t_{x'-x}``, so a vector ``psi(x) = prod_m beta_m^{x_m}`` multiplies into
  ``H(beta) psi`` and decay factors ``mu_m > 0`` mean localization at the
  max-coordinate boundary.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, LatticeTooSmall

__all__ = [
    "HoppingTerm",
    "TightBindingModel",
    "ComplexMomentum",
    "bloch_hamiltonian",
    "generalized_bloch",
    "bloch_grid",
    "obc_hamiltonian",
]


@dataclass(frozen=True)
class HoppingTerm:
    """One hopping matrix ``t_j`` together with its displacement vector ``j``."""

    vector: tuple
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 1:
            raise DimensionError(f"hopping matrix must be square, got shape {mat.shape}")
        object.__setattr__(self, "vector", tuple(int(v) for v in self.vector))
        object.__setattr__(self, "matrix", mat)


class TightBindingModel:
    """Translation-invariant lattice model with `s` internal degrees of freedom.

    Parameters
    ----------
    dimension : int
        Spatial dimension d.
    orbitals : int
        Internal degrees of freedom s per unit cell.
    hoppings : mapping or iterable
        Either a mapping ``{j: t_j}`` or an iterable of ``(j, t_j)`` pairs /
        :class:`HoppingTerm`.  Duplicate vectors are rejected rather than
        summed, to catch model-file typos.
    name : str
        Free-form label.
    """

    def __init__(self, dimension, orbitals, hoppings, name=""):
        dimension = int(dimension)
        orbitals = int(orbitals)
        if dimension < 1:
            raise DimensionError("dimension must be a positive integer")
        if orbitals < 1:
            raise DimensionError("orbitals must be a positive integer")

        if hasattr(hoppings, "items"):
            pairs = list(hoppings.items())
        else:
            pairs = [(h.vector, h.matrix) if isinstance(h, HoppingTerm) else tuple(h) for h in hoppings]

        table = {}
        for vec, mat in pairs:
            vec = tuple(int(v) for v in np.atleast_1d(vec))
            if len(vec) != dimension:
                raise DimensionError(
                    f"hopping vector {vec} has length {len(vec)}, model dimension is {dimension}"
                )
            if vec in table:
                raise DimensionError(f"duplicate hopping vector {vec}")
            mat = np.asarray(mat, dtype=complex)
            if mat.shape != (orbitals, orbitals):
                raise DimensionError(
                    f"hopping matrix at {vec} has shape {mat.shape}, expected {(orbitals, orbitals)}"
                )
            mat = mat.copy()
            mat.flags.writeable = False
            table[vec] = mat
        if not any(np.any(m != 0) for m in table.values()):
            raise DimensionError("model needs at least one nonzero hopping matrix")

        self.dimension = dimension
        self.orbitals = orbitals
        self.hoppings = table
        self.name = str(name)

    def terms(self):
        """Iterate over hoppings as :class:`HoppingTerm` objects."""
        return [HoppingTerm(vec, mat) for vec, mat in self.hoppings.items()]

    def map_hoppings(self, func, name=None):
        """New model with every ``t_j`` replaced by ``func(j, t_j)`` (same support)."""
        new = {vec: func(vec, mat) for vec, mat in self.hoppings.items()}
        return TightBindingModel(self.dimension, self.orbitals, new,
                                 name=self.name if name is None else name)

    def adjoint(self):
        """Model with hoppings ``t_j -> t_{-j}^dagger`` (Hermitian conjugate model)."""
        new = {tuple(-v for v in vec): mat.conj().T for vec, mat in self.hoppings.items()}
        return TightBindingModel(self.dimension, self.orbitals, new, name=self.name + "^dagger")

    def hopping_scale(self):
        """Largest entrywise magnitude over all hopping matrices."""
        return max(np.max(np.abs(m)) for m in self.hoppings.values())

    def __repr__(self):
        return (f"TightBindingModel(name={self.name!r}, d={self.dimension}, "
                f"s={self.orbitals}, hoppings={sorted(self.hoppings)})")


@dataclass(frozen=True)
class ComplexMomentum:
    """Point ``mu + i k`` of the complexified Brillouin zone."""

    mu: tuple
    k: tuple

    def __post_init__(self):
        mu = tuple(float(v) for v in np.atleast_1d(self.mu))
        k = tuple(float(v) for v in np.atleast_1d(self.k))
        if len(mu) != len(k):
            raise DimensionError(f"mu has length {len(mu)} but k has length {len(k)}")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "k", k)


def _check_k(model, k):
    k = np.asarray(k, dtype=float).reshape(-1)
    if k.shape[0] != model.dimension:
        raise DimensionError(
            f"momentum has {k.shape[0]} components, model dimension is {model.dimension}"
        )
    if not np.all(np.isfinite(k)):
        raise DimensionError("momentum components must be finite")
    return k


def bloch_hamiltonian(model, k):
    """Bloch matrix ``H(k) = sum_j t_j exp(i k.j)``."""
    k = _check_k(model, k)
    s = model.orbitals
    out = np.zeros((s, s), dtype=complex)
    for vec, mat in model.hoppings.items():
        out += mat * np.exp(1j * float(np.dot(k, vec)))
    return out


def generalized_bloch(model, z):
    """Analytically continued Bloch matrix ``H(e^{mu+ik}) = sum_j t_j exp(j.(mu+ik))``.

    Reduces to :func:`bloch_hamiltonian` at ``mu = 0``.
    """
    if not isinstance(z, ComplexMomentum):
        z = ComplexMomentum(*z)
    mu = _check_k(model, z.mu)
    k = _check_k(model, z.k)
    s = model.orbitals
    out = np.zeros((s, s), dtype=complex)
    for vec, mat in model.hoppings.items():
        out += mat * np.exp(complex(np.dot(mu, vec), np.dot(k, vec)))
    return out


def bloch_grid(model, ks, mu=None):
    """Evaluate ``H(e^{mu+ik})`` on a batch of momenta.

    Parameters
    ----------
    ks : ndarray, shape (..., d)
        Momenta.
    mu : ndarray, shape (d,), optional
        Common decay factor, default zero.

    Returns
    -------
    ndarray, shape (..., s, s)
    """
    ks = np.asarray(ks, dtype=float)
    if ks.shape[-1] != model.dimension:
        raise DimensionError(
            f"momentum batch has {ks.shape[-1]} components, model dimension is {model.dimension}"
        )
    if mu is None:
        mu = np.zeros(model.dimension)
    mu = _check_k(model, mu)
    s = model.orbitals
    out = np.zeros(ks.shape[:-1] + (s, s), dtype=complex)
    for vec, mat in model.hoppings.items():
        phase = np.exp(ks @ np.asarray(vec, dtype=float) * 1j + float(np.dot(mu, vec)))
        out += phase[..., None, None] * mat
    return out


def obc_hamiltonian(model, sizes):
    """Dense real-space matrix of the model on an open ``L_1 x ... x L_d`` lattice.

    The block coupling row site ``x`` to column site ``x'`` is ``t_{x'-x}``;
    sites are ordered row-major over ``(x_1, ..., x_d)`` with the orbital index
    fastest, so the flat index of ``(x, a)`` is ``ravel(x) * s + a``.
    """
    sizes = tuple(int(L) for L in np.atleast_1d(sizes))
    if len(sizes) != model.dimension:
        raise DimensionError(
            f"got {len(sizes)} lattice sizes, model dimension is {model.dimension}"
        )
    if any(L < 1 for L in sizes):
        raise DimensionError("lattice sizes must be positive")
    for vec in model.hoppings:
        if any(abs(j) >= L for j, L in zip(vec, sizes)):
            raise LatticeTooSmall(f"hopping vector {vec} does not fit in lattice {sizes}")

    s = model.orbitals
    nsites = int(np.prod(sizes))
    grids = np.meshgrid(*[np.arange(L) for L in sizes], indexing="ij")
    coords = np.stack([g.ravel() for g in grids], axis=1)
    H = np.zeros((nsites * s, nsites * s), dtype=complex)
    upper = np.asarray(sizes)
    for vec, mat in model.hoppings.items():
        target = coords + np.asarray(vec)
        ok = np.all((target >= 0) & (target < upper), axis=1)
        rows = np.ravel_multi_index(coords[ok].T, sizes) * s
        cols = np.ravel_multi_index(target[ok].T, sizes) * s
        for a in range(s):
            for b in range(s):
                H[rows + a, cols + b] = mat[a, b]
    return H
