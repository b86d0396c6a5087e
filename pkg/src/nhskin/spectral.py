"""Diagonalization, probability-density profiles, and skin-mode classification.

OBC eigenvectors of a d-dimensional model live on the row-major site grid with
the orbital index fastest (see :mod:`nhskin.lattice`).  A mode's localization
is summarized by per-axis decay factors ``mu``: the interior of each axis
marginal is fitted as ``density ~ exp(2 mu x)``, so ``mu > 0`` marks weight at
the max-coordinate boundary and ``mu < 0`` at the origin side.  Modes piling up
at both ends of an axis at once are classified as bidirectional.

Classifier thresholds are artifact choices (the source material draws pictures
and never defines "localized" quantitatively); all of them are keyword
arguments with defaults collected in :class:`FitConfig`.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg

from .errors import (
    AmbiguousSelector,
    DegenerateFit,
    DimensionError,
    NotDegenerate,
    SolverError,
)
from .lattice import bloch_grid, obc_hamiltonian

__all__ = [
    "SpectralResult",
    "LocalizationReport",
    "FitConfig",
    "pbc_spectrum",
    "obc_spectrum",
    "density_profile",
    "fit_decay_factor",
    "degenerate_group_localize",
    "degenerate_cluster",
]


@dataclass(frozen=True)
class FitConfig:
    """Thresholds for decay-factor fitting and localization classification."""

    mu_tol: float = 0.02            # |mu| below this counts as not localized
    window: tuple = (0.2, 0.8)      # interior fit window, fractions of L
    boundary_frac: float = 0.1      # size of the boundary-mass strips
    extended_mass_max: float = 0.25  # boundary mass allowed for extended modes
    bidi_slope: float = 0.05        # log-density half-slope threshold
    bidi_mass_min: float = 0.15     # boundary mass required on both ends
    match_tol: float = 0.02         # eigenvalue selector tolerance
    degeneracy_rtol: float = 1e-6   # cluster tolerance, relative to spectral radius


DEFAULT_FIT = FitConfig()


@dataclass(frozen=True)
class SpectralResult:
    """Eigenvalues (and optionally eigenvectors) of one diagonalization."""

    boundary: str                  # "pbc" or "obc"
    eigenvalues: np.ndarray        # obc: (n,); pbc: (nk, s)
    eigenvectors: np.ndarray | None = None
    sizes: tuple | None = None     # obc lattice sizes
    kpoints: np.ndarray | None = None  # pbc momenta, (nk, d)
    grid: tuple | None = None      # pbc per-axis point counts
    orbitals: int = 1

    def spectral_radius(self):
        return float(np.max(np.abs(self.eigenvalues)))

    def spectral_diameter(self):
        flat = self.eigenvalues.reshape(-1)
        lo_r, hi_r = flat.real.min(), flat.real.max()
        lo_i, hi_i = flat.imag.min(), flat.imag.max()
        return float(np.hypot(hi_r - lo_r, hi_i - lo_i))


@dataclass(frozen=True)
class LocalizationReport:
    """Per-axis decay factors and the resulting localization class.

    ``kind`` is one of ``extended``, ``directional``, ``bidirectional``,
    ``degenerate_subspace``, ``unknown``.  ``signs`` carries the per-axis
    decay direction for directional modes (0 marks a non-localized axis),
    ``axes`` the bidirectional axes, ``subspace_dim`` the degenerate-group
    size when the profile summarizes a whole subspace.
    """

    mu_fit: tuple
    mu_stderr: tuple
    boundary_mass: tuple           # per axis: (first-strip mass, last-strip mass)
    half_slopes: tuple             # per axis: (left-half slope, right-half slope)
    kind: str
    signs: tuple = ()
    axes: tuple = ()
    subspace_dim: int = 0

    def localized_axes(self, mu_tol=DEFAULT_FIT.mu_tol):
        return tuple(m for m, mu in enumerate(self.mu_fit) if abs(mu) >= mu_tol)

    def to_json(self):
        out = {
            "mu_fit": list(self.mu_fit),
            "mu_stderr": list(self.mu_stderr),
            "boundary_mass": [list(pair) for pair in self.boundary_mass],
            "half_slopes": [list(pair) for pair in self.half_slopes],
            "class": {"kind": self.kind},
        }
        if self.kind == "directional":
            out["class"]["signs"] = list(self.signs)
        if self.kind == "bidirectional":
            out["class"]["axes"] = list(self.axes)
        if self.subspace_dim:
            out["class"]["subspace_dim"] = self.subspace_dim
        return out


def pbc_spectrum(model, grid, keep_vectors=False):
    """Bloch eigenvalues on the uniform momentum grid ``k_m = 2 pi n / N_m``."""
    grid = tuple(int(g) for g in np.atleast_1d(grid))
    if len(grid) != model.dimension:
        raise DimensionError(f"grid has {len(grid)} axes, model dimension is {model.dimension}")
    if any(g < 1 for g in grid):
        raise DimensionError("grid counts must be >= 1")
    axes = [2 * np.pi * np.arange(g) / g for g in grid]
    mesh = np.meshgrid(*axes, indexing="ij")
    kpoints = np.stack([m.ravel() for m in mesh], axis=-1)
    hk = bloch_grid(model, kpoints)
    try:
        if keep_vectors:
            evals, evecs = np.linalg.eig(hk)
        else:
            evals = np.linalg.eigvals(hk)
            evecs = None
    except np.linalg.LinAlgError:
        for i, k in enumerate(kpoints):  # locate the offender for the error message
            try:
                np.linalg.eigvals(hk[i])
            except np.linalg.LinAlgError:
                raise SolverError(f"eigensolver failed at k={tuple(k)}") from None
        raise SolverError("eigensolver failed on the momentum grid") from None
    return SpectralResult(
        boundary="pbc", eigenvalues=evals, eigenvectors=evecs,
        kpoints=kpoints, grid=grid, orbitals=model.orbitals,
    )


def obc_spectrum(model, sizes, keep_vectors=True):
    """Full dense eigendecomposition of the open-boundary Hamiltonian."""
    sizes = tuple(int(L) for L in np.atleast_1d(sizes))
    H = obc_hamiltonian(model, sizes)
    try:
        if keep_vectors:
            evals, evecs = scipy.linalg.eig(H, check_finite=False, overwrite_a=True)
        else:
            evals = scipy.linalg.eigvals(H, check_finite=False, overwrite_a=True)
            evecs = None
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
        raise SolverError(f"dense eigensolver failed on {sizes} lattice: {exc}") from None
    return SpectralResult(
        boundary="obc", eigenvalues=evals, eigenvectors=evecs,
        sizes=sizes, orbitals=model.orbitals,
    )


def degenerate_cluster(result, energy, tol=None):
    """Indices of eigenvalues within ``tol`` of ``energy`` (default tolerance
    is ``degeneracy_rtol`` times the spectral radius)."""
    if tol is None:
        tol = DEFAULT_FIT.degeneracy_rtol * max(result.spectral_radius(), 1.0)
    return np.nonzero(np.abs(result.eigenvalues - energy) <= tol)[0]


def _site_density(result, column):
    psi = result.eigenvectors[:, column]
    dens = np.abs(psi.reshape(-1, result.orbitals)) ** 2
    return dens.sum(axis=1).reshape(result.sizes)


def density_profile(result, energy, match_tol=None, degeneracy_tol=None):
    """Per-site probability density of the eigenstate selected by ``energy``.

    The selector must match a unique eigenvalue within ``match_tol``.  If it
    matches a degenerate cluster instead, the basis-invariant subspace density
    (mean of the densities of an orthonormal basis) is returned.
    """
    if result.eigenvectors is None:
        raise AmbiguousSelector("spectral result stores no eigenvectors")
    if result.boundary != "obc":
        raise DimensionError("density profiles are defined for OBC results")
    match_tol = DEFAULT_FIT.match_tol if match_tol is None else match_tol
    matches = np.nonzero(np.abs(result.eigenvalues - energy) <= match_tol)[0]
    if matches.size == 0:
        raise AmbiguousSelector(
            f"no eigenvalue within {match_tol} of {energy}"
        )
    if matches.size == 1:
        return _site_density(result, int(matches[0]))
    values = result.eigenvalues[matches]
    if degeneracy_tol is None:
        degeneracy_tol = DEFAULT_FIT.degeneracy_rtol * max(result.spectral_radius(), 1.0)
    spread = np.max(np.abs(values[:, None] - values[None, :]))
    if spread > degeneracy_tol:
        raise AmbiguousSelector(
            f"{matches.size} non-degenerate eigenvalues within {match_tol} of {energy}"
        )
    basis, _ = np.linalg.qr(result.eigenvectors[:, matches])
    dens = np.abs(basis.reshape(-1, result.orbitals, matches.size)) ** 2
    return dens.sum(axis=1).mean(axis=1).reshape(result.sizes)


def _loglinear_fit(x, logp):
    slope, intercept = np.polyfit(x, logp, 1)
    resid = logp - (slope * x + intercept)
    n = len(x)
    if n > 2:
        var = np.sum(resid**2) / (n - 2)
        sxx = np.sum((x - x.mean()) ** 2)
        stderr = np.sqrt(var / sxx)
    else:
        stderr = 0.0
    return slope, stderr


def fit_decay_factor(profile, sizes=None, cfg=DEFAULT_FIT, subspace_dim=0):
    """Fit per-axis decay factors of a probability profile and classify it.

    The axis marginals are fitted as ``log p = 2 mu x + const`` on the interior
    window; for bidirectional candidates the two axis halves are fitted
    separately.  Returns a :class:`LocalizationReport`.
    """
    profile = np.asarray(profile, dtype=float)
    if sizes is not None:
        profile = profile.reshape(tuple(int(L) for L in np.atleast_1d(sizes)))
    sizes = profile.shape
    total = profile.sum()
    if not np.isclose(total, 1.0, atol=1e-8):
        raise DimensionError(f"profile must sum to 1, got {total}")
    d = profile.ndim
    mu, err, masses, halves = [], [], [], []
    degenerate = False
    for m in range(d):
        L = sizes[m]
        if L < 8:
            raise DimensionError(f"axis {m} has length {L} < 8, too short to fit")
        marg = profile.sum(axis=tuple(a for a in range(d) if a != m))
        x = np.arange(L, dtype=float)
        nb = max(1, int(round(cfg.boundary_frac * L)))
        masses.append((float(marg[:nb].sum()), float(marg[-nb:].sum())))
        inside = (x >= cfg.window[0] * L) & (x <= cfg.window[1] * L)
        if np.any(marg[inside] <= 0.0):
            degenerate = True
            mu.append(np.nan)
            err.append(np.nan)
            halves.append((np.nan, np.nan))
            continue
        slope, stderr = _loglinear_fit(x[inside], np.log(marg[inside]))
        mu.append(slope / 2.0)
        err.append(stderr / 2.0)
        left = slice(0, L // 2)
        right = slice(L // 2, L)
        if np.all(marg[left] > 0) and np.all(marg[right] > 0):
            sl, _ = _loglinear_fit(x[left], np.log(marg[left]))
            sr, _ = _loglinear_fit(x[right], np.log(marg[right]))
            halves.append((sl, sr))
        else:
            halves.append((np.nan, np.nan))

    mu = tuple(mu)
    err = tuple(err)
    masses = tuple(masses)
    halves = tuple(halves)
    base = dict(mu_fit=mu, mu_stderr=err, boundary_mass=masses,
                half_slopes=halves, subspace_dim=subspace_dim)
    signs = tuple(0 if np.isnan(v) else int(np.sign(v)) if abs(v) >= cfg.mu_tol else 0
                  for v in mu)
    if degenerate:
        return LocalizationReport(kind="unknown", signs=signs, **base)
    if subspace_dim >= 2:
        # profile summarizes a whole degenerate subspace; its shape alone
        # cannot be attributed to a single state
        return LocalizationReport(kind="degenerate_subspace", signs=signs, **base)

    bidi_axes = tuple(
        m for m in range(d)
        if not np.isnan(halves[m][0])
        and halves[m][0] <= -cfg.bidi_slope
        and halves[m][1] >= +cfg.bidi_slope
        and min(masses[m]) > cfg.bidi_mass_min
    )
    if bidi_axes:
        return LocalizationReport(kind="bidirectional", axes=bidi_axes, **base)
    if all(abs(v) < cfg.mu_tol for v in mu) and all(max(pair) < cfg.extended_mass_max for pair in masses):
        return LocalizationReport(kind="extended", **base)
    return LocalizationReport(kind="directional", signs=signs, **base)


def degenerate_group_localize(result, energy, tol=None, cfg=DEFAULT_FIT):
    """Split a degenerate eigenvalue group by position and localize each member.

    The position operator ``sum_m x_m`` restricted to the degenerate subspace
    is diagonalized; its eigenbasis separates modes sitting at opposite
    boundaries.  Reports are ordered by position expectation, origin side
    first.
    """
    if result.eigenvectors is None:
        raise NotDegenerate("spectral result stores no eigenvectors")
    idx = degenerate_cluster(result, energy, tol)
    if idx.size < 2:
        raise NotDegenerate(
            f"only {idx.size} eigenvalue(s) near {energy}; need a degenerate group"
        )
    sizes = result.sizes
    coords = np.indices(sizes).reshape(len(sizes), -1).sum(axis=0)
    weight = np.repeat(coords, result.orbitals)
    basis, _ = np.linalg.qr(result.eigenvectors[:, idx])
    block = basis.conj().T @ (weight[:, None] * basis)
    pos, rot = np.linalg.eigh(0.5 * (block + block.conj().T))
    vectors = basis @ rot
    reports = []
    for col in range(vectors.shape[1]):
        dens = np.abs(vectors[:, col].reshape(-1, result.orbitals)) ** 2
        profile = dens.sum(axis=1).reshape(sizes)
        report = fit_decay_factor(profile, cfg=cfg)
        reports.append(replace(report, subspace_dim=idx.size))
    return reports
