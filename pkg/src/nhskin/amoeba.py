"""Winding numbers and the Ronkin function of ``det[E - H(e^{mu+ik})]``.

The Ronkin function is the torus average of ``ln |det[E - H(e^{mu+ik})]|``;
it is convex in ``mu`` and its minimizer predicts the decay factor of a skin
mode at energy ``E``.  The gradient components are transverse averages of the
argument-principle winding numbers of the determinant along single momentum
cycles, which makes minimization a matter of integer-valued slopes: the
minimum sits where every winding is zero (an amoeba hole, so ``E`` is outside
the OBC spectrum) or where some winding loop passes through a zero of the
determinant (``E`` on the amoeba, i.e. in the OBC spectrum).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, MaxIterations, NonIntegerPhase, TooSingular
from .lattice import bloch_grid

__all__ = [
    "WindingReport",
    "RonkinEvaluation",
    "RonkinMinimum",
    "OBCMembership",
    "winding_number",
    "ronkin_value",
    "ronkin_gradient",
    "ronkin_minimize",
    "amoeba_obc_test",
]

ILL_TOL = 1e-6          # min |det| below ILL_TOL * median |det| marks an ill-defined loop
PHASE_TOL = 0.05        # accepted distance of the phase sum from an integer
MAX_WINDING_GRID = 16384
SINGULAR_DET = 1e-14    # quadrature nodes this close to a determinant zero are dropped


@dataclass(frozen=True)
class WindingReport:
    """Winding value of a determinant loop, or an explicit ill-defined marker."""

    value: int | None
    min_abs_det: float
    median_abs_det: float
    grid: int
    raw: float

    @property
    def ill_defined(self):
        return self.value is None

    def to_json(self):
        return {
            "value": "ill_defined" if self.value is None else int(self.value),
            "min_abs_det": float(self.min_abs_det),
            "grid": int(self.grid),
        }


@dataclass(frozen=True)
class RonkinEvaluation:
    value: float
    energy: complex
    mu: tuple
    grid: tuple
    excluded: int = 0
    gradient: tuple | None = None


@dataclass(frozen=True)
class RonkinMinimum:
    mu: tuple
    report: str            # "interior" or "boundary_of_amoeba"
    value: float
    gradient: tuple
    iterations: int


@dataclass(frozen=True)
class OBCMembership:
    in_obc_spectrum: bool
    mu: tuple
    report: str
    iterations: int


def _mu_vector(model, mu):
    if mu is None:
        return np.zeros(model.dimension)
    mu = np.asarray(mu, dtype=float).reshape(-1)
    if mu.shape[0] != model.dimension:
        raise DimensionError(f"mu has {mu.shape[0]} components, model dimension is {model.dimension}")
    return mu


def _loop_momenta(model, axis, transverse, n):
    d = model.dimension
    axis = int(axis)
    if not 0 <= axis < d:
        raise DimensionError(f"axis {axis} out of range for dimension {d}")
    transverse = np.asarray(transverse, dtype=float).reshape(-1)
    if transverse.shape[0] != d - 1:
        raise DimensionError(
            f"expected {d - 1} transverse momenta, got {transverse.shape[0]}"
        )
    ks = np.zeros((n, d))
    others = [m for m in range(d) if m != axis]
    ks[:, others] = transverse
    ks[:, axis] = 2 * np.pi * np.arange(n) / n
    return ks


def _det_loop(model, energy, mu, ks):
    h = bloch_grid(model, ks, mu)
    eye = np.eye(model.orbitals)
    return np.linalg.det(energy * eye - h)


def _phase_sum(dets):
    """Total unwrapped phase around a closed loop, in turns (units of 2*pi)."""
    ratios = dets / np.roll(dets, 1)
    return float(np.angle(ratios).sum() / (2 * np.pi))


def winding_number(model, energy, mu=None, axis=0, transverse=(), grid=256,
                   ill_tol=ILL_TOL, max_grid=MAX_WINDING_GRID):
    """Argument-principle winding of ``det[E - H(e^{mu+ik})]`` along one axis.

    The phase of the determinant is accumulated over ``k_axis in [0, 2 pi)`` at
    fixed transverse momenta.  The grid is doubled until the accumulated phase
    is within :data:`PHASE_TOL` of an integer; a loop passing within
    ``ill_tol`` (relative to the median ``|det|``) of a determinant zero is
    reported ill-defined instead of an integer.
    """
    n = int(grid)
    if n < 64:
        raise DimensionError("winding grid must be at least 64")
    mu = _mu_vector(model, mu)
    while True:
        ks = _loop_momenta(model, axis, transverse, n)
        dets = _det_loop(model, energy, mu, ks)
        absd = np.abs(dets)
        dmin = float(absd.min())
        dmed = float(np.median(absd))
        if dmin < ill_tol * dmed:
            return WindingReport(None, dmin, dmed, n, np.nan)
        raw = _phase_sum(dets)
        nearest = round(raw)
        if abs(raw - nearest) <= PHASE_TOL:
            return WindingReport(int(nearest), dmin, dmed, n, raw)
        if n >= max_grid:
            raise NonIntegerPhase(
                f"phase sum {raw:.4f} turns not within {PHASE_TOL} of an integer at grid {n}"
            )
        n *= 2


def _torus_grid(model, grid):
    grid = np.atleast_1d(grid)
    if grid.size == 1:
        grid = np.full(model.dimension, int(grid[0]))
    grid = tuple(int(g) for g in grid)
    if len(grid) != model.dimension:
        raise DimensionError(f"grid has {len(grid)} axes, model dimension is {model.dimension}")
    if any(g < 64 for g in grid):
        raise DimensionError("ronkin grids need at least 64 points per axis")
    axes = [2 * np.pi * np.arange(g) / g for g in grid]
    mesh = np.meshgrid(*axes, indexing="ij")
    return grid, np.stack(mesh, axis=-1)


def _torus_dets(model, energy, mu, grid):
    grid, ks = _torus_grid(model, grid)
    flat = ks.reshape(-1, model.dimension)
    dets = _det_loop(model, energy, mu, flat)
    return grid, dets.reshape(grid)


def ronkin_value(model, energy, mu=None, grid=64):
    """Torus average of ``ln |det[E - H(e^{mu+ik})]|`` on a uniform grid.

    Nodes landing within :data:`SINGULAR_DET` of a determinant zero are
    excluded from the average (the singularity of ``ln|det|`` is integrable);
    more than 1% exclusions raise :class:`TooSingular`.
    """
    mu = _mu_vector(model, mu)
    grid, dets = _torus_dets(model, energy, mu, grid)
    absd = np.abs(dets).reshape(-1)
    good = absd > SINGULAR_DET
    excluded = int(absd.size - good.sum())
    if excluded > 0.01 * absd.size:
        raise TooSingular(
            f"{excluded}/{absd.size} quadrature nodes sit on determinant zeros"
        )
    value = float(np.log(absd[good]).mean())
    return RonkinEvaluation(value=value, energy=complex(energy), mu=tuple(mu),
                            grid=grid, excluded=excluded)


def _gradient_lines(model, energy, mu, grid):
    """Raw per-line phase sums (in turns) along each axis, plus diagnostics."""
    grid, dets = _torus_dets(model, energy, mu, grid)
    d = len(grid)
    absd = np.abs(dets)
    components = np.empty(d)
    ill_fraction = np.empty(d)
    integer_spread = np.empty(d)
    for axis in range(d):
        ratios = dets / np.roll(dets, 1, axis=axis)
        sums = np.angle(ratios).sum(axis=axis) / (2 * np.pi)  # per transverse line
        components[axis] = sums.mean()
        line_min = absd.min(axis=axis)
        line_med = np.median(absd, axis=axis)
        ill_fraction[axis] = np.mean(line_min < ILL_TOL * line_med)
        rounded = np.round(sums)
        defined = np.abs(sums - rounded) <= PHASE_TOL
        if np.any(defined):
            vals = rounded[defined]
            integer_spread[axis] = vals.max() - vals.min()
        else:
            integer_spread[axis] = np.inf
    return components, ill_fraction, integer_spread


def ronkin_gradient(model, energy, mu=None, grid=64):
    """Gradient of the Ronkin function: transverse averages of raw windings."""
    mu = _mu_vector(model, mu)
    components, _, _ = _gradient_lines(model, energy, mu, grid)
    return components


def ronkin_minimize(model, energy, mu_init=None, grid=None, gtol=1e-3,
                    max_iter=500, mu_max=5.0, step_init=0.5):
    """Minimize the convex Ronkin function by gradient descent with backtracking.

    Returns a :class:`RonkinMinimum` whose ``report`` is ``"interior"`` when the
    gradient vanishes inside an amoeba hole (``E`` outside the OBC spectrum) and
    ``"boundary_of_amoeba"`` when the descent terminates on the amoeba itself
    (vanishing or ill-defined windings; ``E`` in the OBC spectrum, ``mu`` is the
    predicted decay factor).  The search box is ``|mu_m| <= mu_max``.
    """
    if gtol <= 0:
        raise DimensionError("gtol must be positive")
    mu = _mu_vector(model, mu_init).copy()
    if grid is None:
        grid = 256 if model.dimension == 1 else 64
    best_mu, best_val = mu.copy(), np.inf

    def objective(point):
        return ronkin_value(model, energy, point, grid).value

    value = objective(mu)
    step = step_init
    for iteration in range(max_iter):
        grad, ill, spread = _gradient_lines(model, energy, mu, grid)
        on_amoeba = bool(np.any(ill > 0) or np.any(spread != 0) or np.any(np.isinf(spread)))
        if value < best_val:
            best_mu, best_val = mu.copy(), value
        gnorm = float(np.max(np.abs(grad)))
        if gnorm <= gtol:
            report = "boundary_of_amoeba" if on_amoeba else "interior"
            return RonkinMinimum(tuple(mu), report, value, tuple(grad), iteration)
        direction = -grad
        t = min(step_init, 4 * step)
        accepted = False
        while t > 1e-12 * (1.0 + float(np.max(np.abs(mu)))):
            cand = mu + t * direction
            if np.max(np.abs(cand)) > mu_max:
                t *= 0.5
                continue
            try:
                cand_val = objective(cand)
            except TooSingular:
                t *= 0.5
                continue
            if cand_val <= value - 1e-4 * t * gnorm**2:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            # line search collapsed on a kink of the piecewise-linear profile:
            # the iterate sits on the amoeba boundary
            return RonkinMinimum(tuple(mu), "boundary_of_amoeba", value, tuple(grad), iteration)
        mu = mu + t * direction
        value = cand_val
        step = t
    raise MaxIterations(
        f"ronkin_minimize did not converge in {max_iter} iterations",
        mu_best=tuple(best_mu), value_best=best_val,
    )


def amoeba_obc_test(model, energy, grid=None, gtol=1e-3, mu_init=None):
    """Amoeba membership test: is ``E`` in the OBC spectrum?

    ``E`` belongs to the OBC spectrum exactly when the Ronkin minimization
    terminates on the amoeba; otherwise the minimizer is an interior point of
    an amoeba hole and is returned as the certificate.
    """
    result = ronkin_minimize(model, energy, mu_init=mu_init, grid=grid, gtol=gtol)
    return OBCMembership(
        in_obc_spectrum=result.report == "boundary_of_amoeba",
        mu=result.mu,
        report=result.report,
        iterations=result.iterations,
    )
