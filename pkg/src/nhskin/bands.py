"""Band-loop tracking, per-band windings, and the paired winding invariant.

Bloch eigenvalues along one momentum axis form closed loops in the complex
plane once branches are glued correctly across collisions.  Gluing is decided
by minimal-distance assignment with local grid refinement; exact collisions
(band crossings, square-root exceptional points) are resolved by tracking at a
small decay-factor offset along the same axis, which opens every gap and
selects the analytic continuation, and re-sampling the loop values at the
requested decay factor.

For models whose spectrum is symmetric under momentum reversal (the
transpose-type symmetry), loops pair up with their reversed images; the paired
winding invariant is half the absolute winding difference summed over pairs.
A nonzero value flags an eigenstate that piles up at both ends of the axis at
once.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .amoeba import ILL_TOL, PHASE_TOL, WindingReport, winding_number
from .errors import BranchAmbiguity, DimensionError, NonIntegerPhase, PairingFailure
from .lattice import bloch_grid
from .symmetry import SymmetryKind, find_intertwiner

__all__ = [
    "BandLoop",
    "BandPairing",
    "NuReport",
    "track_bands",
    "band_winding",
    "pair_bands_trs_dagger",
    "nu_invariant",
    "pbc_winding_vanishes_trs_dagger",
]

_DELTA_SCHEDULE = (0.0, 1e-3, -1e-3, 5e-3, -5e-3, 2e-2, -2e-2)
_REFINE_DEPTH = 40
_TIE_RTOL = 1e-9


@dataclass(frozen=True)
class BandLoop:
    """One closed eigenvalue loop along a momentum axis.

    ``samples[t]`` is the eigenvalue at ``k = 2 pi t / grid``; a loop of
    multiplicity ``c`` needs ``c`` full momentum cycles to close, so it holds
    ``c * grid`` samples.
    """

    samples: np.ndarray
    multiplicity: int
    axis: int
    transverse: tuple
    mu: tuple
    grid: int
    delta: float = 0.0  # tracking offset used to resolve collisions (0 = none)

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=complex)
        samples.flags.writeable = False
        object.__setattr__(self, "samples", samples)

    def ks(self):
        return 2 * np.pi * np.arange(self.samples.size) / self.grid

    def diameter(self):
        s = self.samples
        return float(np.hypot(s.real.max() - s.real.min(), s.imag.max() - s.imag.min()))

    def max_step(self):
        return float(np.max(np.abs(np.diff(self.samples, append=self.samples[:1]))))

    def reversed_image(self):
        """Samples re-parameterized ``k -> -k`` (same point set, reversed orientation)."""
        s = self.samples
        return np.concatenate([s[:1], s[1:][::-1]])


class _Tie(Exception):
    pass


def _all_perms_cost(a, b):
    """Best and second-best assignment costs between two eigenvalue tuples."""
    s = len(a)
    dist = np.abs(a[:, None] - b[None, :])
    best_perm, best, second = None, np.inf, np.inf
    for perm in itertools.permutations(range(s)):
        cost = float(dist[np.arange(s), perm].sum())
        if cost < best:
            best_perm, second, best = perm, best, cost
        elif cost < second:
            second = cost
    return np.array(best_perm), best, second


def _eig_line(model, mu, axis, transverse, kvals):
    d = model.dimension
    ks = np.zeros((len(kvals), d))
    others = [m for m in range(d) if m != axis]
    if others:
        ks[:, others] = np.asarray(transverse, dtype=float)
    ks[:, axis] = kvals
    return np.linalg.eigvals(bloch_grid(model, ks, mu))


def _match(model, mu, axis, transverse, k_lo, k_hi, ev_lo, ev_hi, scale, depth):
    perm, best, second = _all_perms_cost(ev_lo, ev_hi)
    if second - best > max(0.5 * best, 1e-9 * scale):
        return perm
    if depth <= 0 or (k_hi - k_lo) < 1e-9:
        raise _Tie
    k_mid = 0.5 * (k_lo + k_hi)
    ev_mid = _eig_line(model, mu, axis, transverse, np.array([k_mid]))[0]
    gaps = np.abs(ev_mid[:, None] - ev_mid[None, :])[~np.eye(len(ev_mid), dtype=bool)]
    if gaps.size and gaps.min() < _TIE_RTOL * scale:
        raise _Tie
    left = _match(model, mu, axis, transverse, k_lo, k_mid, ev_lo, ev_mid, scale, depth - 1)
    right = _match(model, mu, axis, transverse, k_mid, k_hi, ev_mid, ev_hi, scale, depth - 1)
    return right[left]


def _chain(model, mu, axis, transverse, n):
    kvals = 2 * np.pi * np.arange(n) / n
    evals = _eig_line(model, mu, axis, transverse, kvals)
    s = evals.shape[1]
    scale = float(np.max(np.abs(evals))) + 1.0
    if s > 1:
        gaps = np.abs(evals[:, :, None] - evals[:, None, :])
        gaps = gaps[:, ~np.eye(s, dtype=bool)]
        if gaps.min() < _TIE_RTOL * scale:
            raise _Tie  # exact degeneracy on the loop: gluing undecidable here
    perms = []
    for i in range(n):
        j = (i + 1) % n
        k_hi = kvals[i] + 2 * np.pi / n
        perms.append(_match(model, mu, axis, transverse, kvals[i], k_hi,
                            evals[i], evals[j], scale, _REFINE_DEPTH))
    return kvals, evals, perms


def _order_start(evals0):
    return np.lexsort((evals0.imag, evals0.real))


def track_bands(model, axis=0, transverse=(), mu=None, grid=256):
    """Glue Bloch eigenvalues along ``axis`` into closed :class:`BandLoop` s.

    Adjacent momentum steps are matched by minimal total distance, refining
    the grid locally when the assignment is ambiguous.  Exact collisions are
    resolved by re-tracking at small decay-factor offsets along the axis
    (first offset that removes every collision wins); loop samples are always
    reported at the requested ``mu``.  The whole procedure is retried once at
    four times the grid before raising :class:`BranchAmbiguity`.
    """
    n = int(grid)
    if n < 256:
        raise DimensionError("band tracking needs a grid of at least 256 points")
    if mu is None:
        mu = np.zeros(model.dimension)
    mu = np.asarray(mu, dtype=float).reshape(-1)
    if mu.shape[0] != model.dimension:
        raise DimensionError(f"mu has {mu.shape[0]} components, model dimension is {model.dimension}")
    transverse = tuple(float(v) for v in np.atleast_1d(transverse)) if model.dimension > 1 else ()
    if len(transverse) != model.dimension - 1:
        raise DimensionError(f"expected {model.dimension - 1} transverse momenta")

    last_error = None
    for attempt_n in (n, 4 * n):
        for delta in _DELTA_SCHEDULE:
            mu_track = mu.copy()
            mu_track[axis] += delta
            try:
                kvals, evals, perms = _chain(model, mu_track, axis, transverse, attempt_n)
            except _Tie:
                last_error = delta
                continue
            if delta != 0.0:
                evals_out = _eig_line(model, mu, axis, transverse, kvals)
                for i in range(attempt_n):
                    perm, _, _ = _all_perms_cost(evals[i], evals_out[i])
                    evals[i] = evals_out[i][perm]
            return _assemble(evals, perms, axis, transverse, mu, attempt_n, delta)
    raise BranchAmbiguity(
        f"could not disambiguate band branches (axis {axis}, transverse {transverse}, "
        f"last offset {last_error})"
    )


def _assemble(evals, perms, axis, transverse, mu, n, delta):
    s = evals.shape[1]
    total = np.arange(s)
    for p in perms:
        total = p[total]
    # total[a] = slot reached after one full momentum cycle starting from slot a
    start_order = _order_start(evals[0])
    seen = set()
    loops = []
    for a0 in start_order:
        if a0 in seen:
            continue
        cycle = [int(a0)]
        nxt = int(total[a0])
        while nxt != a0:
            cycle.append(nxt)
            nxt = int(total[nxt])
        seen.update(cycle)
        samples = np.empty(len(cycle) * n, dtype=complex)
        slot = int(a0)
        for t in range(samples.size):
            samples[t] = evals[t % n, slot]
            slot = int(perms[t % n][slot])
        loops.append(BandLoop(samples=samples, multiplicity=len(cycle), axis=axis,
                              transverse=transverse, mu=tuple(mu), grid=n, delta=delta))
    return loops


def _samples_winding(samples, energy, ill_tol=ILL_TOL):
    diffs = complex(energy) - samples
    absd = np.abs(diffs)
    dmin = float(absd.min())
    diam = float(np.hypot(samples.real.max() - samples.real.min(),
                          samples.imag.max() - samples.imag.min()))
    if dmin < ill_tol * max(diam, 1e-300):
        return WindingReport(None, dmin, diam, samples.size, np.nan)
    raw = float(np.angle(diffs / np.roll(diffs, 1)).sum() / (2 * np.pi))
    nearest = round(raw)
    if abs(raw - nearest) > PHASE_TOL:
        raise NonIntegerPhase(
            f"band-loop phase sum {raw:.4f} turns is not near an integer"
        )
    return WindingReport(int(nearest), dmin, diam, samples.size, raw)


def band_winding(loop, energy, ill_tol=ILL_TOL):
    """Winding of one band loop around ``energy``.

    Ill-defined when a sample sits within ``ill_tol`` (relative to the loop
    diameter) of the energy.
    """
    return _samples_winding(loop.samples, energy, ill_tol)


def _cyclic_image_distance(a, b):
    """min over cyclic shifts of max |a[t] - b[t+shift]| (equal lengths)."""
    n = a.size
    # FFT-free direct scan: n <= a few thousand here
    best = np.inf
    diffs = np.abs(a[:, None] - b[None, :])
    for shift in range(n):
        worst = float(np.max(diffs[np.arange(n), (np.arange(n) + shift) % n]))
        if worst < best:
            best = worst
    return best


@dataclass(frozen=True)
class BandPairing:
    pairs: tuple            # ((i, j), ...) loop-index pairs
    self_paired: tuple      # loop indices whose reversed image is themselves
    distances: tuple        # image-matching distance per pair


def pair_bands_trs_dagger(loops, pair_tol=1e-6):
    """Pair loops with their momentum-reversed images.

    A loop matching its own reversed image (within ``pair_tol`` relative to
    the spectral diameter, under optimal cyclic alignment) is recorded as
    self-paired and excluded.  A multiplicity-2 loop is two bands joined at
    branch points (odd square-root monodromy); it is recorded as the pair
    ``(i, i)``.  The remaining loops are matched pairwise by minimal image
    distance; an odd remainder raises :class:`PairingFailure`.
    """
    if not loops:
        raise PairingFailure("no loops to pair")
    diam = max(loop.diameter() for loop in loops)
    self_paired = []
    joined = []
    active = []
    for i, loop in enumerate(loops):
        if loop.multiplicity == 2:
            joined.append(i)
            continue
        if loop.multiplicity > 2:
            raise PairingFailure(
                f"loop of multiplicity {loop.multiplicity} is not supported by the pairing"
            )
        d_self = _cyclic_image_distance(loop.samples, loop.reversed_image())
        if d_self <= max(pair_tol * diam, 1e-12):
            self_paired.append(i)
        else:
            active.append(i)
    if len(active) % 2:
        raise PairingFailure(
            f"{len(active)} loops remain after removing self-paired ones; need an even number"
        )
    if not active:
        pairs = tuple((i, i) for i in joined)
        return BandPairing(pairs=pairs, self_paired=tuple(self_paired),
                           distances=(0.0,) * len(pairs))

    dist = {}
    for i, j in itertools.combinations(active, 2):
        if loops[i].samples.size == loops[j].samples.size:
            dist[(i, j)] = _cyclic_image_distance(loops[i].samples, loops[j].reversed_image())
        else:
            dist[(i, j)] = np.inf

    best_matching, best_cost = None, np.inf

    def matchings(items):
        if not items:
            yield []
            return
        first, rest = items[0], items[1:]
        for idx, other in enumerate(rest):
            for tail in matchings(rest[:idx] + rest[idx + 1:]):
                yield [(first, other)] + tail

    for matching in matchings(active):
        cost = sum(dist[tuple(sorted(pair))] for pair in matching)
        if cost < best_cost:
            best_matching, best_cost = matching, cost
    if best_matching is None or not np.isfinite(best_cost):
        raise PairingFailure("no loop pairing with matching lengths exists")
    worst = max(dist[tuple(sorted(pair))] for pair in best_matching)
    if len(active) > 2 and worst > 0.5 * diam:
        # with several candidate matchings, a far-off best match means the
        # pairing is genuinely ambiguous; with exactly two loops it is forced
        raise PairingFailure(
            f"best pairing has image distance {worst:.3g}, beyond half the spectral diameter"
        )
    pairs = tuple(tuple(sorted(pair)) for pair in best_matching)
    distances = tuple(dist[p] for p in pairs)
    pairs += tuple((i, i) for i in joined)
    distances += (0.0,) * len(joined)
    return BandPairing(pairs=pairs, self_paired=tuple(self_paired), distances=distances)


@dataclass(frozen=True)
class NuReport:
    """Paired winding invariant at one energy (one axis, fixed transverse)."""

    nu: int | None
    per_pair_windings: tuple    # ((w_p, w_q), ...) with None for unreliable values
    pairing: tuple              # loop-index pairs, aligned with per_pair_windings
    self_paired: tuple
    antisymmetry_ok: bool       # w_p == -w_q held for every fully defined pair


def _sample_reliable(samples, report):
    if report.ill_defined:
        return False
    # a loop passing within one sampling step of the energy cannot be trusted
    max_step = float(np.max(np.abs(np.diff(samples, append=samples[:1]))))
    return report.min_abs_det > max_step


def _split_joined(loop):
    """Split a multiplicity-2 loop into its upper and lower closed branches.

    At every momentum the two sheet values are ordered by imaginary part
    (real part breaks ties); each ordered family is a closed single-valued
    curve, the generic-branch analogue of a principal square root.
    """
    n = loop.grid
    a, b = loop.samples[:n], loop.samples[n:]
    tie = 1e-9 * max(loop.diameter(), 1e-300)
    im_close = np.abs(a.imag - b.imag) <= tie
    upper_first = np.where(im_close, a.real >= b.real, a.imag > b.imag)
    upper = np.where(upper_first, a, b)
    lower = np.where(upper_first, b, a)
    return upper, lower


def nu_invariant(model, energy, axis=0, transverse=(), grid=256,
                 assume_symmetric=False, loops=None):
    """Half-sum of winding differences over momentum-reversal band pairs.

    Zero for extended eigenstates; nonzero flags a mode localized at both
    boundaries of the axis at once.  When exactly one member of a pair has an
    unreliable winding (the energy sits on or within sampling resolution of
    that loop), the pair contributes the partner's absolute winding, which is
    the value the pair antisymmetry dictates.  ``nu`` is ``None`` when no
    member of some pair is reliable.
    """
    if not assume_symmetric:
        find_intertwiner(SymmetryKind.TRS_DAGGER, model, tol=1e-9)
    last_exc = None
    for attempt_grid in (grid, 2 * grid):
        if loops is None or attempt_grid != grid:
            attempt_loops = track_bands(model, axis=axis, transverse=transverse, grid=attempt_grid)
        else:
            attempt_loops = loops
        pairing = pair_bands_trs_dagger(attempt_loops)
        try:
            return _nu_from_loops(attempt_loops, pairing, energy)
        except NonIntegerPhase as exc:
            last_exc = exc
            continue
    raise last_exc


def _nu_from_loops(loops, pairing, energy):
    per_pair = []
    total = 0.0
    undefined = False
    antisym = True
    for i, j in pairing.pairs:
        if i == j:
            samples_i, samples_j = _split_joined(loops[i])
        else:
            samples_i, samples_j = loops[i].samples, loops[j].samples
        rep_i = _samples_winding(samples_i, energy)
        rep_j = _samples_winding(samples_j, energy)
        ok_i = _sample_reliable(samples_i, rep_i)
        ok_j = _sample_reliable(samples_j, rep_j)
        w_i = rep_i.value if ok_i else None
        w_j = rep_j.value if ok_j else None
        per_pair.append((w_i, w_j))
        if ok_i and ok_j:
            if w_i != -w_j:
                antisym = False
            # equals |w_i| whenever the pair antisymmetry holds
            total += 0.5 * abs(w_i - w_j) if i != j else max(abs(w_i), abs(w_j))
        elif ok_i:
            total += abs(w_i)
        elif ok_j:
            total += abs(w_j)
        else:
            undefined = True
    if undefined:
        return NuReport(None, tuple(per_pair), pairing.pairs, pairing.self_paired, antisym)
    if abs(total - round(total)) > 1e-9:
        raise PairingFailure(f"half-sum of winding differences is not an integer: {total}")
    return NuReport(int(round(total)), tuple(per_pair), pairing.pairs,
                    pairing.self_paired, antisym)


def pbc_winding_vanishes_trs_dagger(model, energy, axis=0, transverse=(), grid=256, op=None):
    """Check the symmetry-forced vanishing of the total Bloch winding.

    For a model with the momentum-reversal (transpose) symmetry the total
    winding of ``det[E - H(k)]`` along any axis is zero or ill-defined; this
    returns ``True`` in that case.  The symmetry precondition is enforced:
    models without it raise :class:`NoIntertwiner`.
    """
    if op is None:
        find_intertwiner(SymmetryKind.TRS_DAGGER, model, tol=1e-9)
    report = winding_number(model, energy, mu=None, axis=axis,
                            transverse=transverse, grid=grid)
    return report.ill_defined or report.value == 0
