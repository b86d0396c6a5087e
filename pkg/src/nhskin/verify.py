"""End-to-end checks of the symmetry constraints on real diagonalizations.

``table1_check`` verifies the partner map on an OBC spectrum: every sampled
localized eigenstate must have a symmetry partner at the mapped energy,
localized at the same or the opposite boundary according to the partner
prediction.  ``bidirectional_scan`` cross-validates the localization
classifier against the paired winding invariant for momentum-reversal
symmetric models.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bands import nu_invariant, track_bands
from .errors import PartnerNotFound
from .spectral import (
    DEFAULT_FIT,
    degenerate_cluster,
    degenerate_group_localize,
    fit_decay_factor,
    obc_spectrum,
)
from .symmetry import SymmetryKind, find_intertwiner, partner_prediction

__all__ = [
    "PartnerCheckResult",
    "ScanEntry",
    "ScanSummary",
    "classify_spectrum",
    "bulk_state_indices",
    "table1_check",
    "bidirectional_scan",
]


@dataclass(frozen=True)
class PartnerCheckResult:
    energy: complex
    partner_energy: complex
    report: object
    partner_report: object
    verdict: str           # "same_boundary" | "opposite_boundary" | "mismatch"
    expected: str          # "same_boundary" | "opposite_boundary"

    @property
    def ok(self):
        return self.verdict == self.expected

    def to_json(self):
        return {
            "energy": [self.energy.real, self.energy.imag],
            "partner_energy": [self.partner_energy.real, self.partner_energy.imag],
            "verdict": self.verdict,
            "expected": self.expected,
            "mu_fit": list(self.report.mu_fit),
            "partner_mu_fit": list(self.partner_report.mu_fit),
        }


def _cluster_all(result, cfg):
    """Group eigenvalue indices into degeneracy clusters (tol relative to radius)."""
    tol = cfg.degeneracy_rtol * max(result.spectral_radius(), 1.0)
    evals = result.eigenvalues
    order = np.lexsort((evals.imag, evals.real))
    clusters = []
    current = [int(order[0])]
    for idx in order[1:]:
        idx = int(idx)
        if abs(evals[idx] - evals[current[-1]]) <= tol:
            current.append(idx)
        else:
            clusters.append(current)
            current = [idx]
    clusters.append(current)
    return clusters


def classify_spectrum(result, cfg=DEFAULT_FIT):
    """Localization report for every OBC eigenstate.

    Degenerate clusters are split by the position operator first, so their
    members get position-resolved reports rather than whatever mixed basis the
    eigensolver happened to return.
    """
    n = result.eigenvalues.size
    sizes = result.sizes
    s = result.orbitals
    reports = [None] * n
    clusters = _cluster_all(result, cfg)
    singles = [c[0] for c in clusters if len(c) == 1]
    if singles:
        dens = np.abs(result.eigenvectors[:, singles]) ** 2
        dens = dens.reshape(-1, s, len(singles)).sum(axis=1)  # (nsites, nsingles)
        profiles = dens.T.reshape(len(singles), *sizes)
        for idx, profile in zip(singles, profiles):
            reports[idx] = fit_decay_factor(profile, cfg=cfg)
    for cluster in clusters:
        if len(cluster) == 1:
            continue
        split = degenerate_group_localize(result, result.eigenvalues[cluster[0]], cfg=cfg)
        for idx, rep in zip(cluster, split):
            reports[idx] = rep
    return reports, clusters


def _extremal_points(evals, directions=32):
    thetas = np.pi * np.arange(directions) / directions
    phases = np.exp(-1j * thetas)
    proj = np.real(evals[None, :] * phases[:, None])
    idx = set(np.argmax(proj, axis=1)) | set(np.argmin(proj, axis=1))
    return evals[sorted(idx)]


def bulk_state_indices(result, edge_frac=0.02):
    """Indices of eigenvalues away from the spectrum's extremal points.

    States within ``edge_frac`` of the spectral diameter from an extremal
    point sit where localization fits are unstable and are excluded.
    """
    evals = result.eigenvalues
    diam = result.spectral_diameter()
    extremal = _extremal_points(evals)
    dist = np.min(np.abs(evals[:, None] - extremal[None, :]), axis=1)
    return np.nonzero(dist > edge_frac * diam)[0]


def _boundary_signs(report, cfg):
    return tuple(0 if (np.isnan(v) or abs(v) < cfg.mu_tol) else int(np.sign(v))
                 for v in report.mu_fit)


def _verdict(report, partner_report, cfg):
    s1 = _boundary_signs(report, cfg)
    s2 = _boundary_signs(partner_report, cfg)
    axes = [m for m in range(len(s1)) if s1[m] != 0 or s2[m] != 0]
    if not axes:
        return "mismatch"
    if all(s1[m] == s2[m] and s1[m] != 0 for m in axes):
        return "same_boundary"
    if all(s1[m] == -s2[m] and s1[m] != 0 for m in axes):
        return "opposite_boundary"
    return "mismatch"


def table1_check(model, op, sizes, n_samples=24, spectral=None, match_tol=1e-6,
                 cfg=DEFAULT_FIT, edge_frac=0.02):
    """Partner-map check on an OBC diagonalization.

    Samples localized bulk eigenstates, locates each one's predicted symmetry
    partner in the spectrum (:class:`PartnerNotFound` if absent within
    ``match_tol``), localizes both, and compares boundary sign patterns
    against the partner prediction for ``op.kind``.
    """
    if spectral is None:
        spectral = obc_spectrum(model, sizes)
    prediction = partner_prediction(op.kind)
    expected = "same_boundary" if prediction.mu_sign > 0 else "opposite_boundary"
    reports, clusters = classify_spectrum(spectral, cfg)
    evals = spectral.eigenvalues
    bulk = set(bulk_state_indices(spectral, edge_frac).tolist())

    candidates = [
        i for i in range(evals.size)
        if i in bulk and reports[i].kind in ("directional", "bidirectional")
    ]
    if not candidates:
        return []
    candidates.sort(key=lambda i: (evals[i].real, evals[i].imag))
    picks = sorted(set(np.linspace(0, len(candidates) - 1, n_samples).astype(int).tolist()))

    results = []
    for pick in picks:
        i = candidates[pick]
        energy = complex(evals[i])
        partner_energy = prediction.apply(energy)
        if abs(partner_energy - energy) <= match_tol:
            cluster = degenerate_cluster(spectral, energy)
            if cluster.size >= 2:
                split = degenerate_group_localize(spectral, energy, cfg=cfg)
                rep, prep = split[0], split[-1]
                results.append(PartnerCheckResult(
                    energy, partner_energy, rep, prep,
                    _verdict(rep, prep, cfg), expected))
            # a non-degenerate self-partner carries no boundary information
            continue
        dist = np.abs(evals - partner_energy)
        j = int(np.argmin(dist))
        if dist[j] > match_tol:
            raise PartnerNotFound(
                f"no eigenvalue within {match_tol} of predicted partner "
                f"{partner_energy} for {energy}"
            )
        results.append(PartnerCheckResult(
            energy, complex(evals[j]), reports[i], reports[j],
            _verdict(reports[i], reports[j], cfg), expected))
    return results


@dataclass(frozen=True)
class ScanEntry:
    energy: complex
    kind: str
    nu_by_axis: tuple      # per axis: tuple of nu values over the transverse grid
    agree: bool | None     # None when the classifier kind is not testable


@dataclass(frozen=True)
class ScanSummary:
    entries: tuple
    agreement_rate: float
    tested: int
    operator_kind: str

    def disagreements(self):
        return [e for e in self.entries if e.agree is False]


def bidirectional_scan(model, sizes, op=None, spectral=None, n_energies=12,
                       transverse_points=16, grid=256, cfg=DEFAULT_FIT,
                       edge_frac=0.02):
    """Classify OBC eigenstates and cross-check against the winding invariant.

    Extended states must have vanishing paired windings at every sampled
    transverse momentum; bidirectional states must have a nonzero value
    somewhere.  Disagreements are reported as data, not errors.
    """
    if op is None:
        op = find_intertwiner(SymmetryKind.TRS_DAGGER, model, tol=1e-9)
    if spectral is None:
        spectral = obc_spectrum(model, sizes)
    reports, clusters = classify_spectrum(spectral, cfg)
    evals = spectral.eigenvalues
    bulk = set(bulk_state_indices(spectral, edge_frac).tolist())

    d = model.dimension
    if d == 1:
        transverse_sets = {0: [()]}
    else:
        kts = 2 * np.pi * np.arange(transverse_points) / transverse_points
        transverse_sets = {axis: [(float(kt),) for kt in kts] for axis in range(d)}
    loops_cache = {
        (axis, tv): track_bands(model, axis=axis, transverse=tv, grid=grid)
        for axis in transverse_sets
        for tv in transverse_sets[axis]
    }

    # one representative per degeneracy cluster, bulk states only
    rep_indices = [c[0] for c in clusters if c[0] in bulk]
    rep_indices.sort(key=lambda i: (evals[i].real, evals[i].imag))
    picks = sorted(set(np.linspace(0, len(rep_indices) - 1,
                                   min(n_energies, len(rep_indices))).astype(int).tolist()))

    entries = []
    agree_count = 0
    tested = 0
    for pick in picks:
        i = rep_indices[pick]
        energy = complex(evals[i])
        kind = reports[i].kind
        nu_by_axis = []
        defined = []
        for axis in sorted(transverse_sets):
            values = []
            for tv in transverse_sets[axis]:
                nu = nu_invariant(model, energy, axis=axis, transverse=tv,
                                  assume_symmetric=True, loops=loops_cache[(axis, tv)],
                                  grid=grid).nu
                values.append(nu)
                if nu is not None:
                    defined.append(nu)
            nu_by_axis.append(tuple(values))
        if not defined:
            agree = None  # energy sits on the Bloch spectrum at every slice: untestable
        elif kind == "extended":
            agree = all(v == 0 for v in defined)
        elif kind == "bidirectional":
            agree = any(v != 0 for v in defined)
        else:
            agree = None
        if agree is not None:
            tested += 1
            agree_count += int(agree)
        entries.append(ScanEntry(energy, kind, tuple(nu_by_axis), agree))
    rate = agree_count / tested if tested else 1.0
    return ScanSummary(tuple(entries), rate, tested, op.kind.value)
