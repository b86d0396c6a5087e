"""Command-line interface.

Every subcommand reads a model file (or a zoo id via ``zoo export``), runs one
computation, and writes deterministic artifacts: identical inputs and flags
produce byte-identical outputs.  Errors print a single machine-parseable line
``ERROR <code>: <message>`` and exit nonzero.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import amoeba, bands, spectral, verify, zoo
from .errors import NHSkinError
from .modelfile import (
    load_model,
    profile_rows,
    save_model,
    spectrum_rows,
    svg_heatmap,
    svg_scatter,
    write_csv,
    write_json,
)
from .spectral import FitConfig
from .symmetry import SymmetryKind, SymmetryOperator, find_intertwiner


def parse_complex(text):
    """Parse ``a``, ``a+bi``, ``a-bi``, ``bi`` literals (no spaces)."""
    t = text.strip().replace(" ", "")
    if not t.endswith("i"):
        return complex(float(t), 0.0)
    body = t[:-1]
    re_part, im_part = "", body
    for pos in range(len(body) - 1, 0, -1):
        if body[pos] in "+-" and body[pos - 1] not in "eE":
            re_part, im_part = body[:pos], body[pos:]
            break
    if im_part in ("", "+", "-"):
        im_part += "1"
    return complex(float(re_part) if re_part else 0.0, float(im_part))


def _parse_reals(text):
    return tuple(float(v) for v in text.replace("x", ",").split(",") if v != "")


def _parse_sizes(text):
    return tuple(int(round(v)) for v in _parse_reals(text))


def _axis_index(text, dimension):
    names = {"x": 0, "y": 1, "z": 2}
    axis = names.get(text.lower(), None)
    if axis is None:
        axis = int(text)
    if not 0 <= axis < dimension:
        raise NHSkinError(f"axis {text!r} out of range for dimension {dimension}")
    return axis


def _add_common(p):
    p.add_argument("--model", required=True, help="model JSON file")
    p.add_argument("--threads", type=int, default=None,
                   help="worker cap (also via NHSE_THREADS); best effort")


def _apply_threads(args):
    n = args.threads if args.threads is not None else os.environ.get("NHSE_THREADS")
    if n is not None:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = str(n)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="nhskin",
        description="non-Hermitian tight-binding toolkit: spectra, skin-mode "
                    "localization, Ronkin/amoeba analysis, winding invariants",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="diagonalize under OBC or PBC")
    _add_common(p)
    p.add_argument("--bc", choices=("obc", "pbc"), default="obc")
    p.add_argument("--size", help="OBC lattice sizes, e.g. 40 or 40,40")
    p.add_argument("--grid", help="PBC per-axis grid counts, e.g. 64 or 64,64")
    p.add_argument("--out", required=True, help="CSV output (re,im rows)")
    p.add_argument("--svg", help="optional SVG scatter of the spectrum")

    p = sub.add_parser("localize", help="density profile and decay-factor fit")
    _add_common(p)
    p.add_argument("--size", required=True)
    p.add_argument("--energy", required=True, type=parse_complex)
    p.add_argument("--match-tol", type=float, default=FitConfig.match_tol)
    p.add_argument("--out-profile", help="CSV output (x_1,...,x_d,prob rows)")
    p.add_argument("--out-report", help="JSON localization report")
    p.add_argument("--svg", help="optional SVG heat map of the density")

    p = sub.add_parser("winding", help="determinant winding number along one axis")
    _add_common(p)
    p.add_argument("--energy", required=True, type=parse_complex)
    p.add_argument("--mu", default=None, help="comma-separated decay factor")
    p.add_argument("--axis", default="0")
    p.add_argument("--transverse", default=None, help="comma-separated transverse momenta")
    p.add_argument("--kpoints", type=int, default=256)
    p.add_argument("--out", required=True, help="JSON report")

    p = sub.add_parser("ronkin", help="Ronkin function value/gradient or its minimizer")
    _add_common(p)
    p.add_argument("--energy", required=True, type=parse_complex)
    p.add_argument("--mu", default=None)
    p.add_argument("--grid", type=int, default=None)
    p.add_argument("--minimize", action="store_true")
    p.add_argument("--gtol", type=float, default=1e-3)
    p.add_argument("--out", required=True, help="JSON report")

    p = sub.add_parser("nu", help="paired winding invariant over transverse momenta")
    _add_common(p)
    p.add_argument("--energy", required=True, type=parse_complex)
    p.add_argument("--axis", default="0")
    p.add_argument("--grid", type=int, default=64,
                   help="transverse momentum sample count")
    p.add_argument("--kpoints", type=int, default=256, help="loop tracking grid")
    p.add_argument("--out", required=True, help="CSV output (k_transverse,nu)")
    p.add_argument("--pairs", help="optional JSON dump of per-pair windings")

    p = sub.add_parser("verify", help="partner-map check against an OBC spectrum")
    _add_common(p)
    p.add_argument("--symmetry", required=True,
                   help="trs|phs|cs|trs_dagger|phs_dagger|sls|pseudo_hermitian")
    p.add_argument("--size", default=None, help="default 40 per axis")
    p.add_argument("--samples", type=int, default=24)
    p.add_argument("--match-tol", type=float, default=1e-6)
    p.add_argument("--out", help="JSON report")

    p = sub.add_parser("zoo", help="list bundled models or export one")
    zsub = p.add_subparsers(dest="zoo_command", required=True)
    zsub.add_parser("list", help="print ids and citations")
    pe = zsub.add_parser("export", help="write a model JSON file")
    pe.add_argument("id")
    pe.add_argument("--out", required=True)
    pe.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                    help="override a declared parameter")
    return parser


def _cmd_spectrum(args):
    model, _ = load_model(args.model)
    if args.bc == "obc":
        sizes = _parse_sizes(args.size or ",".join(["40"] * model.dimension))
        result = spectral.obc_spectrum(model, sizes, keep_vectors=False)
    else:
        grid = _parse_sizes(args.grid or ",".join(["64"] * model.dimension))
        result = spectral.pbc_spectrum(model, grid)
    write_csv(args.out, "re,im", spectrum_rows(result.eigenvalues))
    if args.svg:
        svg_scatter(result.eigenvalues, args.svg)
    return 0


def _cmd_localize(args):
    model, _ = load_model(args.model)
    sizes = _parse_sizes(args.size)
    result = spectral.obc_spectrum(model, sizes)
    profile = spectral.density_profile(result, args.energy, match_tol=args.match_tol)
    cluster = spectral.degenerate_cluster(result, args.energy)
    report = spectral.fit_decay_factor(
        profile, subspace_dim=len(cluster) if len(cluster) > 1 else 0)
    if args.out_profile:
        header = ",".join(f"x_{m + 1}" for m in range(model.dimension)) + ",prob"
        write_csv(args.out_profile, header, profile_rows(profile))
    if args.out_report:
        payload = report.to_json()
        payload["energy"] = [args.energy.real, args.energy.imag]
        write_json(payload, args.out_report)
    if args.svg:
        svg_heatmap(profile, args.svg)
    return 0


def _cmd_winding(args):
    model, _ = load_model(args.model)
    axis = _axis_index(args.axis, model.dimension)
    mu = _parse_reals(args.mu) if args.mu else None
    transverse = _parse_reals(args.transverse) if args.transverse else ()
    report = amoeba.winding_number(model, args.energy, mu=mu, axis=axis,
                                   transverse=transverse, grid=args.kpoints)
    write_json(report.to_json(), args.out)
    return 0


def _cmd_ronkin(args):
    model, _ = load_model(args.model)
    mu = _parse_reals(args.mu) if args.mu else None
    if args.minimize:
        result = amoeba.ronkin_minimize(model, args.energy, mu_init=mu,
                                        grid=args.grid, gtol=args.gtol)
        payload = {
            "mu": list(result.mu),
            "report": result.report,
            "value": result.value,
            "gradient": list(result.gradient),
            "iterations": result.iterations,
        }
    else:
        grid = args.grid if args.grid else (256 if model.dimension == 1 else 64)
        evaluation = amoeba.ronkin_value(model, args.energy, mu=mu, grid=grid)
        gradient = amoeba.ronkin_gradient(model, args.energy, mu=mu, grid=grid)
        payload = {
            "value": evaluation.value,
            "gradient": list(gradient),
            "mu": list(evaluation.mu),
            "grid": list(evaluation.grid),
            "excluded_nodes": evaluation.excluded,
        }
    write_json(payload, args.out)
    return 0


def _cmd_nu(args):
    model, _ = load_model(args.model)
    axis = _axis_index(args.axis, model.dimension)
    find_intertwiner(SymmetryKind.TRS_DAGGER, model, tol=1e-9)
    rows = []
    pair_dump = []
    if model.dimension == 1:
        transverse_values = [()]
    else:
        kts = 2 * np.pi * np.arange(args.grid) / args.grid
        transverse_values = [((float(kt) + np.pi) % (2 * np.pi) - np.pi,) for kt in kts]
        transverse_values.sort()
    for tv in transverse_values:
        report = bands.nu_invariant(model, args.energy, axis=axis, transverse=tv,
                                    grid=args.kpoints, assume_symmetric=True)
        k_label = tv[0] if tv else 0.0
        rows.append((float(k_label), "undefined" if report.nu is None else report.nu))
        pair_dump.append({
            "k_transverse": float(k_label),
            "nu": None if report.nu is None else report.nu,
            "pairs": [list(p) for p in report.pairing],
            "windings": [[w if w is not None else "unreliable" for w in pair]
                         for pair in report.per_pair_windings],
        })
    write_csv(args.out, "k_transverse,nu", rows)
    if args.pairs:
        write_json(pair_dump, args.pairs)
    return 0


def _cmd_verify(args):
    model, declared = load_model(args.model)
    kind = SymmetryKind.from_string(args.symmetry)
    op = next((o for o in declared if o.kind == kind), None)
    if op is None:
        op = find_intertwiner(kind, model)
    sizes = _parse_sizes(args.size) if args.size else (40,) * model.dimension
    results = verify.table1_check(model, op, sizes, n_samples=args.samples,
                                  match_tol=args.match_tol)
    mismatches = sum(not r.ok for r in results)
    print(f"symmetry {kind.value}: {len(results)} sampled modes, "
          f"{len(results) - mismatches} verdicts as predicted")
    print(f"{'energy':>24s} {'partner':>24s} {'verdict':>20s} {'expected':>20s}")
    for r in results:
        print(f"{r.energy:>24.4f} {r.partner_energy:>24.4f} {r.verdict:>20s} {r.expected:>20s}")
    if args.out:
        write_json({
            "symmetry": kind.value,
            "sizes": list(sizes),
            "results": [r.to_json() for r in results],
            "mismatches": mismatches,
        }, args.out)
    return 1 if mismatches else 0


def _cmd_zoo(args):
    if args.zoo_command == "list":
        for model_id in zoo.ids():
            print(f"{model_id:15s} {zoo.entry(model_id).citation}")
        return 0
    overrides = {}
    for item in args.set:
        if "=" not in item:
            raise NHSkinError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        overrides[key] = float(value)
    entry = zoo.entry(args.id)
    model = entry.build(**overrides)
    save_model(model, args.out, entry.operators())
    return 0


_COMMANDS = {
    "spectrum": _cmd_spectrum,
    "localize": _cmd_localize,
    "winding": _cmd_winding,
    "ronkin": _cmd_ronkin,
    "nu": _cmd_nu,
    "verify": _cmd_verify,
    "zoo": _cmd_zoo,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "threads"):
        _apply_threads(args)
    try:
        return _COMMANDS[args.command](args)
    except NHSkinError as exc:
        print(f"ERROR {exc.code}: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"ERROR value: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
