"""JSON model files and deterministic CSV/JSON/SVG exports.

Model file schema (matrices are row-major lists of rows)::

    {
      "name": str,
      "dimension": d,
      "orbitals": s,
      "hoppings":   [{"vector": [int, ...], "re": [[..]], "im": [[..]]}, ...],
      "symmetries": [{"kind": str, "u_re": [[..]], "u_im": [[..]]}, ...]   # optional
    }

Symmetry kinds serialize as the lowercase strings ``trs``, ``phs``, ``cs``,
``trs_dagger``, ``phs_dagger``, ``sls``, ``pseudo_hermitian``.  All writers
format numbers with ``repr`` so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import json
import warnings

import numpy as np

from .errors import DimensionError, InvariantViolation, ParseError
from .lattice import TightBindingModel
from .symmetry import SymmetryKind, SymmetryOperator, check_symmetry

__all__ = [
    "load_model",
    "save_model",
    "model_to_dict",
    "write_csv",
    "write_json",
    "spectrum_rows",
    "profile_rows",
    "svg_scatter",
    "svg_heatmap",
]


def _matrix(entry, re_key, im_key, context):
    try:
        re = np.asarray(entry[re_key], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{context}: bad or missing {re_key!r} matrix ({exc})") from None
    if im_key in entry:
        try:
            im = np.asarray(entry[im_key], dtype=float)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"{context}: bad {im_key!r} matrix ({exc})") from None
        if im.shape != re.shape:
            raise ParseError(f"{context}: {re_key!r} and {im_key!r} shapes differ")
    else:
        im = np.zeros_like(re)
    return re + 1j * im


def load_model(path):
    """Parse and validate a model file.

    Returns ``(model, operators)`` where ``operators`` holds the declared
    symmetries.  Declared symmetries are re-verified against the hoppings;
    failures are warnings, not errors.
    """
    try:
        with open(path) as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top level must be an object")
    for field in ("dimension", "orbitals", "hoppings"):
        if field not in data:
            raise ParseError(f"{path}: missing field {field!r}")

    seen = set()
    hoppings = {}
    for idx, entry in enumerate(data["hoppings"]):
        context = f"{path}: hoppings[{idx}]"
        if "vector" not in entry:
            raise ParseError(f"{context}: missing 'vector'")
        vec = tuple(int(v) for v in entry["vector"])
        if vec in seen:
            raise InvariantViolation(f"{context}: duplicate vector {list(vec)}")
        seen.add(vec)
        hoppings[vec] = _matrix(entry, "re", "im", context)

    try:
        model = TightBindingModel(data["dimension"], data["orbitals"], hoppings,
                                  name=data.get("name", ""))
    except DimensionError as exc:
        raise InvariantViolation(f"{path}: {exc}") from None

    operators = []
    for idx, entry in enumerate(data.get("symmetries", [])):
        context = f"{path}: symmetries[{idx}]"
        if "kind" not in entry:
            raise ParseError(f"{context}: missing 'kind'")
        kind = SymmetryKind.from_string(entry["kind"])
        u = _matrix(entry, "u_re", "u_im", context)
        try:
            op = SymmetryOperator(kind, u)
        except DimensionError as exc:
            raise InvariantViolation(f"{context}: {exc}") from None
        ok, residual = check_symmetry(op, model)
        if not ok:
            warnings.warn(
                f"{context}: declared {kind.value} fails verification "
                f"(residual {residual:.3e})", stacklevel=2)
        operators.append(op)
    return model, operators


def model_to_dict(model, operators=()):
    out = {
        "name": model.name,
        "dimension": model.dimension,
        "orbitals": model.orbitals,
        "hoppings": [
            {
                "vector": list(vec),
                "re": mat.real.tolist(),
                "im": mat.imag.tolist(),
            }
            for vec, mat in sorted(model.hoppings.items())
        ],
    }
    if operators:
        out["symmetries"] = [
            {
                "kind": op.kind.value,
                "u_re": np.asarray(op.u).real.tolist(),
                "u_im": np.asarray(op.u).imag.tolist(),
            }
            for op in operators
        ]
    return out


def save_model(model, path, operators=()):
    write_json(model_to_dict(model, operators), path)


def write_json(payload, path):
    with open(path, "w") as handle:
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")


def write_csv(path, header, rows):
    lines = [header]
    lines.extend(",".join(repr(float(v)) if isinstance(v, (float, np.floating)) else str(v)
                          for v in row) for row in rows)
    with open(path, "w") as handle:
        handle.write("\n".join(lines) + "\n")


def spectrum_rows(eigenvalues):
    flat = np.asarray(eigenvalues).reshape(-1)
    order = np.lexsort((flat.imag, flat.real))
    return [(float(flat[i].real), float(flat[i].imag)) for i in order]


def profile_rows(profile):
    profile = np.asarray(profile)
    rows = []
    for coords in np.ndindex(profile.shape):
        rows.append(tuple(int(c) for c in coords) + (float(profile[coords]),))
    return rows


def _bounds(values, pad=0.08):
    lo, hi = float(np.min(values)), float(np.max(values))
    span = hi - lo or 1.0
    return lo - pad * span, hi + pad * span


def svg_scatter(eigenvalues, path, highlights=(), width=640, height=480):
    """Scatter plot of a complex spectrum, highlights drawn larger and on top."""
    flat = np.asarray(eigenvalues).reshape(-1)
    x0, x1 = _bounds(flat.real)
    y0, y1 = _bounds(flat.imag)

    def put(z):
        px = (z.real - x0) / (x1 - x0) * width
        py = height - (z.imag - y0) / (y1 - y0) * height
        return f"{px:.2f}", f"{py:.2f}"

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for z in sorted(flat, key=lambda z: (z.real, z.imag)):
        px, py = put(z)
        parts.append(f'<circle cx="{px}" cy="{py}" r="2" fill="#1f6fb2"/>')
    for z in highlights:
        px, py = put(complex(z))
        parts.append(f'<circle cx="{px}" cy="{py}" r="5" fill="none" stroke="#c23b21" stroke-width="2"/>')
    parts.append("</svg>")
    with open(path, "w") as handle:
        handle.write("\n".join(parts) + "\n")


_HEAT_STOPS = [(0.0, (20, 20, 60)), (0.35, (60, 80, 180)), (0.65, (230, 170, 60)),
               (1.0, (255, 250, 230))]


def _heat_color(v):
    for (t0, c0), (t1, c1) in zip(_HEAT_STOPS, _HEAT_STOPS[1:]):
        if v <= t1:
            f = (v - t0) / (t1 - t0)
            rgb = tuple(int(round(a + f * (b - a))) for a, b in zip(c0, c1))
            return "#%02x%02x%02x" % rgb
    return "#%02x%02x%02x" % _HEAT_STOPS[-1][1]


def svg_heatmap(field, path, cell=12):
    """Heat map of a nonnegative 2D field (e.g. a probability density)."""
    field = np.asarray(field, dtype=float)
    if field.ndim == 1:
        field = field[:, None]
    if field.ndim != 2:
        raise DimensionError("heat maps are drawn for 1D or 2D fields")
    top = float(field.max()) or 1.0
    nx, ny = field.shape
    width, height = nx * cell, ny * cell
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    ]
    for i in range(nx):
        for j in range(ny):
            color = _heat_color(field[i, j] / top)
            parts.append(
                f'<rect x="{i * cell}" y="{height - (j + 1) * cell}" '
                f'width="{cell}" height="{cell}" fill="{color}"/>'
            )
    parts.append("</svg>")
    with open(path, "w") as handle:
        handle.write("\n".join(parts) + "\n")
