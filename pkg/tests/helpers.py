"""Shared test utilities: random model generators and an independent
argument-principle oracle built from Laurent-polynomial root counting."""

import numpy as np

from nhskin.lattice import TightBindingModel


def random_two_band_1d(rng, reach=2, scale=1.0):
    """Random dense 1D two-band model with hops up to ``reach`` cells."""
    hoppings = {}
    for j in range(-reach, reach + 1):
        mat = scale * (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
        hoppings[(j,)] = mat
    return TightBindingModel(1, 2, hoppings, name="random2band")


def random_model(rng, dimension=1, orbitals=2, reach=1):
    hoppings = {}
    for vec in np.ndindex(*([2 * reach + 1] * dimension)):
        j = tuple(v - reach for v in vec)
        hoppings[j] = rng.normal(size=(orbitals, orbitals)) + 1j * rng.normal(size=(orbitals, orbitals))
    return TightBindingModel(dimension, orbitals, hoppings, name="random")


# -- Laurent-polynomial winding oracle (1D models) ---------------------------
#
# det[E - H(beta)] is a Laurent polynomial in beta = e^{mu+ik}.  Its winding
# along |beta| = e^mu equals (number of zeros inside the circle) plus the
# lowest exponent (pole order at beta = 0, negative).  This counts windings
# without any phase unwrapping, so it is an independent oracle.

def _lp_add(a, b):
    lo = min(a[0], b[0])
    hi = max(a[0] + len(a[1]), b[0] + len(b[1]))
    out = np.zeros(hi - lo, dtype=complex)
    out[a[0] - lo:a[0] - lo + len(a[1])] += a[1]
    out[b[0] - lo:b[0] - lo + len(b[1])] += b[1]
    return (lo, out)


def _lp_mul(a, b):
    return (a[0] + b[0], np.convolve(a[1], b[1]))


def _lp_neg(a):
    return (a[0], -a[1])


def _lp_trim(a):
    lo, coeffs = a
    nz = np.nonzero(np.abs(coeffs) > 1e-13 * max(1.0, np.abs(coeffs).max()))[0]
    if nz.size == 0:
        return (0, np.zeros(1, dtype=complex))
    return (lo + nz[0], coeffs[nz[0]:nz[-1] + 1])


def _entry_laurent(model, row, col, energy):
    """Laurent polynomial of (E - H(beta))[row, col] for a 1D model."""
    term = (0, np.array([energy if row == col else 0.0], dtype=complex))
    for (j,), mat in model.hoppings.items():
        term = _lp_add(term, (j, np.array([-mat[row, col]], dtype=complex)))
    return _lp_trim(term)


def det_winding_oracle(model, energy, mu=0.0):
    """Winding of det[E - H(e^{mu+ik})] by root counting; None if a root sits
    too close to the circle for a safe verdict."""
    s = model.orbitals
    if s == 1:
        det = _entry_laurent(model, 0, 0, energy)
    elif s == 2:
        a = _entry_laurent(model, 0, 0, energy)
        d = _entry_laurent(model, 1, 1, energy)
        b = _entry_laurent(model, 0, 1, 0.0)
        c = _entry_laurent(model, 1, 0, 0.0)
        det = _lp_trim(_lp_add(_lp_mul(a, d), _lp_neg(_lp_mul(b, c))))
    else:
        raise NotImplementedError("oracle implemented for one- and two-band models")
    lo, coeffs = det
    roots = np.roots(coeffs[::-1])
    radius = np.exp(mu)
    if np.any(np.abs(np.abs(roots) - radius) < 1e-6 * radius):
        return None
    return int(np.sum(np.abs(roots) < radius)) + lo
