import numpy as np
import pytest

from nhskin.errors import DimensionError, LatticeTooSmall
from nhskin.lattice import (
    ComplexMomentum,
    HoppingTerm,
    TightBindingModel,
    bloch_grid,
    bloch_hamiltonian,
    generalized_bloch,
    obc_hamiltonian,
)
from nhskin import zoo

from helpers import random_model


def hatano_nelson(tp=1.0, tm=2.0):
    return zoo.build("hatano_nelson", tp=tp, tm=tm)


class TestModelInvariants:
    def test_hopping_term_rejects_nonsquare(self):
        with pytest.raises(DimensionError):
            HoppingTerm((1,), [[1.0, 2.0]])

    def test_vector_length_must_match_dimension(self):
        with pytest.raises(DimensionError):
            TightBindingModel(2, 1, {(1,): [[1.0]]})

    def test_duplicate_vectors_rejected(self):
        pairs = [((1,), [[1.0]]), ((1,), [[2.0]])]
        with pytest.raises(DimensionError, match="duplicate"):
            TightBindingModel(1, 1, pairs)

    def test_all_zero_hoppings_rejected(self):
        with pytest.raises(DimensionError):
            TightBindingModel(1, 1, {(1,): [[0.0]]})

    def test_matrix_side_must_match_orbitals(self):
        with pytest.raises(DimensionError):
            TightBindingModel(1, 2, {(1,): [[1.0]]})


class TestBloch:
    def test_single_term_at_zero_momentum(self):
        model = TightBindingModel(1, 1, {(1,): [[1.0]]})
        assert np.allclose(bloch_hamiltonian(model, [0.0]), [[1.0]], atol=1e-15)

    def test_eq16_at_gamma_point(self):
        model = zoo.build("eq16")
        h = bloch_hamiltonian(model, [0.0, 0.0])
        assert np.allclose(h, [[3.0, 3.1], [2.3, 4.8]], atol=1e-14)

    def test_matches_term_by_term_summation(self):
        rng = np.random.default_rng(11)
        for _ in range(5):
            model = random_model(rng, dimension=2, orbitals=2)
            k = rng.uniform(0, 2 * np.pi, size=2)
            expected = np.zeros((2, 2), dtype=complex)
            for vec, mat in model.hoppings.items():
                expected = expected + mat * np.exp(1j * (k[0] * vec[0] + k[1] * vec[1]))
            assert np.max(np.abs(bloch_hamiltonian(model, k) - expected)) <= 1e-12

    def test_two_pi_periodicity(self):
        rng = np.random.default_rng(5)
        model = random_model(rng, dimension=2, orbitals=2)
        k = rng.uniform(0, 2 * np.pi, size=2)
        for axis in range(2):
            shifted = k.copy()
            shifted[axis] += 2 * np.pi
            diff = bloch_hamiltonian(model, shifted) - bloch_hamiltonian(model, k)
            assert np.max(np.abs(diff)) < 1e-12

    def test_dimension_mismatch(self):
        model = hatano_nelson()
        with pytest.raises(DimensionError):
            bloch_hamiltonian(model, [0.0, 0.0])


class TestGeneralizedBloch:
    def test_reduces_to_bloch_at_zero_mu(self):
        rng = np.random.default_rng(2)
        model = random_model(rng, dimension=1, orbitals=2)
        k = [1.3]
        z = ComplexMomentum((0.0,), k)
        assert np.array_equal(generalized_bloch(model, z), bloch_hamiltonian(model, k))

    def test_single_hop_log_two(self):
        model = TightBindingModel(1, 1, {(1,): [[1.0]]})
        z = ComplexMomentum((np.log(2.0),), (0.0,))
        assert np.allclose(generalized_bloch(model, z), [[2.0]], atol=1e-14)

    def test_hatano_nelson_cancellation(self):
        z = ComplexMomentum((0.5 * np.log(2.0),), (np.pi / 2,))
        h = generalized_bloch(hatano_nelson(), z)
        assert abs(h[0, 0]) < 1e-12

    def test_mu_analyticity_by_finite_differences(self):
        rng = np.random.default_rng(8)
        model = random_model(rng, dimension=2, orbitals=2)
        mu = rng.uniform(-0.3, 0.3, size=2)
        k = rng.uniform(0, 2 * np.pi, size=2)
        step = 1e-5
        for axis in range(2):
            up, dn = mu.copy(), mu.copy()
            up[axis] += step
            dn[axis] -= step
            fd = (generalized_bloch(model, ComplexMomentum(up, k))
                  - generalized_bloch(model, ComplexMomentum(dn, k))) / (2 * step)
            exact = np.zeros((2, 2), dtype=complex)
            for vec, mat in model.hoppings.items():
                exact = exact + vec[axis] * mat * np.exp(complex(np.dot(mu, vec), np.dot(k, vec)))
            assert np.max(np.abs(fd - exact)) <= 1e-6 * max(1.0, np.max(np.abs(exact)))

    def test_bloch_grid_matches_pointwise(self):
        rng = np.random.default_rng(3)
        model = random_model(rng, dimension=2, orbitals=2)
        ks = rng.uniform(0, 2 * np.pi, size=(7, 2))
        mu = rng.uniform(-0.2, 0.2, size=2)
        batch = bloch_grid(model, ks, mu)
        for i, k in enumerate(ks):
            single = generalized_bloch(model, ComplexMomentum(mu, k))
            assert np.max(np.abs(batch[i] - single)) < 1e-13


class TestOBC:
    def test_hatano_nelson_three_sites(self):
        h = obc_hamiltonian(hatano_nelson(), (3,))
        assert np.array_equal(h, np.array([[0, 1, 0], [2, 0, 1], [0, 2, 0]], dtype=complex))

    def test_hermitian_model_gives_hermitian_matrix(self):
        rng = np.random.default_rng(4)
        base = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        onsite = rng.normal(size=(2, 2))
        model = TightBindingModel(1, 2, {
            (0,): onsite + onsite.T,
            (1,): base,
            (-1,): base.conj().T,
        })
        h = obc_hamiltonian(model, (6,))
        assert np.max(np.abs(h - h.conj().T)) < 1e-14

    def test_block_placement_against_direct_construction(self):
        rng = np.random.default_rng(9)
        model = random_model(rng, dimension=2, orbitals=2)
        sizes = (4, 3)
        h = obc_hamiltonian(model, sizes)
        s = model.orbitals
        zero = np.zeros((s, s), dtype=complex)
        for xa in range(sizes[0]):
            for ya in range(sizes[1]):
                for xb in range(sizes[0]):
                    for yb in range(sizes[1]):
                        row = (xa * sizes[1] + ya) * s
                        col = (xb * sizes[1] + yb) * s
                        expect = model.hoppings.get((xb - xa, yb - ya), zero)
                        assert np.array_equal(h[row:row + s, col:col + s], expect)

    def test_adjoint_model_transposes_conjugates(self):
        rng = np.random.default_rng(10)
        model = random_model(rng, dimension=1, orbitals=2)
        h = obc_hamiltonian(model, (7,))
        hadj = obc_hamiltonian(model.adjoint(), (7,))
        assert np.max(np.abs(hadj - h.conj().T)) < 1e-14

    def test_hop_longer_than_lattice(self):
        model = TightBindingModel(1, 1, {(3,): [[1.0]]})
        with pytest.raises(LatticeTooSmall):
            obc_hamiltonian(model, (3,))
