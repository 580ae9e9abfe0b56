import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qrenyi.spectral import (DensityOperator, ValidationError, dephase, displace,
                             eigendecompose, fractional_power, generator_from_matrix,
                             maximally_mixed, number_generator, partial_trace,
                             pure_state, purify, random_density, random_pure,
                             von_neumann_entropy)


class TestEigendecompose:
    def test_identity(self):
        dec = eigendecompose(np.eye(2), 1e-8)
        assert len(dec.eigenvalues) == 1
        assert_allclose(dec.eigenvalues[0], 1.0)
        assert_allclose(dec.projectors[0], np.eye(2))

    def test_degenerate_diagonal(self):
        dec = eigendecompose(np.diag([0.0, 1.0, 1.0]), 1e-8)
        assert_allclose(dec.eigenvalues, [0.0, 1.0])
        ranks = [int(round(np.real(np.trace(p)))) for p in dec.projectors]
        assert ranks == [1, 2]

    def test_pauli_x(self):
        dec = eigendecompose(np.array([[0.0, 1.0], [1.0, 0.0]]), 1e-8)
        assert_allclose(dec.eigenvalues, [-1.0, 1.0], atol=1e-12)
        p_minus = 0.5 * np.array([[1, -1], [-1, 1]], dtype=complex)
        p_plus = 0.5 * np.array([[1, 1], [1, 1]], dtype=complex)
        assert_allclose(dec.projectors[0], p_minus, atol=1e-12)
        assert_allclose(dec.projectors[1], p_plus, atol=1e-12)

    def test_reconstruction_random(self, rng):
        for _ in range(20):
            dim = int(rng.integers(2, 13))
            a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
            h = a + a.conj().T
            dec = eigendecompose(h)
            assert_allclose(dec.reconstruct(), h, atol=1e-9)
            total = sum(dec.projectors)
            assert_allclose(total, np.eye(dim), atol=1e-10)
            for i, p in enumerate(dec.projectors):
                assert_allclose(p @ p, p, atol=1e-10)
                for q in dec.projectors[i + 1:]:
                    assert np.abs(p @ q).max() < 1e-10

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValidationError):
            eigendecompose(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestFractionalPower:
    def test_square_root(self):
        assert_allclose(fractional_power(np.diag([4.0, 9.0]), 0.5),
                        np.diag([2.0, 3.0]), atol=1e-12)

    def test_pseudo_inverse_on_support(self):
        assert_allclose(fractional_power(np.diag([1.0, 0.0]), -1.0),
                        np.diag([1.0, 0.0]), atol=1e-12)

    def test_cube_root(self):
        assert_allclose(fractional_power(np.diag([2.0, 8.0]), 1.0 / 3.0),
                        np.diag([2.0 ** (1.0 / 3.0), 2.0]), atol=1e-12)

    def test_additive_exponents(self, rng):
        for _ in range(10):
            dim = int(rng.integers(2, 7))
            rho = random_density(dim, rng).matrix
            a, b = rng.uniform(0.2, 1.5, size=2)
            lhs = fractional_power(rho, a) @ fractional_power(rho, b)
            assert_allclose(lhs, fractional_power(rho, a + b), atol=1e-9)

    def test_negative_eigenvalue_rejected(self):
        with pytest.raises(ValidationError):
            fractional_power(np.diag([1.0, -0.5]), 0.5)


class TestDephase:
    def test_diagonal_state_fixed(self):
        g = number_generator(3)
        rho = DensityOperator(np.diag([0.5, 0.3, 0.2]))
        assert_allclose(dephase(rho, g).matrix, rho.matrix, atol=1e-12)

    def test_plus_state(self):
        g = number_generator(2)
        rho = pure_state([1, 1])
        assert_allclose(dephase(rho, g).matrix, np.diag([0.5, 0.5]), atol=1e-12)

    def test_trivial_generator(self, rng):
        g = generator_from_matrix(np.eye(3))
        rho = random_density(3, rng)
        assert_allclose(dephase(rho, g).matrix, rho.matrix, atol=1e-12)

    def test_idempotent_trace_preserving_entropy(self, rng):
        g = number_generator(4)
        for _ in range(10):
            rho = random_density(4, rng)
            d1 = dephase(rho, g)
            assert_allclose(dephase(d1, g).matrix, d1.matrix, atol=1e-12)
            assert_allclose(np.trace(d1.matrix), 1.0, atol=1e-12)
            assert von_neumann_entropy(d1) >= von_neumann_entropy(rho) - 1e-10

    def test_dimension_mismatch(self, rng):
        with pytest.raises(ValidationError):
            dephase(random_density(3, rng), number_generator(4))


class TestDisplace:
    def test_zero_shift(self, rng):
        rho = random_density(3, rng)
        assert_allclose(displace(rho, number_generator(3), 0.0).matrix, rho.matrix,
                        atol=1e-12)

    def test_number_state_invariant(self):
        rho = pure_state([0, 0, 1])
        out = displace(rho, number_generator(3), 1.234)
        assert_allclose(out.matrix, rho.matrix, atol=1e-12)

    def test_pi_maps_plus_to_minus(self):
        rho = pure_state([1, 1])
        out = displace(rho, number_generator(2), np.pi)
        minus = pure_state([1, -1])
        assert_allclose(out.matrix, minus.matrix, atol=1e-12)

    def test_group_property(self, rng):
        g = number_generator(4)
        rho = random_density(4, rng)
        x, y = 0.7, -1.9
        lhs = displace(displace(rho, g, x), g, y)
        assert_allclose(lhs.matrix, displace(rho, g, x + y).matrix, atol=1e-10)

    def test_spectrum_preserved(self, rng):
        g = number_generator(4)
        rho = random_density(4, rng)
        assert_allclose(np.sort(displace(rho, g, 0.9).eigenvalues()),
                        np.sort(rho.eigenvalues()), atol=1e-10)


class TestPurifyPartialTrace:
    def test_pure_input(self):
        rho = pure_state([1, 1j])
        psi, r = purify(rho)
        assert r == 1
        assert psi.dim == 2

    def test_schmidt_balanced(self):
        psi, r = purify(DensityOperator(np.diag([0.5, 0.5])))
        assert r == 2
        vals = np.linalg.eigvalsh(partial_trace(psi, 1, (2, 2)).matrix)
        assert_allclose(np.sort(vals), [0.5, 0.5], atol=1e-12)

    def test_schmidt_weights(self):
        rho = DensityOperator(np.diag([0.9, 0.1]))
        psi, r = purify(rho)
        assert r == 2
        assert_allclose(partial_trace(psi, 0, (2, 2)).matrix, rho.matrix, atol=1e-10)

    def test_product_state(self, rng):
        a = random_density(2, rng)
        b = random_density(3, rng)
        joint = DensityOperator(np.kron(a.matrix, b.matrix))
        assert_allclose(partial_trace(joint, 0, (2, 3)).matrix, a.matrix, atol=1e-12)
        assert_allclose(partial_trace(joint, 1, (2, 3)).matrix, b.matrix, atol=1e-12)

    def test_bell_state(self):
        bell = pure_state([1, 0, 0, 1])
        for keep in (0, 1):
            out = partial_trace(bell, keep, (2, 2))
            assert_allclose(out.matrix, np.eye(2) / 2, atol=1e-12)

    def test_roundtrip_random(self, rng):
        for _ in range(10):
            dim = int(rng.integers(2, 9))
            rho = random_density(dim, rng, rank=int(rng.integers(1, dim + 1)))
            psi, r = purify(rho)
            assert_allclose(partial_trace(psi, 0, (dim, r)).matrix, rho.matrix,
                            atol=1e-10)

    def test_bad_factorisation(self, rng):
        with pytest.raises(ValidationError):
            partial_trace(random_density(6, rng), 0, (4, 2))


class TestValidationAndJson:
    def test_trace_enforced(self):
        with pytest.raises(ValidationError):
            DensityOperator(np.diag([0.5, 0.6]))

    def test_psd_enforced(self):
        with pytest.raises(ValidationError):
            DensityOperator(np.diag([1.5, -0.5]))

    def test_hermiticity_enforced(self):
        m = np.array([[0.5, 0.4], [0.1, 0.5]], dtype=complex)
        with pytest.raises(ValidationError):
            DensityOperator(m)

    def test_json_roundtrip(self, rng, tmp_path):
        rho = random_density(3, rng)
        path = tmp_path / "state.json"
        rho.save(path)
        back = DensityOperator.load(path)
        assert_allclose(back.matrix, rho.matrix, atol=1e-15)
        assert np.array_equal(back.labels, rho.labels)

    def test_json_invalid_rejected(self, tmp_path):
        bad = maximally_mixed(2).to_json_dict()
        bad["matrix"][0][0]["re"] = 0.9  # breaks the trace
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(bad))
        with pytest.raises(ValidationError):
            DensityOperator.load(path)

    def test_purity_flags(self, rng):
        assert random_pure(4, rng).is_pure()
        assert not maximally_mixed(4).is_pure()
