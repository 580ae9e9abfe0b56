import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import convolution_objective, sibson_objective, simplex_grid_minimize
from qrenyi.entropy import (ABS_FIRST_MOMENT_LINE, FIRST_MOMENT_HALF_LINE,
                            SECOND_MOMENT, CircularDensity, DiscreteDistribution,
                            RealLineDensity, classical_relative_entropy,
                            conjugate_order, convolution_lower_bound, convolve,
                            max_entropy_given_deviation, maxent_extremal_density,
                            order_power_coefficient, renyi_entropy, renyi_length,
                            sibson_mutual_information, wrap_mod_interval, _reflected)

TWO_PI = 2 * np.pi


def uniform_circular(n=64, period=TWO_PI, start=-np.pi):
    return CircularDensity(np.full(n, 1.0 / period), period=period, start=start)


def random_discrete(rng, n):
    p = rng.random(n) + 1e-3
    return DiscreteDistribution(np.arange(n), p / p.sum())


class TestOrders:
    def test_conjugation_special_values(self):
        assert conjugate_order(1.0) == 1.0
        assert np.isinf(conjugate_order(0.5))
        assert conjugate_order(np.inf) == 0.5

    def test_involution(self, rng):
        for a in rng.uniform(0.5, 10.0, size=25):
            assert abs(conjugate_order(conjugate_order(a)) - a) < 1e-10

    def test_below_half_rejected(self):
        with pytest.raises(ValueError):
            conjugate_order(0.3)

    def test_power_coefficient(self):
        assert_allclose(order_power_coefficient(0.5), 2.0)
        assert_allclose(order_power_coefficient(1.0), math.e)
        assert_allclose(order_power_coefficient(2.0), 4.0)


class TestRenyiEntropy:
    def test_uniform_gives_log_d(self):
        d = DiscreteDistribution(np.arange(5), np.full(5, 0.2))
        for a in (0.0, 0.5, 1.0, 2.0, 7.0, np.inf):
            assert_allclose(renyi_entropy(d, a), math.log(5), atol=1e-12)

    def test_point_mass_zero(self):
        d = DiscreteDistribution(np.arange(4), [0, 1, 0, 0])
        for a in (0.5, 1.0, 2.0, np.inf):
            assert_allclose(renyi_entropy(d, a), 0.0, atol=1e-12)

    def test_uniform_circle_log_two_pi(self):
        dens = uniform_circular()
        for a in (0.5, 1.0, 2.0, np.inf):
            assert_allclose(renyi_entropy(dens, a), math.log(TWO_PI), atol=1e-12)

    def test_monotone_in_order(self, rng):
        for _ in range(20):
            d = random_discrete(rng, int(rng.integers(2, 10)))
            hs = [renyi_entropy(d, a) for a in (0.0, 0.5, 0.9, 1.0, 1.5, 3.0, np.inf)]
            assert all(x >= y - 1e-10 for x, y in zip(hs, hs[1:]))

    def test_translation_invariance(self, rng):
        vals = rng.random(32) + 0.1
        vals /= vals.sum() * (TWO_PI / 32)
        dens = CircularDensity(vals)
        rolled = CircularDensity(np.roll(vals, 7))
        lv = rng.random(32) + 0.1
        lv /= lv.sum() * (2.0 / 32)
        line = RealLineDensity(0.0, 2.0, lv)
        shifted = RealLineDensity(5.0, 7.0, lv)
        for a in (0.5, 1.0, 2.0, np.inf):
            assert_allclose(renyi_entropy(dens, a), renyi_entropy(rolled, a), atol=1e-12)
            assert_allclose(renyi_entropy(line, a), renyi_entropy(shifted, a), atol=1e-12)

    def test_continuity_at_one(self, rng):
        # near alpha=1 the generic formula must track H_1 - (alpha-1)*Var[-log p]/2;
        # the deviation slope is Var/2, so the tolerance scales with it
        for _ in range(5):
            d = random_discrete(rng, 6)
            h1 = renyi_entropy(d, 1.0)
            logs = np.log(d.probs)
            var = float(np.sum(d.probs * logs**2) - np.sum(d.probs * logs) ** 2)
            for a in (1.0 - 1e-4, 1.0 + 1e-4):
                taylor = h1 - (a - 1.0) * var / 2.0
                assert abs(renyi_entropy(d, a) - taylor) < 1e-6
        uniform = DiscreteDistribution(np.arange(6), np.full(6, 1 / 6))
        for a in (1.0 - 1e-4, 1.0 + 1e-4):
            assert abs(renyi_entropy(uniform, a) - math.log(6)) < 1e-6

    def test_base_conversion(self):
        d = DiscreteDistribution(np.arange(2), [0.5, 0.5])
        assert_allclose(renyi_entropy(d, 1.0, base=2), 1.0, atol=1e-12)


class TestRenyiLength:
    def test_point_mass(self):
        d = DiscreteDistribution(np.arange(3), [0, 0, 1])
        assert_allclose(renyi_length(d, 0.5), 1.0, atol=1e-12)

    def test_uniform(self):
        d = DiscreteDistribution(np.arange(6), np.full(6, 1 / 6))
        assert_allclose(renyi_length(d, 2.0), 6.0, atol=1e-12)

    def test_half_order_formula(self):
        d = DiscreteDistribution(np.arange(2), [0.5, 0.5])
        assert_allclose(renyi_length(d, 0.5), 2.0, atol=1e-12)


class TestRelativeEntropy:
    def test_equal_gives_zero(self, rng):
        d = random_discrete(rng, 5)
        for a in (0.5, 1.0, 2.0, np.inf):
            assert_allclose(classical_relative_entropy(d, d, a), 0.0, atol=1e-12)

    def test_point_vs_uniform(self):
        p = DiscreteDistribution(np.arange(4), [1, 0, 0, 0])
        q = DiscreteDistribution(np.arange(4), np.full(4, 0.25))
        assert_allclose(classical_relative_entropy(p, q, 1.0), math.log(4), atol=1e-12)

    def test_disjoint_support_infinite(self):
        p = DiscreteDistribution(np.arange(2), [1, 0])
        q = DiscreteDistribution(np.arange(2), [0, 1])
        assert classical_relative_entropy(p, q, 2.0) == np.inf

    def test_nonnegative_and_faithful(self, rng):
        for _ in range(20):
            p = random_discrete(rng, 5)
            q = random_discrete(rng, 5)
            for a in (0.5, 1.0, 2.0):
                d = classical_relative_entropy(p, q, a)
                assert d >= -1e-12
                if d < 1e-10:
                    assert np.abs(p.probs - q.probs).max() < 1e-4

    def test_data_processing_stochastic(self, rng):
        for _ in range(20):
            p = random_discrete(rng, 5)
            q = random_discrete(rng, 5)
            m = rng.random((4, 5)) + 0.05
            m /= m.sum(axis=0, keepdims=True)
            mp = DiscreteDistribution(np.arange(4), m @ p.probs)
            mq = DiscreteDistribution(np.arange(4), m @ q.probs)
            for a in (0.5, 0.8, 1.0, 2.0, np.inf):
                assert (classical_relative_entropy(mp, mq, a)
                        <= classical_relative_entropy(p, q, a) + 1e-10)

    def test_grid_mismatch_rejected(self):
        p = DiscreteDistribution(np.arange(3), [0.2, 0.3, 0.5])
        q = DiscreteDistribution(np.arange(1, 4), [0.2, 0.3, 0.5])
        with pytest.raises(ValueError):
            classical_relative_entropy(p, q, 2.0)


class TestSibson:
    def test_uncorrelated_is_zero(self, rng):
        prior = random_discrete(rng, 3)
        c = random_discrete(rng, 4)
        for a in (0.5, 1.0, 2.0, np.inf):
            assert_allclose(sibson_mutual_information(prior, [c, c, c], a), 0.0,
                            atol=1e-12)

    def test_deterministic_binary(self):
        prior = DiscreteDistribution(np.arange(2), [0.5, 0.5])
        cond = [DiscreteDistribution(np.arange(2), [1, 0]),
                DiscreteDistribution(np.arange(2), [0, 1])]
        assert_allclose(sibson_mutual_information(prior, cond, 2.0), math.log(2),
                        atol=1e-12)

    def test_matches_simplex_grid_oracle(self):
        prior = DiscreteDistribution(np.arange(2), [0.5, 0.5])
        cond = np.array([[1.0, 0.0, 0.0], [0.0, 0.5, 0.5]])
        for a in (0.6, 2.0, 3.0):
            mine = sibson_mutual_information(
                prior, [DiscreteDistribution(np.arange(3), c) for c in cond], a)
            oracle, _ = simplex_grid_minimize(sibson_objective(prior, cond, a), 3,
                                              step=1e-3)
            assert abs(mine - oracle) < 1e-4

    def test_permuted_conditionals(self, rng):
        base = random_discrete(rng, 3).probs
        cond = np.stack([base, np.roll(base, 1), np.roll(base, 2)])
        prior = DiscreteDistribution(np.arange(3), np.full(3, 1 / 3))
        a = 2.0
        mine = sibson_mutual_information(
            prior, [DiscreteDistribution(np.arange(3), c) for c in cond], a)
        oracle, _ = simplex_grid_minimize(sibson_objective(prior, cond, a), 3,
                                          step=1e-3)
        assert abs(mine - oracle) < 1e-4

    def test_shannon_reduction(self, rng):
        prior = random_discrete(rng, 3)
        cond = np.stack([random_discrete(rng, 4).probs for _ in range(3)])
        pa = prior.probs @ cond
        shannon = sum(prior.probs[j] * cond[j, a] * math.log(cond[j, a] / pa[a])
                      for j in range(3) for a in range(4) if cond[j, a] > 0)
        mine = sibson_mutual_information(
            prior, [DiscreteDistribution(np.arange(4), c) for c in cond], 1.0)
        assert_allclose(mine, shannon, atol=1e-12)


class TestConvolveWrap:
    def test_identity_element(self, rng):
        d = random_discrete(rng, 4)
        delta = DiscreteDistribution(np.arange(1), [1.0])
        out = convolve(d, delta)
        assert_allclose(out.probs, d.probs, atol=1e-14)
        assert np.array_equal(out.labels, d.labels)

    def test_uniform_absorbs_circular(self, rng):
        u = uniform_circular(32)
        vals = rng.random(32) + 0.2
        vals /= vals.sum() * u.cell
        other = CircularDensity(vals)
        out = convolve(u, other)
        assert_allclose(out.values, np.full(32, 1 / TWO_PI), atol=1e-12)

    def test_binary_convolution(self):
        d = DiscreteDistribution(np.arange(2), [0.5, 0.5])
        out = convolve(d, d)
        assert np.array_equal(out.labels, [0, 1, 2])
        assert_allclose(out.probs, [0.25, 0.5, 0.25], atol=1e-14)

    def test_wrap_inside_interval_unchanged(self):
        vals = np.array([0.0, 2.0, 2.0, 0.0])
        dens = RealLineDensity(0.0, 1.0, vals / (vals.sum() * 0.25))
        out = wrap_mod_interval(dens, 1.0)
        assert_allclose(out.values, dens.values, atol=1e-14)

    def test_wrap_uniform_double(self):
        dens = RealLineDensity(0.0, 2.0, np.full(8, 0.5))
        out = wrap_mod_interval(dens, 1.0)
        assert_allclose(out.values, np.full(4, 1.0), atol=1e-14)

    def test_wrap_merges_point_masses(self):
        d = DiscreteDistribution(np.array([0, 5]), [0.5, 0.5])
        out = wrap_mod_interval(d, 5)
        assert_allclose(out.probs[0], 1.0, atol=1e-14)

    def test_wrap_entropy_lemma(self, rng):
        # concentration cannot increase any Renyi entropy
        for _ in range(10):
            n = 48
            vals = rng.random(n) + 0.05
            dens = RealLineDensity(-3.0, 3.0, vals / (vals.sum() * (6.0 / n)))
            wrapped = wrap_mod_interval(dens, 1.5)
            for a in (0.5, 0.7, 1.0, 2.0, 5.0, np.inf):
                assert renyi_entropy(wrapped, a) <= renyi_entropy(dens, a) + 1e-10

    def test_wrap_incompatible_grid(self):
        dens = RealLineDensity(0.0, 1.0, np.full(7, 1.0))
        with pytest.raises(ValueError):
            wrap_mod_interval(dens, 0.3)


class TestConvolutionLowerBound:
    def test_forward_constructed_gives_zero(self, rng):
        n = 8
        q0 = rng.random(n) + 0.1
        q0 /= q0.sum()
        pr = rng.random(n) + 0.1
        pr /= pr.sum() * (TWO_PI / n)
        prior = CircularDensity(pr)
        q0d = CircularDensity(q0 / (TWO_PI / n))
        perr = convolve(q0d, _reflected(prior))
        res = convolution_lower_bound(perr, prior, 2.0)
        assert res.value < 1e-9

    def test_z4_point_mass(self):
        cell = TWO_PI / 4
        perr = CircularDensity(np.array([1 / cell, 0, 0, 0]), start=0.0)
        prior = CircularDensity(np.full(4, 1 / TWO_PI), start=0.0)
        res = convolution_lower_bound(perr, prior, 2.0)
        assert_allclose(res.value, math.log(4), atol=1e-9)

    def test_z4_point_mass_matches_grid_oracle(self):
        # discrete view: uniform prior over Z_4, point-mass error
        cell = TWO_PI / 4
        target = np.array([1 / cell, 0, 0, 0])
        # uniform prior: any unit q mass contributes density 1/(2 pi) everywhere
        mix = np.full((4, 4), 1 / TWO_PI)
        obj = convolution_objective(target, cell, mix, 2.0)
        oracle, _ = simplex_grid_minimize(obj, 4, step=1e-2)
        perr = CircularDensity(target, start=0.0)
        prior = CircularDensity(np.full(4, 1 / TWO_PI), start=0.0)
        res = convolution_lower_bound(perr, prior, 2.0)
        assert abs(res.value - oracle) < 1e-4

    def test_uniform_interval_equality(self, rng):
        # prior uniform on [-1, 1); perr supported within a length-2 window
        h = 0.1
        prior = RealLineDensity(-1.0, 1.0, np.full(20, 0.5))
        xs = np.linspace(-0.5 + h / 2, 0.5 - h / 2, 10)
        pv = np.exp(-4.0 * xs**2) + 0.1 * rng.random(10)
        pv /= pv.sum() * h
        perr = RealLineDensity(-0.5, 0.5, pv)
        for a in (0.7, 1.0, 2.0):
            res = convolution_lower_bound(perr, prior, a, maxfev=40_000)
            closed = math.log(2.0) - renyi_entropy(perr, a)
            assert abs(res.value - closed) < 1e-6

    def test_below_sibson(self, rng):
        # the convolution bound never exceeds the mutual information of the estimate
        n = 6
        prior_p = np.full(n, 1 / n)
        cond = np.stack([np.roll(np.array([0.6, 0.2, 0.1, 0.05, 0.03, 0.02]), j)
                         for j in range(n)])
        prior = DiscreteDistribution(np.arange(n), prior_p)
        sib = sibson_mutual_information(
            prior, [DiscreteDistribution(np.arange(n), c) for c in cond], 2.0)
        # circular error distribution of the estimate j_est - j
        perr_mass = np.zeros(n)
        for j in range(n):
            for a in range(n):
                perr_mass[(a - j) % n] += prior_p[j] * cond[j, a]
        cell = TWO_PI / n
        perr = CircularDensity(perr_mass / cell, start=0.0)
        cprior = CircularDensity(np.full(n, 1 / TWO_PI), start=0.0)
        res = convolution_lower_bound(perr, cprior, 2.0)
        assert res.value <= sib + 1e-8


class TestExtremalDensities:
    def test_gaussian_limit(self):
        out = maxent_extremal_density(1.0, 1.7, SECOND_MOMENT)
        assert_allclose(out.entropy, math.log(1.7 * math.sqrt(2 * math.pi * math.e)),
                        atol=1e-12)
        assert_allclose(renyi_entropy(out.density, 1.0), out.entropy, atol=1e-6)
        assert out.moment_error < 1e-8

    def test_alpha_two_compact_support(self):
        out = maxent_extremal_density(2.0, 1.0, SECOND_MOMENT)
        assert_allclose(out.lam, math.sqrt(5.0), atol=1e-12)
        assert_allclose(out.entropy, math.log(5.0 ** 1.5 / 3.0), atol=1e-12)
        assert_allclose(renyi_entropy(out.density, 2.0), out.entropy, atol=1e-7)
        assert out.moment_error < 1e-6

    def test_entropy_dominates_random_densities(self, rng):
        # no density with the same deviation can beat the closed-form maximum
        for a in (0.6, 1.0, 2.0):
            n = 400
            vals = rng.random(n) + 0.01
            dens = RealLineDensity(-2.0, 2.0, vals / (vals.sum() * (4.0 / n)))
            sigma = math.sqrt(dens.moment(2))
            assert renyi_entropy(dens, a) <= max_entropy_given_deviation(a, sigma) + 1e-9

    def test_half_line_length_identity(self):
        # L_beta of the extremal density equals alpha^{alpha/(alpha-1)} * mean
        for beta in (0.75, 1.0, 1.5, 2.0, 4.0):
            xbar = 0.9
            out = maxent_extremal_density(beta, xbar, FIRST_MOMENT_HALF_LINE)
            alpha = conjugate_order(beta)
            assert_allclose(out.length, order_power_coefficient(alpha) * xbar,
                            atol=1e-8, rtol=1e-8)

    def test_half_line_quadrature_consistency(self):
        out = maxent_extremal_density(2.0, 1.3, FIRST_MOMENT_HALF_LINE)
        assert out.moment_error < 1e-6
        assert_allclose(renyi_length(out.density, 2.0), out.length, rtol=1e-5)

    def test_signed_line_doubles_length(self):
        one = maxent_extremal_density(2.0, 1.0, FIRST_MOMENT_HALF_LINE)
        two = maxent_extremal_density(2.0, 1.0, ABS_FIRST_MOMENT_LINE)
        assert_allclose(two.length, 2.0 * one.length, rtol=1e-12)

    def test_order_guard(self):
        with pytest.raises(ValueError):
            maxent_extremal_density(0.4, 1.0, SECOND_MOMENT)
