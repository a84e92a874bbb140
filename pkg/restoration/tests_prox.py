import numpy as np
from django.test import SimpleTestCase

from restoration.core import DenseMap, IdentityMap, Preconditioner, m_norm
from restoration.exceptions import ArgumentError, ConfigError
from restoration.solvers import (
    Contraction,
    ProxTerm,
    SmoothTerm,
    fb_map,
    forward_step,
    grad_least_squares,
    soft_threshold,
    weighted_resolvent_l1,
)

GRID_STEP = 1e-4


def _grid_minimizer(objective, x: float, radius: float = 3.0) -> float:
    """Grid search at GRID_STEP, then ternary refinement to 1e-8 (objective is convex)."""
    grid = np.arange(x - radius, x + radius + GRID_STEP, GRID_STEP)
    best = float(grid[np.argmin(objective(grid))])
    lo, hi = best - GRID_STEP, best + GRID_STEP
    while hi - lo > 1e-8:
        a, b = lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0
        if objective(a) <= objective(b):
            hi = b
        else:
            lo = a
    return 0.5 * (lo + hi)


def _lasso_1d(A, b, lipschitz=1.0):
    return SmoothTerm(DenseMap(np.atleast_2d(A)), np.atleast_1d(b), lipschitz)


class SoftThresholdTests(SimpleTestCase):
    def test_examples(self):
        np.testing.assert_array_equal(soft_threshold(np.zeros(3), 1.0), [0.0, 0.0, 0.0])
        np.testing.assert_array_equal(soft_threshold(np.array([0.5]), 1.0), [0.0])
        np.testing.assert_array_equal(soft_threshold(np.array([2.0, 0.5, -3.0]), 1.0), [1.0, 0.0, -2.0])

    def test_negative_phi_rejected(self):
        with self.assertRaises(ArgumentError):
            soft_threshold(np.ones(2), -0.1)

    def test_matches_grid_oracle(self):
        rng = np.random.default_rng(2024)
        for _ in range(1000):
            x = float(rng.uniform(-3.0, 3.0))
            phi = float(rng.uniform(0.0, 2.0))
            oracle = _grid_minimizer(lambda y: phi * np.abs(y) + 0.5 * (y - x) ** 2, x)
            self.assertLessEqual(abs(soft_threshold(np.array([x]), phi)[0] - oracle), 1e-6)


class WeightedResolventTests(SimpleTestCase):
    def test_examples(self):
        x = np.array([0.3, -1.2])
        np.testing.assert_array_equal(weighted_resolvent_l1(x, 0.7, 0.0, Preconditioner([2.0, 3.0])), x)
        np.testing.assert_array_equal(weighted_resolvent_l1(np.array([1.0]), 1.0, 1.0, Preconditioner([2.0])), [0.5])
        np.testing.assert_array_equal(
            weighted_resolvent_l1(np.array([2.0, -2.0]), 0.5, 1.0, Preconditioner.identity(2)), [1.5, -1.5]
        )

    def test_bad_lambda_and_rho(self):
        M = Preconditioner.identity(1)
        with self.assertRaises(ArgumentError):
            weighted_resolvent_l1(np.ones(1), 0.0, 1.0, M)
        with self.assertRaises(ArgumentError):
            weighted_resolvent_l1(np.ones(1), 1.0, -1.0, M)

    def test_matches_grid_oracle(self):
        rng = np.random.default_rng(99)
        for _ in range(1000):
            x = float(rng.uniform(-3.0, 3.0))
            lam = float(rng.uniform(1e-3, 1.0))
            rho = float(rng.uniform(0.0, 1.0))
            m = float(rng.uniform(0.5, 4.0))
            oracle = _grid_minimizer(lambda y: rho * np.abs(y) + (m / (2.0 * lam)) * (y - x) ** 2, x)
            got = weighted_resolvent_l1(np.array([x]), lam, rho, Preconditioner([m]))[0]
            self.assertLessEqual(abs(got - oracle), 1e-6)


class GradientTests(SimpleTestCase):
    def test_examples(self):
        h = SmoothTerm(IdentityMap(2), np.zeros(2), 1.0)
        np.testing.assert_array_equal(grad_least_squares(h, np.array([7.0, -2.0])), [7.0, -2.0])
        h = SmoothTerm(DenseMap.diagonal([1.0, 2.0]), np.zeros(2), 4.0)
        np.testing.assert_array_equal(grad_least_squares(h, np.array([1.0, 1.0])), [1.0, 4.0])

    def test_zero_at_exact_fit(self):
        rng = np.random.default_rng(4)
        A = rng.standard_normal((5, 3))
        x = rng.standard_normal(3)
        h = SmoothTerm(DenseMap(A), A @ x, 100.0)
        np.testing.assert_allclose(grad_least_squares(h, x), np.zeros(3), atol=1e-12)

    def test_dimension_mismatch(self):
        h = SmoothTerm(IdentityMap(2), np.zeros(2), 1.0)
        with self.assertRaises(ArgumentError):
            grad_least_squares(h, np.ones(3))

    def test_matches_central_differences(self):
        rng = np.random.default_rng(31)
        step = 1e-6
        for _ in range(20):
            d = int(rng.integers(2, 21))
            m = int(rng.integers(1, 21))
            h = SmoothTerm.from_map(DenseMap(rng.standard_normal((m, d))), rng.standard_normal(m))
            x = rng.standard_normal(d)
            fd = np.empty(d)
            for i in range(d):
                e = np.zeros(d)
                e[i] = step
                fd[i] = (h.value(x + e) - h.value(x - e)) / (2.0 * step)
            grad = grad_least_squares(h, x)
            self.assertLessEqual(np.linalg.norm(fd - grad) / np.linalg.norm(grad), 1e-5)

    def test_check_lipschitz(self):
        h = SmoothTerm(DenseMap.diagonal([3.0, 1.0]), np.zeros(2), 1.0)
        with self.assertRaises(ConfigError):
            h.check_lipschitz()
        self.assertAlmostEqual(SmoothTerm(DenseMap.diagonal([3.0, 1.0]), np.zeros(2), 9.0).check_lipschitz(), 9.0, places=5)


class ForwardBackwardMapTests(SimpleTestCase):
    def test_identity_fixed_point_without_prox(self):
        x = np.array([0.4, -2.0, 5.0])
        h = SmoothTerm(IdentityMap(3), x, 1.0)
        np.testing.assert_array_equal(fb_map(x, 1.0, Preconditioner.identity(3), h, ProxTerm(0.0)), x)

    def test_one_dimensional_lasso(self):
        h = _lasso_1d(1.0, 2.0)
        M = Preconditioner.identity(1)
        np.testing.assert_array_equal(fb_map(np.array([0.0]), 1.0, M, h, ProxTerm(1.0)), [1.0])
        np.testing.assert_array_equal(fb_map(np.array([1.0]), 1.0, M, h, ProxTerm(1.0)), [1.0])

    def test_lambda_must_be_positive(self):
        with self.assertRaises(ArgumentError):
            fb_map(np.zeros(1), 0.0, Preconditioner.identity(1), _lasso_1d(1.0, 2.0), ProxTerm(1.0))


class NonexpansivenessTests(SimpleTestCase):
    """Random pairs under diagonal M with entries in [0.5, 4] and ||A||^2 <= 0.5."""

    PAIRS = 1000

    def _random_setup(self, rng):
        d = int(rng.integers(1, 8))
        A = rng.standard_normal((int(rng.integers(1, 8)), d))
        A *= np.sqrt(0.5) / np.linalg.norm(A, 2)
        h = SmoothTerm(DenseMap(A), rng.standard_normal(A.shape[0]), 0.5)
        M = Preconditioner(rng.uniform(0.5, 4.0, d))
        lam = float(rng.uniform(1e-3, 1.0))
        rho = float(rng.uniform(0.0, 1.0))
        u, v = rng.standard_normal((2, d)) * 3.0
        return h, M, lam, rho, u, v

    def test_resolvent(self):
        rng = np.random.default_rng(101)
        for _ in range(self.PAIRS):
            _, M, lam, rho, u, v = self._random_setup(rng)
            lhs = m_norm(weighted_resolvent_l1(u, lam, rho, M) - weighted_resolvent_l1(v, lam, rho, M), M)
            self.assertLessEqual(lhs, m_norm(u - v, M) + 1e-10)

    def test_forward_step_with_lipschitz_scaling(self):
        rng = np.random.default_rng(102)
        for _ in range(self.PAIRS):
            d = int(rng.integers(1, 8))
            A = rng.standard_normal((int(rng.integers(1, 8)), d))
            L = float(np.linalg.norm(A, 2) ** 2)
            h = SmoothTerm(DenseMap(A), rng.standard_normal(A.shape[0]), L)
            M = Preconditioner.scalar(L, d)
            lam = float(rng.uniform(1e-3, 1.0))
            u, v = rng.standard_normal((2, d))
            lhs = m_norm(forward_step(u, lam, M, h) - forward_step(v, lam, M, h), M)
            self.assertLessEqual(lhs, m_norm(u - v, M) + 1e-10)

    def test_fb_map(self):
        rng = np.random.default_rng(103)
        for _ in range(self.PAIRS):
            h, M, lam, rho, u, v = self._random_setup(rng)
            g = ProxTerm(rho)
            lhs = m_norm(fb_map(u, lam, M, h, g) - fb_map(v, lam, M, h, g), M)
            self.assertLessEqual(lhs, m_norm(u - v, M) + 1e-10)


class ContractionTests(SimpleTestCase):
    def test_exact_coefficient(self):
        rng = np.random.default_rng(8)
        for _ in range(100):
            d = int(rng.integers(1, 10))
            k = float(rng.uniform(0.0, 0.999))
            f = Contraction(k, anchor=rng.standard_normal(d))
            M = Preconditioner(rng.uniform(0.5, 4.0, d))
            u, v = rng.standard_normal((2, d))
            ref = k * m_norm(u - v, M)
            self.assertLessEqual(abs(m_norm(f(u) - f(v), M) - ref), 1e-12 * max(ref, 1.0))

    def test_origin_anchor(self):
        np.testing.assert_array_equal(Contraction(0.5)(np.array([2.0, -4.0])), [1.0, -2.0])

    def test_coefficient_range(self):
        with self.assertRaises(ArgumentError):
            Contraction(1.0)
        with self.assertRaises(ArgumentError):
            Contraction(-0.1)
