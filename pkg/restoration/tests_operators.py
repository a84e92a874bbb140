import math
from unittest.mock import patch

import numpy as np
from django.test import SimpleTestCase

from restoration.core import (
    DenseMap,
    IdentityMap,
    Preconditioner,
    adjoint_defect,
    as_vector,
    estimate_operator_norm,
    m_inner,
    m_norm,
)
from restoration.exceptions import ArgumentError, NumericalError
from restoration.imaging import Kernel, make_blur_map


class MInnerProductTests(SimpleTestCase):
    def test_orthogonal_coordinates(self):
        self.assertEqual(m_inner(np.array([1.0, 0.0]), np.array([0.0, 1.0]), Preconditioner.scalar(5, 2)), 0.0)

    def test_euclidean_and_scaled(self):
        x = np.array([3.0, 4.0])
        self.assertEqual(m_inner(x, x, Preconditioner.identity(2)), 25.0)
        self.assertEqual(m_inner(x, x, Preconditioner.scalar(2, 2)), 50.0)

    def test_norms(self):
        self.assertEqual(m_norm(np.zeros(2), Preconditioner([3.0, 0.5])), 0.0)
        self.assertEqual(m_norm(np.array([3.0, 4.0]), Preconditioner.identity(2)), 5.0)
        self.assertAlmostEqual(m_norm(np.array([3.0, 4.0]), Preconditioner.scalar(2, 2)), math.sqrt(50), places=12)

    def test_dimension_mismatch(self):
        with self.assertRaises(ArgumentError):
            m_inner(np.ones(2), np.ones(3), Preconditioner.identity(2))
        with self.assertRaises(ArgumentError):
            m_norm(np.ones(3), Preconditioner.identity(2))

    def test_symmetry_bilinearity_and_positivity(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            dim = int(rng.integers(1, 12))
            M = Preconditioner(rng.uniform(0.5, 4.0, dim))
            x, y, z = rng.standard_normal((3, dim))
            a, b = rng.standard_normal(2)
            self.assertAlmostEqual(m_inner(x, y, M), m_inner(y, x, M), places=12)
            lhs = m_inner(a * x + b * y, z, M)
            rhs = a * m_inner(x, z, M) + b * m_inner(y, z, M)
            scale = 1.0 + abs(a * m_inner(x, z, M)) + abs(b * m_inner(y, z, M))
            self.assertLessEqual(abs(lhs - rhs), 1e-12 * scale)
            self.assertGreater(m_inner(x, x, M), 0.0)
            self.assertAlmostEqual(m_norm(x, M) ** 2, m_inner(x, x, M), places=10)


class VectorAndPreconditionerTests(SimpleTestCase):
    def test_as_vector_rejects_bad_input(self):
        with self.assertRaises(ArgumentError):
            as_vector([])
        with self.assertRaises(ArgumentError):
            as_vector([1.0, float("nan")])
        with self.assertRaises(ArgumentError):
            as_vector([float("inf")])

    def test_as_vector_is_read_only(self):
        v = as_vector([1, 2, 3])
        self.assertEqual(v.dtype, np.float64)
        with self.assertRaises(ValueError):
            v[0] = 5.0

    def test_preconditioner_needs_positive_entries(self):
        with self.assertRaises(ArgumentError):
            Preconditioner([1.0, 0.0])
        with self.assertRaises(ArgumentError):
            Preconditioner([1.0, -2.0])
        self.assertTrue(Preconditioner.identity(3).is_identity)
        np.testing.assert_array_equal(Preconditioner([2.0, 4.0]).apply_inverse(np.array([2.0, 2.0])), [1.0, 0.5])


class OperatorNormTests(SimpleTestCase):
    def test_identity(self):
        self.assertAlmostEqual(estimate_operator_norm(IdentityMap(5)), 1.0, delta=1e-8)

    def test_diagonal(self):
        self.assertAlmostEqual(estimate_operator_norm(DenseMap.diagonal([3.0, 1.0])), 3.0, delta=3e-8)
        self.assertAlmostEqual(
            estimate_operator_norm(DenseMap.diagonal([0.5, -7.0, 2.0, 1.0])), 7.0, delta=7e-8
        )

    def test_zero_map(self):
        self.assertEqual(estimate_operator_norm(DenseMap(np.zeros((3, 2)))), 0.0)

    def test_deterministic_for_fixed_seed(self):
        A = DenseMap(np.random.default_rng(3).standard_normal((6, 4)))
        self.assertEqual(estimate_operator_norm(A, seed=9), estimate_operator_norm(A, seed=9))

    def test_convolution_matches_dense_materialization(self):
        rng = np.random.default_rng(11)
        kernel = Kernel.normalized(rng.uniform(0.0, 1.0, (3, 3)))
        A = make_blur_map(kernel, 8, 8)
        dense = A.materialize()
        oracle = float(np.linalg.norm(dense, 2))
        estimate = estimate_operator_norm(A, max_iters=5000, tol=1e-12)
        self.assertLessEqual(abs(estimate - oracle), 1e-6)
        self.assertLessEqual(estimate, 1.0 + 1e-6)

    def test_bad_arguments(self):
        with self.assertRaises(ArgumentError):
            estimate_operator_norm(IdentityMap(2), max_iters=0)
        with self.assertRaises(ArgumentError):
            estimate_operator_norm(IdentityMap(2), tol=0.0)

    def test_vanishing_start_vector_is_numerical_error(self):
        class ZeroGenerator:
            def standard_normal(self, dim):
                return np.zeros(dim)

        with patch("restoration.core.spectral.np.random.default_rng", return_value=ZeroGenerator()):
            with self.assertRaises(NumericalError):
                estimate_operator_norm(IdentityMap(3))


class AdjointDefectTests(SimpleTestCase):
    def test_identity_and_dense(self):
        self.assertLessEqual(adjoint_defect(IdentityMap(4)), 1e-12)
        A = DenseMap(np.random.default_rng(0).standard_normal((5, 7)))
        self.assertLessEqual(adjoint_defect(A), 1e-12)

    def test_corrupted_adjoint_detected(self):
        m = np.random.default_rng(1).standard_normal((4, 4))
        bad = m.T.copy()
        bad[0, 2] += 1.0
        self.assertGreater(adjoint_defect(DenseMap(m, adjoint=bad)), 1e-3)

    def test_blur_maps(self):
        rng = np.random.default_rng(5)
        for size in (1, 3, 5):
            kernel = Kernel.normalized(rng.uniform(0.0, 1.0, (size, size)))
            self.assertLessEqual(adjoint_defect(make_blur_map(kernel, 9, 7), trials=100, seed=2), 1e-10)

    def test_apply_shape_checked(self):
        with self.assertRaises(ArgumentError):
            DenseMap(np.ones((2, 3))).apply(np.ones(2))
        with self.assertRaises(ArgumentError):
            DenseMap(np.ones((2, 3))).apply_adjoint(np.ones(3))
