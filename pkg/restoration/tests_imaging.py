import math

import numpy as np
from django.test import SimpleTestCase

from restoration.core import estimate_operator_norm
from restoration.exceptions import ArgumentError
from restoration.imaging import (
    Image,
    Kernel,
    NoiseSpec,
    Rng,
    add_noise,
    gaussian_array,
    gaussian_kernel,
    gaussian_sample,
    make_blur_map,
    make_phantom,
    motion_kernel,
    parse_kernel_spec,
    rng_next_uniform,
    rng_uniform_array,
    snr_db,
)

MASK = (1 << 64) - 1


def splitmix64_reference(seed: int, count: int) -> list[int]:
    """Straight transcription of the recurrence, kept apart from the library code."""
    out, state = [], seed
    for _ in range(count):
        state = (state + 0x9E3779B97F4A7C15) % (1 << 64)
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) % (1 << 64)
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) % (1 << 64)
        out.append(z ^ (z >> 31))
    return out


class RngTests(SimpleTestCase):
    def test_first_output_for_seed_zero(self):
        value, r = rng_next_uniform(Rng(0))
        self.assertEqual(splitmix64_reference(0, 1)[0], 0xE220A8397B1DCDAF)
        self.assertEqual(value, (0xE220A8397B1DCDAF >> 11) * 2.0 ** -53)
        self.assertEqual(r.state, 0x9E3779B97F4A7C15)

    def test_matches_reference_for_several_seeds(self):
        for seed in (1, 42, 12345, MASK):
            r = Rng(seed)
            for expected in splitmix64_reference(seed, 50):
                value, r = rng_next_uniform(r)
                self.assertEqual(value, (expected >> 11) * 2.0 ** -53)
                self.assertTrue(0.0 <= value < 1.0)

    def test_state_must_be_64_bit(self):
        with self.assertRaises(ArgumentError):
            Rng(-1)
        with self.assertRaises(ArgumentError):
            Rng(1 << 64)

    def test_array_draws_are_bit_identical(self):
        for seed in (0, 7, MASK - 3):
            scalars, r = [], Rng(seed)
            for _ in range(257):
                v, r = rng_next_uniform(r)
                scalars.append(v)
            block, r_block = rng_uniform_array(Rng(seed), 257)
            np.testing.assert_array_equal(block, scalars)
            self.assertEqual(r_block, r)

            normals, r = [], Rng(seed)
            for _ in range(100):
                v, r = gaussian_sample(r)
                normals.append(v)
            block, r_block = gaussian_array(Rng(seed), 100)
            np.testing.assert_array_equal(block, normals)
            self.assertEqual(r_block, r)

    def test_gaussian_consumes_two_uniforms(self):
        _, r = gaussian_sample(Rng(3))
        _, r2 = rng_uniform_array(Rng(3), 2)
        self.assertEqual(r, r2)

    def test_gaussian_determinism(self):
        a, _ = gaussian_array(Rng(42), 100)
        b, _ = gaussian_array(Rng(42), 100)
        np.testing.assert_array_equal(a, b)

    def test_gaussian_moments(self):
        samples, _ = gaussian_array(Rng(2024), 10 ** 6)
        self.assertLessEqual(abs(samples.mean()), 0.005)
        self.assertLessEqual(abs(samples.var() - 1.0), 0.01)


class KernelTests(SimpleTestCase):
    def test_gaussian_degenerate_and_flat(self):
        np.testing.assert_array_equal(gaussian_kernel(1, 2.0).weights, [[1.0]])
        np.testing.assert_allclose(gaussian_kernel(3, 1e6).weights, np.full((3, 3), 1 / 9), atol=1e-9)

    def test_gaussian_center_weight(self):
        z = sum(math.exp(-(di * di + dj * dj) / (2 * 0.64)) for di in (-1, 0, 1) for dj in (-1, 0, 1))
        self.assertAlmostEqual(gaussian_kernel(3, 0.8).weights[1, 1], 1.0 / z, places=14)

    def test_gaussian_bad_arguments(self):
        for size, sigma in ((4, 2.0), (0, 1.0), (-3, 1.0), (3, 0.0), (3, -1.0)):
            with self.assertRaises(ArgumentError):
                gaussian_kernel(size, sigma)

    def test_motion_point_and_axes(self):
        np.testing.assert_array_equal(motion_kernel(1, 33.0).weights, [[1.0]])
        third = 1.0 / 3.0
        np.testing.assert_array_equal(
            motion_kernel(3, 0.0).weights, [[0, 0, 0], [third, third, third], [0, 0, 0]]
        )
        np.testing.assert_array_equal(
            motion_kernel(3, 90.0).weights, [[0, third, 0], [0, third, 0], [0, third, 0]]
        )

    def test_motion_diagonal(self):
        k = motion_kernel(5, 45.0)
        self.assertEqual(k.size, 3)
        # +45 degrees rises to the right, rows grow downwards
        np.testing.assert_array_equal(k.weights > 0, np.fliplr(np.eye(3, dtype=bool)))

    def test_motion_even_length(self):
        np.testing.assert_array_equal(
            motion_kernel(2, 0.0).weights, [[0, 0, 0], [0, 0.5, 0.5], [0, 0, 0]]
        )
        k = motion_kernel(4, 0.0)
        self.assertEqual(k.size, 5)
        self.assertEqual(np.count_nonzero(k.weights), 4)
        np.testing.assert_array_equal(k.weights[2], [0.0, 0.25, 0.25, 0.25, 0.25])
        self.assertEqual(np.count_nonzero(motion_kernel(6, 90.0).weights), 6)

    def test_motion_bad_length(self):
        with self.assertRaises(ArgumentError):
            motion_kernel(0, 0.0)

    def test_normalization(self):
        kernels = [gaussian_kernel(s, sig) for s in (1, 3, 9, 15) for sig in (0.5, 4.0)]
        kernels += [motion_kernel(n, a) for n in (2, 9, 15) for a in (0.0, 17.0, 45.0, 120.0, 270.0)]
        for k in kernels:
            self.assertLessEqual(abs(k.weights.sum() - 1.0), 1e-12)
            self.assertTrue(np.all(k.weights >= 0))
            self.assertEqual(k.size % 2, 1)

    def test_kernel_spec(self):
        self.assertEqual(parse_kernel_spec("gaussian:9,4").size, 9)
        self.assertEqual(parse_kernel_spec("motion:9,0").size, 9)
        self.assertEqual(parse_kernel_spec("delta").size, 1)
        for bad in ("gaussian:4,2", "gaussian:9", "box:3", "motion:a,0", ""):
            with self.assertRaises(ArgumentError):
                parse_kernel_spec(bad)

    def test_kernel_invariants(self):
        with self.assertRaises(ArgumentError):
            Kernel(3, np.ones((3, 3)))
        with self.assertRaises(ArgumentError):
            Kernel(2, np.full((2, 2), 0.25))


class BlurMapTests(SimpleTestCase):
    def test_delta_is_identity(self):
        x = np.random.default_rng(0).random(30)
        np.testing.assert_array_equal(make_blur_map(Kernel.delta(), 6, 5).apply(x), x)

    def test_constant_image_preserved(self):
        A = make_blur_map(gaussian_kernel(5, 1.3), 9, 7)
        np.testing.assert_allclose(A.apply(np.full(63, 0.42)), np.full(63, 0.42), atol=1e-14)

    def test_matches_explicit_circulant_matrix(self):
        rng = np.random.default_rng(12)
        w = rng.random((3, 3))
        w /= w.sum()
        height = width = 8
        dense = np.zeros((64, 64))
        for r in range(height):
            for c in range(width):
                for i in range(3):
                    for j in range(3):
                        src = ((r - (i - 1)) % height) * width + (c - (j - 1)) % width
                        dense[r * width + c, src] += w[i, j]
        A = make_blur_map(Kernel(3, w), width, height)
        x = rng.random(64)
        np.testing.assert_allclose(A.apply(x), dense @ x, atol=1e-12)
        np.testing.assert_allclose(A.apply_adjoint(x), dense.T @ x, atol=1e-12)

    def test_norm_at_most_one(self):
        for kernel in (gaussian_kernel(9, 4.0), motion_kernel(9, 30.0), Kernel.normalized(np.arange(1.0, 10.0).reshape(3, 3))):
            self.assertLessEqual(estimate_operator_norm(make_blur_map(kernel, 16, 12)), 1.0 + 1e-6)

    def test_kernel_larger_than_image(self):
        with self.assertRaises(ArgumentError):
            make_blur_map(gaussian_kernel(9, 1.0), 8, 20)


class NoiseTests(SimpleTestCase):
    def setUp(self):
        self.image = Image.from_array(np.random.default_rng(1).random((6, 5)))

    def test_zero_sigma_is_bitwise_identity(self):
        np.testing.assert_array_equal(add_noise(self.image, NoiseSpec(0.0, 9)).pixels, self.image.pixels)

    def test_same_seed_same_image(self):
        a = add_noise(self.image, NoiseSpec(0.1, 5))
        b = add_noise(self.image, NoiseSpec(0.1, 5))
        np.testing.assert_array_equal(a.pixels, b.pixels)
        c = add_noise(self.image, NoiseSpec(0.1, 6))
        self.assertFalse(np.array_equal(a.pixels, c.pixels))

    def test_row_major_gaussian_order(self):
        noisy = add_noise(self.image, NoiseSpec(0.5, 77))
        r = Rng(77)
        for i in range(4):
            g, r = gaussian_sample(r)
            self.assertEqual(noisy.pixels[i], self.image.pixels[i] + 0.5 * g)

    def test_standard_deviation(self):
        noisy = add_noise(Image(64, 64, np.zeros(4096)), NoiseSpec(0.001, 42))
        self.assertTrue(0.0009 <= noisy.pixels.std(ddof=1) <= 0.0011)

    def test_no_clamping(self):
        noisy = add_noise(Image(64, 64, np.zeros(4096)), NoiseSpec(0.1, 1))
        self.assertLess(noisy.pixels.min(), 0.0)

    def test_bad_spec(self):
        with self.assertRaises(ArgumentError):
            NoiseSpec(-0.1, 1)
        with self.assertRaises(ArgumentError):
            NoiseSpec(float("inf"), 1)

    def test_degrade_pipeline_reproducible(self):
        phantom = make_phantom(32)
        A = make_blur_map(gaussian_kernel(9, 4.0), 32, 32)
        runs = [
            add_noise(phantom.with_pixels(A.apply(phantom.pixels)), NoiseSpec(1e-3, 42)).pixels
            for _ in range(2)
        ]
        np.testing.assert_array_equal(runs[0], runs[1])


class SnrTests(SimpleTestCase):
    def setUp(self):
        self.x = Image.from_array(np.random.default_rng(3).random((4, 4)) + 0.1)

    def test_examples(self):
        self.assertEqual(snr_db(self.x, self.x), math.inf)
        self.assertAlmostEqual(snr_db(self.x, self.x.with_pixels(np.zeros(16))), 0.0, places=12)
        self.assertAlmostEqual(snr_db(self.x, self.x.with_pixels(self.x.pixels - self.x.pixels / 10)), 20.0, places=9)

    def test_errors(self):
        with self.assertRaises(ArgumentError):
            snr_db(Image(2, 2, np.zeros(4)), Image(2, 2, np.ones(4)))
        with self.assertRaises(ArgumentError):
            snr_db(self.x, Image(8, 2, np.zeros(16)))

    def test_increases_toward_reference(self):
        values = [snr_db(self.x.pixels, t * self.x.pixels) for t in np.linspace(0.0, 0.95, 10)]
        self.assertTrue(all(b > a for a, b in zip(values, values[1:])))


class ImageAndPhantomTests(SimpleTestCase):
    def test_image_invariants(self):
        with self.assertRaises(ArgumentError):
            Image(2, 2, [0.0, 1.0, 2.0])
        with self.assertRaises(ArgumentError):
            Image(0, 2, [])
        with self.assertRaises(ArgumentError):
            Image(1, 1, [float("nan")])
        img = Image.from_array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])
        self.assertEqual((img.width, img.height, img.dim), (3, 2, 6))
        np.testing.assert_array_equal(img.pixels, [1, 2, 3, 4, 5, 6])

    def test_phantom(self):
        p = make_phantom(64)
        self.assertEqual((p.width, p.height), (64, 64))
        self.assertGreaterEqual(p.pixels.min(), 0.0)
        self.assertLessEqual(p.pixels.max(), 1.0)
        self.assertGreater(len(np.unique(p.pixels)), 4)
        np.testing.assert_array_equal(p.pixels, make_phantom(64).pixels)
        with self.assertRaises(ArgumentError):
            make_phantom(4)

    def test_phantom_stripe_band(self):
        pixels = make_phantom(64).as_array()
        expected = np.tile([0.3] * 4 + [0.7] * 4, 8)
        for r in range(8):
            np.testing.assert_allclose(pixels[r], expected)
        self.assertFalse(np.allclose(pixels[8], expected))
