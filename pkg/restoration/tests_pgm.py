import os
import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from restoration.exceptions import PgmFormatError, UnsupportedPgmError
from restoration.imaging import Image, load_pgm, save_pgm
from restoration.imaging.pgm import decode_pgm, encode_pgm


class PgmDecodeTests(SimpleTestCase):
    def test_plain_example(self):
        img = decode_pgm(b"P2 2 2 255 0 255 128 64")
        self.assertEqual((img.width, img.height), (2, 2))
        np.testing.assert_array_equal(img.pixels, [0.0, 1.0, 128 / 255, 64 / 255])

    def test_comments_are_skipped(self):
        img = decode_pgm(b"P2\n# made by hand\n3 1\n# scale\n10\n0 5 10\n")
        np.testing.assert_array_equal(img.pixels, [0.0, 0.5, 1.0])

    def test_raw_payload(self):
        img = decode_pgm(b"P5\n3 2\n255\n" + bytes([0, 51, 102, 153, 204, 255]))
        np.testing.assert_allclose(img.pixels, [0.0, 0.2, 0.4, 0.6, 0.8, 1.0])

    def test_truncated_raw_payload(self):
        data = b"P5\n4 4\n255\n" + bytes(10)
        with self.assertRaises(PgmFormatError) as cm:
            decode_pgm(data)
        self.assertIn("missing 6", str(cm.exception))
        self.assertEqual(cm.exception.offset, len(data))

    def test_bad_magic(self):
        with self.assertRaises(PgmFormatError) as cm:
            decode_pgm(b"XX 2 2 255")
        self.assertEqual(cm.exception.offset, 0)

    def test_colour_and_bitmap_rejected(self):
        for magic in (b"P6", b"P3", b"P1"):
            with self.assertRaises(UnsupportedPgmError):
                decode_pgm(magic + b"\n1 1\n255\n\x00\x00\x00")

    def test_sixteen_bit_rejected(self):
        with self.assertRaises(UnsupportedPgmError) as cm:
            decode_pgm(b"P5\n1 1\n65535\n\x00\x00")
        self.assertEqual(cm.exception.offset, 7)

    def test_header_errors_carry_offsets(self):
        with self.assertRaises(PgmFormatError) as cm:
            decode_pgm(b"P2 2 x 255")
        self.assertEqual(cm.exception.offset, 5)
        with self.assertRaises(PgmFormatError):
            decode_pgm(b"P2 0 2 255")
        with self.assertRaises(PgmFormatError):
            decode_pgm(b"P2 2 2")
        with self.assertRaises(PgmFormatError):
            decode_pgm(b"P2 1 1 10 11")
        with self.assertRaises(PgmFormatError):
            decode_pgm(b"P2 2 1 255 3")


class PgmFileTests(SimpleTestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_round_trip_within_half_step(self):
        img = Image.from_array(np.random.default_rng(0).random((13, 17)))
        for binary in (True, False):
            path = self.dir / f"r{int(binary)}.pgm"
            save_pgm(img, path, binary=binary)
            back = load_pgm(path)
            self.assertEqual((back.width, back.height), (17, 13))
            self.assertLessEqual(np.max(np.abs(back.pixels - img.pixels)), 1 / 510 + 1e-12)

    def test_save_clamps(self):
        path = self.dir / "clamp.pgm"
        save_pgm(Image(3, 1, [-0.5, 0.5, 1.7]), path)
        np.testing.assert_array_equal(load_pgm(path).pixels, [0.0, 128 / 255, 1.0])

    def test_header_format(self):
        self.assertTrue(encode_pgm(Image(2, 1, [0.0, 1.0])).startswith(b"P5\n2 1\n255\n"))
        self.assertEqual(encode_pgm(Image(2, 1, [0.0, 1.0]), binary=False), b"P2\n2 1\n255\n0 255\n")

    def test_atomic_write_leaves_no_temp_files(self):
        path = self.dir / "out" / "img.pgm"
        save_pgm(Image(2, 2, [0.1, 0.2, 0.3, 0.4]), path)
        self.assertEqual(os.listdir(path.parent), ["img.pgm"])

    def test_missing_file(self):
        with self.assertRaises(FileNotFoundError):
            load_pgm(self.dir / "nope.pgm")
