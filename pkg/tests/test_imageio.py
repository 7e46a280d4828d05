import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from tileinspect.errors import (
    BadEntryError,
    BadHeaderError,
    BadLabelError,
    BadMagicError,
    CorruptPyramidError,
    DuplicatePathError,
    LengthMismatchError,
    MalformedHeaderError,
    MaxvalUnsupportedError,
    TruncatedDataError,
    VersionUnsupportedError,
)
from tileinspect.imageio import (
    Manifest,
    ManifestEntry,
    dump_manifest,
    load_manifest,
    load_pgm,
    load_pyramid,
    save_pgm,
    save_pyramid,
)
from tileinspect.inspection import Verdict
from tileinspect.wavelet import decompose

EXPECTED = np.array([[0, 128], [255, 64]], dtype=float)

pixels = st.tuples(st.integers(1, 12), st.integers(1, 12)).flatmap(
    lambda s: arrays(np.uint8, s))


class TestPgm:
    def test_p5(self):
        img = load_pgm(b"P5\n2 2\n255\n" + bytes([0, 128, 255, 64]))
        np.testing.assert_array_equal(img, EXPECTED)
        assert img.dtype == np.float64

    def test_p2(self):
        np.testing.assert_array_equal(load_pgm(b"P2\n2 2\n255\n0 128 255 64"), EXPECTED)

    def test_comments(self):
        data = b"P5\n# made by hand\n2 # width\n# height next\n2\n255\n" + bytes([0, 128, 255, 64])
        np.testing.assert_array_equal(load_pgm(data), EXPECTED)
        text = b"P2 # c\n2 2\n# maxval\n255\n0 128 # row one\n255 64\n"
        np.testing.assert_array_equal(load_pgm(text), EXPECTED)

    def test_width_then_height(self):
        img = load_pgm(b"P5 3 1 255\n" + bytes([1, 2, 3]))
        assert img.shape == (1, 3)

    def test_small_maxval(self):
        img = load_pgm(b"P2\n2 1\n15\n0 15\n")
        np.testing.assert_array_equal(img, [[0, 15]])

    @pytest.mark.parametrize("data, error", [
        (b"P6\n1 1\n255\n\x00\x00\x00", BadMagicError),
        (b"", BadMagicError),
        (b"P5\n2 2\n65535\n" + bytes(8), MaxvalUnsupportedError),
        (b"P5\n2 2\n255\n" + bytes(3), TruncatedDataError),
        (b"P2\n2 2\n255\n1 2 3", TruncatedDataError),
        (b"P5\n2 2\n", TruncatedDataError),
        (b"P5\nx 2\n255\n" + bytes(4), MalformedHeaderError),
        (b"P5\n0 2\n255\n", MalformedHeaderError),
        (b"P2\n1 1\n10\n11\n", MalformedHeaderError),
        (b"P2\n1 1\n255\nabc\n", MalformedHeaderError),
    ])
    def test_errors(self, data, error):
        with pytest.raises(error):
            load_pgm(data)

    def test_save_round_trip(self):
        for binary in (True, False):
            np.testing.assert_array_equal(load_pgm(save_pgm(EXPECTED, binary)), EXPECTED)
        assert save_pgm(EXPECTED) == b"P5\n2 2\n255\n" + bytes([0, 128, 255, 64])

    def test_clamping(self):
        np.testing.assert_array_equal(load_pgm(save_pgm([[-5, 300]])), [[0, 255]])

    @pytest.mark.parametrize("value, expected", [(127.5, 128), (128.5, 128), (0.5, 0), (1.5, 2)])
    def test_half_to_even(self, value, expected):
        assert load_pgm(save_pgm([[value]]))[0, 0] == expected

    def test_p2_lines_are_short(self):
        text = save_pgm(np.full((3, 40), 255.0), binary=False)
        assert max(len(line) for line in text.splitlines()) <= 70

    @settings(max_examples=100)
    @given(pixels)
    def test_p2_p5_equivalence(self, px):
        img = px.astype(float)
        a = load_pgm(save_pgm(img, binary=True))
        b = load_pgm(save_pgm(img, binary=False))
        np.testing.assert_array_equal(a, img)
        np.testing.assert_array_equal(b, img)

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            save_pgm([[np.nan]])


class TestPyramidCodec:
    def test_paper_geometry(self):
        img = np.random.default_rng(0).uniform(0, 255, (256, 256))
        data = save_pyramid(decompose(img, 3))
        assert data[:5] == b"HDWT\x01"
        assert struct.unpack_from("<III", data, 5) == (3, 256, 256)
        # walk the matrix records
        pos, count = 17, 0
        while pos < len(data):
            r, c = struct.unpack_from("<II", data, pos)
            pos += 8 + 8 * r * c
            count += 1
        assert pos == len(data) and count == 10

    def test_first_matrix_is_approximation(self):
        img = np.arange(64.0).reshape(8, 8)
        pyr = decompose(img, 2)
        data = save_pyramid(pyr)
        r, c = struct.unpack_from("<II", data, 17)
        assert (r, c) == (2, 2)
        ll = np.frombuffer(data, "<f8", 4, 25).reshape(2, 2)
        np.testing.assert_array_equal(ll, pyr.approximation)
        # then the coarsest detail level
        r, c = struct.unpack_from("<II", data, 25 + 32)
        assert (r, c) == (2, 2)

    def test_round_trip_bitwise(self):
        img = np.random.default_rng(1).normal(0, 100, (24, 40))
        pyr = decompose(img, 3)
        back = load_pyramid(save_pyramid(pyr))
        assert back == pyr
        assert save_pyramid(back) == save_pyramid(pyr)

    def test_padded_round_trip(self):
        pyr = decompose(np.random.default_rng(2).uniform(0, 9, (10, 7)), 2, pad=True)
        back = load_pyramid(save_pyramid(pyr))
        assert back == pyr and back.padded

    def test_truncated(self):
        data = save_pyramid(decompose(np.ones((8, 8)), 1))
        for cut in (2, 10, 17, 30, len(data) - 1):
            with pytest.raises(TruncatedDataError):
                load_pyramid(data[:cut])

    def test_truncation_is_a_length_mismatch(self):
        assert issubclass(TruncatedDataError, LengthMismatchError)

    def test_trailing_bytes(self):
        data = save_pyramid(decompose(np.ones((8, 8)), 1))
        with pytest.raises(LengthMismatchError):
            load_pyramid(data + b"\x00")

    def test_bad_magic(self):
        with pytest.raises(BadMagicError):
            load_pyramid(b"PGMX\x01" + bytes(12))

    def test_bad_version(self):
        data = bytearray(save_pyramid(decompose(np.ones((4, 4)), 1)))
        data[4] = 2
        with pytest.raises(VersionUnsupportedError):
            load_pyramid(bytes(data))

    def test_inconsistent_shapes(self):
        data = bytearray(save_pyramid(decompose(np.ones((8, 8)), 1)))
        struct.pack_into("<II", data, 5 + 4, 16, 8)  # claim a 16x8 source
        with pytest.raises(CorruptPyramidError):
            load_pyramid(bytes(data))

    def test_round_trip_seeded(self):
        rng = np.random.default_rng(42)
        for _ in range(25):
            k = int(rng.integers(1, 4))
            shape = tuple(int(s) << k for s in rng.integers(1, 5, 2))
            pyr = decompose(rng.normal(0, 1e3, shape), k)
            assert load_pyramid(save_pyramid(pyr)) == pyr


class TestManifest:
    def test_basic(self):
        m = load_manifest(b"path,label\na.pgm,ok\nb.pgm,defective", "ref.pgm")
        assert m.entries == [ManifestEntry("a.pgm", Verdict.OK),
                             ManifestEntry("b.pgm", Verdict.DEFECTIVE)]
        assert m.reference_path == "ref.pgm"

    def test_crlf_case_and_bom(self):
        m = load_manifest("﻿path,label\r\na.pgm,OK\r\nb.pgm,Defective\r\n\r\n".encode())
        assert [e.label for e in m.entries] == [Verdict.OK, Verdict.DEFECTIVE]

    def test_duplicate(self):
        with pytest.raises(DuplicatePathError):
            load_manifest(b"path,label\na.pgm,ok\na.pgm,defective\n")

    def test_bad_label(self):
        with pytest.raises(BadLabelError) as err:
            load_manifest(b"path,label\na.pgm,ok\nb.pgm,maybe\n")
        assert err.value.line == 3

    @pytest.mark.parametrize("data", [b"", b"file,label\n", b"path,label,extra\n"])
    def test_bad_header(self, data):
        with pytest.raises(BadHeaderError):
            load_manifest(data)

    @pytest.mark.parametrize("data", [b"path,label\na.pgm\n", b"path,label\n,ok\n"])
    def test_bad_entries(self, data):
        with pytest.raises(BadEntryError):
            load_manifest(data)

    def test_empty_body(self):
        assert load_manifest(b"path,label\n").entries == []

    def test_dump_round_trip(self):
        m = Manifest([ManifestEntry("x, y.pgm", Verdict.OK),
                      ManifestEntry("z.pgm", Verdict.DEFECTIVE)])
        assert load_manifest(dump_manifest(m)).entries == m.entries
        assert dump_manifest(Manifest([ManifestEntry("z.pgm", Verdict.DEFECTIVE)])) == \
            b"path,label\nz.pgm,defective\n"
