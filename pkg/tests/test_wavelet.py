import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import haar_oracle, haar_oracle_2x2
from wavecorner.image_io import GrayImage, load_pgm
from wavecorner.wavelet import (
    decompose,
    dump_subbands,
    dwt2_haar,
    idwt2_haar,
    reconstruct,
    reconstruct_raw,
)

EXAMPLE = [[1.0, 2.0], [3.0, 4.0]]


class TestSingleLevel:
    def test_constant_2x2(self):
        ll, lh, hl, hh = dwt2_haar(np.full((2, 2), 7.0))
        assert ll[0, 0] == pytest.approx(14.0, abs=1e-12)
        assert lh[0, 0] == hl[0, 0] == hh[0, 0] == 0.0

    def test_worked_example(self):
        ll, lh, hl, hh = dwt2_haar(EXAMPLE)
        np.testing.assert_allclose([ll[0, 0], lh[0, 0], hl[0, 0], hh[0, 0]], [5, -2, -1, 0], atol=1e-12)

    def test_oracle_agrees_on_example(self):
        ll, lh, hl, hh = haar_oracle_2x2(EXAMPLE)
        np.testing.assert_allclose([ll[0][0], lh[0][0], hl[0][0], hh[0][0]], [5, -2, -1, 0], atol=1e-12)

    @pytest.mark.parametrize("bits", range(0, 16))
    def test_all_binary_2x2_match_oracle(self, bits):
        m = np.array([(bits >> i) & 1 for i in range(4)], dtype=float).reshape(2, 2) * 3
        for got, want in zip(dwt2_haar(m), haar_oracle_2x2(m)):
            np.testing.assert_allclose(got, want, atol=1e-9)

    @settings(max_examples=200)
    @given(arrays(np.int64, (4, 4), elements=st.integers(-4, 4)))
    def test_4x4_matches_matrix_oracle(self, m):
        for got, want in zip(dwt2_haar(m), haar_oracle(m)):
            np.testing.assert_allclose(got, want, atol=1e-9)

    def test_energy_4x4(self):
        rng = np.random.default_rng(0)
        m = rng.normal(size=(4, 4))
        bands = dwt2_haar(m)
        assert sum(float(np.sum(b * b)) for b in bands) == pytest.approx(float(np.sum(m * m)), rel=1e-9)

    @given(
        arrays(np.float64, (6, 8), elements=st.floats(-100, 100)),
        arrays(np.float64, (6, 8), elements=st.floats(-100, 100)),
        st.floats(-3, 3), st.floats(-3, 3),
    )
    def test_linearity(self, x, y, a, b):
        combo = dwt2_haar(a * x + b * y)
        for c, bx, by in zip(combo, dwt2_haar(x), dwt2_haar(y)):
            np.testing.assert_allclose(c, a * bx + b * by, atol=1e-9)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            dwt2_haar(np.zeros((0, 3)))

    def test_odd_dims_pad_by_replication(self):
        m = np.arange(15.0).reshape(3, 5)
        ll, *_ = dwt2_haar(m)
        assert ll.shape == (2, 3)
        padded = np.pad(m, ((0, 1), (0, 1)), mode="edge")
        np.testing.assert_allclose(ll, dwt2_haar(padded)[0])


class TestInverse:
    def test_constant(self):
        z = np.zeros((1, 1))
        np.testing.assert_allclose(idwt2_haar([[2 * 3.5]], z, z, z, (2, 2)), np.full((2, 2), 3.5))

    def test_example_inverse(self):
        np.testing.assert_allclose(idwt2_haar([[5]], [[-2]], [[-1]], [[0]], (2, 2)), EXAMPLE, atol=1e-12)

    def test_odd_roundtrip(self):
        m = np.random.default_rng(1).uniform(0, 255, size=(7, 5))
        np.testing.assert_allclose(idwt2_haar(*dwt2_haar(m), m.shape), m, atol=1e-9, rtol=0)

    def test_mismatched_bands(self):
        with pytest.raises(ValueError):
            idwt2_haar(np.zeros((2, 2)), np.zeros((2, 2)), np.zeros((2, 3)), np.zeros((2, 2)), (4, 4))

    def test_size_inconsistent(self):
        z = np.zeros((2, 2))
        with pytest.raises(ValueError):
            idwt2_haar(z, z, z, z, (6, 4))


class TestPyramid:
    def test_constant_two_levels(self):
        p = decompose(GrayImage(np.full((4, 4), 100.0)), 2)
        np.testing.assert_allclose(p.approx, [[400.0]])
        for d in p.details:
            for band in d.bands().values():
                assert np.all(band == 0)

    def test_single_level_wraps_dwt(self):
        p = decompose(GrayImage(EXAMPLE), 1)
        assert p.levels == 1
        np.testing.assert_allclose(p.approx, [[5]])
        np.testing.assert_allclose([p.details[0].lh[0, 0], p.details[0].hl[0, 0]], [-2, -1], atol=1e-12)

    def test_band_sizes_512(self):
        p = decompose(GrayImage(np.zeros((512, 512))), 2)
        assert p.details[0].hh.shape == (256, 256)
        assert p.details[1].hh.shape == (128, 128)
        assert p.approx.shape == (128, 128)
        assert p.subband_count() == 7

    @pytest.mark.parametrize("shape,levels", [((37, 23), 3), ((9, 16), 2), ((257, 129), 3)])
    def test_ceil_sizes(self, shape, levels):
        p = decompose(np.zeros(shape), levels)
        h, w = shape
        for k, d in enumerate(p.details, start=1):
            assert d.lh.shape == (-(-h // 2**k), -(-w // 2**k))

    def test_too_many_levels(self):
        with pytest.raises(ValueError):
            decompose(GrayImage(np.zeros((64, 64))), 7)
        decompose(GrayImage(np.zeros((64, 64))), 6)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(8, 40), st.integers(8, 40), st.sampled_from([1, 2, 3]), st.integers(0, 2**32))
    def test_perfect_reconstruction(self, h, w, levels, seed):
        px = np.random.default_rng(seed).uniform(0, 255, size=(h, w))
        back = reconstruct_raw(decompose(GrayImage(px), levels))
        assert np.max(np.abs(back - px)) < 1e-9

    def test_zeroed_details_of_constant(self):
        img = GrayImage(np.full((12, 10), 42.0))
        p = decompose(img, 2)
        zeroed = p.with_details([type(d)(*(np.zeros_like(b) for b in (d.lh, d.hl, d.hh))) for d in p.details])
        np.testing.assert_allclose(reconstruct(zeroed).pixels, img.pixels, atol=1e-9)

    def test_reconstruct_clips(self):
        p = decompose(GrayImage(np.full((4, 4), 250.0)), 1)
        boosted = p.with_details([type(p.details[0])(p.details[0].lh + 50, p.details[0].hl, p.details[0].hh)])
        assert reconstruct(boosted).pixels.max() == 255.0


def test_dump_subbands(tmp_path):
    px = np.add.outer(np.arange(16.0), np.arange(16.0)) * 8
    written = dump_subbands(decompose(GrayImage(px), 2), tmp_path)
    assert len(written) == 7
    names = [w[0] for w in written]
    assert names[0] == "subband_ll2.pgm" and "subband_hh1.pgm" in names
    ll = load_pgm(tmp_path / "subband_ll2.pgm")
    assert ll.pixels.min() == 0 and ll.pixels.max() == 255


def test_small_integer_matrices_exhaustive_2x2():
    for vals in itertools.product(range(3), repeat=4):
        m = np.array(vals, dtype=float).reshape(2, 2)
        for got, want in zip(dwt2_haar(m), haar_oracle(m)):
            np.testing.assert_allclose(got, want, atol=1e-9)
