import concurrent.futures

import numpy as np
import pytest

from wavecorner import assets
from wavecorner.image_io import GrayImage
from wavecorner.noise import NoiseSpec, add_gaussian, add_salt_pepper, add_speckle


@pytest.fixture
def mid_gray():
    return GrayImage(np.full((512, 512), 127.5))


class TestGaussian:
    def test_zero_variance_is_identity(self):
        img = assets.camera()
        assert add_gaussian(img, 0.0, 0.0, seed=1) == img

    def test_pure_shift(self):
        out = add_gaussian(GrayImage(np.zeros((4, 4))), 0.5, 0.0, seed=0)
        assert np.all(out.pixels == 127.5)

    def test_sample_variance(self, mid_gray):
        out = add_gaussian(mid_gray, 0.0, 0.01, seed=42)
        d = (out.pixels - mid_gray.pixels) / 255.0
        assert abs(d.var() - 0.01) / 0.01 < 0.05
        assert abs(d.mean()) < 0.005

    def test_negative_variance(self, mid_gray):
        with pytest.raises(ValueError):
            add_gaussian(mid_gray, 0.0, -0.1, seed=0)


class TestSpeckle:
    def test_zero_variance_is_identity(self):
        img = assets.camera()
        assert add_speckle(img, 0.0, seed=3) == img

    def test_black_stays_black(self):
        img = GrayImage(np.zeros((16, 16)))
        assert add_speckle(img, 0.5, seed=3) == img

    def test_multiplier_variance(self, mid_gray):
        out = add_speckle(mid_gray, 0.04, seed=7)
        n = (out.pixels - mid_gray.pixels) / mid_gray.pixels
        assert abs(n.var() - 0.04) / 0.04 < 0.05
        # uniform support [-sqrt(3v), sqrt(3v)]
        assert np.abs(n).max() <= np.sqrt(3 * 0.04) + 1e-12

    def test_negative_variance(self, mid_gray):
        with pytest.raises(ValueError):
            add_speckle(mid_gray, -1.0, seed=0)


class TestSaltPepper:
    def test_zero_density_is_identity(self):
        img = assets.camera()
        assert add_salt_pepper(img, 0.0, seed=3) == img

    def test_full_density(self):
        out = add_salt_pepper(assets.camera(), 1.0, seed=3)
        assert set(np.unique(out.pixels)) <= {0.0, 255.0}
        frac_white = np.mean(out.pixels == 255.0)
        assert abs(frac_white - 0.5) < 0.01

    def test_changed_fraction(self):
        img = assets.camera()
        out = add_salt_pepper(img, 0.05, seed=3)
        changed = np.mean(out.pixels != img.pixels)
        # a corrupted pixel already at 0 or 255 changes only half the time
        extreme = np.isin(img.pixels, (0.0, 255.0))
        expected = 0.05 * np.mean(np.where(extreme, 0.5, 1.0))
        assert abs(changed - expected) <= 0.01

    def test_untouched_pixels_unchanged(self):
        img = assets.camera()
        out = add_salt_pepper(img, 0.3, seed=9)
        diff = out.pixels != img.pixels
        assert set(np.unique(out.pixels[diff])) <= {0.0, 255.0}

    @pytest.mark.parametrize("density", [-0.1, 1.5])
    def test_bad_density(self, density):
        with pytest.raises(ValueError):
            add_salt_pepper(assets.constant(), density, seed=0)


class TestNoiseSpec:
    @pytest.mark.parametrize("text,kind,params", [
        ("gaussian:0:0.01", "gaussian", (0.0, 0.01)),
        ("speckle:0.04", "speckle", (0.04,)),
        ("salt_pepper:0.05", "salt_pepper", (0.05,)),
        ("salt-pepper:0.05", "salt_pepper", (0.05,)),
    ])
    def test_parse(self, text, kind, params):
        spec = NoiseSpec.parse(text, seed=5)
        assert (spec.kind, spec.params, spec.seed) == (kind, params, 5)

    @pytest.mark.parametrize("text", ["poisson:1", "gaussian:0", "speckle:-1", "salt_pepper:2", "gaussian:a:b"])
    def test_parse_rejects(self, text):
        with pytest.raises(ValueError):
            NoiseSpec.parse(text)

    @pytest.mark.parametrize("text", ["gaussian:0:0.01", "speckle:0.04", "salt_pepper:0.05"])
    def test_determinism_across_threads(self, text):
        img = assets.camera()
        spec = NoiseSpec.parse(text, seed=11)
        serial = [spec.apply(img) for _ in range(2)]
        with concurrent.futures.ThreadPoolExecutor(4) as pool:
            threaded = list(pool.map(lambda _: spec.apply(img), range(4)))
        assert all(o == serial[0] for o in serial + threaded)

    def test_seed_changes_output(self):
        img = assets.camera()
        a = NoiseSpec.parse("gaussian:0:0.01", 1).apply(img)
        b = NoiseSpec.parse("gaussian:0:0.01", 2).apply(img)
        assert a != b

    @pytest.mark.parametrize("text", ["gaussian:0:0.5", "speckle:2", "salt_pepper:0.5"])
    def test_output_in_range(self, text):
        out = NoiseSpec.parse(text, 4).apply(assets.camera())
        assert out.pixels.min() >= 0 and out.pixels.max() <= 255

    def test_pixel_stream_is_positional(self):
        # pixel (r, c) uses the same draws regardless of image content
        a = add_gaussian(GrayImage(np.full((8, 8), 100.0)), 0, 0.001, seed=3).pixels - 100.0
        b = add_gaussian(GrayImage(np.full((8, 8), 150.0)), 0, 0.001, seed=3).pixels - 150.0
        np.testing.assert_allclose(a, b, atol=1e-9)
