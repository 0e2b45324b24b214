import numpy as np
import pytest

from src.core_module.exceptions import ParameterError, ShapeError
from src.core_module.rng import make_rng_stream
from src.core_module.schemas import Image
from src.fov_module import service as fov_service
from src.noise_module import service
from src.noise_module.config import BLUR_KERNEL
from src.noise_module.schemas import WaveletParams, SpeckleParams
from src.spatial_module import service as spatial_service


def constant(value: int, size: int = 64, channels: int = 1) -> Image:
    return Image.from_array(np.full((size, size, channels), value, dtype=np.uint8))


def mse(a: np.ndarray, b: np.ndarray) -> float:
    return float(((a.astype(np.float64) - b.astype(np.float64)) ** 2).mean())


class TestGaussianBlur:
    def test_default_kernel(self):
        assert BLUR_KERNEL == 13

    def test_constant_image(self):
        np.testing.assert_array_equal(service.gaussian_blur(constant(77), sigma=1.5).data, constant(77).data)

    def test_blob_intensity_is_preserved(self):
        data = np.zeros((64, 64), dtype=np.uint8)
        data[24:40, 24:40] = 200
        image = Image.from_array(data)
        blurred = service.gaussian_blur(image, sigma=2.0)
        assert blurred.data.astype(np.int64).sum() == pytest.approx(data.astype(np.int64).sum(), rel=0.005)

    def test_commutes_with_reflection(self, rgb_image):
        np.testing.assert_array_equal(service.gaussian_blur(spatial_service.hflip(rgb_image), sigma=1.3).data,
                                      spatial_service.hflip(service.gaussian_blur(rgb_image, sigma=1.3)).data)

    def test_even_kernel(self, rgb_image):
        with pytest.raises(ParameterError):
            service.gaussian_blur(rgb_image, kernel=12, sigma=1.0)


class TestWaveletDenoise:
    def test_constant_image(self):
        out = service.wavelet_denoise(constant(140), WaveletParams(mother_wavelet='db2', alpha=3.0))
        assert np.all(out.data == 140)

    @pytest.mark.parametrize('mother_wavelet', ['db2', 'db5'])
    @pytest.mark.parametrize('alpha', [2.0, 3.0, 4.0])
    def test_reduces_error_to_clean_reference(self, textured_image, mother_wavelet, alpha):
        noise = np.random.default_rng(0).normal(0.0, 20.0, size=textured_image.data.shape)
        noisy = Image.from_float(textured_image.data + noise)
        denoised = service.wavelet_denoise(noisy, WaveletParams(mother_wavelet=mother_wavelet, alpha=alpha))
        assert mse(denoised.data, textured_image.data) < mse(noisy.data, textured_image.data)

    def test_energy_does_not_increase(self, textured_image):
        noise = np.random.default_rng(1).normal(0.0, 15.0, size=textured_image.data.shape)
        noisy = Image.from_float(textured_image.data + noise)
        denoised = service.wavelet_denoise(noisy, WaveletParams(mother_wavelet='db5', alpha=2.5))
        energy = lambda image: float((image.data.astype(np.float64) ** 2).sum())
        assert energy(denoised) <= energy(noisy) * 1.001

    def test_image_too_small(self):
        with pytest.raises(ShapeError):
            service.wavelet_denoise(constant(10, size=4), WaveletParams())

    def test_sampled_wavelet(self):
        for view in range(50):
            params = service.sample_wavelet_params(make_rng_stream(0, 0, view))
            assert params.mother_wavelet in ('db2', 'db5')
            assert 2.0 <= params.alpha < 4.0

    def test_keep_count_threshold(self):
        coefficients = np.array([5.0, -4.0, 3.0, -2.0, 1.0])
        assert service.birge_massart_threshold(coefficients, 2) == 3.0
        assert service.birge_massart_threshold(coefficients, 0) == 5.0
        assert service.birge_massart_threshold(coefficients, 10) == 0.0


class TestSpeckle:
    def test_outside_mask_unchanged(self, textured_image, convex_beam):
        stream = make_rng_stream(2, 0, 0)
        out = service.speckle(textured_image, convex_beam, service.sample_speckle_params(stream), stream)
        outside = ~fov_service.build_fov_mask(convex_beam, 128, 128).bits
        np.testing.assert_array_equal(out.data[outside], textured_image.data[outside])

    def test_sampled_resolutions(self):
        for view in range(100):
            params = service.sample_speckle_params(make_rng_stream(0, 0, view))
            assert 35 <= params.lateral_resolution <= 45
            assert 75 <= params.axial_resolution <= 85
            assert 5 <= params.num_phasors <= 10

    @pytest.mark.parametrize('beam_name', ['linear_beam', 'convex_beam'])
    def test_in_mask_mean_is_preserved(self, beam_name, request):
        beam = request.getfixturevalue(beam_name)
        image = constant(100, size=128)
        inside = fov_service.build_fov_mask(beam, 128, 128).bits
        means = [service.speckle(image, beam, SpeckleParams(), make_rng_stream(5, 0, trial)).data[inside].mean()
                 for trial in range(100)]
        assert np.mean(means) == pytest.approx(100.0, rel=0.1)

    def test_replay(self, textured_image, linear_beam):
        params = SpeckleParams(lateral_resolution=40, axial_resolution=80, num_phasors=6)
        first = service.speckle(textured_image, linear_beam, params, make_rng_stream(1, 1, 1))
        second = service.speckle(textured_image, linear_beam, params, make_rng_stream(1, 1, 1))
        np.testing.assert_array_equal(first.data, second.data)

    def test_out_of_range_params(self):
        with pytest.raises(ValueError):
            SpeckleParams(lateral_resolution=50)


class TestGaussianNoise:
    def test_empirical_std(self):
        image = constant(100, size=512)
        out = service.gaussian_noise(image, 0.1, make_rng_stream(3, 0, 0))
        assert out.data.astype(np.float64).std() == pytest.approx(10.0, rel=0.05)

    def test_tiny_sigma_is_identity(self, rgb_image):
        out = service.gaussian_noise(rgb_image, 1e-9, make_rng_stream(3, 0, 0))
        np.testing.assert_array_equal(out.data, rgb_image.data)

    def test_black_stays_black(self):
        assert not service.gaussian_noise(constant(0), 2.0, make_rng_stream(3, 0, 0)).data.any()

    def test_non_positive_sigma(self, rgb_image):
        with pytest.raises(ParameterError):
            service.gaussian_noise(rgb_image, 0.0, make_rng_stream(3, 0, 0))


class TestSaltPepper:
    def test_zero_fractions(self, rgb_image):
        np.testing.assert_array_equal(service.salt_pepper(rgb_image, 0.0, 0.0, make_rng_stream(1, 0, 0)).data,
                                      rgb_image.data)

    def test_altered_count(self):
        image = constant(128, size=512)
        f_salt, f_pepper = 0.003, 0.004
        out = service.salt_pepper(image, f_salt, f_pepper, make_rng_stream(8, 0, 0))
        n, p = 512 * 512, f_salt + f_pepper
        altered = int(np.count_nonzero(out.data[:, :, 0] != 128))
        assert abs(altered - n * p) <= 4 * np.sqrt(n * p * (1 - p))

    def test_unselected_pixels_unchanged(self, rgb_image):
        out = service.salt_pepper(rgb_image, 0.01, 0.01, make_rng_stream(8, 0, 0))
        changed = np.any(out.data != rgb_image.data, axis=2)
        assert np.all(np.isin(out.data[changed], (0, 255)))

    def test_fraction_out_of_range(self, rgb_image):
        with pytest.raises(ParameterError):
            service.salt_pepper(rgb_image, 0.7, 0.6, make_rng_stream(1, 0, 0))
