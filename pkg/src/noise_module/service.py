from typing import Optional, Tuple

import cv2
import numpy as np
import pywt
from loguru import logger
from pydantic import ValidationError

from src.core_module.exceptions import ParameterError, ShapeError
from src.core_module.rng import RngStream
from src.core_module.schemas import Image, BeamDescriptor, pixel_grid
from src.fov_module.service import FovService
from src.noise_module.config import MODULE_CODE, MOTHER_WAVELETS, BLUR_KERNEL
from src.noise_module.schemas import WaveletParams, SpeckleParams, NoiseParams

Range = Tuple[float, float]


class NoiseService:
    def __init__(self, alpha_range: Range, gaussian_sigma_range: Range):
        self.alpha_range = alpha_range
        self.gaussian_sigma_range = gaussian_sigma_range
        self.fov = FovService()

    @staticmethod
    def _validated(schema, **fields):
        try:
            return schema(**fields)
        except ValidationError as e:
            raise ParameterError(MODULE_CODE, str(e.errors()[0]['msg']))

    @staticmethod
    def _per_channel(image: Image, channel_filter) -> np.ndarray:
        """Apply ``channel_filter`` to every distinct channel, returning float (h, w, c)."""
        data = image.data
        if image.channels == 3 and np.array_equal(data[:, :, 0], data[:, :, 1]) \
                and np.array_equal(data[:, :, 0], data[:, :, 2]):
            filtered = channel_filter(data[:, :, 0].astype(np.float64))
            return np.repeat(filtered[:, :, np.newaxis], 3, axis=2)
        return np.stack([channel_filter(data[:, :, c].astype(np.float64)) for c in range(image.channels)], axis=2)

    def gaussian_blur(self, image: Image, kernel: int = BLUR_KERNEL, sigma: float = 1.0) -> Image:
        self._validated(NoiseParams, blur_kernel=kernel, blur_sigma=sigma)
        blurred = cv2.GaussianBlur(image.data, (kernel, kernel), sigmaX=sigma, sigmaY=sigma,
                                   borderType=cv2.BORDER_REFLECT_101)
        return Image.from_array(blurred.reshape(image.data.shape))

    @staticmethod
    def birge_massart_threshold(coefficients: np.ndarray, keep: int) -> float:
        """Magnitude below which all but the ``keep`` largest coefficients fall."""
        magnitudes = np.abs(coefficients).ravel()
        if keep >= magnitudes.size:
            return 0.0
        if keep <= 0:
            return float(magnitudes.max())
        index = magnitudes.size - keep - 1
        return float(np.partition(magnitudes, index)[index])

    def _denoise_channel(self, channel: np.ndarray, params: WaveletParams) -> np.ndarray:
        levels, coarse = params.levels_J, params.level_J0
        coefficients = pywt.wavedec2(channel, params.mother_wavelet, mode='symmetric', level=levels)
        # coefficients[i] holds the details of level (levels - i + 1)
        budget = coefficients[levels - coarse + 1][0].size
        for level in range(1, coarse + 1):
            index = levels - level + 1
            details = coefficients[index]
            keep = int(budget / (coarse + 1 - level) ** params.alpha)
            threshold = self.birge_massart_threshold(np.concatenate([d.ravel() for d in details]), keep)
            coefficients[index] = tuple(pywt.threshold(d, threshold, mode='soft') for d in details)
        reconstructed = pywt.waverec2(coefficients, params.mother_wavelet, mode='symmetric')
        return reconstructed[:channel.shape[0], :channel.shape[1]]

    def wavelet_denoise(self, image: Image, params: WaveletParams) -> Image:
        """Birgé–Massart level-dependent soft thresholding of the finest J0 detail levels."""
        minimum = 2 ** params.levels_J
        if image.height < minimum or image.width < minimum:
            raise ShapeError(MODULE_CODE, f'image {image.height}x{image.width} is too small for '
                                          f'{params.levels_J} decomposition levels')
        return Image.from_float(self._per_channel(image, lambda channel: self._denoise_channel(channel, params)))

    def sample_wavelet_params(self, stream: RngStream, alpha_range: Optional[Range] = None,
                              wavelets=MOTHER_WAVELETS) -> WaveletParams:
        """Draws: wavelet, alpha."""
        mother_wavelet = stream.choice(list(wavelets))
        alpha = stream.uniform(*(alpha_range or self.alpha_range))
        return self._validated(WaveletParams, mother_wavelet=mother_wavelet, alpha=alpha)

    def sample_speckle_params(self, stream: RngStream, lateral_range=(35, 45), axial_range=(75, 85),
                              phasor_range=(5, 10)) -> SpeckleParams:
        """Draws: lateral resolution, axial resolution, phasor count."""
        return self._validated(SpeckleParams,
                               lateral_resolution=stream.integer(*lateral_range),
                               axial_resolution=stream.integer(*axial_range),
                               num_phasors=stream.integer(*phasor_range))

    @staticmethod
    def _grid_coordinates(beam: BeamDescriptor, params: SpeckleParams, height: int, width: int):
        """Fractional (lateral, axial) grid index of every pixel: Cartesian for linear beams, polar for convex."""
        x, y = pixel_grid(height, width)
        lateral_max, axial_max = params.lateral_resolution - 1, params.axial_resolution - 1
        if beam.is_convex:
            x0, y0 = beam.p0
            r_t, r_b = beam.sector_radii()
            phi_left, phi_right = beam.sector_angles()
            phi = np.arctan2(x - x0, y - y0)
            radius = np.hypot(x - x0, y - y0)
            return ((phi - phi_left) / (phi_right - phi_left) * lateral_max,
                    (radius - r_t) / (r_b - r_t) * axial_max)
        left, right = min(beam.p1[0], beam.p3[0]), max(beam.p2[0], beam.p4[0])
        top, bottom = beam.p1[1], beam.p3[1]
        return (x - left) / (right - left) * lateral_max, (y - top) / (bottom - top) * axial_max

    def speckle(self, image: Image, beam: BeamDescriptor, params: SpeckleParams, stream: RngStream) -> Image:
        """Multiply in-beam pixels by a mean-one random-phasor speckle field."""
        mask = self.fov.build_fov_mask(beam, image.height, image.width)
        phases = stream.bulk().uniform(0.0, 2.0 * np.pi,
                                       size=(params.axial_resolution, params.lateral_resolution, params.num_phasors))
        field = np.abs(np.exp(1j * phases).sum(axis=2))
        field /= field.mean()
        grid_x, grid_y = self._grid_coordinates(beam, params, image.height, image.width)
        full = cv2.remap(field.astype(np.float32), grid_x.astype(np.float32), grid_y.astype(np.float32),
                         interpolation=cv2.INTER_LINEAR, borderMode=cv2.BORDER_REPLICATE)
        gain = np.where(mask.bits, full, 1.0)
        logger.debug(f"speckle grid {params.lateral_resolution}x{params.axial_resolution}, "
                     f"{params.num_phasors} phasors")
        return Image.from_float(image.data * gain[:, :, np.newaxis])

    def gaussian_noise(self, image: Image, sigma: float, stream: RngStream) -> Image:
        """Per-pixel multiplicative factor ~ Normal(1, sigma), shared by the channels of a pixel."""
        self._validated(NoiseParams, gaussian_sigma=sigma)
        factors = stream.bulk().normal(1.0, sigma, size=(image.height, image.width))
        return Image.from_float(image.data * factors[:, :, np.newaxis])

    def salt_pepper(self, image: Image, f_salt: float, f_pepper: float, stream: RngStream) -> Image:
        self._validated(NoiseParams, salt_fraction=f_salt, pepper_fraction=f_pepper)
        u = stream.bulk().random(size=(image.height, image.width))
        salt = u < f_salt
        pepper = (u >= f_salt) & (u < f_salt + f_pepper)
        data = image.data.copy()
        data[salt] = 255
        data[pepper] = 0
        return Image.from_array(data)
