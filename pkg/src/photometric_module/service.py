import math
from typing import Optional

import cv2
import numpy as np
from pydantic import ValidationError

from src.core_module.exceptions import ParameterError, ShapeError
from src.core_module.schemas import Image, FovMask
from src.fov_module.service import FovService
from src.photometric_module.config import MODULE_CODE, LUMA_WEIGHTS, CLAHE_TILE_MODES
from src.photometric_module.schemas import PhotometricParams


class PhotometricService:
    def __init__(self, clahe_tile_mode: str = 'grid'):
        if clahe_tile_mode not in CLAHE_TILE_MODES:
            raise ParameterError(MODULE_CODE, f'unknown CLAHE tile mode {clahe_tile_mode}')
        self.clahe_tile_mode = clahe_tile_mode
        self.fov = FovService()

    @staticmethod
    def check(**fields) -> PhotometricParams:
        try:
            return PhotometricParams(**fields)
        except ValidationError as e:
            raise ParameterError(MODULE_CODE, str(e.errors()[0]['msg']))

    @staticmethod
    def luminance(rgb: np.ndarray) -> np.ndarray:
        return rgb[..., 0] * LUMA_WEIGHTS[0] + rgb[..., 1] * LUMA_WEIGHTS[1] + rgb[..., 2] * LUMA_WEIGHTS[2]

    def gamma_correct(self, image: Image, gamma: float) -> Image:
        self.check(gamma=gamma)
        levels = np.arange(256, dtype=np.float64)
        table = np.clip(np.rint(255.0 * (levels / 255.0) ** gamma), 0, 255).astype(np.uint8)
        return Image.from_array(table[image.data])

    def brightness_contrast(self, image: Image, b: float, k: float, mask: FovMask) -> Image:
        """Brightness multiplier, then contrast about the in-mask mean, then the beam mask."""
        self.check(brightness_factor=b, contrast_factor=k)
        self.fov.check_dimensions(image, mask)
        values = image.data.astype(np.float64) * b
        pivot = values[mask.bits].mean()
        values = (values - pivot) * k + pivot
        values *= mask.bits[:, :, np.newaxis]
        return Image.from_float(values)

    def color_jitter(self, image: Image, b: float, k: float, s: float, h: float) -> Image:
        """Brightness, contrast, saturation, hue, in that order; each step saturates to [0, 255]."""
        self.check(brightness_factor=b, contrast_factor=k, saturation_factor=s, hue_shift=h)
        rgb = image.as_rgb().astype(np.float64)

        rgb = np.clip(rgb * b, 0.0, 255.0)
        pivot = self.luminance(rgb).mean()
        rgb = np.clip((rgb - pivot) * k + pivot, 0.0, 255.0)
        gray = self.luminance(rgb)[:, :, np.newaxis]
        rgb = np.clip(gray + (rgb - gray) * s, 0.0, 255.0)
        if h != 0:
            hsv = cv2.cvtColor((rgb / 255.0).astype(np.float32), cv2.COLOR_RGB2HSV)
            hsv[:, :, 0] = np.mod(hsv[:, :, 0] + h * 360.0, 360.0)
            rgb = cv2.cvtColor(hsv, cv2.COLOR_HSV2RGB).astype(np.float64) * 255.0

        return image.with_channels_of(np.clip(np.rint(rgb), 0, 255).astype(np.uint8))

    def to_grayscale(self, image: Image) -> Image:
        if image.channels == 1:
            return image
        gray = np.clip(np.rint(self.luminance(image.data.astype(np.float64))), 0, 255).astype(np.uint8)
        return Image.from_array(np.repeat(gray[:, :, np.newaxis], 3, axis=2))

    def solarize(self, image: Image, threshold: int) -> Image:
        self.check(solarize_threshold=threshold)
        return Image.from_array(np.where(image.data >= threshold, 255 - image.data, image.data).astype(np.uint8))

    def clahe_grid(self, image: Image, tiles: int, tile_mode: Optional[str] = None):
        """(columns, rows) of the tile grid; ``pixels`` mode reads ``tiles`` as a tile edge in pixels."""
        tile_mode = tile_mode or self.clahe_tile_mode
        if tile_mode not in CLAHE_TILE_MODES:
            raise ParameterError(MODULE_CODE, f'unknown CLAHE tile mode {tile_mode}')
        if tile_mode == 'grid':
            return tiles, tiles
        return math.ceil(image.width / tiles), math.ceil(image.height / tiles)

    def clahe(self, image: Image, clip: float, tiles: int, mask: Optional[FovMask] = None,
              tile_mode: Optional[str] = None) -> Image:
        """Contrast-limited adaptive histogram equalization on luminance; clip is a per-bin count for a 256-pixel tile."""
        self.check(clahe_clip=clip, clahe_tiles=tiles)
        columns, rows = self.clahe_grid(image, tiles, tile_mode)
        if image.height < rows or image.width < columns:
            raise ShapeError(MODULE_CODE, f'image {image.height}x{image.width} is smaller than the '
                                          f'{rows}x{columns} tile grid')
        equalizer = cv2.createCLAHE(clipLimit=float(clip), tileGridSize=(columns, rows))
        if image.channels == 1:
            equalized = equalizer.apply(image.data[:, :, 0])[:, :, np.newaxis]
        else:
            ycrcb = cv2.cvtColor(image.data, cv2.COLOR_RGB2YCrCb)
            ycrcb[:, :, 0] = equalizer.apply(np.ascontiguousarray(ycrcb[:, :, 0]))
            equalized = cv2.cvtColor(ycrcb, cv2.COLOR_YCrCb2RGB)
        result = Image.from_array(equalized)
        if mask is not None:
            result = self.fov.apply_mask(result, mask)
        return result
