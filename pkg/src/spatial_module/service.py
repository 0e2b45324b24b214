import math
from typing import Optional, Tuple

import cv2
import numpy as np
from pydantic import ValidationError

from src.core_module.exceptions import ParameterError
from src.core_module.rng import RngStream
from src.core_module.schemas import Image, BeamDescriptor, FovMask
from src.spatial_module.config import MODULE_CODE, CROP_ATTEMPTS, ROTATE_THEN_SHIFT
from src.spatial_module.schemas import CropParams, CropWindow, AffineParams


class SpatialService:
    def __init__(self, rotate_then_shift: bool = ROTATE_THEN_SHIFT):
        self.rotate_then_shift = rotate_then_shift

    @staticmethod
    def make_crop_params(**fields) -> CropParams:
        try:
            return CropParams(**fields)
        except ValidationError as e:
            raise ParameterError(MODULE_CODE, str(e.errors()[0]['msg']))

    @staticmethod
    def make_affine_params(**fields) -> AffineParams:
        try:
            return AffineParams(**fields)
        except ValidationError as e:
            raise ParameterError(MODULE_CODE, str(e.errors()[0]['msg']))

    @staticmethod
    def _position(extent: int, frame: int, u: float) -> int:
        return min(int(math.floor(u * (frame - extent + 1))), frame - extent)

    def sample_crop_window(self, height: int, width: int, params: CropParams, stream: RngStream,
                           mask: Optional[FovMask] = None) -> CropWindow:
        """
        Draws: CROP_ATTEMPTS (area, aspect) pairs, then the row and column position.
        All draws are consumed whichever attempt is kept.
        """
        attempts = [(stream.uniform(params.min_area_c, params.max_area), stream.uniform(params.aspect_lo, params.aspect_hi))
                    for _ in range(CROP_ATTEMPTS)]
        u_row, u_col = stream.uniform(0.0, 1.0), stream.uniform(0.0, 1.0)

        crop_height, crop_width, area_fraction, aspect = height, width, 1.0, width / height
        min_pixels = params.min_area_c * height * width
        for candidate_area, candidate_aspect in attempts:
            h = int(round(math.sqrt(candidate_area * height * width / candidate_aspect)))
            w = int(round(candidate_aspect * h))
            # rounded crops that overflow the frame or shrink below c count as failed attempts
            if 1 <= h <= height and 1 <= w <= width and h * w >= min_pixels:
                crop_height, crop_width = h, w
                area_fraction, aspect = h * w / (height * width), candidate_aspect
                break

        top = self._position(crop_height, height, u_row)
        left = self._position(crop_width, width, u_col)
        if mask is not None:
            # positions whose crop centre lies inside the field of view
            centre_row, centre_col = (crop_height - 1) // 2, (crop_width - 1) // 2
            valid = mask.bits[centre_row:centre_row + height - crop_height + 1,
                              centre_col:centre_col + width - crop_width + 1]
            candidates = np.flatnonzero(valid)
            if candidates.size > 0:
                pick = candidates[min(int(u_row * candidates.size), candidates.size - 1)]
                top, left = (int(v) for v in divmod(int(pick), valid.shape[1]))
        return CropWindow(top=top, left=left, height=crop_height, width=crop_width,
                          area_fraction=area_fraction, aspect=aspect)

    @staticmethod
    def apply_crop_window(image: Image, window: CropWindow) -> Image:
        crop = image.data[window.top:window.top + window.height, window.left:window.left + window.width]
        resized = cv2.resize(crop, (image.width, image.height), interpolation=cv2.INTER_LINEAR)
        return Image.from_array(resized.reshape(image.data.shape))

    @staticmethod
    def crop_beam(beam: BeamDescriptor, window: CropWindow, height: int, width: int) -> BeamDescriptor:
        sx, sy = width / window.width, height / window.height
        return beam.affine(sx, sy, (0.5 - window.left) * sx - 0.5, (0.5 - window.top) * sy - 0.5)

    def crop_resize(self, image: Image, params: CropParams, stream: RngStream,
                    mask: Optional[FovMask] = None) -> Image:
        window = self.sample_crop_window(image.height, image.width, params, stream, mask)
        return self.apply_crop_window(image, window)

    @staticmethod
    def hflip(image: Image) -> Image:
        return Image.from_array(np.ascontiguousarray(image.data[:, ::-1]))

    @staticmethod
    def hflip_beam(beam: BeamDescriptor, width: int) -> BeamDescriptor:
        return beam.affine(-1.0, 1.0, width - 1.0, 0.0)

    def affine_matrix(self, params: AffineParams, height: int, width: int) -> np.ndarray:
        """
        Rotation about the image centre (positive = counter-clockwise on screen) and the shift,
        composed rotation first unless ``rotate_then_shift`` is off.
        """
        matrix = cv2.getRotationMatrix2D(((width - 1) / 2.0, (height - 1) / 2.0), params.angle_deg, 1.0)
        shift = np.array([params.shift_x_frac * width, params.shift_y_frac * height])
        if not self.rotate_then_shift:
            # R(x + t) = Rx + Rt
            shift = matrix[:, :2] @ shift
        matrix[:, 2] += shift
        return matrix

    def rotate_shift(self, image: Image, params: AffineParams) -> Image:
        warped = cv2.warpAffine(image.data, self.affine_matrix(params, image.height, image.width),
                                (image.width, image.height), flags=cv2.INTER_LINEAR,
                                borderMode=cv2.BORDER_CONSTANT, borderValue=0)
        return Image.from_array(warped.reshape(image.data.shape))

    def sample_affine_params(self, stream: RngStream, angle_range: Tuple[float, float] = (-22.5, 22.5),
                             shift_x_range: Tuple[float, float] = (-0.2, 0.2),
                             shift_y_range: Tuple[float, float] = (-0.2, 0.2)) -> AffineParams:
        """Draws: angle, horizontal shift, vertical shift."""
        return self.make_affine_params(angle_deg=stream.uniform(*angle_range),
                                       shift_x_frac=stream.uniform(*shift_x_range),
                                       shift_y_frac=stream.uniform(*shift_y_range))
