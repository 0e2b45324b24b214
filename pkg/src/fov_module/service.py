import numpy as np
from loguru import logger

from src.core_module.exceptions import GeometryError, ShapeError
from src.core_module.schemas import Image, BeamDescriptor, FovMask, pixel_grid
from src.fov_module.config import MODULE_CODE, EDGE_TOLERANCE
from src.fov_module.schemas import PreprocessResult


class FovService:
    @staticmethod
    def _quadrilateral_bits(beam: BeamDescriptor, height: int, width: int) -> np.ndarray:
        x, y = pixel_grid(height, width)
        # p1 -> p2 -> p4 -> p3 walks the outline clockwise on screen
        outline = [beam.p1, beam.p2, beam.p4, beam.p3]
        inside = np.ones((height, width), dtype=bool)
        for (ax, ay), (bx, by) in zip(outline, outline[1:] + outline[:1]):
            if ax == bx and ay == by:
                continue
            cross = (bx - ax) * (y - ay) - (by - ay) * (x - ax)
            inside &= cross >= -EDGE_TOLERANCE
        return inside

    @staticmethod
    def _sector_bits(beam: BeamDescriptor, height: int, width: int) -> np.ndarray:
        r_t, r_b = beam.sector_radii()
        phi_left, phi_right = beam.sector_angles()
        if not r_b > r_t or not phi_right > phi_left:
            raise GeometryError(MODULE_CODE, f'degenerate sector: r_t={r_t}, r_b={r_b}, '
                                             f'angles=({phi_left}, {phi_right})')
        x, y = pixel_grid(height, width)
        x0, y0 = beam.p0
        radius = np.hypot(x - x0, y - y0)
        phi = np.arctan2(x - x0, y - y0)
        return ((radius >= r_t - EDGE_TOLERANCE) & (radius <= r_b + EDGE_TOLERANCE)
                & (phi >= phi_left - EDGE_TOLERANCE) & (phi <= phi_right + EDGE_TOLERANCE))

    def build_fov_mask(self, beam: BeamDescriptor, height: int, width: int) -> FovMask:
        if not beam.p3[1] > beam.p1[1]:
            raise GeometryError(MODULE_CODE, f'beam has zero height: y1={beam.p1[1]}, y3={beam.p3[1]}')
        if beam.is_convex:
            bits = self._sector_bits(beam, height, width)
        else:
            bits = self._quadrilateral_bits(beam, height, width)
        return FovMask.from_bits(bits)

    @staticmethod
    def check_dimensions(image: Image, mask: FovMask):
        if (image.height, image.width) != (mask.height, mask.width):
            raise ShapeError(MODULE_CODE, f'image {image.height}x{image.width} does not match '
                                          f'mask {mask.height}x{mask.width}')

    def apply_mask(self, image: Image, mask: FovMask) -> Image:
        self.check_dimensions(image, mask)
        return Image.from_array(image.data * mask.bits[:, :, np.newaxis].astype(np.uint8))

    def crop_to_fov(self, image: Image, mask: FovMask, beam: BeamDescriptor) -> PreprocessResult:
        self.check_dimensions(image, mask)
        rows = np.flatnonzero(mask.bits.any(axis=1))
        cols = np.flatnonzero(mask.bits.any(axis=0))
        if rows.size == 0:
            raise GeometryError(MODULE_CODE, 'mask is empty')
        min_row, max_row = int(rows[0]), int(rows[-1])
        min_col, max_col = int(cols[0]), int(cols[-1])
        cropped = image.data[min_row:max_row + 1, min_col:max_col + 1]
        cropped_bits = mask.bits[min_row:max_row + 1, min_col:max_col + 1]
        logger.debug(f"crop to FOV rows {min_row}..{max_row}, cols {min_col}..{max_col}")
        return PreprocessResult(image=Image.from_array(cropped),
                                beam=beam.translated(-min_col, -min_row),
                                mask=FovMask.from_bits(cropped_bits))

    def preprocess(self, image: Image, beam: BeamDescriptor) -> PreprocessResult:
        """Mask everything outside the beam, then crop to the FOV bounding box."""
        mask = self.build_fov_mask(beam, image.height, image.width)
        return self.crop_to_fov(self.apply_mask(image, mask), mask, beam)
