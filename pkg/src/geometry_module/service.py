import math
from typing import Optional, Tuple

import cv2
import numpy as np
from loguru import logger
from pydantic import ValidationError

from src.core_module.exceptions import GeometryError, ParameterError
from src.core_module.rng import RngStream
from src.core_module.schemas import Image, BeamDescriptor, ProbeType, pixel_grid, line_intersection, ray_angle
from src.fov_module.service import FovService
from src.geometry_module.config import MODULE_CODE, OUT_OF_SOURCE, RHO_RANGE
from src.geometry_module.schemas import CoordinateMap, SectorGeometry, GeometryParams

Range = Tuple[float, float]


class GeometryService:
    def __init__(self, omega_range: Range, top_width_fraction_range: Range, depth_range: Range,
                 rho_range: Range = RHO_RANGE):
        self.rho_range = rho_range
        self.omega_range = omega_range
        self.top_width_fraction_range = top_width_fraction_range
        self.depth_range = depth_range
        self.fov = FovService()

    @staticmethod
    def remap(image: Image, coordinate_map: CoordinateMap) -> Image:
        source_x, source_y = coordinate_map.to_pixels(image.height, image.width)
        outside = ~(np.isfinite(coordinate_map.fx) & np.isfinite(coordinate_map.fy)
                    & (np.abs(coordinate_map.fx) <= 1.0 + 1e-9) & (np.abs(coordinate_map.fy) <= 1.0 + 1e-9))
        source_x = np.where(outside, OUT_OF_SOURCE, source_x).astype(np.float32)
        source_y = np.where(outside, OUT_OF_SOURCE, source_y).astype(np.float32)
        remapped = cv2.remap(image.data, source_x, source_y, interpolation=cv2.INTER_LINEAR,
                             borderMode=cv2.BORDER_CONSTANT, borderValue=0)
        return Image.from_array(remapped.reshape(coordinate_map.height, coordinate_map.width, image.channels))

    @staticmethod
    def make_params(**fields) -> GeometryParams:
        try:
            return GeometryParams(**fields)
        except ValidationError as e:
            raise ParameterError(MODULE_CODE, str(e.errors()[0]['msg']))

    def linear_to_convex_map(self, beam: BeamDescriptor, rho: float, height: int, width: int) \
            -> Tuple[CoordinateMap, BeamDescriptor]:
        if beam.probe_type is not ProbeType.LINEAR:
            raise GeometryError(MODULE_CODE, f'linear to convex mapping needs a linear beam, got {beam.probe_type.value}')
        self.make_params(rho=rho)
        (x1, y1), (x3, y3), (x4, _) = beam.p1, beam.p3, beam.p4

        r_b = rho * (y3 - y1)
        x0 = max(x3, 0.0) + (x4 - x3) / 2.0
        y0 = y3 - r_b
        if r_b <= 0 or r_b ** 2 <= (x0 - x1) ** 2:
            raise GeometryError(MODULE_CODE, f'radius {r_b} cannot span a beam of half width {abs(x0 - x1)}')
        y3_new = y0 + math.sqrt(r_b ** 2 - (x0 - x1) ** 2)
        x1_new = x0 - (y1 - y0) * (x0 - x3) / (y3_new - y0)
        x2_new = 2.0 * x0 - x1_new
        r_t = math.hypot(x0 - x1_new, y1 - y0)

        x, y = pixel_grid(height, width)
        # half-angle of the new sector, taken at p3'
        phi_edge = math.atan2(x0 - x3, y3_new - y0)
        phi = np.arctan2(x - x0, y - y0)
        y_n = (np.hypot(x - x0, y - y0) - r_t) / (r_b - r_t)
        source_x = x3 + (phi + phi_edge) / (2.0 * phi_edge) * (x4 - x3)
        source_y = y1 + y_n * (y3 - y1)

        sector = SectorGeometry(apex=(x0, y0), r_t=r_t, r_b=r_b, phi=phi, y_n=y_n)
        new_beam = BeamDescriptor.create(probe_type=ProbeType.CURVILINEAR,
                                         p1=(x1_new, y1), p2=(x2_new, y1), p3=(x3, y3_new), p4=(x4, y3_new),
                                         original_aspect=beam.original_aspect)
        logger.debug(f"linear->convex rho={rho:.4f} apex=({x0:.2f}, {y0:.2f}) r_t={r_t:.3f} r_b={r_b:.3f}")
        return CoordinateMap.from_pixels(source_x, source_y, height, width, sector=sector), new_beam

    def convex_to_linear_map(self, beam: BeamDescriptor, omega: float, height: int, width: int) \
            -> Tuple[CoordinateMap, BeamDescriptor]:
        if not beam.is_convex or beam.p0 is None or beam.theta0 is None:
            raise GeometryError(MODULE_CODE, 'convex to linear mapping needs a convex beam with p0 and theta0')
        self.make_params(omega=omega)
        (x0, y0), (x1, y1), (x3, y3) = beam.p0, beam.p1, beam.p3

        r_b = math.hypot(x0 - x3, y0 - y3)
        x1_new = x0 - omega * width / 2.0
        x2_new = x0 + omega * width / 2.0
        y3_new = y0 + r_b

        x, y = pixel_grid(height, width)
        phi_left, phi_right = beam.sector_angles()
        phi_mid = (phi_left + phi_right) / 2.0
        phi = beam.theta0 * ((x - x1_new) / (x2_new - x1_new) - 0.5) + phi_mid
        y_n = (y - y1) / (y3_new - y1)
        if beam.probe_type is ProbeType.CURVILINEAR:
            r_t = math.hypot(x0 - x1, y0 - y1)
            sector_r_t = r_t
        else:
            # phased array: the top of the beam is a straight segment at y1
            r_t = (y1 - y0) / np.cos(phi)
            sector_r_t = max(y1 - y0, 0.0)
        radius = r_t + y_n * (r_b - r_t)
        source_x = x0 + np.sin(phi) * radius
        source_y = y0 + np.cos(phi) * radius

        sector = SectorGeometry(apex=(x0, y0), r_t=sector_r_t, r_b=r_b, phi=phi, y_n=y_n)
        new_beam = BeamDescriptor.create(probe_type=ProbeType.LINEAR,
                                         p1=(x1_new, y1), p2=(x2_new, y1), p3=(x1_new, y3_new), p4=(x2_new, y3_new),
                                         original_aspect=beam.original_aspect)
        logger.debug(f"convex->linear omega={omega:.4f} top=({x1_new:.2f}..{x2_new:.2f}) bottom y={y3_new:.2f}")
        return CoordinateMap.from_pixels(source_x, source_y, height, width, sector=sector), new_beam

    def convexity_change_map(self, beam: BeamDescriptor, w_prime: float, height: int, width: int) \
            -> Tuple[CoordinateMap, BeamDescriptor]:
        if not beam.is_convex:
            raise GeometryError(MODULE_CODE, 'convexity change needs a convex beam')
        self.make_params(w_prime=w_prime)
        (x0, y0), (x1, y1), (x2, _), (x3, y3), (x4, _) = beam.p0, beam.p1, beam.p2, beam.p3, beam.p4
        if not x2 > x1:
            raise GeometryError(MODULE_CODE, 'beam top has zero width, its scale cannot change')

        # w' in pixels, i.e. the fraction w'/(x4-x3) of the bottom width times (x4-x3)/(x2-x1)
        scale_s = w_prime / (x2 - x1)
        x1_new = x0 - scale_s * (x0 - x1)
        x2_new = x0 + scale_s * (x2 - x0)
        p1_new, p2_new = (x1_new, y1), (x2_new, y1)
        apex = line_intersection(p1_new, beam.p3, p2_new, beam.p4)
        if apex is None:
            raise GeometryError(MODULE_CODE, f'lateral lines are parallel for w_prime={w_prime}')
        if apex[1] > y1:
            raise GeometryError(MODULE_CODE, f'new apex {apex} falls below the top of the beam')
        x0_new, y0_new = apex
        theta_new = ray_angle(apex, beam.p4) - ray_angle(apex, beam.p3)
        mid = (ray_angle(beam.p0, beam.p3) + ray_angle(beam.p0, beam.p4)) / 2.0
        mid_new = (ray_angle(apex, beam.p3) + ray_angle(apex, beam.p4)) / 2.0

        r_b = math.hypot(x0 - x3, y0 - y3)
        r_b_new = math.hypot(x0_new - x3, y0_new - y3)
        r_t = math.hypot(x0 - x1, y0 - y1)
        r_t_new = math.hypot(x0_new - x1_new, y0_new - y1)

        x, y = pixel_grid(height, width)
        phi_new = np.arctan2(x - x0_new, y - y0_new)
        radius = np.hypot(x0_new - x, y0_new - y)
        radius = (radius - r_t_new) * (r_b - r_t) / (r_b_new - r_t_new) + r_t
        phi_source = (phi_new - mid_new) * beam.theta0 / theta_new + mid
        source_x = x0 + radius * np.sin(phi_source)
        source_y = y0 + radius * np.cos(phi_source)

        sector = SectorGeometry(apex=apex, r_t=r_t_new, r_b=r_b_new, phi=phi_new, scale_s=scale_s)
        new_beam = BeamDescriptor.create(probe_type=beam.probe_type, p1=p1_new, p2=p2_new, p3=beam.p3, p4=beam.p4,
                                         original_aspect=beam.original_aspect)
        logger.debug(f"convexity change s={scale_s:.4f} apex ({x0:.2f}, {y0:.2f}) -> ({x0_new:.2f}, {y0_new:.2f})")
        return CoordinateMap.from_pixels(source_x, source_y, height, width, sector=sector), new_beam

    @staticmethod
    def _resize(image: Image, beam: BeamDescriptor, height: int, width: int) -> Tuple[Image, BeamDescriptor]:
        sx, sy = width / image.width, height / image.height
        resized = cv2.resize(image.data, (width, height), interpolation=cv2.INTER_LINEAR)
        # cv2.resize aligns pixel edges, so centres map as (p + 0.5) * s - 0.5
        return (Image.from_array(resized.reshape(height, width, image.channels)),
                beam.affine(sx, sy, 0.5 * sx - 0.5, 0.5 * sy - 0.5))

    def _masked(self, image: Image, beam: BeamDescriptor) -> Image:
        return self.fov.apply_mask(image, self.fov.build_fov_mask(beam, image.height, image.width))

    def _with_original_aspect(self, image: Image, beam: BeamDescriptor, remapping) -> Tuple[Image, BeamDescriptor]:
        """Run ``remapping`` in a frame resized to the acquisition aspect ratio, then restore the frame size."""
        if beam.original_aspect is None:
            out, new_beam = remapping(image, beam)
            return self._masked(out, new_beam), new_beam
        aspect_width = max(2, int(round(image.height * beam.original_aspect)))
        work_image, work_beam = self._resize(image, beam, image.height, aspect_width)
        out, new_beam = remapping(work_image, work_beam)
        out = self._masked(out, new_beam)
        out, new_beam = self._resize(out, new_beam, image.height, image.width)
        return self._masked(out, new_beam), new_beam

    def sample_probe_params(self, stream: RngStream, rho_range: Optional[Range] = None,
                            omega_range: Optional[Range] = None) -> GeometryParams:
        """Draws: rho, omega."""
        return self.make_params(rho=stream.uniform(*(rho_range or self.rho_range)),
                                omega=stream.uniform(*(omega_range or self.omega_range)))

    def change_probe_type(self, image: Image, beam: BeamDescriptor, params: GeometryParams) \
            -> Tuple[Image, BeamDescriptor]:
        def remapping(work_image: Image, work_beam: BeamDescriptor):
            if work_beam.is_convex:
                coordinate_map, new_beam = self.convex_to_linear_map(work_beam, params.omega,
                                                                     work_image.height, work_image.width)
            else:
                coordinate_map, new_beam = self.linear_to_convex_map(work_beam, params.rho,
                                                                     work_image.height, work_image.width)
            return self.remap(work_image, coordinate_map), new_beam

        return self._with_original_aspect(image, beam, remapping)

    def probe_type_change(self, image: Image, beam: BeamDescriptor, stream: RngStream,
                          rho_range: Optional[Range] = None, omega_range: Optional[Range] = None) \
            -> Tuple[Image, BeamDescriptor]:
        """Linear beams become curvilinear, convex beams become linear."""
        return self.change_probe_type(image, beam, self.sample_probe_params(stream, rho_range, omega_range))

    def linearize(self, image: Image, beam: BeamDescriptor) -> Tuple[Image, BeamDescriptor]:
        """Deterministic convex->linear conversion that keeps the bottom width of the beam."""
        if not beam.is_convex:
            return image, beam
        omega = min(max((beam.p4[0] - beam.p3[0]) / image.width, 1e-3), 1.0)
        return self.change_probe_type(image, beam, self.make_params(omega=omega))

    def sample_top_width_fraction(self, stream: RngStream, fraction_range: Optional[Range] = None) -> float:
        return stream.uniform(*(fraction_range or self.top_width_fraction_range))

    def change_convexity(self, image: Image, beam: BeamDescriptor, fraction: float) -> Tuple[Image, BeamDescriptor]:
        """Rescale the top width of a convex beam by ``fraction``; linear beams pass through."""
        if not beam.is_convex:
            return image, beam

        def remapping(work_image: Image, work_beam: BeamDescriptor):
            w_prime = fraction * (work_beam.p2[0] - work_beam.p1[0])
            coordinate_map, new_beam = self.convexity_change_map(work_beam, w_prime,
                                                                 work_image.height, work_image.width)
            return self.remap(work_image, coordinate_map), new_beam

        return self._with_original_aspect(image, beam, remapping)

    def convexity_change(self, image: Image, beam: BeamDescriptor, stream: RngStream,
                         fraction_range: Optional[Range] = None) -> Tuple[Image, BeamDescriptor]:
        """Draws: fraction (also for linear beams, which are returned unchanged)."""
        return self.change_convexity(image, beam, self.sample_top_width_fraction(stream, fraction_range))

    def zoom_map(self, beam: BeamDescriptor, d: float, height: int, width: int) -> CoordinateMap:
        if not d > 0:
            raise ParameterError(MODULE_CODE, f'depth factor must be positive, got {d}')
        cx, cy = beam.p0 if beam.is_convex else ((width - 1) / 2.0, (height - 1) / 2.0)
        x, y = pixel_grid(height, width)
        return CoordinateMap.from_pixels(cx + d * (x - cx), cy + d * (y - cy), height, width)

    def depth_change(self, image: Image, beam: BeamDescriptor, d: float) -> Image:
        """Zoom about the image centre (linear) or the apex (convex); d > 1 zooms out."""
        zoomed = self.remap(image, self.zoom_map(beam, d, image.height, image.width))
        return self._masked(zoomed, beam)

    def sample_depth(self, stream: RngStream, depth_range: Optional[Range] = None) -> float:
        return self.make_params(depth_factor_d=stream.uniform(*(depth_range or self.depth_range))).depth_factor_d
