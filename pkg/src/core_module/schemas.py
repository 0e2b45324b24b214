import math
from enum import Enum
from typing import Optional, Tuple

import cv2
import numpy as np
from pydantic import BaseModel, ValidationError, validator, root_validator

from src.core_module.config import MODULE_CODE
from src.core_module.exceptions import ShapeError, GeometryError

Point = Tuple[float, float]

VERTEX_TOLERANCE = 1e-6
APEX_TOLERANCE = 1.0


class ProbeType(str, Enum):
    LINEAR = 'linear'
    CURVILINEAR = 'curvilinear'
    PHASED_ARRAY = 'phased'

    @property
    def is_convex(self) -> bool:
        return self is not ProbeType.LINEAR


class Image(BaseModel):
    """8-bit raster stored as (height, width, channels), channels in {1, 3}."""
    data: np.ndarray

    class Config:
        arbitrary_types_allowed = True
        allow_mutation = False

    @validator('data')
    def check_raster(cls, data):
        if not isinstance(data, np.ndarray):
            raise TypeError('image data must be a numpy array')
        if data.dtype != np.uint8:
            raise ValueError(f'image data must be uint8, got {data.dtype}')
        if data.ndim == 2:
            data = data[:, :, np.newaxis]
        if data.ndim != 3 or data.shape[2] not in (1, 3):
            raise ValueError(f'image shape must be (h, w, 1|3), got {data.shape}')
        if data.shape[0] < 2 or data.shape[1] < 2:
            raise ValueError(f'image must be at least 2x2, got {data.shape[:2]}')
        return np.ascontiguousarray(data)

    @classmethod
    def from_array(cls, data: np.ndarray) -> 'Image':
        try:
            return cls(data=data)
        except ValidationError as e:
            raise ShapeError(MODULE_CODE, str(e.errors()[0]['msg']))

    @classmethod
    def from_float(cls, values: np.ndarray) -> 'Image':
        # round to nearest, then saturate
        return cls.from_array(np.clip(np.rint(values), 0, 255).astype(np.uint8))

    @property
    def height(self) -> int:
        return self.data.shape[0]

    @property
    def width(self) -> int:
        return self.data.shape[1]

    @property
    def channels(self) -> int:
        return self.data.shape[2]

    def as_rgb(self) -> np.ndarray:
        if self.channels == 3:
            return self.data
        return np.repeat(self.data, 3, axis=2)

    def with_channels_of(self, rgb: np.ndarray) -> 'Image':
        """Wrap an (h, w, 3) uint8 result, collapsing it back to one channel if this image had one."""
        if self.channels == 1:
            return Image.from_array(np.ascontiguousarray(rgb[:, :, :1]))
        return Image.from_array(rgb)


def pixel_grid(height: int, width: int) -> Tuple[np.ndarray, np.ndarray]:
    """Coordinate maps x = 1_h [0..w-1] and y = [0..h-1]^T 1_w (pixel centres)."""
    y, x = np.mgrid[0:height, 0:width].astype(np.float64)
    return x, y


def line_intersection(a1: Point, a2: Point, b1: Point, b2: Point) -> Optional[Point]:
    """Intersection of the infinite lines a1a2 and b1b2, None when parallel."""
    dax, day = a2[0] - a1[0], a2[1] - a1[1]
    dbx, dby = b2[0] - b1[0], b2[1] - b1[1]
    denominator = dax * dby - day * dbx
    if abs(denominator) < 1e-12:
        return None
    t = ((b1[0] - a1[0]) * dby - (b1[1] - a1[1]) * dbx) / denominator
    return a1[0] + t * dax, a1[1] + t * day


def ray_angle(origin: Point, point: Point) -> float:
    """Angle of origin->point measured from the downward vertical, positive towards +x."""
    return math.atan2(point[0] - origin[0], point[1] - origin[1])


class BeamDescriptor(BaseModel):
    probe_type: ProbeType
    p1: Point
    p2: Point
    p3: Point
    p4: Point
    p0: Optional[Point] = None
    theta0: Optional[float] = None
    original_aspect: Optional[float] = None

    class Config:
        allow_mutation = False
        use_enum_values = False

    @root_validator(skip_on_failure=True)
    def check_vertices(cls, values):
        probe_type = values['probe_type']
        p1, p2, p3, p4 = values['p1'], values['p2'], values['p3'], values['p4']
        if not math.isclose(p1[1], p2[1], abs_tol=VERTEX_TOLERANCE):
            raise ValueError('top vertices p1, p2 must share a y coordinate')
        if not math.isclose(p3[1], p4[1], abs_tol=VERTEX_TOLERANCE):
            raise ValueError('bottom vertices p3, p4 must share a y coordinate')
        if not p3[0] < p4[0]:
            raise ValueError('x3 must be smaller than x4')
        if probe_type is ProbeType.LINEAR:
            if not p1[0] < p2[0]:
                raise ValueError('x1 must be smaller than x2')
            if values.get('p0') is not None or values.get('theta0') is not None:
                raise ValueError('p0/theta0 are only defined for convex beams')
            return values

        if not p1[0] <= p2[0]:
            raise ValueError('x1 must not exceed x2')
        apex = line_intersection(p1, p3, p2, p4)
        if apex is None:
            raise ValueError('lateral lines p1p3 and p2p4 are parallel')
        p0 = values.get('p0')
        if p0 is None:
            p0 = apex
        elif math.dist(p0, apex) > APEX_TOLERANCE:
            raise ValueError(f'p0 {p0} is not the intersection {apex} of the lateral lines')
        if p0[1] > p1[1] + VERTEX_TOLERANCE:
            raise ValueError('apex p0 must lie above p1')
        theta0 = values.get('theta0')
        if theta0 is None:
            theta0 = ray_angle(p0, p4) - ray_angle(p0, p3)
        if not theta0 > 0:
            raise ValueError('theta0 must be positive')
        values['p0'] = tuple(p0)
        values['theta0'] = float(theta0)
        return values

    @validator('original_aspect')
    def check_aspect(cls, original_aspect):
        if original_aspect is not None and not original_aspect > 0:
            raise ValueError('original_aspect must be positive')
        return original_aspect

    @classmethod
    def create(cls, **fields) -> 'BeamDescriptor':
        try:
            return cls(**fields)
        except ValidationError as e:
            raise GeometryError(MODULE_CODE, str(e.errors()[0]['msg']))

    @property
    def is_convex(self) -> bool:
        return self.probe_type.is_convex

    def sector_radii(self) -> Tuple[float, float]:
        """(r_t, r_b): apex distance to the top and bottom vertex rows of a convex beam."""
        return math.dist(self.p0, self.p1), math.dist(self.p0, self.p3)

    def sector_angles(self) -> Tuple[float, float]:
        """Ray angles of the left and right lateral edges, measured from the downward vertical."""
        return ray_angle(self.p0, self.p3), ray_angle(self.p0, self.p4)

    def affine(self, sx: float, sy: float, tx: float, ty: float) -> 'BeamDescriptor':
        """Map every vertex through (x, y) -> (sx*x + tx, sy*y + ty); theta0 is re-derived."""
        def move(p: Point) -> Point:
            return sx * p[0] + tx, sy * p[1] + ty

        p1, p2, p3, p4 = move(self.p1), move(self.p2), move(self.p3), move(self.p4)
        if sx < 0:
            p1, p2, p3, p4 = p2, p1, p4, p3
        return BeamDescriptor.create(probe_type=self.probe_type, p1=p1, p2=p2, p3=p3, p4=p4,
                                     p0=move(self.p0) if self.p0 is not None else None,
                                     original_aspect=self.original_aspect)

    def translated(self, dx: float, dy: float) -> 'BeamDescriptor':
        return self.affine(1.0, 1.0, dx, dy)


class FovMask(BaseModel):
    bits: np.ndarray

    class Config:
        arbitrary_types_allowed = True
        allow_mutation = False

    @validator('bits')
    def check_bits(cls, bits):
        if not isinstance(bits, np.ndarray) or bits.ndim != 2:
            raise ValueError('mask bits must be a 2-D array')
        bits = np.ascontiguousarray(bits, dtype=bool)
        if not bits.any():
            raise ValueError('mask has no pixel inside the field of view')
        n_labels, _ = cv2.connectedComponents(bits.astype(np.uint8), connectivity=8)
        if n_labels - 1 != 1:
            raise ValueError(f'mask must be a single connected region, found {n_labels - 1}')
        return bits

    @classmethod
    def from_bits(cls, bits: np.ndarray) -> 'FovMask':
        try:
            return cls(bits=bits)
        except ValidationError as e:
            raise GeometryError(MODULE_CODE, str(e.errors()[0]['msg']))

    @property
    def height(self) -> int:
        return self.bits.shape[0]

    @property
    def width(self) -> int:
        return self.bits.shape[1]

    @property
    def area(self) -> int:
        return int(np.count_nonzero(self.bits))
