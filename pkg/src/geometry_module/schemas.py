from typing import Optional

import numpy as np
from pydantic import BaseModel, validator, root_validator

from src.core_module.schemas import Point


class SectorGeometry(BaseModel):
    """Intermediate quantities of a beam-shape remapping."""
    apex: Point
    r_t: float
    r_b: float
    phi: Optional[np.ndarray] = None
    y_n: Optional[np.ndarray] = None
    scale_s: Optional[float] = None

    class Config:
        arbitrary_types_allowed = True
        allow_mutation = False

    @root_validator(skip_on_failure=True)
    def check_radii(cls, values):
        if not values['r_b'] > values['r_t'] >= 0:
            raise ValueError(f"sector radii must satisfy r_b > r_t >= 0, got r_t={values['r_t']}, r_b={values['r_b']}")
        return values


class CoordinateMap(BaseModel):
    """
    Per-output-pixel source coordinates, normalized so that (-1, -1) is the centre of the
    top-left source pixel and (+1, +1) the centre of the bottom-right one.
    """
    fx: np.ndarray
    fy: np.ndarray
    sector: Optional[SectorGeometry] = None

    class Config:
        arbitrary_types_allowed = True
        allow_mutation = False

    @root_validator(skip_on_failure=True)
    def check_fields(cls, values):
        fx, fy = values['fx'], values['fy']
        if fx.ndim != 2 or fx.shape != fy.shape:
            raise ValueError(f'fx and fy must be 2-D fields of one shape, got {fx.shape} and {fy.shape}')
        return values

    @property
    def height(self) -> int:
        return self.fx.shape[0]

    @property
    def width(self) -> int:
        return self.fx.shape[1]

    @classmethod
    def from_pixels(cls, source_x: np.ndarray, source_y: np.ndarray, source_height: int, source_width: int,
                    sector: Optional[SectorGeometry] = None) -> 'CoordinateMap':
        return cls(fx=2.0 * source_x / (source_width - 1) - 1.0,
                   fy=2.0 * source_y / (source_height - 1) - 1.0,
                   sector=sector)

    @classmethod
    def identity(cls, height: int, width: int) -> 'CoordinateMap':
        y, x = np.mgrid[0:height, 0:width].astype(np.float64)
        return cls.from_pixels(x, y, height, width)

    def to_pixels(self, source_height: int, source_width: int):
        return (self.fx + 1.0) * (source_width - 1) / 2.0, (self.fy + 1.0) * (source_height - 1) / 2.0


class GeometryParams(BaseModel):
    rho: float = 1.0
    omega: float = 1.0
    w_prime: Optional[float] = None
    depth_factor_d: float = 1.0

    @validator('rho')
    def check_rho(cls, rho):
        if not rho >= 1:
            raise ValueError('rho must be >= 1')
        return rho

    @validator('omega')
    def check_omega(cls, omega):
        if not 0 < omega <= 1:
            raise ValueError('omega must lie in (0, 1]')
        return omega

    @validator('w_prime')
    def check_w_prime(cls, w_prime):
        if w_prime is not None and not w_prime > 0:
            raise ValueError('w_prime must be positive')
        return w_prime

    @validator('depth_factor_d')
    def check_depth(cls, depth_factor_d):
        if not depth_factor_d > 0:
            raise ValueError('depth factor must be positive')
        return depth_factor_d
