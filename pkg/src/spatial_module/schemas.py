from pydantic import BaseModel, validator, root_validator

from src.spatial_module.config import DEFAULT_MIN_AREA, DEFAULT_ASPECT_RANGE


class CropParams(BaseModel):
    min_area_c: float = DEFAULT_MIN_AREA
    max_area: float = 1.0
    aspect_lo: float = DEFAULT_ASPECT_RANGE[0]
    aspect_hi: float = DEFAULT_ASPECT_RANGE[1]
    fov_only: bool = False

    @root_validator(skip_on_failure=True)
    def check_bounds(cls, values):
        if not 0 < values['min_area_c'] <= values['max_area'] <= 1:
            raise ValueError(f"crop area bounds must satisfy 0 < c <= max_area <= 1, "
                             f"got c={values['min_area_c']}, max_area={values['max_area']}")
        if not 0 < values['aspect_lo'] <= values['aspect_hi']:
            raise ValueError(f"aspect bounds must satisfy 0 < lo <= hi, "
                             f"got lo={values['aspect_lo']}, hi={values['aspect_hi']}")
        return values


class CropWindow(BaseModel):
    top: int
    left: int
    height: int
    width: int
    area_fraction: float
    aspect: float


class AffineParams(BaseModel):
    angle_deg: float = 0.0
    shift_x_frac: float = 0.0
    shift_y_frac: float = 0.0

    @validator('angle_deg')
    def check_angle(cls, angle_deg):
        if not -180 <= angle_deg <= 180:
            raise ValueError(f'angle must lie in [-180, 180] degrees, got {angle_deg}')
        return angle_deg

    @validator('shift_x_frac', 'shift_y_frac')
    def check_shift(cls, value, field):
        if not -1 <= value <= 1:
            raise ValueError(f'{field.name} must lie in [-1, 1], got {value}')
        return value
