from pydantic import BaseModel, validator


class PhotometricParams(BaseModel):
    gamma: float = 1.0
    brightness_factor: float = 1.0
    contrast_factor: float = 1.0
    saturation_factor: float = 1.0
    hue_shift: float = 0.0
    clahe_clip: float = 40.0
    clahe_tiles: int = 8
    solarize_threshold: int = 128

    @validator('gamma', 'brightness_factor', 'contrast_factor', 'saturation_factor', 'clahe_clip')
    def check_positive(cls, value, field):
        if not value > 0:
            raise ValueError(f'{field.name} must be positive, got {value}')
        return value

    @validator('hue_shift')
    def check_hue(cls, hue_shift):
        if not -0.5 <= hue_shift <= 0.5:
            raise ValueError(f'hue_shift must lie in [-0.5, 0.5], got {hue_shift}')
        return hue_shift

    @validator('clahe_tiles')
    def check_tiles(cls, clahe_tiles):
        if clahe_tiles < 1:
            raise ValueError(f'clahe_tiles must be >= 1, got {clahe_tiles}')
        return clahe_tiles

    @validator('solarize_threshold')
    def check_threshold(cls, solarize_threshold):
        if not 0 <= solarize_threshold <= 256:
            raise ValueError(f'solarize_threshold must lie in [0, 256], got {solarize_threshold}')
        return solarize_threshold
