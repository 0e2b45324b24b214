from pydantic import BaseModel, validator, root_validator

from src.noise_module.config import MOTHER_WAVELETS, WAVELET_LEVELS, WAVELET_COARSE_LEVEL, BLUR_KERNEL


class WaveletParams(BaseModel):
    mother_wavelet: str = 'db2'
    alpha: float = 3.0
    levels_J: int = WAVELET_LEVELS
    level_J0: int = WAVELET_COARSE_LEVEL

    @validator('mother_wavelet')
    def check_wavelet(cls, mother_wavelet):
        if mother_wavelet not in MOTHER_WAVELETS:
            raise ValueError(f'mother wavelet must be one of {MOTHER_WAVELETS}, got {mother_wavelet}')
        return mother_wavelet

    @validator('alpha')
    def check_alpha(cls, alpha):
        if not alpha > 1:
            raise ValueError(f'alpha must exceed 1, got {alpha}')
        return alpha

    @root_validator(skip_on_failure=True)
    def check_levels(cls, values):
        if not values['levels_J'] >= values['level_J0'] >= 1:
            raise ValueError(f"levels must satisfy J >= J0 >= 1, got J={values['levels_J']}, J0={values['level_J0']}")
        return values


class SpeckleParams(BaseModel):
    lateral_resolution: int = 40
    axial_resolution: int = 80
    num_phasors: int = 7

    @validator('lateral_resolution')
    def check_lateral(cls, lateral_resolution):
        if not 35 <= lateral_resolution <= 45:
            raise ValueError(f'lateral resolution must lie in [35, 45], got {lateral_resolution}')
        return lateral_resolution

    @validator('axial_resolution')
    def check_axial(cls, axial_resolution):
        if not 75 <= axial_resolution <= 85:
            raise ValueError(f'axial resolution must lie in [75, 85], got {axial_resolution}')
        return axial_resolution

    @validator('num_phasors')
    def check_phasors(cls, num_phasors):
        if not 5 <= num_phasors <= 10:
            raise ValueError(f'number of phasors must lie in [5, 10], got {num_phasors}')
        return num_phasors


class NoiseParams(BaseModel):
    gaussian_sigma: float = 1.0
    salt_fraction: float = 0.0
    pepper_fraction: float = 0.0
    blur_kernel: int = BLUR_KERNEL
    blur_sigma: float = 1.0

    @validator('gaussian_sigma', 'blur_sigma')
    def check_sigma(cls, value, field):
        if not value > 0:
            raise ValueError(f'{field.name} must be positive, got {value}')
        return value

    @validator('salt_fraction', 'pepper_fraction')
    def check_fraction(cls, value, field):
        if not 0 <= value <= 1:
            raise ValueError(f'{field.name} must lie in [0, 1], got {value}')
        return value

    @validator('blur_kernel')
    def check_kernel(cls, blur_kernel):
        if blur_kernel < 1 or blur_kernel % 2 == 0:
            raise ValueError(f'blur kernel must be odd and >= 1, got {blur_kernel}')
        return blur_kernel

    @root_validator(skip_on_failure=True)
    def check_total_fraction(cls, values):
        if values['salt_fraction'] + values['pepper_fraction'] > 1:
            raise ValueError('salt and pepper fractions must sum to at most 1')
        return values
