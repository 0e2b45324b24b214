"""
Transform catalog: identifier, display name, sub-stream code and default parameter bounds.

Bounds are either a ``[lo, hi]`` range, a scalar, a flag, or a list of choices.
Ranges the source material leaves open come from ``application.yaml``.
"""
from typing import Any, Dict, List

from pydantic import BaseModel

from src import app_config
from src.geometry_module.config import RHO_RANGE
from src.noise_module.config import BLUR_KERNEL, MOTHER_WAVELETS
from src.spatial_module.config import DEFAULT_MIN_AREA, DEFAULT_ASPECT_RANGE


class TransformInfo(BaseModel):
    transform_id: str
    name: str
    stream_code: int
    bounds: Dict[str, Any]


def _catalog() -> List[TransformInfo]:
    return [
        TransformInfo(transform_id='B00', name='Crop and resize', stream_code=0,
                      bounds={'area': [DEFAULT_MIN_AREA, 1.0], 'aspect': list(DEFAULT_ASPECT_RANGE),
                              'fov_only': False}),
        TransformInfo(transform_id='B01', name='Horizontal reflection', stream_code=1, bounds={}),
        TransformInfo(transform_id='B02', name='Color jitter', stream_code=2,
                      bounds={'brightness': [0.6, 1.4], 'contrast': [0.6, 1.4], 'saturation': [0.8, 1.2],
                              'hue': [-0.1, 0.1]}),
        TransformInfo(transform_id='B03', name='Conversion to grayscale', stream_code=3, bounds={}),
        TransformInfo(transform_id='B04', name='Gaussian blur', stream_code=4,
                      bounds={'kernel': BLUR_KERNEL, 'sigma': [0.1, 2.0]}),
        TransformInfo(transform_id='B05', name='Solarization', stream_code=5, bounds={'threshold': 128}),
        TransformInfo(transform_id='U00', name='Probe type change', stream_code=100,
                      bounds={'rho': list(RHO_RANGE), 'omega': list(app_config.AUGMENT_OMEGA_RANGE)}),
        TransformInfo(transform_id='U01', name='Convexity change', stream_code=101,
                      bounds={'top_width_fraction': list(app_config.AUGMENT_TOP_WIDTH_FRACTION_RANGE)}),
        TransformInfo(transform_id='U02', name='Wavelet denoising', stream_code=102,
                      bounds={'wavelets': list(MOTHER_WAVELETS),
                              'alpha': list(app_config.AUGMENT_WAVELET_ALPHA_RANGE)}),
        TransformInfo(transform_id='U03', name='CLAHE', stream_code=103, bounds={'clip': [30.0, 50.0], 'tiles': 8}),
        TransformInfo(transform_id='U04', name='Gamma correction', stream_code=104, bounds={'gamma': [0.5, 1.75]}),
        TransformInfo(transform_id='U05', name='Brightness and contrast change', stream_code=105,
                      bounds={'brightness': [0.6, 1.4], 'contrast': [0.6, 1.4]}),
        TransformInfo(transform_id='U06', name='Depth change simulation', stream_code=106,
                      bounds={'depth': list(app_config.AUGMENT_DEPTH_RANGE)}),
        TransformInfo(transform_id='U07', name='Speckle noise simulation', stream_code=107,
                      bounds={'lateral': [35, 45], 'axial': [75, 85], 'phasors': [5, 10]}),
        TransformInfo(transform_id='U08', name='Gaussian noise', stream_code=108,
                      bounds={'sigma': list(app_config.AUGMENT_GAUSSIAN_SIGMA_RANGE)}),
        TransformInfo(transform_id='U09', name='Salt & pepper noise', stream_code=109,
                      bounds={'salt': [0.001, 0.005], 'pepper': [0.001, 0.005]}),
        TransformInfo(transform_id='U10', name='Horizontal reflection', stream_code=110, bounds={}),
        TransformInfo(transform_id='U11', name='Rotation & shift', stream_code=111,
                      bounds={'angle': [-22.5, 22.5], 'shift_x': [-0.2, 0.2], 'shift_y': [-0.2, 0.2]}),
    ]


CATALOG: Dict[str, TransformInfo] = {info.transform_id: info for info in _catalog()}

PRESETS = {
    'BYOL': [('B00', 1.0), ('B01', 0.5), ('B02', 0.8), ('B03', 0.2), ('B04', 0.5), ('B05', 0.1)],
    'AugUS-O': [('U00', 0.3), ('U01', 0.75), ('U02', 0.5), ('U03', 0.2), ('U04', 0.5), ('U05', 0.5),
                ('U06', 0.5), ('U07', 0.333), ('U08', 0.333), ('U09', 0.1), ('U10', 0.5), ('U11', 0.5)],
    # probabilities inherited from the pipeline each transform comes from
    'AugUS-D': [('U03', 0.2), ('B02', 0.8), ('U11', 0.5), ('B00', 1.0)],
    'CropOnly': [('B00', 1.0)],
}


def preset_key(name: str) -> str:
    return ''.join(ch for ch in name.lower() if ch.isalnum())


PRESET_KEYS = {preset_key(name): name for name in PRESETS}


def _is_number(value) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _is_integer(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


# scalar bounds that must be integers with a restricted domain
SCALAR_RULES = {
    'kernel': (lambda v: _is_integer(v) and v >= 1 and v % 2 == 1, 'an odd integer >= 1'),
    'threshold': (lambda v: _is_integer(v) and 0 <= v <= 256, 'an integer in [0, 256]'),
    'tiles': (lambda v: _is_integer(v) and v >= 1, 'an integer >= 1'),
}


def resolve_bounds(transform_id: str, overrides: Dict[str, Any]) -> Dict[str, Any]:
    """Default bounds of ``transform_id`` updated with ``overrides``; raises ValueError on a bad override."""
    defaults = CATALOG[transform_id].bounds
    resolved = dict(defaults)
    for key, value in overrides.items():
        if key not in defaults:
            raise ValueError(f'{transform_id} has no parameter {key!r}; known: {sorted(defaults)}')
        default = defaults[key]
        if isinstance(default, bool):
            if not isinstance(value, bool):
                raise ValueError(f'{transform_id}.{key} must be a boolean')
        elif isinstance(default, list) and default and isinstance(default[0], str):
            if not value or not isinstance(value, list) or any(choice not in default for choice in value):
                raise ValueError(f'{transform_id}.{key} must be a non-empty subset of {default}')
        elif isinstance(default, list):
            if not isinstance(value, (list, tuple)) or len(value) != 2 or not all(_is_number(v) for v in value):
                raise ValueError(f'{transform_id}.{key} must be a [lo, hi] pair')
            if value[0] > value[1]:
                raise ValueError(f'{transform_id}.{key} bounds out of order: {value}')
            value = list(value)
        elif key in SCALAR_RULES:
            check, expected = SCALAR_RULES[key]
            if not check(value):
                raise ValueError(f'{transform_id}.{key} must be {expected}, got {value!r}')
        elif not _is_number(value):
            raise ValueError(f'{transform_id}.{key} must be a number')
        resolved[key] = value
    return resolved
