from src import app_config

MODULE_CODE = 104

MOTHER_WAVELETS = ('db2', 'db5')
WAVELET_LEVELS = 3
WAVELET_COARSE_LEVEL = 2
BLUR_KERNEL = 13


def get_wavelet_alpha_range():
    return app_config.AUGMENT_WAVELET_ALPHA_RANGE


def get_gaussian_sigma_range():
    return app_config.AUGMENT_GAUSSIAN_SIGMA_RANGE
