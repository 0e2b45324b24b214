from src import app_config

MODULE_CODE = 102

RHO_RANGE = (1.0, 2.0)
OUT_OF_SOURCE = -2.0


def get_omega_range():
    return app_config.AUGMENT_OMEGA_RANGE


def get_top_width_fraction_range():
    return app_config.AUGMENT_TOP_WIDTH_FRACTION_RANGE


def get_depth_range():
    return app_config.AUGMENT_DEPTH_RANGE
