from src import app_config

MODULE_CODE = 103

# ITU-R BT.601 luma
LUMA_WEIGHTS = (0.299, 0.587, 0.114)
CLAHE_TILE_MODES = ('grid', 'pixels')


def get_clahe_tile_mode():
    return app_config.AUGMENT_CLAHE_TILE_MODE
