MODULE_CODE = 106

DEFAULT_VIEWS_PER_IMAGE = 2
