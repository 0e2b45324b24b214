MODULE_CODE = 105

CROP_ATTEMPTS = 10
DEFAULT_MIN_AREA = 0.08
DEFAULT_ASPECT_RANGE = (0.75, 4.0 / 3.0)

# U11 order: True rotates about the centre then shifts, False shifts then rotates
ROTATE_THEN_SHIFT = True
