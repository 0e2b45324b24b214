MODULE_CODE = 101

EDGE_TOLERANCE = 1e-7
