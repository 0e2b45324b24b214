MODULE_CODE = 100
