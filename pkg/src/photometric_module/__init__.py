from src.photometric_module.config import get_clahe_tile_mode
from src.photometric_module.service import PhotometricService

service = PhotometricService(clahe_tile_mode=get_clahe_tile_mode())
