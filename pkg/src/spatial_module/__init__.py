from src.spatial_module.config import ROTATE_THEN_SHIFT
from src.spatial_module.service import SpatialService

service = SpatialService(rotate_then_shift=ROTATE_THEN_SHIFT)
