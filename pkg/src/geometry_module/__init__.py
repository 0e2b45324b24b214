from src.geometry_module.config import get_omega_range, get_top_width_fraction_range, get_depth_range
from src.geometry_module.service import GeometryService

service = GeometryService(omega_range=get_omega_range(),
                          top_width_fraction_range=get_top_width_fraction_range(),
                          depth_range=get_depth_range())
