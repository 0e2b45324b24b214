from src.fov_module.service import FovService

service = FovService()
