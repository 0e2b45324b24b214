from src.geometry_module import service as geometry_service
from src.pipeline_module.service import PipelineService

service = PipelineService(geometry=geometry_service)
