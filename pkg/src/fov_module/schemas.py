from pydantic import BaseModel

from src.core_module.schemas import Image, BeamDescriptor, FovMask


class PreprocessResult(BaseModel):
    image: Image
    beam: BeamDescriptor
    mask: FovMask
