from fastapi import APIRouter, Form, File, UploadFile
from fastapi.responses import JSONResponse

from src.corpus_module import service
from src.corpus_module.config import MODULE_CODE
from src.corpus_module.utils import decode_png, encode_png_base64
from src.pipeline_module.router import parse_beam
from src.response import Response

router = APIRouter(
    prefix="/corpus",
    tags=["corpus"],
    responses={404: {"description": "Not found"}},
    default_response_class=JSONResponse,
)


@router.post("/preprocess", response_model=Response)
async def preprocess_image(image: UploadFile = File(..., description='8-bit PNG 이미지'),
                           beam: str = Form(..., description='beam descriptor JSON')):
    """
    FOV mask 적용 후 bounding box로 crop\n
    crop된 이미지와 이동된 beam descriptor를 반환합니다.
    """
    result = service.fov.preprocess(decode_png(await image.read()), parse_beam(beam))
    return Response.from_result(MODULE_CODE, {
        "image": encode_png_base64(result.image),
        "beam": result.beam,
        "height": result.image.height,
        "width": result.image.width,
    })
