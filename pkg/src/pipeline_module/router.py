import json

from fastapi import APIRouter, Path, Form, File, UploadFile
from fastapi.responses import JSONResponse
from pydantic import ValidationError

from src.core_module.exceptions import GeometryError
from src.core_module.schemas import BeamDescriptor
from src.corpus_module.utils import decode_png, encode_png_base64
from src.pipeline_module import service
from src.pipeline_module.config import MODULE_CODE
from src.pipeline_module.render import Render
from src.pipeline_module.schemas import AugmentedView, PairResult
from src.response import Response

router = APIRouter(
    prefix="/pipelines",
    tags=["pipelines"],
    responses={404: {"description": "Not found"}},
    default_response_class=JSONResponse,
)


def parse_beam(beam: str) -> BeamDescriptor:
    try:
        return BeamDescriptor.create(**json.loads(beam))
    except (ValueError, TypeError, ValidationError) as e:
        raise GeometryError(MODULE_CODE, f'beam is not a valid descriptor: {e}')


@router.get("", response_model=Response)
def get_pipeline_list():
    """
    preset pipeline 목록
    """
    return Response.from_result(MODULE_CODE, service.preset_names())


@router.get("/{name}", response_model=Response)
def get_pipeline(name: str = Path(..., description='preset 이름 (BYOL, AugUS-O, AugUS-D, CropOnly)')):
    """
    preset pipeline 설정과 변환 순서, 확률, 파라미터 범위
    """
    return Response.from_result(MODULE_CODE, Render.to_details(service.preset(name)))


@router.post("/{name}/pair", response_model=Response)
async def create_pair(name: str = Path(..., description='preset 이름'),
                      image: UploadFile = File(..., description='8-bit PNG 이미지'),
                      beam: str = Form(..., description='beam descriptor JSON'),
                      seed: int = Form(0, description='master seed'),
                      image_id: int = Form(0, description='이미지 id')):
    """
    positive pair 생성\n
        - 같은 (seed, image_id)이면 항상 같은 결과
        - 각 view의 beam descriptor와 skip된 변환 id 포함
    """
    config = service.with_seed(service.preset(name), seed)
    skipped = []
    views = service.make_views(config, decode_png(await image.read()), parse_beam(beam), image_id, skipped)
    result = PairResult(pipeline=config.name, seed=config.master_seed, image_id=image_id,
                        views=[AugmentedView(view_id=view_id, image=encode_png_base64(view), beam=view_beam,
                                             skipped=view_skipped)
                               for view_id, ((view, view_beam), view_skipped) in enumerate(zip(views, skipped))])
    return Response.from_result(MODULE_CODE, result)
