from typing import Any, Dict, List

from pydantic import BaseModel, Extra, Field, validator

from src.core_module.schemas import BeamDescriptor
from src.pipeline_module.catalog import CATALOG, resolve_bounds
from src.pipeline_module.config import DEFAULT_VIEWS_PER_IMAGE

SEED_LIMIT = 1 << 64


class TransformSpec(BaseModel):
    transform_id: str = Field(..., alias='id')
    probability: float = Field(..., alias='p')
    params: Dict[str, Any] = Field(default_factory=dict)

    class Config:
        extra = Extra.forbid
        allow_population_by_field_name = True

    @validator('transform_id')
    def check_transform_id(cls, transform_id):
        if transform_id not in CATALOG:
            raise ValueError(f'unknown transform {transform_id!r}')
        return transform_id

    @validator('probability')
    def check_probability(cls, probability):
        if not 0 <= probability <= 1:
            raise ValueError(f'probability must lie in [0, 1], got {probability}')
        return probability

    @validator('params')
    def check_params(cls, params, values):
        if 'transform_id' in values:
            resolve_bounds(values['transform_id'], params)
        return params

    @property
    def bounds(self) -> Dict[str, Any]:
        return resolve_bounds(self.transform_id, self.params)


class PipelineConfig(BaseModel):
    name: str
    transforms: List[TransformSpec]
    master_seed: int = Field(0, alias='seed')
    views_per_image: int = Field(DEFAULT_VIEWS_PER_IMAGE, alias='views')
    linearize_convex: bool = False

    class Config:
        extra = Extra.forbid
        allow_population_by_field_name = True

    @validator('master_seed')
    def check_seed(cls, master_seed):
        if not 0 <= master_seed < SEED_LIMIT:
            raise ValueError(f'seed must be a 64-bit unsigned integer, got {master_seed}')
        return master_seed

    @validator('views_per_image')
    def check_views(cls, views_per_image):
        if views_per_image < 1:
            raise ValueError(f'views per image must be at least 1, got {views_per_image}')
        return views_per_image


class AugmentedView(BaseModel):
    view_id: int
    image: str = Field(..., description='base64 encoded PNG')
    beam: BeamDescriptor
    skipped: List[str] = Field(default_factory=list, description='transforms skipped for degenerate geometry')


class PairResult(BaseModel):
    pipeline: str
    seed: int
    image_id: int
    views: List[AugmentedView]
