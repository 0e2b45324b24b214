import os
from collections import Counter
from typing import List, Optional, Tuple

from loguru import logger
from pydantic import ValidationError

from src.core_module.exceptions import GeometryError, LookupFailure, ParameterError
from src.core_module.rng import RngStream, make_rng_stream
from src.core_module.schemas import Image, BeamDescriptor
from src.geometry_module.service import GeometryService
from src.pipeline_module.catalog import CATALOG, PRESETS, PRESET_KEYS, preset_key
from src.pipeline_module.config import MODULE_CODE
from src.pipeline_module.schemas import PipelineConfig, TransformSpec
from src.pipeline_module.transforms import TRANSFORMS

View = Tuple[Image, BeamDescriptor]


class PipelineService:
    def __init__(self, geometry: GeometryService):
        self.geometry = geometry

    @staticmethod
    def preset_names() -> List[str]:
        return list(PRESETS)

    @staticmethod
    def preset(name: str) -> PipelineConfig:
        canonical = PRESET_KEYS.get(preset_key(name))
        if canonical is None:
            raise LookupFailure(MODULE_CODE, f'unknown pipeline preset {name!r}; known: {list(PRESETS)}')
        return PipelineConfig(name=canonical,
                              transforms=[TransformSpec(transform_id=transform_id, probability=probability)
                                          for transform_id, probability in PRESETS[canonical]])

    @staticmethod
    def parse_config(document: str) -> PipelineConfig:
        try:
            return PipelineConfig.parse_raw(document)
        except ValidationError as e:
            raise ParameterError(MODULE_CODE, e.errors())
        except ValueError as e:
            raise ParameterError(MODULE_CODE, f'pipeline config is not valid JSON: {e}')

    @staticmethod
    def dump_config(config: PipelineConfig) -> str:
        return config.json(by_alias=True, indent=2)

    def load_config(self, path: str) -> PipelineConfig:
        try:
            with open(path, 'r', encoding='utf-8') as f:
                return self.parse_config(f.read())
        except OSError as e:
            raise LookupFailure(MODULE_CODE, f'cannot read pipeline config {path}: {e}')

    def resolve(self, name_or_path: str) -> PipelineConfig:
        """Preset name (case, '-' and '_' insensitive) or path of a JSON config file."""
        if preset_key(name_or_path) in PRESET_KEYS:
            return self.preset(name_or_path)
        if os.path.isfile(name_or_path):
            return self.load_config(name_or_path)
        raise LookupFailure(MODULE_CODE, f'{name_or_path!r} is neither a preset nor a config file')

    @staticmethod
    def with_seed(config: PipelineConfig, seed: Optional[int]) -> PipelineConfig:
        if seed is None:
            return config
        try:
            return PipelineConfig(**{**config.dict(), 'master_seed': seed})
        except ValidationError as e:
            raise ParameterError(MODULE_CODE, e.errors())

    def run_transform(self, spec: TransformSpec, image: Image, beam: BeamDescriptor, stream: RngStream) \
            -> Tuple[View, bool]:
        """Inclusion draw, then the parameter draws, then the transform if included."""
        transform = TRANSFORMS[spec.transform_id]
        included = stream.bernoulli(spec.probability)
        params = transform.sample(stream, spec.bounds, image, beam)
        if not included:
            return (image, beam), False
        logger.debug(f"{spec.transform_id} params {params}")
        return transform.apply(image, beam, params, stream), True

    def apply_pipeline(self, config: PipelineConfig, image: Image, beam: BeamDescriptor, stream: RngStream,
                       skipped: Optional[List[str]] = None) -> View:
        """Transforms that hit degenerate geometry are skipped; their ids are appended to ``skipped``."""
        if config.linearize_convex:
            image, beam = self.geometry.linearize(image, beam)

        occurrences = Counter()
        for spec in config.transforms:
            occurrence = occurrences[spec.transform_id]
            occurrences[spec.transform_id] += 1
            substream = stream.substream(CATALOG[spec.transform_id].stream_code, occurrence)
            try:
                (image, beam), _ = self.run_transform(spec, image, beam, substream)
            except GeometryError as e:
                logger.warning(f"{config.name}: skipped {spec.transform_id} for image {stream.image_id} "
                               f"view {stream.view_id}: {e.result}")
                if skipped is not None:
                    skipped.append(spec.transform_id)
        return image, beam

    def make_views(self, config: PipelineConfig, image: Image, beam: BeamDescriptor, image_id: int,
                   skipped: Optional[List[List[str]]] = None) -> List[View]:
        """One view per view id; with ``skipped`` given, it receives the skipped transform ids of each view."""
        views = []
        for view_id in range(config.views_per_image):
            view_skipped = []
            views.append(self.apply_pipeline(config, image, beam,
                                             make_rng_stream(config.master_seed, image_id, view_id), view_skipped))
            if skipped is not None:
                skipped.append(view_skipped)
        return views

    def make_positive_pair(self, config: PipelineConfig, image: Image, beam: BeamDescriptor, image_id: int) \
            -> Tuple[Image, Image]:
        """Two views from the same config, view ids 0 and 1."""
        first, _ = self.apply_pipeline(config, image, beam, make_rng_stream(config.master_seed, image_id, 0))
        second, _ = self.apply_pipeline(config, image, beam, make_rng_stream(config.master_seed, image_id, 1))
        return first, second
