from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, Extra, Field, validator

from src.core_module.schemas import BeamDescriptor, ProbeType
from src.corpus_module.config import SCHEMA_VERSION

Point = Tuple[float, float]


def check_schema_version(schema_version: int) -> int:
    if schema_version != SCHEMA_VERSION:
        raise ValueError(f'unsupported manifest schema version {schema_version}')
    return schema_version


class ManifestEntry(BaseModel):
    path: str
    probe_type: ProbeType
    p1: Point
    p2: Point
    p3: Point
    p4: Point
    p0: Optional[Point] = None
    theta0: Optional[float] = None
    original_aspect: Optional[float] = None
    image_id: Optional[int] = None

    class Config:
        extra = Extra.forbid

    def to_beam(self) -> BeamDescriptor:
        return BeamDescriptor.create(probe_type=self.probe_type, p1=self.p1, p2=self.p2, p3=self.p3, p4=self.p4,
                                     p0=self.p0, theta0=self.theta0, original_aspect=self.original_aspect)

    @classmethod
    def from_beam(cls, path: str, beam: BeamDescriptor, image_id: Optional[int] = None) -> 'ManifestEntry':
        return cls(path=path, probe_type=beam.probe_type, p1=beam.p1, p2=beam.p2, p3=beam.p3, p4=beam.p4,
                   p0=beam.p0, theta0=beam.theta0, original_aspect=beam.original_aspect, image_id=image_id)


class SkippedEntry(BaseModel):
    path: str
    reason: str


class Manifest(BaseModel):
    schema_version: int = SCHEMA_VERSION
    entries: List[ManifestEntry]
    # entries that failed validation while loading; never written back
    rejected: List[SkippedEntry] = Field(default_factory=list, exclude=True)

    class Config:
        extra = Extra.forbid

    _check_version = validator('schema_version', allow_reuse=True)(check_schema_version)


class RawManifest(BaseModel):
    """Manifest whose entries are validated one by one, so a bad entry only skips itself."""
    schema_version: int = SCHEMA_VERSION
    entries: List[Dict[str, Any]]

    class Config:
        extra = Extra.forbid

    _check_version = validator('schema_version', allow_reuse=True)(check_schema_version)


class CorpusSummary(BaseModel):
    command: str
    total: int
    written: int
    skipped: List[SkippedEntry] = []

    @property
    def succeeded(self) -> bool:
        return not self.skipped


class TransformTiming(BaseModel):
    transform_id: str
    name: str
    mean_ms: float
    median_ms: float
    std_ms: float

    @validator('mean_ms', 'median_ms', 'std_ms')
    def check_time(cls, value, field):
        if value < 0:
            raise ValueError(f'{field.name} must not be negative')
        return value


class RuntimeReport(BaseModel):
    schema_version: int = SCHEMA_VERSION
    pipeline: str
    iterations: int
    warmup: int
    height: int
    width: int
    channels: int
    environment: str
    transforms: List[TransformTiming]

    @validator('iterations')
    def check_iterations(cls, iterations):
        if iterations < 1:
            raise ValueError(f'iterations must be at least 1, got {iterations}')
        return iterations
