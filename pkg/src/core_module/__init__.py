from src.core_module.rng import RngStream, make_rng_stream, sample_uniform
from src.core_module.schemas import Image, BeamDescriptor, FovMask, ProbeType
