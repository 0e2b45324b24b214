import math

import numpy as np
import pytest

from src.core_module.schemas import Image, BeamDescriptor, ProbeType

SIZE = 128


def sector_beam(probe_type: ProbeType, apex, half_angle_deg: float, top_y: float, bottom_y: float) -> BeamDescriptor:
    x0, y0 = apex
    spread = math.tan(math.radians(half_angle_deg))
    top, bottom = (top_y - y0) * spread, (bottom_y - y0) * spread
    return BeamDescriptor.create(probe_type=probe_type,
                                 p1=(x0 - top, top_y), p2=(x0 + top, top_y),
                                 p3=(x0 - bottom, bottom_y), p4=(x0 + bottom, bottom_y))


@pytest.fixture
def gradient_image() -> Image:
    y, x = np.mgrid[0:SIZE, 0:SIZE]
    return Image.from_array((x + y).astype(np.uint8))


@pytest.fixture
def rgb_image() -> Image:
    rng = np.random.default_rng(7)
    return Image.from_array(rng.integers(0, 256, size=(SIZE, SIZE, 3), dtype=np.uint8))


@pytest.fixture
def textured_image() -> Image:
    """Smooth gray texture with enough structure for every transform to leave a trace."""
    y, x = np.mgrid[0:SIZE, 0:SIZE].astype(np.float64)
    values = 120 + 60 * np.sin(x / 9.0) * np.cos(y / 13.0) + 0.4 * x
    return Image.from_float(values)


@pytest.fixture
def full_frame_beam() -> BeamDescriptor:
    return BeamDescriptor.create(probe_type=ProbeType.LINEAR, p1=(0, 0), p2=(SIZE - 1, 0),
                                 p3=(0, SIZE - 1), p4=(SIZE - 1, SIZE - 1))


@pytest.fixture
def linear_beam() -> BeamDescriptor:
    return BeamDescriptor.create(probe_type=ProbeType.LINEAR, p1=(20, 10), p2=(107, 10),
                                 p3=(20, 117), p4=(107, 117))


@pytest.fixture
def convex_beam() -> BeamDescriptor:
    return sector_beam(ProbeType.CURVILINEAR, (63.5, -20.0), 20.0, 10.0, 110.0)


@pytest.fixture
def phased_beam() -> BeamDescriptor:
    return sector_beam(ProbeType.PHASED_ARRAY, (63.5, 5.0), 30.0, 6.0, 100.0)
