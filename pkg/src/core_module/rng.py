import math
from typing import Sequence, Tuple, TypeVar

import numpy as np

from src.core_module.config import MODULE_CODE
from src.core_module.exceptions import ParameterError

SEED_MASK = (1 << 64) - 1
BULK_KEY = 0xB01C

T = TypeVar('T')


class RngStream:
    """
    Random source whose draws are a pure function of (master_seed, image_id, view_id, spawn_key).

    Scalar draws advance ``draw_counter`` by exactly one. Array-valued noise comes from
    ``bulk()``, a separate generator, so the scalar sequence never depends on image size.
    """

    def __init__(self, master_seed: int, image_id: int, view_id: int, spawn_key: Tuple[int, ...] = ()):
        if image_id < 0 or view_id < 0 or any(key < 0 for key in spawn_key):
            raise ParameterError(MODULE_CODE, 'image_id, view_id and spawn keys must be non-negative')
        self.master_seed = int(master_seed) & SEED_MASK
        self.image_id = int(image_id)
        self.view_id = int(view_id)
        self.spawn_key = tuple(int(key) for key in spawn_key)
        self.draw_counter = 0
        self._seed_sequence = np.random.SeedSequence(entropy=self.master_seed,
                                                     spawn_key=(self.image_id, self.view_id) + self.spawn_key)
        self._generator = np.random.Generator(np.random.PCG64(self._seed_sequence))

    def __repr__(self):
        return (f"RngStream(master_seed={self.master_seed}, image_id={self.image_id}, view_id={self.view_id}, "
                f"spawn_key={self.spawn_key}, draw_counter={self.draw_counter})")

    def _next(self) -> float:
        self.draw_counter += 1
        return float(self._generator.random())

    def uniform(self, lo: float, hi: float) -> float:
        if lo > hi:
            raise ParameterError(MODULE_CODE, f'uniform bounds out of order: lo={lo} > hi={hi}')
        u = self._next()
        if lo == hi:
            return float(lo)
        value = lo + (hi - lo) * u
        # lo + (hi - lo) * u can round up to hi
        return min(value, math.nextafter(hi, lo))

    def integer(self, lo: int, hi: int) -> int:
        """Uniform integer in the closed range [lo, hi]."""
        if lo > hi:
            raise ParameterError(MODULE_CODE, f'integer bounds out of order: lo={lo} > hi={hi}')
        u = self._next()
        return min(int(lo + math.floor(u * (hi - lo + 1))), hi)

    def bernoulli(self, p: float) -> bool:
        return self._next() < p

    def choice(self, options: Sequence[T]) -> T:
        if len(options) == 0:
            raise ParameterError(MODULE_CODE, 'cannot choose from an empty set')
        return options[self.integer(0, len(options) - 1)]

    def substream(self, *key: int) -> 'RngStream':
        return RngStream(self.master_seed, self.image_id, self.view_id, self.spawn_key + tuple(key))

    def bulk(self) -> np.random.Generator:
        """Generator for array-valued noise; each call restarts the same sequence."""
        return np.random.Generator(np.random.PCG64(
            np.random.SeedSequence(entropy=self.master_seed,
                                   spawn_key=(self.image_id, self.view_id) + self.spawn_key + (BULK_KEY,))))


def make_rng_stream(master_seed: int, image_id: int, view_id: int) -> RngStream:
    return RngStream(master_seed, image_id, view_id)


def sample_uniform(stream: RngStream, lo: float, hi: float) -> float:
    return stream.uniform(lo, hi)
