import base64

import cv2
import numpy as np

from src.core_module.exceptions import CorpusEntryError
from src.core_module.schemas import Image
from src.corpus_module.config import MODULE_CODE


def decode_png(payload: bytes) -> Image:
    """Decode an 8-bit image file into RGB (or single-channel) pixel order."""
    data = cv2.imdecode(np.frombuffer(payload, dtype=np.uint8), cv2.IMREAD_UNCHANGED)
    if data is None:
        raise CorpusEntryError(MODULE_CODE, 'image could not be decoded')
    if data.dtype != np.uint8:
        raise CorpusEntryError(MODULE_CODE, f'only 8-bit images are supported, got {data.dtype}')
    if data.ndim == 3 and data.shape[2] == 4:
        data = cv2.cvtColor(data, cv2.COLOR_BGRA2RGB)
    elif data.ndim == 3 and data.shape[2] == 3:
        data = cv2.cvtColor(data, cv2.COLOR_BGR2RGB)
    return Image.from_array(data)


def encode_png(image: Image) -> bytes:
    data = image.data[:, :, 0] if image.channels == 1 else cv2.cvtColor(image.data, cv2.COLOR_RGB2BGR)
    ok, buffer = cv2.imencode('.png', data)
    if not ok:
        raise CorpusEntryError(MODULE_CODE, 'image could not be encoded as PNG')
    return buffer.tobytes()


def encode_png_base64(image: Image) -> str:
    return base64.b64encode(encode_png(image)).decode('ascii')


def read_image(path: str) -> Image:
    try:
        with open(path, 'rb') as f:
            payload = f.read()
    except OSError as e:
        raise CorpusEntryError(MODULE_CODE, f'cannot read {path}: {e.strerror}')
    return decode_png(payload)


def write_image(path: str, image: Image):
    with open(path, 'wb') as f:
        f.write(encode_png(image))
