import json

import pytest

from src.corpus_module.schemas import Manifest, ManifestEntry
from src.corpus_module.utils import write_image


@pytest.fixture
def corpus(tmp_path, textured_image, rgb_image, linear_beam, convex_beam):
    """Three scans on disk, two of them sharing a file name."""
    source = tmp_path / 'scans'
    (source / 'a').mkdir(parents=True)
    (source / 'b').mkdir()
    write_image(str(source / 'a' / 'liver.png'), textured_image)
    write_image(str(source / 'b' / 'liver.png'), rgb_image)
    write_image(str(source / 'heart.png'), textured_image)
    manifest = Manifest(entries=[
        ManifestEntry.from_beam('a/liver.png', linear_beam),
        ManifestEntry.from_beam('b/liver.png', convex_beam),
        ManifestEntry.from_beam('heart.png', convex_beam, image_id=40),
    ])
    path = source / 'manifest.json'
    path.write_text(manifest.json(indent=2, exclude_none=True))
    return path


@pytest.fixture
def broken_corpus(corpus):
    """The corpus with a missing image and a degenerate beam appended."""
    document = json.loads(corpus.read_text())
    missing = dict(document['entries'][0], path='missing.png')
    flat = dict(document['entries'][0], path='heart.png', p3=[20, 10], p4=[107, 10])
    document['entries'] += [missing, flat]
    corpus.write_text(json.dumps(document))
    return corpus

