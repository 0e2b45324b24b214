import json
import os

import numpy as np
import pytest

from src.core_module.exceptions import LookupFailure, ParameterError, CorpusEntryError
from src.corpus_module import service
from src.corpus_module.schemas import Manifest, RuntimeReport
from src.corpus_module.utils import read_image, decode_png, encode_png
from src.pipeline_module import service as pipeline_service
from src.pipeline_module.schemas import PipelineConfig, TransformSpec


def files_of(directory) -> dict:
    return {name: (directory / name).read_bytes() for name in sorted(os.listdir(directory))}


class TestManifest:
    def test_paths_resolve_against_the_manifest(self, corpus):
        manifest = service.load_manifest(str(corpus))
        assert manifest.entries[0].path == os.path.join(str(corpus.parent), 'a/liver.png')

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(LookupFailure):
            service.load_manifest(str(tmp_path / 'manifest.json'))

    def test_unsupported_version(self, tmp_path):
        path = tmp_path / 'manifest.json'
        path.write_text('{"schema_version": 2, "entries": []}')
        with pytest.raises(ParameterError):
            service.load_manifest(str(path))

    def test_invalid_entries_are_set_aside(self, corpus):
        document = json.loads(corpus.read_text())
        good = document['entries'][0]
        document['entries'] = [good, dict(good, path='fan.png', probe_type='convex'),
                                 {k: v for k, v in good.items() if k != 'p3'}]
        corpus.write_text(json.dumps(document))
        manifest = service.load_manifest(str(corpus))
        assert len(manifest.entries) == 1
        assert [os.path.basename(skip.path) for skip in manifest.rejected] == ['fan.png', 'liver.png']
        assert 'probe_type' in manifest.rejected[0].reason
        assert 'rejected' not in json.loads(manifest.json())

    def test_duplicate_stems(self, corpus):
        assert service.output_stems(service.load_manifest(str(corpus))) == ['liver_0', 'liver_1', 'heart']


class TestImageFiles:
    def test_rgb_survives_the_codec(self, rgb_image):
        np.testing.assert_array_equal(decode_png(encode_png(rgb_image)).data, rgb_image.data)

    def test_not_an_image(self):
        with pytest.raises(CorpusEntryError):
            decode_png(b'not a png')

    def test_unreadable_path(self, tmp_path):
        with pytest.raises(CorpusEntryError):
            read_image(str(tmp_path / 'nothing.png'))


class TestPreprocess:
    def test_writes_every_entry(self, corpus, tmp_path):
        out = tmp_path / 'pre'
        summary = service.run_preprocess(service.load_manifest(str(corpus)), str(out))
        assert (summary.total, summary.written, summary.succeeded) == (3, 3, True)
        assert sorted(os.listdir(out)) == ['heart.png', 'liver_0.png', 'liver_1.png', 'manifest.json']

    def test_cropped_to_the_beam(self, corpus, tmp_path):
        out = tmp_path / 'pre'
        service.run_preprocess(service.load_manifest(str(corpus)), str(out))
        manifest = service.load_manifest(str(out / 'manifest.json'))
        first = read_image(manifest.entries[0].path)
        assert (first.height, first.width) == (108, 88)
        assert manifest.entries[0].p1 == (0.0, 0.0)
        assert manifest.entries[2].image_id == 40

    def test_idempotent(self, corpus, tmp_path):
        service.run_preprocess(service.load_manifest(str(corpus)), str(tmp_path / 'once'))
        service.run_preprocess(service.load_manifest(str(tmp_path / 'once' / 'manifest.json')), str(tmp_path / 'twice'))
        once, twice = files_of(tmp_path / 'once'), files_of(tmp_path / 'twice')
        for name in ('heart.png', 'liver_0.png', 'liver_1.png'):
            assert once[name] == twice[name]

    def test_bad_entries_are_skipped(self, broken_corpus, tmp_path):
        summary = service.run_preprocess(service.load_manifest(str(broken_corpus)), str(tmp_path / 'pre'))
        assert (summary.total, summary.written) == (5, 3)
        assert not summary.succeeded
        assert [os.path.basename(skip.path) for skip in summary.skipped] == ['missing.png', 'heart.png']

    def test_invalid_probe_type_only_skips_its_entry(self, corpus, tmp_path):
        document = json.loads(corpus.read_text())
        document['entries'] = [document['entries'][0], dict(document['entries'][2], probe_type='convex')]
        corpus.write_text(json.dumps(document))
        out = tmp_path / 'pre'
        summary = service.run_preprocess(service.load_manifest(str(corpus)), str(out))
        assert (summary.total, summary.written, len(summary.skipped)) == (2, 1, 1)
        assert os.path.basename(summary.skipped[0].path) == 'heart.png'
        assert 'liver.png' in os.listdir(out)


class TestPairEmit:
    def test_two_views_per_entry(self, corpus, tmp_path):
        out = tmp_path / 'pairs'
        config = pipeline_service.with_seed(pipeline_service.preset('AugUS-O'), 7)
        summary = service.run_pair_emit(service.load_manifest(str(corpus)), config, str(out))
        assert summary.written == 6
        assert len([name for name in os.listdir(out) if name.endswith('.png')]) == 6
        assert pipeline_service.load_config(str(out / 'pipeline.json')) == config
        manifest = Manifest.parse_file(str(out / 'manifest.json'))
        assert [entry.image_id for entry in manifest.entries] == [0, 0, 1, 1, 40, 40]

    def test_deterministic(self, corpus, tmp_path):
        config = pipeline_service.with_seed(pipeline_service.preset('BYOL'), 11)
        manifest = service.load_manifest(str(corpus))
        service.run_pair_emit(manifest, config, str(tmp_path / 'first'))
        service.run_pair_emit(manifest, config, str(tmp_path / 'second'))
        assert files_of(tmp_path / 'first') == files_of(tmp_path / 'second')

    def test_seed_changes_the_views(self, corpus, tmp_path):
        manifest = service.load_manifest(str(corpus))
        service.run_pair_emit(manifest, pipeline_service.with_seed(pipeline_service.preset('BYOL'), 1),
                              str(tmp_path / 'first'))
        service.run_pair_emit(manifest, pipeline_service.with_seed(pipeline_service.preset('BYOL'), 2),
                              str(tmp_path / 'second'))
        first, second = files_of(tmp_path / 'first'), files_of(tmp_path / 'second')
        assert first['liver_0_v0.png'] != second['liver_0_v0.png']

    def test_views_match_the_input_size(self, corpus, tmp_path):
        out = tmp_path / 'pairs'
        service.run_pair_emit(service.load_manifest(str(corpus)), pipeline_service.preset('AugUS-D'), str(out))
        assert read_image(str(out / 'heart_v1.png')).data.shape == (128, 128, 1)
        assert read_image(str(out / 'liver_1_v0.png')).data.shape == (128, 128, 3)


class TestBench:
    def test_one_timing_per_transform(self, textured_image, convex_beam, tmp_path):
        report_path = tmp_path / 'runtime.json'
        report = service.run_bench(pipeline_service.preset('AugUS-O'), textured_image, convex_beam,
                                   iterations=2, warmup=0, report_path=str(report_path))
        assert [timing.transform_id for timing in report.transforms] == \
               [spec.transform_id for spec in pipeline_service.preset('AugUS-O').transforms]
        assert all(timing.mean_ms > 0 for timing in report.transforms)
        assert RuntimeReport.parse_file(str(report_path)) == report
        assert json.loads(report_path.read_text())['iterations'] == 2

    @pytest.mark.parametrize('slower, faster, image', [
        ('U02', 'U09', 'textured_image'),
        ('U03', 'U04', 'textured_image'),
        ('U07', 'U08', 'textured_image'),
        ('B02', 'B01', 'rgb_image'),
    ])
    def test_relative_cost(self, slower, faster, image, linear_beam, request):
        config = PipelineConfig(name='cost', transforms=[TransformSpec(transform_id=slower, probability=0.1),
                                                         TransformSpec(transform_id=faster, probability=0.1)])
        report = service.run_bench(config, request.getfixturevalue(image), linear_beam, iterations=5, warmup=1)
        timings = {timing.transform_id: timing.median_ms for timing in report.transforms}
        assert timings[slower] > timings[faster]

    def test_single_transform(self, textured_image, linear_beam):
        report = service.run_bench(pipeline_service.preset('CropOnly'), textured_image, linear_beam,
                                   iterations=3, warmup=0)
        assert len(report.transforms) == 1
        assert report.transforms[0].name == 'Crop and resize'
        assert (report.height, report.width, report.channels) == (128, 128, 1)

    def test_bad_iterations(self, textured_image, linear_beam):
        with pytest.raises(ParameterError):
            service.run_bench(pipeline_service.preset('BYOL'), textured_image, linear_beam, iterations=0)


def test_inspect():
    assert service.run_inspect('byol').splitlines()[0] == '# BYOL (seed 0, 2 views)'
