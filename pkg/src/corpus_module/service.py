import os
import platform
import timeit
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, Tuple, TypeVar

import cv2
import numpy as np
from loguru import logger
from pydantic import ValidationError

from src.core_module.exceptions import AugmentException, CorpusEntryError, LookupFailure, ParameterError
from src.core_module.rng import make_rng_stream
from src.core_module.schemas import Image, BeamDescriptor
from src.corpus_module.config import MODULE_CODE, MANIFEST_NAME, PIPELINE_NAME
from src.corpus_module.schemas import Manifest, ManifestEntry, RawManifest, CorpusSummary, SkippedEntry, \
    RuntimeReport, TransformTiming
from src.corpus_module.utils import read_image, write_image
from src.fov_module.service import FovService
from src.pipeline_module.catalog import CATALOG
from src.pipeline_module.render import Render
from src.pipeline_module.schemas import PipelineConfig, TransformSpec
from src.pipeline_module.service import PipelineService

T = TypeVar('T')
R = TypeVar('R')


class CorpusService:
    def __init__(self, pipeline: PipelineService, fov: FovService, workers: int,
                 bench_iterations: int, bench_warmup: int):
        self.pipeline = pipeline
        self.fov = fov
        self.workers = max(1, workers)
        self.bench_iterations = bench_iterations
        self.bench_warmup = bench_warmup

    @staticmethod
    def load_manifest(path: str) -> Manifest:
        """Read a manifest; entry paths are resolved against the manifest's directory."""
        try:
            raw = RawManifest.parse_file(path)
        except OSError as e:
            raise LookupFailure(MODULE_CODE, f'cannot read manifest {path}: {e}')
        except ValidationError as e:
            raise ParameterError(MODULE_CODE, e.errors())
        base_dir = os.path.dirname(os.path.abspath(path))
        entries, rejected = [], []
        for index, document in enumerate(raw.entries):
            entry_path = os.path.join(base_dir, str(document.get('path', f'<entry {index}>')))
            try:
                entry = ManifestEntry.parse_obj(document)
            except ValidationError as e:
                error = e.errors()[0]
                reason = f"invalid entry: {'.'.join(str(loc) for loc in error['loc'])}: {error['msg']}"
                logger.warning(f"manifest {path}: skipped {entry_path}: {reason}")
                rejected.append(SkippedEntry(path=entry_path, reason=reason))
                continue
            entry.path = entry_path
            entries.append(entry)
        return Manifest(schema_version=raw.schema_version, entries=entries, rejected=rejected)

    @staticmethod
    def write_manifest(manifest: Manifest, path: str):
        with open(path, 'w', encoding='utf-8') as f:
            f.write(manifest.json(indent=2, exclude_none=True))

    @staticmethod
    def output_stems(manifest: Manifest) -> List[str]:
        """File stem per entry; stems shared by several entries get the entry index appended."""
        stems = [os.path.splitext(os.path.basename(entry.path))[0] for entry in manifest.entries]
        counts = Counter(stems)
        return [stem if counts[stem] == 1 else f'{stem}_{index}' for index, stem in enumerate(stems)]

    @staticmethod
    def load_entry(entry: ManifestEntry) -> Tuple[Image, BeamDescriptor]:
        image = read_image(entry.path)
        try:
            beam = entry.to_beam()
        except AugmentException as e:
            raise CorpusEntryError(MODULE_CODE, f'invalid beam: {e.result}')
        return image, beam

    def _map(self, func: Callable[[T], R], items: Sequence[T]) -> List[R]:
        if self.workers == 1 or len(items) <= 1:
            return [func(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.workers) as executor:
            return list(executor.map(func, items))

    def _run(self, command: str, manifest: Manifest, out_dir: str,
             process: Callable[[int, ManifestEntry, str], List[ManifestEntry]]) -> Tuple[CorpusSummary, Manifest]:
        os.makedirs(out_dir, exist_ok=True)
        stems = self.output_stems(manifest)

        def guarded(index: int):
            entry = manifest.entries[index]
            try:
                written = process(index, entry, stems[index])
                logger.info(f"{command}: {entry.path} -> {len(written)} image(s)")
                return written, None
            except AugmentException as e:
                logger.warning(f"{command}: skipped {entry.path}: {e.result}")
                return [], SkippedEntry(path=entry.path, reason=str(e.result))

        results = self._map(guarded, list(range(len(manifest.entries))))
        out_entries = [written for entries, _ in results for written in entries]
        skipped = manifest.rejected + [skip for _, skip in results if skip is not None]
        out_manifest = Manifest(entries=out_entries)
        self.write_manifest(out_manifest, os.path.join(out_dir, MANIFEST_NAME))
        summary = CorpusSummary(command=command, total=len(manifest.entries) + len(manifest.rejected),
                                written=len(out_entries), skipped=skipped)
        return summary, out_manifest

    def run_preprocess(self, manifest: Manifest, out_dir: str) -> CorpusSummary:
        """Mask every entry to its field of view and crop to the mask's bounding box."""
        def process(index: int, entry: ManifestEntry, stem: str) -> List[ManifestEntry]:
            image, beam = self.load_entry(entry)
            result = self.fov.preprocess(image, beam)
            name = f'{stem}.png'
            write_image(os.path.join(out_dir, name), result.image)
            return [ManifestEntry.from_beam(name, result.beam, entry.image_id)]

        summary, _ = self._run('preprocess', manifest, out_dir, process)
        return summary

    def run_pair_emit(self, manifest: Manifest, config: PipelineConfig, out_dir: str) -> CorpusSummary:
        """Write ``config.views_per_image`` augmented views per entry as ``{stem}_v{k}.png``."""
        def process(index: int, entry: ManifestEntry, stem: str) -> List[ManifestEntry]:
            image, beam = self.load_entry(entry)
            image_id = entry.image_id if entry.image_id is not None else index
            written = []
            for view_id, (view, view_beam) in enumerate(self.pipeline.make_views(config, image, beam, image_id)):
                name = f'{stem}_v{view_id}.png'
                write_image(os.path.join(out_dir, name), view)
                written.append(ManifestEntry.from_beam(name, view_beam, image_id))
            return written

        summary, _ = self._run('pair', manifest, out_dir, process)
        with open(os.path.join(out_dir, PIPELINE_NAME), 'w', encoding='utf-8') as f:
            f.write(self.pipeline.dump_config(config))
        return summary

    @staticmethod
    def environment_note() -> str:
        return (f'python {platform.python_version()}, numpy {np.__version__}, opencv {cv2.__version__}, '
                f'{platform.machine()} {platform.system()}, {os.cpu_count()} logical cores, single-threaded')

    def time_transform(self, spec: TransformSpec, image: Image, beam: BeamDescriptor,
                       iterations: int, warmup: int) -> TransformTiming:
        timed = TransformSpec(transform_id=spec.transform_id, probability=1.0, params=spec.params)
        durations = np.empty(iterations, dtype=np.float64)
        for index in range(warmup + iterations):
            stream = make_rng_stream(0, 0, index).substream(CATALOG[spec.transform_id].stream_code)
            start = timeit.default_timer()
            self.pipeline.run_transform(timed, image, beam, stream)
            elapsed = timeit.default_timer() - start
            if index >= warmup:
                durations[index - warmup] = elapsed * 1000.0
        return TransformTiming(transform_id=spec.transform_id, name=CATALOG[spec.transform_id].name,
                               mean_ms=float(durations.mean()), median_ms=float(np.median(durations)),
                               std_ms=float(durations.std()))

    def run_bench(self, config: PipelineConfig, image: Image, beam: BeamDescriptor,
                  iterations: Optional[int] = None, report_path: Optional[str] = None,
                  warmup: Optional[int] = None) -> RuntimeReport:
        """Time every transform of ``config`` on its own with probability forced to 1."""
        iterations = self.bench_iterations if iterations is None else iterations
        warmup = self.bench_warmup if warmup is None else warmup
        if iterations < 1 or warmup < 0:
            raise ParameterError(MODULE_CODE, f'need iterations >= 1 and warmup >= 0, got {iterations}, {warmup}')
        cv2.setNumThreads(1)
        timings = []
        for spec in config.transforms:
            timing = self.time_transform(spec, image, beam, iterations, warmup)
            logger.info(f"bench {timing.transform_id}: mean {timing.mean_ms:.3f} ms, median {timing.median_ms:.3f} ms")
            timings.append(timing)
        report = RuntimeReport(pipeline=config.name, iterations=iterations, warmup=warmup,
                               height=image.height, width=image.width, channels=image.channels,
                               environment=self.environment_note(), transforms=timings)
        if report_path is not None:
            with open(report_path, 'w', encoding='utf-8') as f:
                f.write(report.json(indent=2))
        return report

    def run_inspect(self, config_or_preset: str) -> str:
        return Render.to_table(self.pipeline.resolve(config_or_preset))
