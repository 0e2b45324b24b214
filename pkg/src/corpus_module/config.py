import os

from src import app_config

MODULE_CODE = 107

SCHEMA_VERSION = 1
MANIFEST_NAME = 'manifest.json'
PIPELINE_NAME = 'pipeline.json'


def get_workers() -> int:
    """Corpus worker count; 0 means one worker per logical core."""
    workers = app_config.CORPUS_WORKERS
    return workers if workers > 0 else (os.cpu_count() or 1)


def get_bench_iterations() -> int:
    return app_config.BENCH_ITERATIONS


def get_bench_warmup() -> int:
    return app_config.BENCH_WARMUP
