"""
Batch command line.

    python -m src preprocess --manifest M --out D
    python -m src pair --manifest M --pipeline {byol|augus-o|augus-d|crop-only|FILE} --seed N --out D
    python -m src bench --pipeline P --image F --beam FILE --iters 1000 --report F
    python -m src inspect --pipeline P
    python -m src serve --port 8000
"""
import argparse
import json
import sys

from loguru import logger

from src.core_module.config import MODULE_CODE
from src.core_module.exceptions import AugmentException, LookupFailure
from src.core_module.schemas import BeamDescriptor
from src.logger import setup_logging


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='python -m src', description='Ultrasound augmentation engine')
    commands = parser.add_subparsers(dest='command', required=True)

    preprocess = commands.add_parser('preprocess', help='mask and crop every manifest entry to its field of view')
    preprocess.add_argument('--manifest', required=True)
    preprocess.add_argument('--out', required=True)

    pair = commands.add_parser('pair', help='write augmented views for every manifest entry')
    pair.add_argument('--manifest', required=True)
    pair.add_argument('--pipeline', required=True, help='preset name or pipeline JSON file')
    pair.add_argument('--seed', type=int, default=None, help='overrides the seed of the pipeline')
    pair.add_argument('--out', required=True)

    bench = commands.add_parser('bench', help='time every transform of a pipeline on one image')
    bench.add_argument('--pipeline', required=True)
    bench.add_argument('--image', required=True)
    bench.add_argument('--beam', required=True, help='beam descriptor JSON file')
    bench.add_argument('--iters', type=int, default=None)
    bench.add_argument('--warmup', type=int, default=None)
    bench.add_argument('--report', default=None)

    inspect = commands.add_parser('inspect', help='print transform order, probabilities and parameter bounds')
    inspect.add_argument('--pipeline', required=True)

    serve = commands.add_parser('serve', help='run the HTTP API')
    serve.add_argument('--host', default='0.0.0.0')
    serve.add_argument('--port', type=int, default=8000)
    return parser


def read_beam(path: str) -> BeamDescriptor:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return BeamDescriptor.create(**json.load(f))
    except (OSError, ValueError) as e:
        raise LookupFailure(MODULE_CODE, f'cannot read beam descriptor {path}: {e}')


def report_failure(payload: dict) -> int:
    sys.stderr.write(json.dumps(payload, ensure_ascii=False) + '\n')
    return 1


def run(args: argparse.Namespace) -> int:
    if args.command == 'serve':
        from src.main import serve
        serve(args.host, args.port)
        return 0

    from src.corpus_module import service as corpus_service
    from src.corpus_module.utils import read_image
    from src.pipeline_module import service as pipeline_service

    if args.command == 'inspect':
        print(corpus_service.run_inspect(args.pipeline))
        return 0
    if args.command == 'bench':
        config = pipeline_service.resolve(args.pipeline)
        report = corpus_service.run_bench(config, read_image(args.image), read_beam(args.beam),
                                          iterations=args.iters, report_path=args.report, warmup=args.warmup)
        if args.report is None:
            print(report.json(indent=2))
        return 0

    manifest = corpus_service.load_manifest(args.manifest)
    if args.command == 'preprocess':
        summary = corpus_service.run_preprocess(manifest, args.out)
    else:
        config = pipeline_service.with_seed(pipeline_service.resolve(args.pipeline), args.seed)
        summary = corpus_service.run_pair_emit(manifest, config, args.out)
    logger.info(f"{summary.command}: {summary.written} image(s) written, {len(summary.skipped)} entries skipped")
    if not summary.succeeded:
        return report_failure(json.loads(summary.json()))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(sink=sys.stderr)
    try:
        return run(args)
    except AugmentException as e:
        return report_failure({"code": e.code, "message": e.message, "result": e.result})


if __name__ == '__main__':
    sys.exit(main())
