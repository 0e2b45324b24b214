from src.corpus_module.config import get_workers, get_bench_iterations, get_bench_warmup
from src.corpus_module.service import CorpusService
from src.fov_module import service as fov_service
from src.pipeline_module import service as pipeline_service

service = CorpusService(pipeline=pipeline_service, fov=fov_service, workers=get_workers(),
                        bench_iterations=get_bench_iterations(), bench_warmup=get_bench_warmup())
