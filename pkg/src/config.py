import os

import yaml


class Config:
    def __init__(self):
        current_path = os.path.dirname(__file__)
        parent_path = os.path.dirname(current_path)
        yaml_path = os.path.join(parent_path, 'application.yaml')
        with open(yaml_path, 'r') as yaml_conf:
            conf = yaml.safe_load(yaml_conf)[os.environ.get('APP_ENV', 'local')]
        self._config = conf
        self.APP_ENV = os.environ.get('APP_ENV', 'local')
        self.AUGMENT_OMEGA_RANGE = tuple(self._config['AUGMENT']['OMEGA_RANGE'])
        self.AUGMENT_TOP_WIDTH_FRACTION_RANGE = tuple(self._config['AUGMENT']['TOP_WIDTH_FRACTION_RANGE'])
        self.AUGMENT_DEPTH_RANGE = tuple(self._config['AUGMENT']['DEPTH_RANGE'])
        self.AUGMENT_WAVELET_ALPHA_RANGE = tuple(self._config['AUGMENT']['WAVELET_ALPHA_RANGE'])
        self.AUGMENT_GAUSSIAN_SIGMA_RANGE = tuple(self._config['AUGMENT']['GAUSSIAN_SIGMA_RANGE'])
        self.AUGMENT_CLAHE_TILE_MODE = self._config['AUGMENT']['CLAHE_TILE_MODE']
        self.CORPUS_WORKERS = int(os.environ.get('NUM_WORKERS', self._config['CORPUS']['WORKERS']))
        self.BENCH_ITERATIONS = self._config['BENCH']['ITERATIONS']
        self.BENCH_WARMUP = self._config['BENCH']['WARMUP']


DESCRIPTION = "AugUS Engine\n\n" \
              "1. Pipelines\n" \
              "    - BYOL, AugUS-O, AugUS-D, CropOnly 증강 파이프라인 조회\n" \
              "    - 초음파 영상 한 장으로 positive pair(view 0, view 1) 생성\n" \
              "2. Corpus\n" \
              "    - FOV 마스크 적용 및 FOV 경계로 crop (preprocess)\n" \
              "    - 변환별 실행 시간 측정 (bench, CLI 전용)\n\n"
