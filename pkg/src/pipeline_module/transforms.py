from typing import Any, Dict, Tuple

from src.core_module.exceptions import GeometryError
from src.core_module.rng import RngStream
from src.core_module.schemas import Image, BeamDescriptor
from src.fov_module import service as fov_service
from src.geometry_module import service as geometry_service
from src.noise_module import service as noise_service
from src.photometric_module import service as photometric_service
from src.spatial_module import service as spatial_service

Bounds = Dict[str, Any]
Params = Dict[str, Any]


class Transform:
    """
    One catalog entry.

    ``sample`` performs the transform's fixed number of scalar draws and must not
    depend on whether the transform is later applied. ``apply`` is deterministic
    given the sampled params, apart from array noise taken from ``stream.bulk()``.
    """
    transform_id = ''

    def sample(self, stream: RngStream, bounds: Bounds, image: Image, beam: BeamDescriptor) -> Params:
        return {}

    def apply(self, image: Image, beam: BeamDescriptor, params: Params, stream: RngStream) \
            -> Tuple[Image, BeamDescriptor]:
        raise NotImplementedError


class CropResize(Transform):
    transform_id = 'B00'

    def sample(self, stream, bounds, image, beam):
        crop_params = spatial_service.make_crop_params(min_area_c=bounds['area'][0], max_area=bounds['area'][1],
                                                       aspect_lo=bounds['aspect'][0], aspect_hi=bounds['aspect'][1],
                                                       fov_only=bounds['fov_only'])
        mask = None
        if crop_params.fov_only:
            try:
                mask = fov_service.build_fov_mask(beam, image.height, image.width)
            except GeometryError:
                mask = None
        return {'window': spatial_service.sample_crop_window(image.height, image.width, crop_params, stream, mask)}

    def apply(self, image, beam, params, stream):
        window = params['window']
        return (spatial_service.apply_crop_window(image, window),
                spatial_service.crop_beam(beam, window, image.height, image.width))


class HorizontalReflection(Transform):
    transform_id = 'B01'

    def apply(self, image, beam, params, stream):
        return spatial_service.hflip(image), spatial_service.hflip_beam(beam, image.width)


class UltrasoundHorizontalReflection(HorizontalReflection):
    transform_id = 'U10'


class ColorJitter(Transform):
    transform_id = 'B02'

    def sample(self, stream, bounds, image, beam):
        return {'b': stream.uniform(*bounds['brightness']), 'k': stream.uniform(*bounds['contrast']),
                's': stream.uniform(*bounds['saturation']), 'h': stream.uniform(*bounds['hue'])}

    def apply(self, image, beam, params, stream):
        return photometric_service.color_jitter(image, **params), beam


class Grayscale(Transform):
    transform_id = 'B03'

    def apply(self, image, beam, params, stream):
        return photometric_service.to_grayscale(image), beam


class GaussianBlur(Transform):
    transform_id = 'B04'

    def sample(self, stream, bounds, image, beam):
        return {'kernel': int(bounds['kernel']), 'sigma': stream.uniform(*bounds['sigma'])}

    def apply(self, image, beam, params, stream):
        return noise_service.gaussian_blur(image, **params), beam


class Solarization(Transform):
    transform_id = 'B05'

    def sample(self, stream, bounds, image, beam):
        return {'threshold': int(bounds['threshold'])}

    def apply(self, image, beam, params, stream):
        return photometric_service.solarize(image, params['threshold']), beam


class ProbeTypeChange(Transform):
    transform_id = 'U00'

    def sample(self, stream, bounds, image, beam):
        return {'geometry': geometry_service.sample_probe_params(stream, tuple(bounds['rho']), tuple(bounds['omega']))}

    def apply(self, image, beam, params, stream):
        return geometry_service.change_probe_type(image, beam, params['geometry'])


class ConvexityChange(Transform):
    transform_id = 'U01'

    def sample(self, stream, bounds, image, beam):
        return {'fraction': geometry_service.sample_top_width_fraction(stream, tuple(bounds['top_width_fraction']))}

    def apply(self, image, beam, params, stream):
        return geometry_service.change_convexity(image, beam, params['fraction'])


class WaveletDenoising(Transform):
    transform_id = 'U02'

    def sample(self, stream, bounds, image, beam):
        return {'wavelet': noise_service.sample_wavelet_params(stream, tuple(bounds['alpha']),
                                                               tuple(bounds['wavelets']))}

    def apply(self, image, beam, params, stream):
        denoised = noise_service.wavelet_denoise(image, params['wavelet'])
        return fov_service.apply_mask(denoised, fov_service.build_fov_mask(beam, image.height, image.width)), beam


class Clahe(Transform):
    transform_id = 'U03'

    def sample(self, stream, bounds, image, beam):
        return {'clip': stream.uniform(*bounds['clip']), 'tiles': int(bounds['tiles'])}

    def apply(self, image, beam, params, stream):
        mask = fov_service.build_fov_mask(beam, image.height, image.width)
        return photometric_service.clahe(image, params['clip'], params['tiles'], mask), beam


class GammaCorrection(Transform):
    transform_id = 'U04'

    def sample(self, stream, bounds, image, beam):
        return {'gamma': stream.uniform(*bounds['gamma'])}

    def apply(self, image, beam, params, stream):
        return photometric_service.gamma_correct(image, params['gamma']), beam


class BrightnessContrast(Transform):
    transform_id = 'U05'

    def sample(self, stream, bounds, image, beam):
        return {'b': stream.uniform(*bounds['brightness']), 'k': stream.uniform(*bounds['contrast'])}

    def apply(self, image, beam, params, stream):
        mask = fov_service.build_fov_mask(beam, image.height, image.width)
        return photometric_service.brightness_contrast(image, params['b'], params['k'], mask), beam


class DepthChange(Transform):
    transform_id = 'U06'

    def sample(self, stream, bounds, image, beam):
        return {'d': geometry_service.sample_depth(stream, tuple(bounds['depth']))}

    def apply(self, image, beam, params, stream):
        return geometry_service.depth_change(image, beam, params['d']), beam


class SpeckleNoise(Transform):
    transform_id = 'U07'

    def sample(self, stream, bounds, image, beam):
        lateral, axial, phasors = (tuple(int(v) for v in bounds[key]) for key in ('lateral', 'axial', 'phasors'))
        return {'speckle': noise_service.sample_speckle_params(stream, lateral, axial, phasors)}

    def apply(self, image, beam, params, stream):
        return noise_service.speckle(image, beam, params['speckle'], stream), beam


class GaussianNoise(Transform):
    transform_id = 'U08'

    def sample(self, stream, bounds, image, beam):
        return {'sigma': stream.uniform(*bounds['sigma'])}

    def apply(self, image, beam, params, stream):
        return noise_service.gaussian_noise(image, params['sigma'], stream), beam


class SaltPepperNoise(Transform):
    transform_id = 'U09'

    def sample(self, stream, bounds, image, beam):
        return {'f_salt': stream.uniform(*bounds['salt']), 'f_pepper': stream.uniform(*bounds['pepper'])}

    def apply(self, image, beam, params, stream):
        # noise covers the whole frame, background included
        return noise_service.salt_pepper(image, params['f_salt'], params['f_pepper'], stream), beam


class RotationShift(Transform):
    transform_id = 'U11'

    def sample(self, stream, bounds, image, beam):
        return {'affine': spatial_service.sample_affine_params(stream, tuple(bounds['angle']),
                                                               tuple(bounds['shift_x']), tuple(bounds['shift_y']))}

    def apply(self, image, beam, params, stream):
        # a rotated beam has no horizontally aligned vertex pairs, so the descriptor is kept and
        # the output content no longer matches its silhouette
        return spatial_service.rotate_shift(image, params['affine']), beam


TRANSFORMS: Dict[str, Transform] = {transform.transform_id: transform for transform in (
    CropResize(), HorizontalReflection(), ColorJitter(), Grayscale(), GaussianBlur(), Solarization(),
    ProbeTypeChange(), ConvexityChange(), WaveletDenoising(), Clahe(), GammaCorrection(), BrightnessContrast(),
    DepthChange(), SpeckleNoise(), GaussianNoise(), SaltPepperNoise(), UltrasoundHorizontalReflection(),
    RotationShift(),
)}
