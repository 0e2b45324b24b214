from src.noise_module.config import get_wavelet_alpha_range, get_gaussian_sigma_range
from src.noise_module.service import NoiseService

service = NoiseService(alpha_range=get_wavelet_alpha_range(), gaussian_sigma_range=get_gaussian_sigma_range())
