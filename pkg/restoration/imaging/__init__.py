from .blur import ConvolutionMap, make_blur_map
from .image import Image, Kernel
from .kernels import gaussian_kernel, motion_kernel, parse_kernel_spec
from .metrics import snr_db
from .noise import NoiseSpec, add_noise
from .pgm import load_pgm, save_pgm
from .phantoms import make_phantom
from .rng import Rng, gaussian_array, gaussian_sample, rng_next_uniform, rng_uniform_array

__all__ = [
    "ConvolutionMap",
    "make_blur_map",
    "Image",
    "Kernel",
    "gaussian_kernel",
    "motion_kernel",
    "parse_kernel_spec",
    "snr_db",
    "NoiseSpec",
    "add_noise",
    "load_pgm",
    "save_pgm",
    "make_phantom",
    "Rng",
    "gaussian_array",
    "gaussian_sample",
    "rng_next_uniform",
    "rng_uniform_array",
]
