from typing import Optional

from models import GridSpec, PolarSampling, RandomProcessParams
from Transforms.JointAfmt import OrientationScaleField

from .CornerGreensFunction import CornerGreensFunction
from .GreensFunctionSampler import PARTICLE_CHUNK, GreensFunctionSampler, ParticleState
from .SmoothGreensFunction import SmoothGreensFunction


def greens_function(p: RandomProcessParams, g: GridSpec, polar: PolarSampling,
                    workers: Optional[int] = None) -> OrientationScaleField:
    return SmoothGreensFunction(p, g, polar, workers).sample()


def corner_greens_function(p: RandomProcessParams, g: GridSpec, polar: PolarSampling,
                           workers: Optional[int] = None) -> OrientationScaleField:
    """Corner process; the seed is offset so its particles are independent of the smooth ones"""
    return CornerGreensFunction(p.model_copy(update={"seed": p.seed + 1}), g, polar, workers).sample()


__all__ = [
    "GreensFunctionSampler", "SmoothGreensFunction", "CornerGreensFunction", "ParticleState",
    "PARTICLE_CHUNK", "greens_function", "corner_greens_function",
]
