"""Continuous similarity transforms of finite pinwheel representations"""
import logging
from typing import Optional

import numpy as np

from models import FrequencyConfig, GridSpec, PolarSampling, SimilarityParams
from SimGroup.GroupConv import group_conv_joint, similarity_delta
from SpecMath.FourierPinwheel import fourier_pinwheel_stack
from Transforms.Grids import SpatialGrid, spatial_inverse
from Transforms.JointAfmt import FilterSpectrum, OrientationScaleField, synthesize_field
from utils.errors import DomainError, ShapeMismatch

logger = logging.getLogger(__name__)


def transformed_series_2d(G: np.ndarray, p: SimilarityParams, c: FrequencyConfig, g: GridSpec) -> np.ndarray:
    """Fourier-series coefficients of g'(R^-1 (x - dx) / a) for g' with AFMT coefficients G"""
    if not p.a > 0:
        raise DomainError(f"dilation must be positive, got {p.a}", {"a": p.a})
    G = np.asarray(G)
    if G.shape != (len(c.angular_freqs), len(c.radial_freqs)):
        raise ShapeMismatch(f"coefficients {G.shape} do not match the frequency configuration")
    s = c.alpha_rho + 1j * c.radial
    weights = G * np.exp(-1j * c.angular[:, None] * p.dtheta - s[None, :] * np.log(p.a)) * c.radial_step
    h = fourier_pinwheel_stack(g, c.angular, c.alpha_rho, c.radial)
    wx, wy = g.frequency_mesh()
    shift = np.exp(-2j * np.pi * (wx * p.dx + wy * p.dy) / g.p)
    return np.einsum("yxmw,mw->yx", h, weights) * shift


def similarity_transform_2d(G: np.ndarray, p: SimilarityParams, c: FrequencyConfig, g: GridSpec) -> SpatialGrid:
    return SpatialGrid(spec=g, data=spatial_inverse(transformed_series_2d(G, p, c, g), "series"))


def similarity_transform_joint(Gf: FilterSpectrum, p: SimilarityParams, g: GridSpec,
                               targets: PolarSampling, workers: Optional[int] = None) -> OrientationScaleField:
    """g(R^-1 (x - dx) / a, theta - dtheta, r / a) on the grid times the (theta, r) targets

    This is the group convolution of the unit-mass delta at p with the filter.
    """
    delta = similarity_delta(p, Gf.config, g)
    return synthesize_field(group_conv_joint(delta, Gf, workers), targets)
