"""Filters built from sampled Green's functions"""
import logging
from typing import Optional

import numpy as np
from scipy import ndimage

from models import FrequencyConfig, PolarSampling, RandomProcessParams
from Transforms.JointAfmt import FilterSpectrum, OrientationScaleField, joint_afmt_forward
from utils.errors import ShapeMismatch
from utils.monitoring import track_performance

logger = logging.getLogger(__name__)


def sample_polar(field: OrientationScaleField, position: PolarSampling) -> np.ndarray:
    """Bilinear samples at the position polar grid, shaped [n_phi, n_logrho, n_theta, n_r]"""
    g = field.spec
    phi = position.phis()[:, None]
    rho = position.rhos()[None, :]
    ix = rho * np.cos(phi) / g.pixel_width + g.n // 2
    iy = rho * np.sin(phi) / g.pixel_width + g.n // 2
    coords = np.stack([iy.ravel(), ix.ravel()])
    n_theta, n_r = field.data.shape[2:]
    out = np.empty((coords.shape[1], n_theta, n_r), dtype=complex)
    for l in range(n_theta):
        for q in range(n_r):
            channel = field.data[:, :, l, q]
            real = ndimage.map_coordinates(channel.real, coords, order=1, mode="constant", cval=0.0)
            imag = ndimage.map_coordinates(channel.imag, coords, order=1, mode="constant", cval=0.0)
            out[:, l, q] = real + 1j * imag
    return out.reshape(position.n_phi, position.n_logrho, n_theta, n_r)


@track_performance("build_filter")
def build_filter(g_field: OrientationScaleField, p: RandomProcessParams, c: FrequencyConfig,
                 position: PolarSampling, corner: Optional[OrientationScaleField] = None) -> FilterSpectrum:
    """Joint AFMT of G + corner_weight * G_c sampled at the position polar grid"""
    data = g_field.data
    if corner is not None and p.corner_weight > 0:
        if corner.data.shape != data.shape:
            raise ShapeMismatch("corner Green's function has a different shape",
                                {"smooth": list(data.shape), "corner": list(corner.data.shape)})
        data = data + p.corner_weight * corner.data
    mixed = OrientationScaleField(spec=g_field.spec, sampling=g_field.sampling, data=data)
    spectrum = joint_afmt_forward(sample_polar(mixed, position), c, position, g_field.sampling)
    logger.info(f"Filter spectrum built, peak |G| = {np.abs(spectrum.coeffs).max():.3g}")
    return spectrum
