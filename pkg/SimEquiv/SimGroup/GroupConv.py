"""Group convolution over the similarity group in the frequency domain

Measure: (1/P^2) dy * (1/2pi) dphi * (1/2pi) drho/rho. Under it the lifted
2D input is the unit-mass delta and both convolution formulas hold with the
single d(w_rho) quadrature weight owned by group_conv_joint.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from typing import Optional

import numpy as np

from models import FrequencyConfig, GridSpec, SimilarityParams
from SpecMath.FourierPinwheel import check_alpha, fourier_pinwheel_stack
from Transforms.Grids import SpectralGrid
from Transforms.JointAfmt import (FilterSpectrum, JointSpectrum, OrientationScaleField, analyze_field,
                                  synthesize_field)
from utils.config import resolve_workers
from utils.errors import DomainError, ShapeMismatch, handle_numeric_errors
from utils.monitoring import track_performance

logger = logging.getLogger(__name__)


@lru_cache(maxsize=1)
def difference_table(g: GridSpec, c: FrequencyConfig) -> np.ndarray:
    """H'(w_x; d_phi, alpha_rho - alpha_r + i d_rho) over all frequency differences

    Shape [ky, kx, 2M-1, 2W-1]; index M-1 (W-1) on the last axes is difference 0.
    """
    alpha = c.alpha_rho - c.alpha_r
    check_alpha(alpha, "alpha_rho - alpha_r")
    table = fourier_pinwheel_stack(g, c.angular_differences(), alpha, c.radial_differences())
    table.setflags(write=False)
    logger.info(f"Built pinwheel difference table {table.shape} for n={g.n}")
    return table


def _check_pair(Fj: JointSpectrum, Gf: FilterSpectrum) -> None:
    if Fj.config != Gf.config:
        raise ShapeMismatch("input and filter use different frequency configurations",
                            {"input": Fj.config.model_dump(), "filter": Gf.config.model_dump()})
    if not np.isclose(Fj.alpha, Fj.config.alpha_rho):
        raise DomainError(f"input envelope {Fj.alpha} differs from alpha_rho {Fj.config.alpha_rho}",
                          {"alpha": Fj.alpha, "alpha_rho": Fj.config.alpha_rho})


@handle_numeric_errors
@track_performance("group_conv_joint")
def group_conv_joint(Fj: JointSpectrum, Gf: FilterSpectrum, workers: Optional[int] = None) -> JointSpectrum:
    """out(w_x, w_theta, w_r) = sum over (w_phi, w_rho) of Fj * G * H'(w_x, w_phi - w_theta,
    alpha_rho - alpha_r + i(w_rho - w_r)) * d(w_rho); the output envelope is alpha_r
    """
    _check_pair(Fj, Gf)
    c = Fj.config
    table = difference_table(Fj.spec, c)
    m, w = len(c.angular_freqs), len(c.radial_freqs)
    n2 = Fj.spec.n ** 2
    step = c.radial_step
    out = np.empty_like(Fj.coeffs)

    def channel(index):
        ib, iz = index
        weights = Gf.coeffs[:, :, ib, iz]
        if not np.any(weights):
            out[:, :, ib, iz] = 0.0
            return
        h = table[:, :, m - 1 - ib:2 * m - 1 - ib, w - 1 - iz:2 * w - 1 - iz]
        out[:, :, ib, iz] = ((Fj.coeffs * h).reshape(n2, m * w) @ weights.ravel()).reshape(
            Fj.spec.n, Fj.spec.n) * step

    channels = [(ib, iz) for ib in range(m) for iz in range(w)]
    with ThreadPoolExecutor(max_workers=resolve_workers(workers)) as pool:
        list(pool.map(channel, channels))
    return JointSpectrum(config=c, spec=Fj.spec, coeffs=out, alpha=c.alpha_r)


@handle_numeric_errors
@track_performance("group_conv_special")
def group_conv_special(F: SpectralGrid, Gc: np.ndarray, c: FrequencyConfig, g: GridSpec) -> JointSpectrum:
    """2D input against a bank of rotated and dilated copies of g'

    Gc holds the AFMT coefficients of g' with envelope alpha_rho. The output
    lives at the negated frequencies (-w_phi, -(alpha_rho + i w_rho)), so it is
    returned under c.negated() with envelope -alpha_rho.
    """
    Gc = np.asarray(Gc)
    if F.spec != g:
        raise ShapeMismatch("input spectrum grid differs from the requested grid",
                            {"input": F.spec.model_dump(), "grid": g.model_dump()})
    if Gc.shape != (len(c.angular_freqs), len(c.radial_freqs)):
        raise ShapeMismatch(f"filter coefficients {Gc.shape} do not match the frequency configuration",
                            {"shape": list(Gc.shape)})
    h = fourier_pinwheel_stack(g, c.angular, c.alpha_rho, c.radial)
    coeffs = F.series()[:, :, None, None] * Gc[None, None, :, :] * h
    return JointSpectrum(config=c.negated(), spec=g, coeffs=coeffs[:, :, ::-1, ::-1].copy(), alpha=-c.alpha_rho)


def reverse_filter(Gf: FilterSpectrum) -> FilterSpectrum:
    """Filter with its position part rotated by pi and headings kept: G * (-1)^(w_phi - w_theta)

    Turning headings by theta -> theta + pi instead multiplies by (-1)^w_theta
    alone. The two reversals differ by the sign (-1)^w_phi and coincide on even
    w_phi.
    """
    a = Gf.config.angular
    sign = (-1.0) ** np.abs(a[:, None] - a[None, :])
    return FilterSpectrum(config=Gf.config, coeffs=Gf.coeffs * sign[:, None, :, None])


def similarity_delta(p: SimilarityParams, c: FrequencyConfig, g: GridSpec) -> JointSpectrum:
    """Unit-mass delta at the group element (dx, dy, dtheta, a) as an input spectrum"""
    if not p.a > 0:
        raise DomainError(f"dilation must be positive, got {p.a}", {"a": p.a})
    wx, wy = g.frequency_mesh()
    shift = np.exp(-2j * np.pi * (wx * p.dx + wy * p.dy) / g.p)
    turn = np.exp(-1j * c.angular * p.dtheta)
    scale = np.exp(-(c.alpha_rho + 1j * c.radial) * np.log(p.a))
    coeffs = shift[:, :, None, None] * turn[None, None, :, None] * scale[None, None, None, :]
    return JointSpectrum(config=c, spec=g, coeffs=coeffs, alpha=c.alpha_rho)


@track_performance("envelope_fix")
def envelope_fix(Fj: JointSpectrum, bias: OrientationScaleField) -> JointSpectrum:
    """Multiply the synthesized field by the bias and re-analyse it with alpha_rho"""
    if bias.spec != Fj.spec:
        raise ShapeMismatch("bias grid differs from the spectrum grid")
    field = synthesize_field(Fj, bias.sampling)
    biased = OrientationScaleField(spec=Fj.spec, sampling=bias.sampling, data=field.data * bias.data)
    return analyze_field(biased, Fj.config, Fj.config.alpha_rho)
