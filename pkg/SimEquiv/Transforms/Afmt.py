"""Analytical Fourier-Mellin transform on polar samples

Forward: (1/2pi) integral over phi and (1/2pi) integral over log rho of
f e^{-i w_phi phi} rho^{-(alpha + i w_rho)}. Inverse: sum of
coefficient * e^{i w_phi phi} rho^{alpha + i w_rho} * d(w_rho).
"""
import logging

import numpy as np

from models import FrequencyConfig, PolarSampling
from utils.errors import ShapeMismatch
from utils.monitoring import track_performance

logger = logging.getLogger(__name__)


def angular_analysis(freqs: np.ndarray, sampling: PolarSampling) -> np.ndarray:
    """[n_phi, len(freqs)] weights e^{-i w phi_j} / n_phi"""
    return np.exp(-1j * np.outer(sampling.phis(), freqs)) / sampling.n_phi


def radial_analysis(s: np.ndarray, sampling: PolarSampling) -> np.ndarray:
    """[n_logrho, len(s)] trapezoid weights times e^{-s u_k} / 2pi for complex radial frequencies s"""
    u = sampling.logrhos()
    weights = sampling.trapezoid_weights() / (2 * np.pi)
    return weights[:, None] * np.exp(-np.outer(u, s))


def radial_frequencies(c: FrequencyConfig, alpha: float) -> np.ndarray:
    return alpha + 1j * c.radial


def _check_polar(f_polar: np.ndarray, sampling: PolarSampling) -> None:
    if f_polar.shape[:2] != (sampling.n_phi, sampling.n_logrho):
        raise ShapeMismatch(
            f"polar samples {f_polar.shape[:2]} do not match sampling "
            f"({sampling.n_phi}, {sampling.n_logrho})",
            {"shape": list(f_polar.shape)},
        )


@track_performance("afmt_forward")
def afmt_forward(f_polar: np.ndarray, c: FrequencyConfig, alpha: float, sampling: PolarSampling) -> np.ndarray:
    """Coefficients [angular, radial, ...] of samples f_polar[phi_j, logrho_k, ...]"""
    sampling.check_nyquist(c.angular_freqs)
    f_polar = np.asarray(f_polar)
    _check_polar(f_polar, sampling)
    ang = angular_analysis(c.angular, sampling)
    rad = radial_analysis(radial_frequencies(c, alpha), sampling)
    return np.einsum("jk...,jm,kw->mw...", f_polar, ang, rad, optimize=True)


def afmt_inverse(coeffs: np.ndarray, c: FrequencyConfig, alpha: float, phi, rho) -> np.ndarray:
    """Synthesis at arbitrary targets; phi and rho broadcast against each other"""
    coeffs = np.asarray(coeffs)
    if coeffs.shape[:2] != (len(c.angular_freqs), len(c.radial_freqs)):
        raise ShapeMismatch("coefficients do not match the frequency configuration",
                            {"shape": list(coeffs.shape)})
    phi, rho = np.broadcast_arrays(np.asarray(phi, dtype=float), np.asarray(rho, dtype=float))
    flat_phi, flat_u = phi.ravel(), np.log(rho.ravel())
    ang = np.exp(1j * np.outer(flat_phi, c.angular))
    rad = np.exp(np.outer(flat_u, radial_frequencies(c, alpha))) * c.radial_step
    out = np.einsum("pm,pw,mw...->p...", ang, rad, coeffs, optimize=True)
    return out.reshape(phi.shape + coeffs.shape[2:])


def afmt_synthesize(coeffs: np.ndarray, c: FrequencyConfig, alpha: float, sampling: PolarSampling) -> np.ndarray:
    """Synthesis on the product grid of a sampling, shaped [n_phi, n_logrho, ...]"""
    ang = np.exp(1j * np.outer(sampling.phis(), c.angular))
    rad = np.exp(np.outer(sampling.logrhos(), radial_frequencies(c, alpha))) * c.radial_step
    return np.einsum("jm,kw,mw...->jk...", ang, rad, coeffs, optimize=True)
