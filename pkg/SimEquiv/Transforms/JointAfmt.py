"""Joint orientation-scale representations

A JointSpectrum holds coeffs[ky, kx, w_phi, w_rho]: spatial Fourier-series
coefficients of a field over (x, theta, r), analysed in (theta, r) with the
envelope exponent `alpha`. A FilterSpectrum holds the four-frequency
coefficients G[w_phi, w_rho, w_theta, w_r] of a filter on (S1 x R+)^2 in
the basis rho^{s_rho} e^{i w_phi phi} (r/rho)^{s_r} e^{i w_theta (theta - phi)}.
"""
import logging

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from models import FrequencyConfig, GridSpec, PolarSampling
from Transforms.Afmt import (afmt_forward, afmt_synthesize, angular_analysis,
                             radial_analysis, radial_frequencies)
from Transforms.Grids import SpatialGrid, spatial_forward, spatial_inverse, synthesize_at
from utils.errors import DomainError, ShapeMismatch
from utils.monitoring import track_performance

logger = logging.getLogger(__name__)

_ARRAYS = ConfigDict(arbitrary_types_allowed=True, frozen=True)


def _require_finite(values: np.ndarray, label: str) -> None:
    if not np.all(np.isfinite(values)):
        raise DomainError(f"{label} contains non-finite values")


class OrientationScaleField(BaseModel):
    """Samples data[iy, ix, theta_l, log r_q] over the grid times a velocity sampling"""
    model_config = _ARRAYS

    spec: GridSpec
    sampling: PolarSampling
    data: np.ndarray

    @model_validator(mode="after")
    def _consistent(self):
        expected = (self.spec.n, self.spec.n, self.sampling.n_phi, self.sampling.n_logrho)
        if self.data.shape != expected:
            raise ShapeMismatch(f"field shape {self.data.shape} != {expected}",
                                {"shape": list(self.data.shape), "expected": list(expected)})
        _require_finite(self.data, "orientation-scale field")
        return self

    def norm(self) -> float:
        return float(np.linalg.norm(self.data))

    def project(self) -> np.ndarray:
        """Sum over (theta, r), leaving an [iy, ix] image"""
        return self.data.sum(axis=(2, 3))


class JointSpectrum(BaseModel):
    model_config = _ARRAYS

    config: FrequencyConfig
    spec: GridSpec
    coeffs: np.ndarray
    alpha: float

    @model_validator(mode="after")
    def _consistent(self):
        expected = (self.spec.n, self.spec.n, len(self.config.angular_freqs), len(self.config.radial_freqs))
        if self.coeffs.shape != expected:
            raise ShapeMismatch(f"joint spectrum shape {self.coeffs.shape} != {expected}",
                                {"shape": list(self.coeffs.shape), "expected": list(expected)})
        _require_finite(self.coeffs, "joint spectrum")
        return self

    def evaluate(self, points: np.ndarray, theta: np.ndarray, r: np.ndarray) -> np.ndarray:
        """Continuous synthesis at arbitrary points, headings and speeds: [n_points, len(theta), len(r)]"""
        spatial = synthesize_at(self.spec, self.coeffs, points)
        ang = np.exp(1j * np.outer(np.atleast_1d(theta), self.config.angular))
        rad = np.exp(np.outer(np.log(np.atleast_1d(r)), radial_frequencies(self.config, self.alpha)))
        return np.einsum("pmw,tm,qw->ptq", spatial, ang, rad * self.config.radial_step, optimize=True)


class FilterSpectrum(BaseModel):
    model_config = _ARRAYS

    config: FrequencyConfig
    coeffs: np.ndarray

    @model_validator(mode="after")
    def _consistent(self):
        m, w = len(self.config.angular_freqs), len(self.config.radial_freqs)
        if self.coeffs.shape != (m, w, m, w):
            raise ShapeMismatch(f"filter spectrum shape {self.coeffs.shape} != {(m, w, m, w)}",
                                {"shape": list(self.coeffs.shape)})
        _require_finite(self.coeffs, "filter spectrum")
        return self

    def evaluate(self, phi, rho, theta, r) -> np.ndarray:
        """g(phi, rho, theta, r) = sum G h d(w)^2 at broadcast points"""
        c = self.config
        phi, rho, theta, r = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (phi, rho, theta, r)))
        u, v = np.log(rho.ravel()), np.log(r.ravel() / rho.ravel())
        pos_ang = np.exp(1j * np.outer(phi.ravel(), c.angular))
        pos_rad = np.exp(np.outer(u, radial_frequencies(c, c.alpha_rho)))
        vel_ang = np.exp(1j * np.outer(theta.ravel() - phi.ravel(), c.angular))
        vel_rad = np.exp(np.outer(v, radial_frequencies(c, c.alpha_r)))
        out = np.einsum("pa,pw,pb,pz,awbz->p", pos_ang, pos_rad, vel_ang, vel_rad, self.coeffs, optimize=True)
        return (out * c.radial_step**2).reshape(phi.shape)


def difference_gather(table: np.ndarray, m: int, w: int) -> np.ndarray:
    """table[d_phi, d_rho, b, z] -> G[a, w_rho, b, z] with d_phi = a - b and d_rho = w_rho - z"""
    ia = np.arange(m)[:, None, None, None]
    iw = np.arange(w)[None, :, None, None]
    ib = np.arange(m)[None, None, :, None]
    iz = np.arange(w)[None, None, None, :]
    return table[ia - ib + m - 1, iw - iz + w - 1, ib, iz]


@track_performance("joint_afmt_forward")
def joint_afmt_forward(field: np.ndarray, c: FrequencyConfig,
                       position: PolarSampling, velocity: PolarSampling) -> FilterSpectrum:
    """Analyse field[phi_j, logrho_k, theta_l, logr_q] sampled on the product polar grid

    The velocity transform runs first with (w_theta, alpha_r); the position
    transform then runs at the difference frequencies
    (w_phi - w_theta, alpha_rho - alpha_r + i(w_rho - w_r)), which is the
    analysis in (phi, rho, theta - phi, r / rho) written on the product grid.
    """
    field = np.asarray(field)
    expected = (position.n_phi, position.n_logrho, velocity.n_phi, velocity.n_logrho)
    if field.shape != expected:
        raise ShapeMismatch(f"filter samples {field.shape} != {expected}", {"shape": list(field.shape)})
    velocity.check_nyquist(c.angular_freqs, axis="theta")
    d_phi = c.angular_differences()
    position.check_nyquist(d_phi, axis="phi")

    vel = np.einsum("jklq,lb,qz->jkbz", field,
                    angular_analysis(c.angular, velocity),
                    radial_analysis(radial_frequencies(c, c.alpha_r), velocity), optimize=True)
    s_diff = (c.alpha_rho - c.alpha_r) + 1j * c.radial_differences()
    table = np.einsum("jkbz,jd,ke->debz", vel,
                      angular_analysis(d_phi, position),
                      radial_analysis(s_diff, position), optimize=True)
    coeffs = difference_gather(table, len(c.angular_freqs), len(c.radial_freqs))
    logger.debug(f"joint analysis of {field.shape} -> {coeffs.shape}")
    return FilterSpectrum(config=c, coeffs=coeffs)


def lift_2d_input(f: SpatialGrid, c: FrequencyConfig) -> JointSpectrum:
    """2D input times the unit-mass delta at (phi=0, rho=1), whose AFMT coefficients are all 1"""
    series = spatial_forward(f.data, "series")
    shape = series.shape + (len(c.angular_freqs), len(c.radial_freqs))
    coeffs = np.broadcast_to(series[:, :, None, None], shape).copy()
    return JointSpectrum(config=c, spec=f.spec, coeffs=coeffs, alpha=c.alpha_rho)


@track_performance("analyze_field")
def analyze_field(field: OrientationScaleField, c: FrequencyConfig, alpha: float = None) -> JointSpectrum:
    """Spatial series analysis plus AFMT over (theta, r); alpha defaults to alpha_rho"""
    alpha = c.alpha_rho if alpha is None else alpha
    moved = np.moveaxis(field.data, (2, 3), (0, 1))
    polar = afmt_forward(moved, c, alpha, field.sampling)
    coeffs = spatial_forward(np.moveaxis(polar, (0, 1), (2, 3)), "series")
    return JointSpectrum(config=c, spec=field.spec, coeffs=coeffs, alpha=alpha)


@track_performance("synthesize_field")
def synthesize_field(Fj: JointSpectrum, sampling: PolarSampling) -> OrientationScaleField:
    moved = np.moveaxis(Fj.coeffs, (2, 3), (0, 1))
    polar = afmt_synthesize(moved, Fj.config, Fj.alpha, sampling)
    data = spatial_inverse(np.moveaxis(polar, (0, 1), (2, 3)), "series")
    return OrientationScaleField(spec=Fj.spec, sampling=sampling, data=data)
