"""Shiftable, steerable and scalable bias"""
import logging

import numpy as np

from models import BiasParams, GridSpec, OrientationPreference, PolarSampling
from Completion.Stimulus import Stimulus
from Transforms.JointAfmt import OrientationScaleField
from utils.errors import DomainError

logger = logging.getLogger(__name__)


def wrap_angle(angle):
    """Map to (-pi, pi]"""
    return np.pi - np.mod(np.pi - np.asarray(angle, dtype=float), 2 * np.pi)


def _bias_values(b: BiasParams, rho, theta, r):
    """Unchecked evaluation with broadcasting; rho = 0 gives 0"""
    rho = np.asarray(rho, dtype=float)
    at_origin = rho == 0
    safe_rho = np.where(at_origin, 1.0, rho)
    log_ratio = np.log(r) - np.log(safe_rho)
    value = (np.exp(-rho**2 / (2 * b.sigma_rho**2) + b.gamma * np.log(safe_rho))
             * np.exp(-log_ratio**2 / (2 * b.sigma_r**2)))
    if b.orientation_pref is not None:
        pref = b.orientation_pref
        value = value * sum(
            np.exp(-wrap_angle(theta - (pref.theta_a + turn))**2 / (2 * pref.sigma_theta**2))
            for turn in (np.pi / 2, -np.pi / 2)
        )
    return np.where(at_origin, 0.0, value)


def eval_bias(b: BiasParams, phi, rho, theta, r):
    """e^{-rho^2 / 2 sigma_rho^2} rho^gamma e^{-(log r - log rho)^2 / 2 sigma_r^2}, times the
    two-Gaussian heading preference at theta_a +- pi/2 when one is set; phi does not enter
    """
    rho_arr, r_arr = np.asarray(rho, dtype=float), np.asarray(r, dtype=float)
    if np.any(rho_arr <= 0) or np.any(r_arr <= 0):
        raise DomainError("bias needs positive rho and r", {"rho": str(rho), "r": str(r)})
    value = _bias_values(b, rho_arr, np.asarray(theta, dtype=float), r_arr)
    return float(value) if np.ndim(value) == 0 else value


def bias_field(stimulus: Stimulus, b: BiasParams, g: GridSpec, velocity: PolarSampling,
               sigma_theta: float = 0.3) -> OrientationScaleField:
    """Sum of the bias centred on every stimulus point; arm angles switch on the heading preference"""
    stimulus.check_inside(g)
    x, y = g.mesh()
    theta = velocity.phis()[None, None, :, None]
    r = velocity.rhos()[None, None, None, :]
    data = np.zeros((g.n, g.n, velocity.n_phi, velocity.n_logrho))
    for i, (px, py) in enumerate(stimulus.points):
        theta_a = stimulus.arm_angle(i)
        params = b
        if theta_a is not None:
            preference = OrientationPreference(theta_a=theta_a, sigma_theta=sigma_theta)
            params = b.model_copy(update={"orientation_pref": preference})
        rho = np.hypot(x - px, y - py)[:, :, None, None]
        data += _bias_values(params, rho, theta, r)
    logger.debug(f"bias field for {len(stimulus.points)} points, peak {data.max():.3g}")
    return OrientationScaleField(spec=g, sampling=velocity, data=data.astype(complex))
