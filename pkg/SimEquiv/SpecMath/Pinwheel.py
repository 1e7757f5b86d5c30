"""Pinwheel basis functions e^{i w_phi phi} rho^{alpha + i w_rho}"""
import numpy as np

from models import GridSpec, PinwheelFrequency
from Transforms.Grids import SpatialGrid
from utils.errors import DomainError


def pinwheel_values(phi, rho, omega_phi, s):
    """Unchecked evaluation, broadcasting over every argument"""
    return np.exp(1j * omega_phi * phi + s * np.log(rho))


def eval_pinwheel(phi, rho, f: PinwheelFrequency):
    """h'(phi, rho) for rho > 0; scalar in, complex out"""
    rho_arr = np.asarray(rho, dtype=float)
    if np.any(~np.isfinite(rho_arr)) or np.any(rho_arr <= 0):
        raise DomainError("pinwheel radius must be positive", {"rho": str(rho)})
    value = pinwheel_values(np.asarray(phi, dtype=float), rho_arr, f.omega_phi, f.s)
    return complex(value) if np.ndim(value) == 0 else value


def sample_pinwheel(g: GridSpec, f: PinwheelFrequency) -> SpatialGrid:
    """The pinwheel on every grid sample, with the origin sample defined as 0"""
    phi, rho = g.polar()
    origin = rho == 0
    data = pinwheel_values(phi, np.where(origin, 1.0, rho), f.omega_phi, f.s)
    data[origin] = 0.0
    return SpatialGrid(spec=g, data=data)
