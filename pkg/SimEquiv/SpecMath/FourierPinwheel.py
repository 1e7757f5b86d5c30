"""Fourier-series coefficients of a periodized pinwheel

The closed form is the Hankel transform over the whole plane. With
``truncate`` (the default) the part of that integral beyond rho = P/2 is
subtracted, so every period holds the pinwheel restricted to its inscribed
disk and the coefficients are the polar integral over (0, P/2].

Tables are built on the symmetric range [-n/2, n/2] and the two Nyquist
lines are folded onto -n/2 with half weights. A radial raised-cosine
roll-off then takes the table to zero at |w| = n/2, so the band has no
edge for the square truncation to ring against and every table stays
exactly steerable.
"""
import logging
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy import special

from models import GridSpec, PinwheelFrequency
from SpecMath.Gamma import gamma_ratio
from Transforms.Grids import SpatialGrid, spatial_inverse
from utils.errors import DomainError
from utils.monitoring import check_allocation

logger = logging.getLogger(__name__)

ALPHA_RANGE = (-2.0, -0.5)

# Fraction of n/2 where the roll-off starts; 1.0 keeps the hard band edge
BAND_ROLLOFF = 0.5

# Gauss-Legendre panels along the ray rho = P/2 + i x / k; the integrand carries e^{-x}
_TAIL_PANELS = (0.0, 1.0, 3.0, 7.0, 15.0, 30.0)
_TAIL_ORDER = 16


def check_alpha(alpha: float, label: str = "alpha") -> None:
    if not ALPHA_RANGE[0] < alpha < ALPHA_RANGE[1]:
        raise DomainError(
            f"{label}={alpha} outside the open interval {ALPHA_RANGE}",
            {label: alpha, "valid_range": list(ALPHA_RANGE)},
        )


@lru_cache(maxsize=1)
def _tail_nodes() -> Tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(_TAIL_ORDER)
    edges = np.asarray(_TAIL_PANELS)
    half = np.diff(edges)[:, None] / 2
    nodes = (edges[:-1, None] + half * (x + 1)).ravel()
    weights = (half * w).ravel() * np.exp(-nodes)
    return nodes, weights


class _HankelTail:
    """integral_R^inf rho^{s+1} J_m(k rho) d rho for fixed k > 0, m and R

    J_m is split into (H1 + H2) / 2 and each half is integrated along the
    vertical ray from R on which it decays like e^{-k t}. The Bessel part is
    shared by every s.
    """

    def __init__(self, k: np.ndarray, order: int, radius: float):
        x, w = _tail_nodes()
        self.k = np.asarray(k, dtype=float)
        kr = self.k[:, None] * radius
        self.h = special.hankel1e(abs(int(order)), kr + 1j * x) * np.exp(1j * kr) * w
        self.log_up = np.log(radius + 1j * x / self.k[:, None])

    def __call__(self, s: complex) -> np.ndarray:
        up = np.exp((s + 1) * self.log_up)
        down = np.exp((s + 1) * np.conj(self.log_up))
        return 0.5j * ((up * self.h).sum(axis=1) - (down * np.conj(self.h)).sum(axis=1)) / self.k


def _radial_profiles(radii: np.ndarray, order: int, s_values: np.ndarray, p: float,
                     truncate: bool) -> np.ndarray:
    """c'(rho_bar) / e^{i w_phi phi_bar} on positive radii, shaped [len(radii), len(s_values)]"""
    m = abs(int(order))
    log_scale = np.log(p / (np.pi * radii))
    tail = _HankelTail(2 * np.pi * radii / p, m, p / 2) if truncate else None
    out = np.empty((len(radii), len(s_values)), dtype=complex)
    for j, s in enumerate(s_values):
        prefactor = (np.pi / p**2) * (-1j) ** m * gamma_ratio((2 + m + s) / 2, (m - s) / 2)
        out[:, j] = prefactor * np.exp((2 + s) * log_scale)
        if tail is not None:
            out[:, j] -= (2 * np.pi / p**2) * (-1j) ** m * tail(s)
    return out


def pinwheel_coefficients(wx, wy, omega_phi: int, s: complex, p: float, truncate: bool = True) -> np.ndarray:
    """c'(wx, wy) with c'(0, 0) = 0 for broadcastable integer arrays, before folding and epsilon"""
    wx, wy = np.broadcast_arrays(np.asarray(wx, dtype=float), np.asarray(wy, dtype=float))
    rho_bar = np.hypot(wx, wy)
    out = np.zeros(rho_bar.shape, dtype=complex)
    positive = rho_bar > 0
    if np.any(positive):
        radial = _radial_profiles(rho_bar[positive], omega_phi, np.array([complex(s)]), p, truncate)[:, 0]
        out[positive] = radial * np.exp(1j * omega_phi * np.arctan2(wy[positive], wx[positive]))
    return out


@lru_cache(maxsize=8)
def _extended_polar(g: GridSpec):
    """Angles, distinct positive radii and their inverse index on [-n/2, n/2]^2"""
    w = np.arange(-(g.n // 2), g.n // 2 + 1)
    wx, wy = np.meshgrid(w, w, indexing="xy")
    r2 = wx**2 + wy**2
    positive = r2 > 0
    r2_unique, inverse = np.unique(r2[positive], return_inverse=True)
    return np.arctan2(wy, wx), positive, np.sqrt(r2_unique), inverse


def _fold_nyquist(ext: np.ndarray) -> np.ndarray:
    """[n+1, n+1, ...] on [-n/2, n/2] to [n, n, ...] on [-n/2, n/2 - 1]; +n/2 lands on -n/2 with half weights"""
    out = ext[:-1, :-1].copy()
    out[0, 1:] = 0.5 * (ext[0, 1:-1] + ext[-1, 1:-1])
    out[1:, 0] = 0.5 * (ext[1:-1, 0] + ext[1:-1, -1])
    out[0, 0] = 0.25 * (ext[0, 0] + ext[0, -1] + ext[-1, 0] + ext[-1, -1])
    return out


def _folded_stack(g: GridSpec, omega_phis: np.ndarray, alpha: float, omega_rhos: np.ndarray,
                  truncate: bool) -> np.ndarray:
    """Folded c' for every (omega_phi, omega_rho), [ky, kx, len(omega_phis), len(omega_rhos)]"""
    phi_bar, positive, radii, inverse = _extended_polar(g)
    s_values = alpha + 1j * omega_rhos
    ext = np.zeros((g.n + 1, g.n + 1, len(omega_phis), len(omega_rhos)), dtype=complex)
    for i, omega_phi in enumerate(omega_phis):
        profiles = _radial_profiles(radii, omega_phi, s_values, g.p, truncate)
        ext[positive, i] = np.exp(1j * omega_phi * phi_bar[positive])[:, None] * profiles[inverse]
    return _fold_nyquist(ext)


def band_window(g: GridSpec, rolloff: float = BAND_ROLLOFF) -> np.ndarray:
    """1 up to rolloff * n/2, cos^2 down to 0 at n/2 and beyond; [ky, kx]"""
    if not 0 <= rolloff <= 1:
        raise DomainError(f"rolloff must lie in [0, 1], got {rolloff}", {"rolloff": rolloff})
    wx, wy = g.frequency_mesh()
    if rolloff == 1:
        return np.ones(wx.shape)
    t = np.clip((np.hypot(wx, wy) / (g.n // 2) - rolloff) / (1 - rolloff), 0.0, 1.0)
    return np.where(t < 1, np.cos(0.5 * np.pi * t) ** 2, 0.0)


def compute_epsilon(f: PinwheelFrequency, g: GridSpec) -> complex:
    """Constant that makes the coefficient table over [-n/2, n/2-1]^2 sum to zero"""
    check_alpha(f.alpha)
    half = g.n // 2
    # c' vanishes at the origin, so the corrected table holds epsilon there
    return complex(_cached_table(g, int(f.omega_phi), float(f.alpha), float(f.omega_rho))[half, half])


def fourier_pinwheel_coeff(omega_x: int, omega_y: int, f: PinwheelFrequency, g: GridSpec) -> complex:
    """c''(wx, wy) = c' + epsilon; epsilon alone at the origin"""
    check_alpha(f.alpha)
    half = g.n // 2
    if not (-half <= omega_x < half and -half <= omega_y < half):
        raise DomainError(f"frequency ({omega_x}, {omega_y}) outside the grid's range [-{half}, {half - 1}]",
                          {"omega_x": omega_x, "omega_y": omega_y, "n": g.n})
    table = _cached_table(g, int(f.omega_phi), float(f.alpha), float(f.omega_rho))
    return complex(table[omega_y + half, omega_x + half])


def fourier_pinwheel_table(g: GridSpec, omega_phi: int, alpha: float, omega_rho: float = 0.0) -> np.ndarray:
    """Full corrected table indexed [ky, kx] with omega = k - n/2"""
    check_alpha(alpha)
    return _cached_table(g, int(omega_phi), float(alpha), float(omega_rho)).copy()


@lru_cache(maxsize=256)
def _cached_table(g: GridSpec, omega_phi: int, alpha: float, omega_rho: float) -> np.ndarray:
    table = fourier_pinwheel_stack(g, np.array([omega_phi]), alpha, np.array([omega_rho]))[:, :, 0, 0].copy()
    table.setflags(write=False)
    return table


def fourier_pinwheel_stack(g: GridSpec, omega_phis: np.ndarray, alpha: float, omega_rhos: np.ndarray,
                           truncate: bool = True, rolloff: float = BAND_ROLLOFF) -> np.ndarray:
    """Corrected tables for every (omega_phi, omega_rho) pair, shaped [ky, kx, len(omega_phis), len(omega_rhos)]"""
    check_alpha(alpha)
    omega_phis = np.asarray(omega_phis, dtype=int)
    omega_rhos = np.asarray(omega_rhos, dtype=float)
    shape = (g.n, g.n, len(omega_phis), len(omega_rhos))
    check_allocation("fourier pinwheel stack", 2 * int(np.prod(shape)) * 16)

    table = _folded_stack(g, omega_phis, alpha, omega_rhos, truncate)
    table *= band_window(g, rolloff)[:, :, None, None]
    table -= table.sum(axis=(0, 1), keepdims=True) / g.n**2
    logger.debug(f"fourier pinwheel stack {shape} for alpha={alpha}, truncate={truncate}, rolloff={rolloff}")
    return table


def fourier_pinwheel_grid(g: GridSpec, f: PinwheelFrequency) -> SpatialGrid:
    """Spatial synthesis of the corrected table; its origin sample is 0"""
    table = fourier_pinwheel_table(g, f.omega_phi, f.alpha, f.omega_rho)
    return SpatialGrid(spec=g, data=spatial_inverse(table, "series"))
