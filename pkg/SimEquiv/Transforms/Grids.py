"""Periodic spatial grids and their 2D Fourier coefficients"""
import logging
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator
from scipy import fft

from models import GridSpec
from utils.errors import DomainError, ShapeMismatch
from utils.monitoring import track_performance

logger = logging.getLogger(__name__)

Norm = Literal["ortho", "series"]

_ARRAYS = ConfigDict(arbitrary_types_allowed=True, frozen=True)


def _check_samples(spec: GridSpec, data: np.ndarray, label: str) -> None:
    if data.ndim < 2 or data.shape[:2] != (spec.n, spec.n):
        raise ShapeMismatch(
            f"{label} leading shape {data.shape[:2]} does not match grid n={spec.n}",
            {"shape": list(data.shape), "n": spec.n},
        )
    if not np.all(np.isfinite(data)):
        raise DomainError(f"{label} contains non-finite values")


class SpatialGrid(BaseModel):
    """Samples over the periodic window, data[iy, ix] with the origin at (n/2, n/2)"""
    model_config = _ARRAYS

    spec: GridSpec
    data: np.ndarray

    @model_validator(mode="after")
    def _consistent(self):
        _check_samples(self.spec, self.data, "spatial data")
        return self


class SpectralGrid(BaseModel):
    """Fourier coefficients coeffs[ky, kx] at frequency (kx - n/2, ky - n/2)"""
    model_config = _ARRAYS

    spec: GridSpec
    coeffs: np.ndarray
    norm: Norm = "ortho"

    @model_validator(mode="after")
    def _consistent(self):
        _check_samples(self.spec, self.coeffs, "spectral coefficients")
        return self

    def series(self) -> np.ndarray:
        """Coefficients as Fourier-series coefficients (1/P^2) integral f e^{-i 2 pi w.x / P}"""
        if self.norm == "series":
            return self.coeffs
        return self.coeffs / self.spec.n


_SCIPY_NORM = {"ortho": ("ortho", "ortho"), "series": ("forward", "forward")}


def spatial_forward(data: np.ndarray, norm: Norm = "series") -> np.ndarray:
    """Transform over the two leading axes, any trailing channel axes kept"""
    shifted = fft.ifftshift(data, axes=(0, 1))
    return fft.fftshift(fft.fft2(shifted, axes=(0, 1), norm=_SCIPY_NORM[norm][0]), axes=(0, 1))


def spatial_inverse(coeffs: np.ndarray, norm: Norm = "series") -> np.ndarray:
    shifted = fft.ifftshift(coeffs, axes=(0, 1))
    return fft.fftshift(fft.ifft2(shifted, axes=(0, 1), norm=_SCIPY_NORM[norm][1]), axes=(0, 1))


@track_performance("dft2_forward")
def dft2_forward(f: SpatialGrid, norm: Norm = "ortho") -> SpectralGrid:
    return SpectralGrid(spec=f.spec, coeffs=spatial_forward(f.data, norm), norm=norm)


@track_performance("dft2_inverse")
def dft2_inverse(F: SpectralGrid) -> SpatialGrid:
    return SpatialGrid(spec=F.spec, data=spatial_inverse(F.coeffs, F.norm))


def series_phase(spec: GridSpec, points: np.ndarray) -> np.ndarray:
    """e^{i 2 pi w.x / P} for arbitrary points, shaped [n_points, ky, kx]"""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    w = spec.frequencies()
    scale = 2j * np.pi / spec.p
    ex = np.exp(scale * pts[:, 0:1] * w[None, :])
    ey = np.exp(scale * pts[:, 1:2] * w[None, :])
    return ey[:, :, None] * ex[:, None, :]


def synthesize_at(spec: GridSpec, series_coeffs: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Evaluate a series off the grid; trailing coefficient axes are carried through"""
    phase = series_phase(spec, points)
    return np.tensordot(phase, series_coeffs, axes=([1, 2], [0, 1]))
