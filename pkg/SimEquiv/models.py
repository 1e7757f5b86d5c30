"""Domain parameter types"""
import math
from typing import Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from utils.errors import NyquistError

_FROZEN = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)


class GridSpec(BaseModel):
    """Square periodic sampling window, origin at sample (n/2, n/2)"""
    model_config = _FROZEN

    n: int = 128
    p: float = 48.0

    @field_validator("n")
    @classmethod
    def _even_and_large_enough(cls, v: int) -> int:
        if v < 8 or v % 2:
            raise ValueError(f"n must be an even integer >= 8, got {v}")
        return v

    @field_validator("p")
    @classmethod
    def _positive_period(cls, v: float) -> float:
        if v <= 0:
            raise ValueError(f"period must be positive, got {v}")
        return v

    @property
    def pixel_width(self) -> float:
        return self.p / self.n

    def frequencies(self) -> np.ndarray:
        """Signed spatial frequencies [-n/2, n/2 - 1]"""
        return np.arange(-(self.n // 2), self.n // 2)

    def coordinates(self) -> np.ndarray:
        return (np.arange(self.n) - self.n // 2) * self.pixel_width

    def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        """X[iy, ix], Y[iy, ix]"""
        c = self.coordinates()
        return np.meshgrid(c, c, indexing="xy")

    def polar(self) -> Tuple[np.ndarray, np.ndarray]:
        """(phi, rho) per sample; phi in (-pi, pi]"""
        x, y = self.mesh()
        return np.arctan2(y, x), np.hypot(x, y)

    def frequency_mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        """WX[ky, kx], WY[ky, kx]"""
        w = self.frequencies()
        return np.meshgrid(w, w, indexing="xy")

    def log_radius_window(self) -> Tuple[float, float]:
        return math.log(self.pixel_width), math.log(self.p / 2)


class PinwheelFrequency(BaseModel):
    """One (omega_phi, alpha + i omega_rho) pair"""
    model_config = _FROZEN

    omega_phi: int
    alpha: float
    omega_rho: float = 0.0

    @property
    def s(self) -> complex:
        return complex(self.alpha, self.omega_rho)


def check_nyquist(freqs: Sequence[int], n_samples: int, axis: str = "phi") -> None:
    """Angular frequencies must be resolvable and mutually alias-free on n_samples"""
    freqs = [int(f) for f in freqs]
    max_abs = max(abs(f) for f in freqs)
    aliased = len({f % n_samples for f in freqs}) < len(freqs)
    if n_samples < 2 * max_abs or aliased:
        raise NyquistError(
            f"{n_samples} samples on {axis} cannot resolve angular frequency {max_abs}",
            {"axis": axis, "n_samples": n_samples, "max_frequency": max_abs},
        )


class FrequencyConfig(BaseModel):
    """Angular and radial frequency sets shared by position and velocity axes"""
    model_config = _FROZEN

    angular_freqs: Tuple[int, ...]
    radial_freqs: Tuple[float, ...]
    alpha_rho: float = -1.0
    alpha_r: float = 0.0

    @field_validator("angular_freqs")
    @classmethod
    def _consecutive(cls, v):
        if not v or any(b - a != 1 for a, b in zip(v, v[1:])):
            raise ValueError("angular_freqs must be consecutive integers")
        return v

    @field_validator("radial_freqs")
    @classmethod
    def _uniform(cls, v):
        if not v:
            raise ValueError("radial_freqs must not be empty")
        steps = np.diff(v)
        if len(steps) and (np.any(steps <= 0) or np.ptp(steps) > 1e-9 * max(1.0, abs(steps[0]))):
            raise ValueError("radial_freqs must be increasing with a uniform step")
        return v

    @classmethod
    def symmetric(cls, k: int = 8, radial_max: float = 4.0, radial_step: float = 0.5,
                  alpha_rho: float = -1.0, alpha_r: float = 0.0) -> "FrequencyConfig":
        """Angular [-k, k-1], radial [-radial_max, radial_max - step]"""
        count = int(round(2 * radial_max / radial_step))
        radial = tuple(float(-radial_max + i * radial_step) for i in range(count))
        return cls(angular_freqs=tuple(range(-k, k)), radial_freqs=radial,
                   alpha_rho=alpha_rho, alpha_r=alpha_r)

    @property
    def radial_step(self) -> float:
        if len(self.radial_freqs) < 2:
            return 1.0
        return float(self.radial_freqs[1] - self.radial_freqs[0])

    @property
    def angular(self) -> np.ndarray:
        return np.asarray(self.angular_freqs, dtype=int)

    @property
    def radial(self) -> np.ndarray:
        return np.asarray(self.radial_freqs, dtype=float)

    @property
    def max_angular(self) -> int:
        return int(np.max(np.abs(self.angular)))

    def angular_differences(self) -> np.ndarray:
        m = len(self.angular_freqs)
        return np.arange(-(m - 1), m)

    def radial_differences(self) -> np.ndarray:
        w = len(self.radial_freqs)
        return np.arange(-(w - 1), w) * self.radial_step

    def negated(self) -> "FrequencyConfig":
        """Frequencies (-omega_phi, -omega_rho), still in increasing order"""
        return self.model_copy(update={
            "angular_freqs": tuple(-f for f in reversed(self.angular_freqs)),
            "radial_freqs": tuple(-f for f in reversed(self.radial_freqs)),
        })


class PolarSampling(BaseModel):
    """Uniform samples in angle over [0, 2pi) and in log-radius over a closed window"""
    model_config = _FROZEN

    n_phi: int = Field(36, ge=1)
    n_logrho: int = Field(8, ge=2)
    logrho_min: float = -1.0
    logrho_max: float = 1.8

    @model_validator(mode="after")
    def _window_ordered(self):
        if self.logrho_max <= self.logrho_min:
            raise ValueError("logrho_max must exceed logrho_min")
        return self

    @classmethod
    def for_grid(cls, grid: GridSpec, n_phi: int = 64, n_logrho: int = 32) -> "PolarSampling":
        """Position sampling covering the resolvable radii [pixel_width, P/2]"""
        lo, hi = grid.log_radius_window()
        return cls(n_phi=n_phi, n_logrho=n_logrho, logrho_min=lo, logrho_max=hi)

    def phis(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.n_phi) / self.n_phi

    def logrhos(self) -> np.ndarray:
        return np.linspace(self.logrho_min, self.logrho_max, self.n_logrho)

    def rhos(self) -> np.ndarray:
        return np.exp(self.logrhos())

    @property
    def log_step(self) -> float:
        return (self.logrho_max - self.logrho_min) / (self.n_logrho - 1)

    def trapezoid_weights(self) -> np.ndarray:
        w = np.full(self.n_logrho, self.log_step)
        w[[0, -1]] *= 0.5
        return w

    def check_nyquist(self, freqs: Sequence[int], axis: str = "phi") -> None:
        check_nyquist(freqs, self.n_phi, axis)


class SimilarityParams(BaseModel):
    """Translation (dx, dy), rotation dtheta and dilation a; rotation/dilation act first"""
    model_config = _FROZEN

    dx: float = 0.0
    dy: float = 0.0
    dtheta: float = 0.0
    a: float = 1.0

    @field_validator("a")
    @classmethod
    def _positive_dilation(cls, v: float) -> float:
        if v <= 0:
            raise ValueError(f"dilation must be positive, got {v}")
        return v

    @classmethod
    def identity(cls) -> "SimilarityParams":
        return cls()

    def apply(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        c, s = math.cos(self.dtheta), math.sin(self.dtheta)
        rotated = pts @ np.array([[c, s], [-s, c]])
        return self.a * rotated + np.array([self.dx, self.dy])

    def inverse(self) -> "SimilarityParams":
        c, s = math.cos(-self.dtheta), math.sin(-self.dtheta)
        tx, ty = -self.dx / self.a, -self.dy / self.a
        return SimilarityParams(dx=c * tx - s * ty, dy=s * tx + c * ty, dtheta=-self.dtheta, a=1.0 / self.a)


class RandomProcessParams(BaseModel):
    """Direction-diffusion particle process"""
    model_config = _FROZEN

    T: float = Field(0.018, ge=0)
    tau: float = Field(9.0, gt=0)
    corner_weight: float = Field(0.0, ge=0)
    n_particles: int = Field(100_000, ge=1)
    step: float = Field(0.125, gt=0)
    seed: int = Field(0, ge=0, lt=2**64)
    max_arc_length: Optional[float] = Field(None, gt=0)

    def arc_length(self, grid: GridSpec) -> float:
        return self.max_arc_length if self.max_arc_length is not None else grid.p / 2


class OrientationPreference(BaseModel):
    """Preference for headings orthogonal to an arm at angle theta_a"""
    model_config = _FROZEN

    theta_a: float
    sigma_theta: float = Field(0.3, gt=0)


class BiasParams(BaseModel):
    """Parameters of the shiftable, steerable, scalable bias"""
    model_config = _FROZEN

    sigma_rho: float = Field(0.5, gt=0)
    sigma_r: float = Field(0.5, gt=0)
    gamma: float = 10.0
    orientation_pref: Optional[OrientationPreference] = None
