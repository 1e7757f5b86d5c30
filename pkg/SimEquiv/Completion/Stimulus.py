"""Point stimuli for completion-field experiments"""
import logging
import math
from typing import Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from models import GridSpec, SimilarityParams
from utils.errors import DomainError

logger = logging.getLogger(__name__)

STIMULUS_KINDS = ("eight_dot_circle", "koffka_cross", "avocado", "points")


class Stimulus(BaseModel):
    """Positions with an optional arm angle each; arm angles request headings orthogonal to the arm"""
    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    points: Tuple[Tuple[float, float], ...]
    arm_angles: Tuple[Optional[float], ...] = ()

    @model_validator(mode="after")
    def _aligned(self):
        if self.arm_angles and len(self.arm_angles) != len(self.points):
            raise ValueError("arm_angles must match points one to one")
        return self

    def array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=float).reshape(-1, 2)

    def arm_angle(self, i: int) -> Optional[float]:
        return self.arm_angles[i] if self.arm_angles else None

    def check_inside(self, grid: GridSpec) -> None:
        half = grid.p / 2
        pts = self.array()
        outside = np.any(np.abs(pts) >= half, axis=1)
        if np.any(outside):
            raise DomainError(f"{int(outside.sum())} stimulus points lie outside the grid window",
                              {"first": pts[outside][0].tolist(), "half_width": half})


def _from_array(points: np.ndarray, arm_angles=()) -> Stimulus:
    return Stimulus(points=tuple(map(tuple, np.asarray(points, dtype=float).tolist())),
                    arm_angles=tuple(arm_angles))


def avocado_contour(radius: float, samples: int) -> np.ndarray:
    """Egg-shaped closed curve, narrower towards +y"""
    t = 2 * np.pi * np.arange(samples) / samples + np.pi / 2
    x = radius * 0.8 * np.cos(t) * (1 - 0.2 * np.sin(t))
    y = radius * np.sin(t)
    return np.column_stack([x, y])


def koffka_corners(arm_distance: float, arm_width: float) -> Tuple[np.ndarray, np.ndarray]:
    """Corners of the inner ends of four arms along 0, 90, 180 and 270 degrees"""
    points, angles = [], []
    for theta_a in (0.0, np.pi / 2, np.pi, 3 * np.pi / 2):
        along = np.array([math.cos(theta_a), math.sin(theta_a)])
        across = np.array([-along[1], along[0]])
        for side in (1.0, -1.0):
            points.append(arm_distance * along + side * arm_width / 2 * across)
            angles.append(theta_a)
    return np.array(points), np.array(angles)


def make_stimulus(kind: str, radius: float = 10.0, n_dots: int = 8, arm_distance: float = 6.0,
                  arm_width: float = 3.0, contour_points: int = 20, noise_points: int = 20,
                  noise_seed: int = 0, points=()) -> Stimulus:
    if kind == "eight_dot_circle":
        angles = 2 * np.pi * np.arange(n_dots) / n_dots
        return _from_array(radius * np.column_stack([np.cos(angles), np.sin(angles)]))
    if kind == "koffka_cross":
        corners, arm_angles = koffka_corners(arm_distance, arm_width)
        return _from_array(corners, arm_angles.tolist())
    if kind == "avocado":
        contour = avocado_contour(radius, contour_points)
        rng = np.random.default_rng(noise_seed)
        noise = rng.uniform(-1.25 * radius, 1.25 * radius, size=(noise_points, 2))
        return _from_array(np.vstack([contour, noise]))
    if kind == "points":
        return _from_array(np.asarray(points, dtype=float).reshape(-1, 2))
    raise DomainError(f"Unknown stimulus kind {kind!r}", {"kind": kind, "valid": list(STIMULUS_KINDS)})


def stimulus_map(points: np.ndarray, reflection: Optional[float], p: SimilarityParams) -> np.ndarray:
    """Reflect about the line at angle `reflection` through the origin, then rotate, dilate, translate"""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if reflection is not None:
        z = (pts[:, 0] + 1j * pts[:, 1]).conj() * np.exp(2j * reflection)
        pts = np.column_stack([z.real, z.imag])
    return p.apply(pts)


def transform_stimulus(s: Stimulus, reflection: Optional[float], p: SimilarityParams) -> Stimulus:
    moved = stimulus_map(s.array(), reflection, p)
    angles = []
    for theta_a in s.arm_angles:
        if theta_a is None:
            angles.append(None)
            continue
        if reflection is not None:
            theta_a = 2 * reflection - theta_a
        angles.append(float(np.mod(theta_a + p.dtheta, 2 * np.pi)))
    return _from_array(moved, angles)
