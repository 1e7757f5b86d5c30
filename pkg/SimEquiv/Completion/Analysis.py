"""Measurements on completion-field images"""
from typing import Optional

import numpy as np
from scipy import ndimage
from scipy.spatial import cKDTree

from Completion.Stimulus import stimulus_map
from models import GridSpec, SimilarityParams


def _radius(g: GridSpec) -> np.ndarray:
    x, y = g.mesh()
    return np.hypot(x, y)


def radial_profile(image: np.ndarray, g: GridSpec, bins: Optional[int] = None):
    """Mean value per one-pixel-wide ring; returns (ring centres, means)"""
    bins = bins or g.n // 2
    rho = _radius(g).ravel()
    edges = np.arange(bins + 1) * g.pixel_width
    index = np.digitize(rho, edges) - 1
    valid = (index >= 0) & (index < bins)
    sums = np.bincount(index[valid], weights=np.asarray(image, dtype=float).ravel()[valid], minlength=bins)
    counts = np.bincount(index[valid], minlength=bins)
    means = np.divide(sums, counts, out=np.zeros(bins), where=counts > 0)
    return 0.5 * (edges[:-1] + edges[1:]), means


def annulus_peak_radius(image: np.ndarray, g: GridSpec) -> float:
    centres, means = radial_profile(image, g)
    return float(centres[np.argmax(means)])


def square_circle_energy_ratio(image: np.ndarray, g: GridSpec, half_side: float, radius: float,
                               band: float) -> float:
    """Energy within `band` of the square's sides over energy within `band` of the circle"""
    x, y = g.mesh()
    energy = np.asarray(image, dtype=float)
    near_square = np.abs(np.maximum(np.abs(x), np.abs(y)) - half_side) <= band
    near_circle = np.abs(np.hypot(x, y) - radius) <= band
    circle = energy[near_circle].sum()
    return float(energy[near_square].sum() / circle) if circle > 0 else float("inf")


def contour_energy_fraction(image: np.ndarray, g: GridSpec, contour: np.ndarray, pixels: float = 3.0,
                            density: int = 20) -> float:
    """Share of the image energy within `pixels` of the closed polyline through `contour`"""
    pts = np.asarray(contour, dtype=float)
    following = np.roll(pts, -1, axis=0)
    t = np.linspace(0.0, 1.0, density, endpoint=False)[:, None, None]
    dense = (pts[None] * (1 - t) + following[None] * t).reshape(-1, 2)
    x, y = g.mesh()
    distance, _ = cKDTree(dense).query(np.column_stack([x.ravel(), y.ravel()]))
    energy = np.asarray(image, dtype=float).ravel()
    total = energy.sum()
    return float(energy[distance <= pixels * g.pixel_width].sum() / total) if total > 0 else 0.0


def align_to_reference(image: np.ndarray, g: GridSpec, reflection: Optional[float],
                       p: SimilarityParams) -> np.ndarray:
    """Pull a transformed-stimulus image back to the reference frame: out(x) = image(T(x))"""
    x, y = g.mesh()
    moved = stimulus_map(np.column_stack([x.ravel(), y.ravel()]), reflection, p)
    coords = np.stack([moved[:, 1] / g.pixel_width + g.n // 2, moved[:, 0] / g.pixel_width + g.n // 2])
    values = ndimage.map_coordinates(np.asarray(image, dtype=float), coords, order=1, mode="constant")
    return values.reshape(g.n, g.n)


def rotational_asymmetry(image: np.ndarray, g: GridSpec, folds: int = 8) -> float:
    """Largest deviation between the image and its copy rotated by 2pi/folds, relative to the image maximum"""
    rotated = align_to_reference(image, g, None, SimilarityParams(dtheta=2 * np.pi / folds))
    inner = _radius(g) < g.p / 2 - 2 * g.pixel_width
    peak = np.abs(image[inner]).max()
    return float(np.abs(rotated - image)[inner].max() / peak) if peak > 0 else 0.0


def normalized_cross_correlation(a: np.ndarray, b: np.ndarray, mask: Optional[np.ndarray] = None) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if mask is not None:
        a, b = a[mask], b[mask]
    a = a - a.mean()
    b = b - b.mean()
    denominator = np.linalg.norm(a) * np.linalg.norm(b)
    return float((a * b).sum() / denominator) if denominator > 0 else 0.0
