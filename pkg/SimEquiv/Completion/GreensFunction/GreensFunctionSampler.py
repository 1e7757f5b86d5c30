"""Monte Carlo estimate of the direction-diffusion transition density"""
import logging
import math
import sys
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict
from tqdm import tqdm

from models import GridSpec, PolarSampling, RandomProcessParams
from Transforms.JointAfmt import OrientationScaleField
from utils.config import ConfigManager, resolve_workers
from utils.monitoring import track_performance

logger = logging.getLogger(__name__)

# Fixed so that a seed yields the same chunks whatever the worker count
PARTICLE_CHUNK = 10_000


class ParticleState(BaseModel):
    """End-of-path particle data, concatenated in chunk order"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    positions: np.ndarray
    headings: np.ndarray
    weights: np.ndarray
    reset_headings: Optional[np.ndarray] = None


class GreensFunctionSampler(ABC):
    """Particles start at the origin heading along theta = 0 with unit speed.

    Each step of length `step` moves a particle along its heading, deposits
    weight * step into the (x, y, theta) bin it reached, perturbs the heading
    by a normal increment of variance T * step and decays the weight by
    e^{-step / tau}. Subclasses decide whether headings are ever reset.
    """

    def __init__(self, params: RandomProcessParams, grid: GridSpec, velocity: PolarSampling,
                 workers: Optional[int] = None):
        self.params = params
        self.grid = grid
        self.velocity = velocity
        self.workers = resolve_workers(workers)

    @abstractmethod
    def reset_schedule(self, rng: np.random.Generator, count: int, n_steps: int) -> Optional[Tuple[np.ndarray, np.ndarray]]:
        """(step index, new heading) per particle, or None when headings are never reset"""
        pass

    def n_steps(self, arc_length: Optional[float] = None) -> int:
        length = self.params.arc_length(self.grid) if arc_length is None else arc_length
        return max(int(round(length / self.params.step)), 0)

    def _chunks(self, n_particles: int) -> List[Tuple[np.random.SeedSequence, int]]:
        counts = [PARTICLE_CHUNK] * (n_particles // PARTICLE_CHUNK)
        if n_particles % PARTICLE_CHUNK:
            counts.append(n_particles % PARTICLE_CHUNK)
        seeds = np.random.SeedSequence(self.params.seed).spawn(len(counts))
        return list(zip(seeds, counts))

    def _run_chunk(self, seed: np.random.SeedSequence, count: int, n_steps: int, deposit: bool):
        p = self.params
        rng = np.random.default_rng(seed)
        schedule = self.reset_schedule(rng, count, n_steps)
        x = np.zeros(count)
        y = np.zeros(count)
        theta = np.zeros(count)
        weight = np.ones(count)
        decay = math.exp(-p.step / p.tau)
        kick = math.sqrt(p.T * p.step)
        reset_headings = None if schedule is None else np.full(count, np.nan)

        n = self.grid.n
        n_theta = self.velocity.n_phi
        pw = self.grid.pixel_width
        indices, deposits = [], []
        for k in range(n_steps):
            x += p.step * np.cos(theta)
            y += p.step * np.sin(theta)
            if deposit:
                ix = np.rint(x / pw).astype(np.int64) + n // 2
                iy = np.rint(y / pw).astype(np.int64) + n // 2
                it = np.mod(np.rint(theta * n_theta / (2 * np.pi)).astype(np.int64), n_theta)
                inside = (ix >= 0) & (ix < n) & (iy >= 0) & (iy < n)
                indices.append(((iy * n + ix) * n_theta + it)[inside])
                deposits.append(weight[inside] * p.step)
            theta += kick * rng.standard_normal(count)
            if schedule is not None:
                hit = schedule[0] == k
                theta[hit] = schedule[1][hit]
                reset_headings[hit] = schedule[1][hit]
            weight *= decay

        histogram = None
        if deposit:
            flat = np.concatenate(indices) if indices else np.zeros(0, dtype=np.int64)
            values = np.concatenate(deposits) if deposits else np.zeros(0)
            histogram = np.bincount(flat, weights=values, minlength=n * n * n_theta)
        state = (np.column_stack([x, y]), theta, weight, reset_headings)
        return state, histogram

    def _map_chunks(self, n_particles: int, n_steps: int, deposit: bool):
        chunks = self._chunks(n_particles)
        show = ConfigManager().get_processing_config().show_progress and sys.stderr.isatty()
        with ThreadPoolExecutor(max_workers=self.workers) as pool:
            results = pool.map(lambda item: self._run_chunk(item[0], item[1], n_steps, deposit), chunks)
            return list(tqdm(results, total=len(chunks), desc=type(self).__name__, disable=not show))

    def simulate(self, arc_length: Optional[float] = None, n_particles: Optional[int] = None) -> ParticleState:
        """Particle states after the given arc length, without binning"""
        n_particles = n_particles or self.params.n_particles
        results = self._map_chunks(n_particles, self.n_steps(arc_length), deposit=False)
        states = [state for state, _ in results]
        resets = None if states[0][3] is None else np.concatenate([s[3] for s in states])
        return ParticleState(
            positions=np.concatenate([s[0] for s in states]),
            headings=np.concatenate([s[1] for s in states]),
            weights=np.concatenate([s[2] for s in states]),
            reset_headings=resets,
        )

    def speed_profile(self) -> np.ndarray:
        """Unit speed spread onto the log-speed samples by linear weights, as a density in log r"""
        v = self.velocity
        position = (0.0 - v.logrho_min) / v.log_step
        profile = np.zeros(v.n_logrho)
        lower = int(math.floor(position))
        frac = position - lower
        for index, share in ((lower, 1.0 - frac), (lower + 1, frac)):
            if 0 <= index < v.n_logrho and share > 0:
                profile[index] += share
        if not profile.any():
            logger.warning("unit speed lies outside the log-speed window; the Green's function is empty")
        return profile / v.log_step

    @track_performance("greens_function")
    def sample(self) -> OrientationScaleField:
        """Density over (x, y, theta, r) per unit area, radian and log speed"""
        n, n_theta = self.grid.n, self.velocity.n_phi
        results = self._map_chunks(self.params.n_particles, self.n_steps(), deposit=True)
        total = np.zeros(n * n * n_theta)
        for _, histogram in results:
            total += histogram
        cell = self.params.n_particles * self.grid.pixel_width**2 * (2 * np.pi / n_theta)
        density = (total / cell).reshape(n, n, n_theta)
        data = density[:, :, :, None] * self.speed_profile()[None, None, None, :]
        logger.info(f"{type(self).__name__}: {self.params.n_particles} particles, "
                    f"{self.n_steps()} steps, mass {total.sum() / self.params.n_particles:.4f}")
        return OrientationScaleField(spec=self.grid, sampling=self.velocity, data=data.astype(complex))
