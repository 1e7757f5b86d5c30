import numpy as np

from .GreensFunctionSampler import GreensFunctionSampler


class CornerGreensFunction(GreensFunctionSampler):
    """Every particle turns once: at a uniform step it takes a uniform new heading"""

    def reset_schedule(self, rng, count, n_steps):
        steps = rng.integers(0, max(n_steps, 1), size=count)
        headings = rng.uniform(0.0, 2 * np.pi, size=count)
        return steps, headings
