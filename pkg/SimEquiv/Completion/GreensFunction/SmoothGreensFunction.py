from .GreensFunctionSampler import GreensFunctionSampler


class SmoothGreensFunction(GreensFunctionSampler):
    """Headings only diffuse"""

    def reset_schedule(self, rng, count, n_steps):
        return None
