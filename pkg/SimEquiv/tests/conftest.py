import numpy as np
import pytest

from models import FrequencyConfig, GridSpec, PolarSampling, RandomProcessParams
from utils.config import (BiasSettings, ExperimentConfig, ExperimentSettings, FrequencySettings,
                          PositionSettings, StimulusSettings)
from utils.monitoring import metrics


@pytest.fixture(autouse=True)
def reset_metrics():
    yield
    metrics.reset()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def unit_grid():
    """64 samples, one length unit per pixel"""
    return GridSpec(n=64, p=64.0)


@pytest.fixture
def small_grid():
    return GridSpec(n=16, p=16.0)


@pytest.fixture
def small_freqs():
    return FrequencyConfig.symmetric(k=2, radial_max=1.0, radial_step=0.5, alpha_rho=-1.0, alpha_r=0.0)


@pytest.fixture
def tiny_config():
    """A complete run that finishes in seconds"""
    return ExperimentConfig(
        grid=GridSpec(n=16, p=16.0),
        freqs=FrequencySettings(k=2, radial_max=1.0, radial_step=0.5),
        polar=PositionSettings(n_phi=8, n_logrho=6),
        velocity=PolarSampling(n_phi=8, n_logrho=4, logrho_min=-1.0, logrho_max=1.8),
        process=RandomProcessParams(n_particles=3000, step=0.25, T=0.05, tau=9.0, seed=7),
        bias=BiasSettings(sigma_rho=0.5, sigma_r=0.5, gamma=10.0),
        stimulus=StimulusSettings(kind="points", points=[(2.0, 0.0), (-2.0, 0.0), (0.0, 2.5)]),
        experiment=ExperimentSettings(iterations=2, name="tiny"),
    )


TINY_CFG = """\
[grid]
n = 16
p = 16.0

[freqs]
k = 2
radial_max = 1.0
radial_step = 0.5

[polar]
n_phi = 8
n_logrho = 6

[velocity]
n_phi = 8
n_logrho = 4
logrho_min = -1.0
logrho_max = 1.8

[process]
T = 0.05
tau = 9.0
n_particles = 3000
step = 0.25
seed = 7

[bias]
sigma_rho = 0.5
sigma_r = 0.5
gamma = 10.0

[stimulus]
kind = points
points = [[2.0, 0.0], [-2.0, 0.0], [0.0, 2.5]]

[experiment]
iterations = 2
name = tiny
"""


@pytest.fixture
def tiny_cfg_text():
    return TINY_CFG


@pytest.fixture
def tiny_cfg_path(tmp_path):
    path = tmp_path / "tiny.cfg"
    path.write_text(TINY_CFG)
    return path
