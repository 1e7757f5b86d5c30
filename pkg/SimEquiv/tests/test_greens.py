import math

import numpy as np
import pytest

from Completion.GreensFunction import (PARTICLE_CHUNK, CornerGreensFunction, SmoothGreensFunction,
                                       corner_greens_function, greens_function)
from models import GridSpec, PolarSampling, RandomProcessParams


@pytest.fixture
def grid():
    return GridSpec(n=32, p=32.0)


@pytest.fixture
def velocity():
    return PolarSampling(n_phi=12, n_logrho=8, logrho_min=-1.0, logrho_max=1.8)


def test_heading_variance_and_mass_decay(grid, velocity):
    """Desk values T = 0.018, tau = 9 over an arc of 10"""
    params = RandomProcessParams(T=0.018, tau=9.0, step=0.125, n_particles=20_000, seed=3, max_arc_length=10.0)
    sampler = SmoothGreensFunction(params, grid, velocity, workers=2)
    state = sampler.simulate()
    length = sampler.n_steps() * params.step
    assert length == pytest.approx(10.0)

    variance = np.var(state.headings)
    expected = params.T * length
    # sampling sd of a normal variance estimate is sqrt(2/N) * sigma^2
    assert abs(variance - expected) <= 3 * math.sqrt(2 / params.n_particles) * expected
    np.testing.assert_allclose(state.weights, math.exp(-length / params.tau), rtol=1e-9)
    assert state.reset_headings is None


def test_mean_direction_cosine(grid, velocity):
    params = RandomProcessParams(T=0.1, tau=9.0, step=0.25, n_particles=20_000, seed=11, max_arc_length=10.0)
    state = SmoothGreensFunction(params, grid, velocity).simulate()
    assert np.cos(state.headings).mean() == pytest.approx(math.exp(-params.T * 10.0 / 2), abs=0.015)


def test_straight_paths_without_diffusion(grid, velocity):
    params = RandomProcessParams(T=0.0, step=0.5, n_particles=100, max_arc_length=6.0)
    state = SmoothGreensFunction(params, grid, velocity).simulate()
    np.testing.assert_allclose(state.positions, np.tile([6.0, 0.0], (100, 1)), atol=1e-12)
    assert not np.any(state.headings)


def test_sampled_density_integrates_to_path_mass(grid, velocity):
    params = RandomProcessParams(T=0.0, tau=1e9, step=0.5, n_particles=1000, max_arc_length=10.0)
    field = SmoothGreensFunction(params, grid, velocity).sample()
    assert field.data.shape == (32, 32, 12, 8)
    cell = grid.pixel_width**2 * (2 * np.pi / velocity.n_phi) * velocity.log_step
    assert field.data.real.sum() * cell == pytest.approx(10.0, rel=1e-6)
    # everything stays on the +x axis at heading 0
    centre = grid.n // 2
    assert np.abs(field.data[centre + 1:, :, :, :]).sum() == 0
    assert np.abs(field.data[:, :, 1:, :]).sum() == 0


def test_speed_profile_is_a_unit_density_at_log_speed_zero(grid, velocity):
    sampler = SmoothGreensFunction(RandomProcessParams(), grid, velocity)
    profile = sampler.speed_profile()
    assert profile.sum() * velocity.log_step == pytest.approx(1.0)
    position = -velocity.logrho_min / velocity.log_step
    assert np.argmax(profile) in (math.floor(position), math.ceil(position))


def test_same_seed_same_field_whatever_the_workers(grid, velocity):
    params = RandomProcessParams(T=0.05, step=0.25, n_particles=2 * PARTICLE_CHUNK + 500, seed=5, max_arc_length=8.0)
    one = greens_function(params, grid, velocity, workers=1)
    many = greens_function(params, grid, velocity, workers=3)
    np.testing.assert_array_equal(one.data, many.data)
    other = greens_function(params.model_copy(update={"seed": 6}), grid, velocity, workers=1)
    assert not np.array_equal(one.data, other.data)


def test_corner_process_resets_each_particle_once(grid, velocity):
    params = RandomProcessParams(T=0.0, step=0.5, n_particles=40_000, seed=2, max_arc_length=8.0)
    state = CornerGreensFunction(params, grid, velocity, workers=2).simulate()
    assert not np.any(np.isnan(state.reset_headings))
    np.testing.assert_array_equal(state.headings, state.reset_headings)
    counts, _ = np.histogram(state.headings, bins=8, range=(0, 2 * np.pi))
    expected = params.n_particles / 8
    assert np.all(np.abs(counts - expected) < 5 * math.sqrt(expected))


def test_corner_field_uses_an_independent_seed(grid, velocity):
    params = RandomProcessParams(T=0.02, step=0.5, n_particles=2000, seed=9, max_arc_length=8.0)
    shifted = CornerGreensFunction(params.model_copy(update={"seed": 10}), grid, velocity).sample()
    np.testing.assert_array_equal(corner_greens_function(params, grid, velocity).data, shifted.data)
