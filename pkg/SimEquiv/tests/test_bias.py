import math

import numpy as np
import pytest

from Completion.Bias import bias_field, eval_bias, wrap_angle
from Completion.Stimulus import Stimulus, make_stimulus
from models import BiasParams, GridSpec, OrientationPreference, PolarSampling
from utils.errors import DomainError


def test_value_without_preference():
    b = BiasParams(sigma_rho=0.5, sigma_r=0.5, gamma=0.0)
    assert eval_bias(b, 0.0, 1.0, 0.0, 1.0) == pytest.approx(math.exp(-2.0))
    # speed mismatch of one log unit
    assert eval_bias(b, 0.0, 1.0, 0.0, math.e) == pytest.approx(math.exp(-2.0) * math.exp(-2.0))


def test_phi_does_not_enter():
    b = BiasParams()
    assert eval_bias(b, 0.3, 1.2, 0.0, 1.0) == eval_bias(b, 2.9, 1.2, 0.0, 1.0)


def test_radial_peak_at_sigma_sqrt_gamma():
    b = BiasParams(sigma_rho=0.5, gamma=10.0)
    rho = np.linspace(0.2, 3.0, 2801)
    values = eval_bias(b, 0.0, rho, 0.0, rho)
    assert rho[np.argmax(values)] == pytest.approx(0.5 * math.sqrt(10.0), abs=2e-3)


def test_orientation_preference_peaks_orthogonal_to_arm():
    pref = OrientationPreference(theta_a=0.4, sigma_theta=0.3)
    b = BiasParams(gamma=0.0, orientation_pref=pref)
    theta = np.linspace(-np.pi, np.pi, 3601)
    values = eval_bias(b, 0.0, 1.0, theta, 1.0)
    peaks = theta[values > 0.999 * values.max()]
    assert np.min(np.abs(wrap_angle(peaks - (0.4 + np.pi / 2)))) < 2e-3 or \
        np.min(np.abs(wrap_angle(peaks - (0.4 - np.pi / 2)))) < 2e-3
    along = eval_bias(b, 0.0, 1.0, 0.4, 1.0)
    across = eval_bias(b, 0.0, 1.0, 0.4 + np.pi / 2, 1.0)
    assert along < 1e-3 * across


@pytest.mark.parametrize("rho, r", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0)])
def test_rejects_non_positive_radius(rho, r):
    with pytest.raises(DomainError):
        eval_bias(BiasParams(), 0.0, rho, 0.0, r)


def test_wrap_angle_range():
    wrapped = wrap_angle(np.array([-np.pi, np.pi, 3 * np.pi / 2, -7.0, 0.0]))
    assert np.all(wrapped > -np.pi) and np.all(wrapped <= np.pi)
    np.testing.assert_allclose(wrapped, [np.pi, np.pi, -np.pi / 2, -7.0 + 2 * np.pi, 0.0])


def test_bias_field_sums_points_and_zeroes_stimulus_sites():
    g = GridSpec(n=16, p=16.0)
    velocity = PolarSampling(n_phi=8, n_logrho=4, logrho_min=-1.0, logrho_max=0.8)
    b = BiasParams(gamma=2.0)
    single = bias_field(Stimulus(points=((2.0, 0.0),)), b, g, velocity)
    pair = bias_field(Stimulus(points=((2.0, 0.0), (-3.0, 1.0))), b, g, velocity)
    other = bias_field(Stimulus(points=((-3.0, 1.0),)), b, g, velocity)
    np.testing.assert_allclose(pair.data, single.data + other.data)
    assert np.all(single.data[8, 10] == 0)
    assert np.all(single.data.real >= 0)


def test_bias_field_switches_on_orientation_preference():
    g = GridSpec(n=32, p=24.0)
    velocity = PolarSampling(n_phi=8, n_logrho=4, logrho_min=-1.0, logrho_max=0.8)
    cross = make_stimulus("koffka_cross", arm_distance=6.0, arm_width=3.0)
    plain = Stimulus(points=cross.points)
    with_arms = bias_field(cross, BiasParams(), g, velocity)
    without = bias_field(plain, BiasParams(), g, velocity)
    assert with_arms.norm() < without.norm()


def test_bias_field_rejects_points_outside_window():
    g = GridSpec(n=16, p=16.0)
    velocity = PolarSampling(n_phi=8, n_logrho=4)
    with pytest.raises(DomainError):
        bias_field(Stimulus(points=((9.0, 0.0),)), BiasParams(), g, velocity)
