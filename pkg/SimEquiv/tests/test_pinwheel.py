import cmath
import math

import numpy as np
import pytest
from scipy import integrate, special

from models import GridSpec, PinwheelFrequency
from SpecMath import (band_window, compute_epsilon, eval_pinwheel, fourier_pinwheel_coeff, fourier_pinwheel_grid,
                      fourier_pinwheel_stack, fourier_pinwheel_table, pinwheel_coefficients, sample_pinwheel)
from Transforms.Grids import synthesize_at
from utils.errors import DomainError


def test_eval_at_unit_radius_origin_angle():
    for f in (PinwheelFrequency(omega_phi=3, alpha=-1.2, omega_rho=0.7), PinwheelFrequency(omega_phi=-2, alpha=0.5)):
        assert eval_pinwheel(0.0, 1.0, f) == pytest.approx(1.0)


def test_eval_phase():
    f = PinwheelFrequency(omega_phi=5, alpha=-1.0)
    assert eval_pinwheel(math.pi / 2, 1.0, f) == pytest.approx(1j, abs=1e-14)


def test_eval_log_chirp():
    f = PinwheelFrequency(omega_phi=0, alpha=-1.0, omega_rho=1.0)
    expected = math.exp(-1) * cmath.exp(1j)
    assert eval_pinwheel(0.0, math.e, f) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("rho", [0.0, -1.0, float("nan")])
def test_eval_rejects_bad_radius(rho):
    with pytest.raises(DomainError):
        eval_pinwheel(0.0, rho, PinwheelFrequency(omega_phi=1, alpha=-1.0))


def test_sample_pinwheel_origin_and_unit_sample(unit_grid):
    f = PinwheelFrequency(omega_phi=0, alpha=-1.0)
    grid = sample_pinwheel(unit_grid, f)
    centre = unit_grid.n // 2
    assert grid.data[centre, centre] == 0
    assert grid.data[centre, centre + 1] == pytest.approx(1.0)
    # +y is the first axis
    g5 = sample_pinwheel(unit_grid, PinwheelFrequency(omega_phi=1, alpha=-1.0)).data
    assert g5[centre + 2, centre] == pytest.approx(0.5j)


def disk_quadrature(wx, wy, omega_phi, s, p):
    """(2pi/P^2)(-i)^m e^{i w_phi phi_bar} integral_0^{P/2} rho^{s+1} J_m(k rho) d rho, rho = (P/2) e^{-u}"""
    m = abs(omega_phi)
    wx, wy = np.asarray(wx), np.asarray(wy)
    r2, inverse = np.unique(wx**2 + wy**2, return_inverse=True)
    k = 2 * np.pi * np.sqrt(r2) / p
    radius = p / 2

    def integrand(u):
        rho = radius * np.exp(-u)
        v = np.exp((s + 2) * np.log(rho)) * special.jv(m, k * rho)
        return np.concatenate([v.real, v.imag])

    values, _ = integrate.quad_vec(integrand, 0.0, 80.0, epsrel=1e-10, limit=20000)
    radial = values[:len(k)] + 1j * values[len(k):]
    return 2 * np.pi / p**2 * (-1j) ** m * np.exp(1j * omega_phi * np.arctan2(wy, wx)) * radial[inverse.reshape(wx.shape)]


def correlation(a, b):
    return abs(np.vdot(a, b)) / (np.linalg.norm(a) * np.linalg.norm(b))


def test_fourier_table_sums_to_zero(unit_grid):
    table = fourier_pinwheel_table(unit_grid, 2, -1.0, 0.5)
    assert abs(table.sum()) <= 1e-12 * np.abs(table).sum()


def test_epsilon_cancels_the_windowed_sum(unit_grid):
    f = PinwheelFrequency(omega_phi=0, alpha=-1.0, omega_rho=0.5)
    wx, wy = unit_grid.frequency_mesh()
    raw = pinwheel_coefficients(wx, wy, f.omega_phi, f.s, unit_grid.p) * band_window(unit_grid)
    eps = compute_epsilon(f, unit_grid)
    assert eps == pytest.approx(-raw.sum() / unit_grid.n**2, rel=1e-9)
    assert abs(eps) > 0
    centre = unit_grid.n // 2
    table = fourier_pinwheel_table(unit_grid, 0, -1.0, 0.5)
    assert fourier_pinwheel_coeff(0, 0, f, unit_grid) == table[centre, centre] == eps
    # [ky, kx] order
    assert fourier_pinwheel_coeff(3, -4, f, unit_grid) == table[centre - 4, centre + 3]


@pytest.mark.parametrize("omega_phi", [1, 2, 3, 5, -6])
def test_epsilon_vanishes_without_fourfold_harmonic(unit_grid, omega_phi):
    """Quarter turns of the band multiply the table by i^m, so its sum is zero unless 4 | m"""
    table = fourier_pinwheel_table(unit_grid, omega_phi, -1.2, 0.7)
    eps = compute_epsilon(PinwheelFrequency(omega_phi=omega_phi, alpha=-1.2, omega_rho=0.7), unit_grid)
    assert abs(eps) * unit_grid.n**2 <= 1e-12 * np.abs(table).sum()


def test_table_turns_with_its_angular_frequency(unit_grid):
    table = fourier_pinwheel_table(unit_grid, 3, -1.1, -0.4)
    inner = table[1:, 1:]
    np.testing.assert_allclose(np.rot90(inner), 1j**3 * inner, atol=1e-12 * np.abs(inner).max())


def test_band_window_profile(unit_grid):
    window = band_window(unit_grid, 0.5)
    wx, wy = unit_grid.frequency_mesh()
    radius = np.hypot(wx, wy)
    assert np.all(window[radius <= 16] == 1.0)
    assert np.all(window[radius >= 32] == 0.0)
    inside = (radius > 16) & (radius < 32)
    assert np.all((window[inside] > 0) & (window[inside] < 1))
    np.testing.assert_array_equal(band_window(unit_grid, 1.0), 1.0)
    with pytest.raises(DomainError):
        band_window(unit_grid, 1.5)


def test_nyquist_lines_carry_only_epsilon(unit_grid):
    table = fourier_pinwheel_table(unit_grid, 1, -1.5, -0.5)
    np.testing.assert_allclose(table[0, :], table[32, 32], atol=1e-15)
    np.testing.assert_allclose(table[:, 0], table[32, 32], atol=1e-15)


def test_hard_band_edge_folds_both_nyquist_partners(unit_grid):
    s, half = complex(-1.0, 0.5), unit_grid.n // 2
    table = fourier_pinwheel_stack(unit_grid, np.array([3]), -1.0, np.array([0.5]), rolloff=1.0)[:, :, 0, 0]
    eps = table[half, half]
    row = 0.5 * (pinwheel_coefficients(5, -half, 3, s, unit_grid.p) + pinwheel_coefficients(5, half, 3, s, unit_grid.p))
    assert table[0, half + 5] - eps == pytest.approx(complex(row), rel=1e-10)
    corners = pinwheel_coefficients(np.array([-half, half, -half, half]), np.array([-half, -half, half, half]),
                                    3, s, unit_grid.p)
    assert table[0, 0] - eps == pytest.approx(complex(corners.mean()), rel=1e-10)


def test_fourier_table_is_read_only_cache_safe(unit_grid):
    first = fourier_pinwheel_table(unit_grid, 1, -1.5)
    first[:] = 0
    assert np.abs(fourier_pinwheel_table(unit_grid, 1, -1.5)).max() > 0


@pytest.mark.parametrize("alpha", [-2.0, -0.5, 0.0, -2.5])
def test_alpha_outside_validity_interval(unit_grid, alpha):
    with pytest.raises(DomainError):
        fourier_pinwheel_table(unit_grid, 1, alpha)
    with pytest.raises(DomainError):
        fourier_pinwheel_coeff(1, 1, PinwheelFrequency(omega_phi=1, alpha=alpha), unit_grid)


def test_coefficient_outside_the_grid_band(unit_grid):
    with pytest.raises(DomainError):
        fourier_pinwheel_coeff(32, 0, PinwheelFrequency(omega_phi=1, alpha=-1.0), unit_grid)


def test_stack_matches_single_tables(small_grid):
    omega_phis = np.array([-2, 0, 3])
    omega_rhos = np.array([-0.5, 0.0, 1.5])
    stack = fourier_pinwheel_stack(small_grid, omega_phis, -1.3, omega_rhos)
    assert stack.shape == (16, 16, 3, 3)
    for i, m in enumerate(omega_phis):
        for j, w in enumerate(omega_rhos):
            np.testing.assert_allclose(stack[:, :, i, j], fourier_pinwheel_table(small_grid, m, -1.3, w),
                                       rtol=1e-11, atol=1e-13)


def test_synthesis_origin_is_zero(unit_grid):
    grid = fourier_pinwheel_grid(unit_grid, PinwheelFrequency(omega_phi=3, alpha=-1.0, omega_rho=0.5))
    assert abs(grid.data[32, 32]) < 1e-12


def test_synthesis_is_dominated_by_its_angular_harmonic(unit_grid):
    """On a ring the periodized, band-limited pinwheel keeps its angular frequency"""
    omega_phi, radius = 5, 8.0
    table = fourier_pinwheel_table(unit_grid, omega_phi, -1.0, 0.0)
    angles = 2 * np.pi * np.arange(64) / 64
    ring = radius * np.column_stack([np.cos(angles), np.sin(angles)])
    values = synthesize_at(unit_grid, table, ring)
    harmonics = np.fft.fft(values) / len(values)
    energy = np.abs(harmonics) ** 2
    assert energy[omega_phi] / energy.sum() > 0.8
    assert abs(harmonics[omega_phi]) == pytest.approx(radius ** -1.0, rel=0.25)


def test_synthesized_phase_matches_direct_pinwheel(unit_grid):
    f = PinwheelFrequency(omega_phi=2, alpha=-1.5, omega_rho=0.0)
    direct = sample_pinwheel(unit_grid, f).data
    synthesized = fourier_pinwheel_grid(unit_grid, f).data
    x, y = unit_grid.mesh()
    rho = np.hypot(x, y)
    gate = (rho >= 3) & (rho <= 10)
    phase_error = np.angle(synthesized[gate] * np.conj(direct[gate]))
    assert np.median(np.abs(phase_error)) < 0.05
    assert np.mean(np.abs(phase_error) < 0.2) > 0.9


def test_synthesized_magnitude_matches_direct_pinwheel(unit_grid):
    """No ridges along the axes through the origin"""
    f = PinwheelFrequency(omega_phi=1, alpha=-1.5, omega_rho=-0.5)
    direct = sample_pinwheel(unit_grid, f).data
    synthesized = fourier_pinwheel_grid(unit_grid, f).data
    x, y = unit_grid.mesh()
    rho = np.hypot(x, y)
    ring = (rho >= 4) & (rho <= 12)
    error = np.linalg.norm(np.abs(synthesized[ring]) - np.abs(direct[ring])) / np.linalg.norm(direct[ring])
    assert error < 0.1
    centre = unit_grid.n // 2
    for iy, ix in ((centre + 8, centre), (centre - 8, centre), (centre, centre + 8), (centre, centre - 8)):
        assert abs(synthesized[iy, ix]) == pytest.approx(8.0 ** -1.5, rel=0.1)


@pytest.mark.parametrize("omega_phi, alpha, omega_rho", [(5, -1.0, 0.5), (2, -1.25, -1.0), (1, -0.75, 0.0)])
def test_phase_on_magnitude_gated_samples(omega_phi, alpha, omega_rho):
    g = GridSpec(n=256, p=256.0)
    f = PinwheelFrequency(omega_phi=omega_phi, alpha=alpha, omega_rho=omega_rho)
    direct = sample_pinwheel(g, f).data
    synthesized = fourier_pinwheel_grid(g, f).data
    gate = ((np.abs(direct) > 0.01 * np.abs(direct).max())
            & (np.abs(synthesized) > 0.01 * np.abs(synthesized).max()))
    phase_error = np.abs(np.angle(synthesized[gate] * np.conj(direct[gate])))
    assert gate.sum() > 1000
    assert np.median(phase_error) < 0.02
    assert np.mean(phase_error < 0.05) > 0.98


def test_closed_form_matches_hankel_integral():
    """Untruncated c' against (2pi/P^2)(-i)^m e^{i m phi} integral_0^inf rho^{s+1} J_m(k rho) d rho"""
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 20
    g = GridSpec(n=64, p=64.0)
    f = PinwheelFrequency(omega_phi=2, alpha=-1.0, omega_rho=0.5)
    omega_x, omega_y = 3, 4
    k = 2 * mpmath.pi * math.hypot(omega_x, omega_y) / g.p
    s = mpmath.mpc(f.alpha, f.omega_rho)
    integral = mpmath.quadosc(lambda r: r ** (s + 1) * mpmath.besselj(abs(f.omega_phi), k * r),
                              [0, mpmath.inf], omega=k)
    phi_bar = math.atan2(omega_y, omega_x)
    expected = complex(2 * mpmath.pi / g.p**2 * (-1j) ** abs(f.omega_phi)
                       * mpmath.exp(1j * f.omega_phi * phi_bar) * integral)
    got = complex(pinwheel_coefficients(omega_x, omega_y, f.omega_phi, f.s, g.p, truncate=False))
    assert abs(got - expected) <= 1e-4 * abs(expected)


def test_sample_coefficient_matches_disk_quadrature():
    g = GridSpec(n=64, p=64.0)
    f = PinwheelFrequency(omega_phi=2, alpha=-1.0, omega_rho=0.5)
    expected = complex(disk_quadrature(np.array([3]), np.array([4]), 2, f.s, g.p)[0])
    assert fourier_pinwheel_coeff(3, 4, f, g) == pytest.approx(expected, rel=1e-5)
    # the whole-plane closed form misses the part of the integral beyond P/2
    untruncated = complex(pinwheel_coefficients(3, 4, 2, f.s, g.p, truncate=False))
    assert abs(untruncated - expected) > 1e-3 * abs(expected)


@pytest.mark.parametrize("omega_phi, alpha, omega_rho",
                         [(2, -1.0, 0.5), (5, -1.0, 0.0), (5, -1.0, 5.0), (3, -1.2, -2.0), (-1, -0.75, 1.5)])
def test_coefficients_correlate_with_disk_quadrature(omega_phi, alpha, omega_rho):
    g = GridSpec(n=64, p=64.0)
    s = complex(alpha, omega_rho)
    wx, wy = g.frequency_mesh()
    nonzero = (wx != 0) | (wy != 0)
    expected = disk_quadrature(wx[nonzero], wy[nonzero], omega_phi, s, g.p)
    analytic = pinwheel_coefficients(wx[nonzero], wy[nonzero], omega_phi, s, g.p)
    assert correlation(expected, analytic) >= 0.99

    # the synthesis table agrees wherever the band window is flat
    table = fourier_pinwheel_table(g, omega_phi, alpha, omega_rho)
    passband = nonzero & (np.hypot(wx, wy) <= g.n // 4)
    inside = disk_quadrature(wx[passband], wy[passband], omega_phi, s, g.p)
    assert correlation(inside, table[passband]) >= 0.99
