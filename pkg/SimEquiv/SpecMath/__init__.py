from SpecMath.Gamma import complex_gamma, complex_loggamma, gamma_ratio
from SpecMath.Pinwheel import eval_pinwheel, sample_pinwheel
from SpecMath.FourierPinwheel import (band_window, check_alpha, compute_epsilon, fourier_pinwheel_coeff,
                                      fourier_pinwheel_grid, fourier_pinwheel_stack, fourier_pinwheel_table,
                                      pinwheel_coefficients)

__all__ = [
    "complex_gamma", "complex_loggamma", "gamma_ratio",
    "eval_pinwheel", "sample_pinwheel",
    "check_alpha", "compute_epsilon", "fourier_pinwheel_coeff",
    "fourier_pinwheel_grid", "fourier_pinwheel_stack", "fourier_pinwheel_table",
    "band_window", "pinwheel_coefficients",
]
