from Transforms.Grids import SpatialGrid, SpectralGrid, dft2_forward, dft2_inverse
from Transforms.Afmt import afmt_forward, afmt_inverse, afmt_synthesize
from Transforms.JointAfmt import (FilterSpectrum, JointSpectrum, OrientationScaleField, analyze_field,
                                  joint_afmt_forward, lift_2d_input, synthesize_field)

__all__ = [
    "SpatialGrid", "SpectralGrid", "dft2_forward", "dft2_inverse",
    "afmt_forward", "afmt_inverse", "afmt_synthesize",
    "FilterSpectrum", "JointSpectrum", "OrientationScaleField",
    "analyze_field", "joint_afmt_forward", "lift_2d_input", "synthesize_field",
]
