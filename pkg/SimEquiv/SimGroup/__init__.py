from Transforms.JointAfmt import OrientationScaleField
from SimGroup.GroupConv import (difference_table, envelope_fix, group_conv_joint, group_conv_special,
                                reverse_filter, similarity_delta)
from SimGroup.Transform import similarity_transform_2d, similarity_transform_joint

__all__ = [
    "OrientationScaleField", "difference_table", "envelope_fix", "group_conv_joint",
    "group_conv_special", "reverse_filter", "similarity_delta",
    "similarity_transform_2d", "similarity_transform_joint",
]
