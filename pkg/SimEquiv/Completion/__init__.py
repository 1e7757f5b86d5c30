from Completion.Bias import bias_field, eval_bias
from Completion.Filter import build_filter, sample_polar
from Completion.GreensFunction import corner_greens_function, greens_function
from Completion.PowerIteration import (CompletionSetup, IterationResult, completion_field, power_iteration,
                                       prepare)
from Completion.Stimulus import Stimulus, make_stimulus, transform_stimulus

__all__ = [
    "bias_field", "eval_bias", "build_filter", "sample_polar",
    "corner_greens_function", "greens_function",
    "CompletionSetup", "IterationResult", "completion_field", "power_iteration", "prepare",
    "Stimulus", "make_stimulus", "transform_stimulus",
]
