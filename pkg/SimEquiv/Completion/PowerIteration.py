"""Power-method iteration of biased group convolution"""
import logging
from typing import NamedTuple, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict

from Completion.Bias import bias_field
from Completion.Filter import build_filter
from Completion.GreensFunction import corner_greens_function, greens_function
from Completion.Stimulus import Stimulus, make_stimulus, transform_stimulus
from models import FrequencyConfig, PolarSampling
from SimGroup.GroupConv import envelope_fix, group_conv_joint, reverse_filter
from Transforms.Grids import SpatialGrid
from Transforms.JointAfmt import FilterSpectrum, JointSpectrum, OrientationScaleField, analyze_field, synthesize_field
from utils.config import ExperimentConfig
from utils.errors import DivergenceError, ShapeMismatch, handle_numeric_errors
from utils.monitoring import track_performance

logger = logging.getLogger(__name__)

# Norms outside this range are treated as a collapsed or exploding iteration
NORM_RANGE = (1e-250, 1e250)


class CompletionSetup(BaseModel):
    """Everything a run needs besides the iteration count"""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    freqs: FrequencyConfig
    position: PolarSampling
    velocity: PolarSampling
    stimulus: Stimulus
    bias: OrientationScaleField
    forward_filter: FilterSpectrum
    backward_filter: FilterSpectrum


class IterationResult(NamedTuple):
    forward: OrientationScaleField
    backward: OrientationScaleField
    history: pd.DataFrame


def experiment_stimulus(cfg: ExperimentConfig) -> Stimulus:
    stimulus = make_stimulus(**cfg.stimulus.model_dump())
    if cfg.transform is not None:
        stimulus = transform_stimulus(stimulus, cfg.transform.reflection(), cfg.transform.similarity())
    return stimulus


def experiment_filter(cfg: ExperimentConfig, workers: Optional[int] = None) -> FilterSpectrum:
    """Monte Carlo Green's function (plus corner mix) analysed into a filter spectrum"""
    g_field = greens_function(cfg.process, cfg.grid, cfg.velocity, workers)
    corner = None
    if cfg.process.corner_weight > 0:
        corner = corner_greens_function(cfg.process, cfg.grid, cfg.velocity, workers)
    return build_filter(g_field, cfg.process, cfg.frequency_config(), cfg.position_sampling(), corner)


def prepare(cfg: ExperimentConfig, workers: Optional[int] = None,
            filt: Optional[FilterSpectrum] = None) -> CompletionSetup:
    freqs = cfg.frequency_config()
    if filt is None:
        filt = experiment_filter(cfg, workers)
    elif filt.config != freqs:
        raise ShapeMismatch("supplied filter does not match the configured frequencies")
    stimulus = experiment_stimulus(cfg)
    bias = bias_field(stimulus, cfg.bias.build(), cfg.grid, cfg.velocity, cfg.bias.sigma_theta)
    return CompletionSetup(freqs=freqs, position=cfg.position_sampling(), velocity=cfg.velocity,
                           stimulus=stimulus, bias=bias, forward_filter=filt,
                           backward_filter=reverse_filter(filt))


def _checked_norm(values: np.ndarray, iteration: int, direction: str) -> float:
    norm = float(np.linalg.norm(values))
    if not np.isfinite(norm) or not NORM_RANGE[0] <= norm <= NORM_RANGE[1]:
        raise DivergenceError(f"{direction} field norm {norm} left the representable range",
                              {"iteration": iteration, "direction": direction, "norm": norm})
    return norm


def _iterate(setup: CompletionSetup, filt: FilterSpectrum, iterations: int, direction: str, workers):
    bias = setup.bias
    start = _checked_norm(bias.data, 0, direction)
    spectrum: JointSpectrum = analyze_field(
        OrientationScaleField(spec=bias.spec, sampling=bias.sampling, data=bias.data / start), setup.freqs)
    propagated = bias.data
    norms = []
    for k in range(1, iterations + 1):
        out = group_conv_joint(spectrum, filt, workers)
        propagated = synthesize_field(out, setup.velocity).data
        eigen = _checked_norm(propagated * bias.data, k, direction)
        fixed = envelope_fix(out, bias)
        spectrum = fixed.model_copy(update={"coeffs": fixed.coeffs / eigen})
        norms.append(eigen)
        logger.info(f"{direction} iteration {k}/{iterations}: norm {eigen:.6g}")
    scale = _checked_norm(propagated, iterations, direction)
    field = OrientationScaleField(spec=bias.spec, sampling=bias.sampling, data=propagated / scale)
    return field, norms


def norm_history(forward_norms, backward_norms) -> pd.DataFrame:
    history = pd.DataFrame({
        "iteration": np.arange(1, len(forward_norms) + 1),
        "forward_norm": np.asarray(forward_norms, dtype=float),
        "backward_norm": np.asarray(backward_norms, dtype=float),
    })
    history["relative_change"] = history["forward_norm"].diff().abs() / history["forward_norm"]
    return history


@handle_numeric_errors
@track_performance("power_iteration")
def power_iteration(cfg: ExperimentConfig, workers: Optional[int] = None,
                    filt: Optional[FilterSpectrum] = None, setup: Optional[CompletionSetup] = None) -> IterationResult:
    """Forward and backward fields after cfg.experiment.iterations biased convolutions

    Each step propagates the field through the filter, multiplies by the bias
    and divides by the norm of the product (the eigenvalue estimate). The
    returned fields are the last propagated fields scaled to unit norm; with
    zero iterations they are the normalized stimulus field.
    """
    setup = setup or prepare(cfg, workers, filt)
    iterations = cfg.experiment.iterations
    forward, forward_norms = _iterate(setup, setup.forward_filter, iterations, "forward", workers)
    backward, backward_norms = _iterate(setup, setup.backward_filter, iterations, "backward", workers)
    return IterationResult(forward, backward, norm_history(forward_norms, backward_norms))


def completion_field(forward: OrientationScaleField, backward: OrientationScaleField) -> SpatialGrid:
    """Re sum over (theta, r) of forward * backward, negatives clamped to 0"""
    if forward.spec != backward.spec or forward.sampling != backward.sampling:
        raise ShapeMismatch("forward and backward fields are sampled differently")
    image = np.real((forward.data * backward.data).sum(axis=(2, 3)))
    return SpatialGrid(spec=forward.spec, data=np.clip(image, 0.0, None))
