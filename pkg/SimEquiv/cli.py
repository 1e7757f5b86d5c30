"""Command-line entry points: gen-filter, run, render-pinwheel, selftest"""
import json
import logging
import sys
import time
from functools import wraps
from pathlib import Path
from typing import Callable, List, Optional, Tuple

import click
import numpy as np
from pydantic import ValidationError
from termcolor import colored

from Completion.PowerIteration import completion_field, experiment_filter, power_iteration, prepare
from FileFormats.Images import write_pgm, write_phase_png
from FileFormats.Manifest import RunManifest, write_manifest
from FileFormats.Spectra import read_spectrum, write_spectrum
from FileFormats.Atomic import atomic_write
from models import FrequencyConfig, GridSpec, PinwheelFrequency, PolarSampling
from SpecMath import complex_gamma, fourier_pinwheel_grid, fourier_pinwheel_table, sample_pinwheel
from SimGroup.GroupConv import group_conv_joint, group_conv_special
from Transforms import (FilterSpectrum, SpatialGrid, afmt_forward, afmt_inverse, analyze_field, dft2_forward,
                        dft2_inverse, lift_2d_input)
from utils import __version__
from utils.config import ConfigManager, ExperimentConfig, config_hash, load_experiment
from utils.errors import ConfigError, SimEquivError
from utils.logging import setup_logging
from utils.monitoring import metrics

logger = logging.getLogger(__name__)


def report_errors(func: Callable) -> Callable:
    """One JSON line on stderr and a nonzero exit for every pipeline failure"""
    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except ValidationError as e:
            error = ConfigError(f"Invalid parameter: {e.errors()[0]['msg']}",
                                {"key": ".".join(str(p) for p in e.errors()[0]["loc"])})
            click.echo(json.dumps(error.to_record()), err=True)
            sys.exit(2)
        except SimEquivError as e:
            click.echo(json.dumps(e.to_record()), err=True)
            sys.exit(2 if isinstance(e, ConfigError) else 1)
        except OSError as e:
            logger.error(f"I/O failure in {func.__name__}: {e}")
            record = SimEquivError(e.strerror or str(e), {"path": e.filename, "errno": e.errno}).to_record()
            click.echo(json.dumps({**record, "error": type(e).__name__}), err=True)
            sys.exit(1)
        except Exception as e:
            logger.error(f"Unexpected error in {func.__name__}: {e}", exc_info=True)
            record = SimEquivError(str(e), {"command": func.__name__}).to_record()
            click.echo(json.dumps({**record, "error": type(e).__name__}), err=True)
            sys.exit(1)
        finally:
            metrics.log_all_stats()
    return wrapper


def _load(config_path: str, seed: Optional[int]) -> ExperimentConfig:
    cfg = load_experiment(config_path)
    return cfg.with_seed(seed) if seed is not None else cfg


def _out_dir(out_dir: Optional[str], cfg_name: str) -> Path:
    base = Path(out_dir or ConfigManager().get_output_config().out_dir)
    return base if out_dir else base / cfg_name


def _manifest(command: str, cfg: Optional[ExperimentConfig], started: float, outputs: List[Path],
              **parameters) -> RunManifest:
    return RunManifest(
        command=command,
        config_hash=config_hash(cfg) if cfg else None,
        seed=cfg.process.seed if cfg else None,
        version=__version__,
        duration_s=round(time.perf_counter() - started, 3),
        outputs=[p.name for p in outputs],
        parameters=parameters,
    )


config_option = click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False),
                             help="Experiment configuration (.cfg text or YAML)")
seed_option = click.option("--seed", type=int, default=None, help="Override process.seed")
out_option = click.option("--out-dir", type=click.Path(file_okay=False), default=None)
threads_option = click.option("--threads", type=click.IntRange(min=1), default=None,
                              help="Worker threads for convolution and Monte Carlo")


@click.group()
@click.option("--log-level", default=None, help="Overrides DEBUG_MODE / config.yaml")
@click.version_option(__version__)
def cli(log_level):
    logging_config = ConfigManager().get_logging_config()
    setup_logging(log_level or logging_config.level, logging_config.log_dir, logging_config.file)


@cli.command("gen-filter")
@config_option
@seed_option
@out_option
@threads_option
@report_errors
def gen_filter(config_path, seed, out_dir, threads):
    """Sample the Green's function and write its filter spectrum"""
    started = time.perf_counter()
    cfg = _load(config_path, seed)
    target = _out_dir(out_dir, cfg.experiment.name)
    filt = experiment_filter(cfg, threads)
    spectrum_path = write_spectrum(target / "filter.pwsp", filt.coeffs)
    write_manifest(target / "filter.manifest.json", _manifest("gen-filter", cfg, started, [spectrum_path]))
    click.echo(str(spectrum_path))


@cli.command("run")
@config_option
@seed_option
@out_option
@threads_option
@click.option("--filter", "filter_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Reuse a filter written by gen-filter")
@report_errors
def run(config_path, seed, out_dir, threads, filter_path):
    """Power iteration and completion field for one configuration"""
    started = time.perf_counter()
    cfg = _load(config_path, seed)
    target = _out_dir(out_dir, cfg.experiment.name)
    filt = None
    if filter_path:
        filt = FilterSpectrum(config=cfg.frequency_config(), coeffs=read_spectrum(filter_path))
    setup = prepare(cfg, threads, filt)
    result = power_iteration(cfg, threads, setup=setup)
    image = completion_field(result.forward, result.backward)

    outputs = [
        write_pgm(target / "completion.pgm", image.data),
        write_spectrum(target / "forward.pwsp", analyze_field(result.forward, setup.freqs).coeffs),
        write_spectrum(target / "backward.pwsp", analyze_field(result.backward, setup.freqs).coeffs),
        atomic_write(target / "norms.csv", result.history.to_csv(index=False).encode()),
    ]
    if filter_path is None:
        outputs.append(write_spectrum(target / "filter.pwsp", setup.forward_filter.coeffs))
    write_manifest(target / "manifest.json", _manifest("run", cfg, started, outputs))
    click.echo(str(outputs[0]))


@cli.command("render-pinwheel")
@click.option("--omega-phi", type=int, default=5)
@click.option("--omega-rho", type=float, default=0.0)
@click.option("--alpha", type=float, default=-1.0)
@click.option("--n", type=int, default=64, help="Samples per axis")
@click.option("--p", "period", type=float, default=None, help="Period; defaults to n (unit pixels)")
@click.option("--mode", type=click.Choice(["direct", "fourier"]), default="direct")
@click.option("--crop", type=int, default=None, help="Show only the central crop x crop samples")
@out_option
@report_errors
def render_pinwheel(omega_phi, omega_rho, alpha, n, period, mode, crop, out_dir):
    """Phase-as-hue, magnitude-as-brightness image of a pinwheel or its Fourier-series synthesis"""
    started = time.perf_counter()
    grid = GridSpec(n=n, p=period or float(n))
    f = PinwheelFrequency(omega_phi=omega_phi, alpha=alpha, omega_rho=omega_rho)
    values = (sample_pinwheel(grid, f) if mode == "direct" else fourier_pinwheel_grid(grid, f)).data
    if crop:
        lo = (n - crop) // 2
        values = values[lo:lo + crop, lo:lo + crop]
    target = Path(out_dir or ConfigManager().get_output_config().out_dir)
    stem = f"pinwheel_{mode}_{omega_phi}_{omega_rho:g}_{alpha:g}_{n}"
    png = write_phase_png(target / f"{stem}.png", values)
    magnitude = write_pgm(target / f"{stem}.pgm", np.abs(values))
    write_manifest(target / f"{stem}.manifest.json",
                   _manifest("render-pinwheel", None, started, [png, magnitude],
                             omega_phi=omega_phi, omega_rho=omega_rho, alpha=alpha, n=n, mode=mode, crop=crop))
    click.echo(str(png))


# Quick identity checks for an installed environment

def _check_gamma() -> Tuple[bool, str]:
    error = abs(complex_gamma(0.5) - np.sqrt(np.pi)) / np.sqrt(np.pi)
    z = np.array([0.3 + 2.0j, -3.7 + 1.1j, 7.2 - 4.0j])
    recurrence = np.max(np.abs(complex_gamma(z + 1) - z * complex_gamma(z)) / np.abs(complex_gamma(z + 1)))
    return max(error, recurrence) < 1e-12, f"max relative error {max(error, recurrence):.1e}"


def _check_pinwheel_sum() -> Tuple[bool, str]:
    total = abs(fourier_pinwheel_table(GridSpec(n=32, p=32.0), 3, -1.2, 1.5).sum())
    return total < 1e-10, f"coefficient sum {total:.1e}"


def _check_dft() -> Tuple[bool, str]:
    rng = np.random.default_rng(0)
    g = GridSpec(n=16, p=16.0)
    data = rng.standard_normal((16, 16)) + 1j * rng.standard_normal((16, 16))
    back = dft2_inverse(dft2_forward(SpatialGrid(spec=g, data=data))).data
    error = np.linalg.norm(back - data) / np.linalg.norm(data)
    return error < 1e-10, f"round trip {error:.1e}"


def _check_afmt() -> Tuple[bool, str]:
    c = FrequencyConfig.symmetric(k=4, radial_max=8.0, radial_step=0.5)
    sampling = PolarSampling(n_phi=16, n_logrho=81, logrho_min=0.0, logrho_max=4.0)
    phi, u = np.meshgrid(sampling.phis(), sampling.logrhos(), indexing="ij")
    f = np.exp(-((u - 2.0) / 0.8) ** 2) * (1 + 0.5 * np.cos(2 * phi)) * np.exp(c.alpha_rho * u)
    back = afmt_inverse(afmt_forward(f, c, c.alpha_rho, sampling), c, c.alpha_rho, phi, np.exp(u))
    inner = (u > 1.0) & (u < 3.0)
    error = np.linalg.norm((back - f)[inner]) / np.linalg.norm(f[inner])
    return error < 0.02, f"round trip {error:.1e}"


def _check_reduction() -> Tuple[bool, str]:
    g = GridSpec(n=16, p=16.0)
    alpha = -1.3
    special_cfg = FrequencyConfig.symmetric(k=2, radial_max=1.0, radial_step=0.5, alpha_rho=alpha)
    joint_cfg = special_cfg.model_copy(update={"alpha_rho": 0.0, "alpha_r": -alpha})
    rng = np.random.default_rng(1)
    f = SpatialGrid(spec=g, data=rng.standard_normal((16, 16)))
    gc = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    special = group_conv_special(dft2_forward(f), gc, special_cfg, g)
    G = np.zeros((4, 4, 4, 4), dtype=complex)
    zero_rho = list(joint_cfg.radial_freqs).index(0.0)
    for im, m in enumerate(special_cfg.angular_freqs):
        for iw, w in enumerate(special_cfg.radial_freqs):
            if -m in joint_cfg.angular_freqs and -w in joint_cfg.radial_freqs:
                ib = list(joint_cfg.angular_freqs).index(-m)
                iz = list(joint_cfg.radial_freqs).index(-w)
                G[list(joint_cfg.angular_freqs).index(0), zero_rho, ib, iz] = gc[im, iw] / joint_cfg.radial_step
    joint = group_conv_joint(lift_2d_input(f, joint_cfg), FilterSpectrum(config=joint_cfg, coeffs=G), workers=1)
    common = np.abs(special.coeffs[:, :, :-1, :-1] - joint.coeffs[:, :, 1:, 1:]).max()
    scale = np.abs(special.coeffs).max()
    return common <= 1e-8 * scale, f"special vs joint {common / scale:.1e}"


SELFTESTS = [
    ("complex gamma", _check_gamma),
    ("fourier pinwheel zero sum", _check_pinwheel_sum),
    ("dft2 round trip", _check_dft),
    ("afmt round trip", _check_afmt),
    ("joint reduces to special", _check_reduction),
]


@cli.command("selftest")
@report_errors
def selftest():
    """Run the fast identity checks and print a coloured summary"""
    failures = 0
    for name, check in SELFTESTS:
        try:
            ok, detail = check()
        except SimEquivError as e:
            ok, detail = False, f"{type(e).__name__}: {e}"
        failures += not ok
        status = colored("PASS", "green") if ok else colored("FAIL", "red", attrs=["bold"])
        click.echo(f"{status}  {name:<28} {detail}")
    summary = f"{len(SELFTESTS) - failures}/{len(SELFTESTS)} checks passed"
    click.echo(colored(summary, "green" if failures == 0 else "red"))
    sys.exit(1 if failures else 0)


if __name__ == "__main__":
    cli()
