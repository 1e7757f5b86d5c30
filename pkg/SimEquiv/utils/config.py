"""Configuration management

Two layers live here: the runtime settings of the process (workers, logging,
output locations) handled by the ConfigManager singleton, and the experiment
configuration describing one completion-field run, read from the sectioned
key-value text format.
"""
import configparser
import hashlib
import json
import logging
import math
import os
import re
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, get_args, get_origin

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from models import (BiasParams, FrequencyConfig, GridSpec, PolarSampling,
                    RandomProcessParams, SimilarityParams)
from utils.errors import ConfigError

logger = logging.getLogger(__name__)


class ProcessingConfig(BaseModel):
    """Parallelism for convolution channels and Monte Carlo chunks"""
    model_config = ConfigDict(validate_assignment=True)

    parallel_workers: int = Field(4, ge=1)
    show_progress: bool = True


class LoggingConfig(BaseModel):
    """Logging configuration"""
    model_config = ConfigDict(validate_assignment=True)

    level: str = "INFO"
    file: str = "debug.log"
    format: str = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    log_dir: Optional[str] = None


class OutputConfig(BaseModel):
    """Where commands write when --out-dir is not given"""
    model_config = ConfigDict(validate_assignment=True)

    out_dir: str = "runs"


class Config(BaseModel):
    """Application configuration"""
    processing: ProcessingConfig = ProcessingConfig()
    logging: LoggingConfig = LoggingConfig()
    output: OutputConfig = OutputConfig()


class ConfigManager:
    """Manages application configuration"""
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if not hasattr(self, 'config'):
            load_dotenv()
            self.config_path = Path(__file__).parent.parent / 'config.yaml'
            self.config = self._load_config()
            self._apply_env_vars()
            logger.debug("Configuration loaded successfully")

    def _load_config(self) -> Config:
        """Load configuration from YAML file"""
        try:
            if self.config_path.exists():
                with open(self.config_path) as f:
                    yaml_config = yaml.safe_load(f) or {}
            else:
                yaml_config = {}
                logger.warning(f"Config file not found at {self.config_path}, using defaults")
            return Config(**yaml_config)
        except Exception as e:
            logger.error(f"Error loading config: {e}")
            return Config()

    def _apply_env_vars(self):
        """Apply environment variables, overriding config values"""
        env_mapping = {
            'SIMEQUIV_THREADS': ('processing', 'parallel_workers'),
            'DEBUG_MODE': ('logging', 'level'),
            'SIMEQUIV_LOG_DIR': ('logging', 'log_dir'),
            'SIMEQUIV_OUT_DIR': ('output', 'out_dir'),
        }
        for env_var, (section, key) in env_mapping.items():
            value = os.getenv(env_var)
            if value:
                try:
                    setattr(getattr(self.config, section), key, value)
                except ValidationError as e:
                    logger.warning(f"Ignoring {env_var}={value!r}: {e.errors()[0]['msg']}")

    def get_processing_config(self) -> ProcessingConfig:
        return self.config.processing

    def get_logging_config(self) -> LoggingConfig:
        return self.config.logging

    def get_output_config(self) -> OutputConfig:
        return self.config.output

    def reload(self):
        """Reload configuration"""
        self.config = self._load_config()
        self._apply_env_vars()


def resolve_workers(workers: Optional[int] = None) -> int:
    return workers if workers else ConfigManager().get_processing_config().parallel_workers


# Experiment configuration

_SECTION = ConfigDict(extra="forbid", frozen=True, allow_inf_nan=False)


class FrequencySettings(BaseModel):
    model_config = _SECTION

    k: int = Field(8, ge=1)
    radial_max: float = Field(4.0, gt=0)
    radial_step: float = Field(0.5, gt=0)
    alpha_rho: float = -1.0
    alpha_r: float = 0.0

    def build(self) -> FrequencyConfig:
        return FrequencyConfig.symmetric(self.k, self.radial_max, self.radial_step, self.alpha_rho, self.alpha_r)


class PositionSettings(BaseModel):
    """Polar sampling of filter positions; the log-radius window follows the grid"""
    model_config = _SECTION

    n_phi: int = Field(64, ge=2)
    n_logrho: int = Field(32, ge=2)

    def build(self, grid: GridSpec) -> PolarSampling:
        return PolarSampling.for_grid(grid, self.n_phi, self.n_logrho)


class BiasSettings(BaseModel):
    model_config = _SECTION

    sigma_rho: float = Field(0.5, gt=0)
    sigma_r: float = Field(0.5, gt=0)
    gamma: float = 10.0
    sigma_theta: float = Field(0.3, gt=0)

    def build(self) -> BiasParams:
        return BiasParams(sigma_rho=self.sigma_rho, sigma_r=self.sigma_r, gamma=self.gamma)


class StimulusSettings(BaseModel):
    model_config = _SECTION

    kind: Literal["eight_dot_circle", "koffka_cross", "avocado", "points"]
    radius: float = Field(10.0, gt=0)
    n_dots: int = Field(8, ge=1)
    arm_distance: float = Field(6.0, gt=0)
    arm_width: float = Field(3.0, gt=0)
    contour_points: int = Field(20, ge=0)
    noise_points: int = Field(20, ge=0)
    noise_seed: int = Field(0, ge=0)
    points: List[Tuple[float, float]] = []


class TransformSettings(BaseModel):
    """Stimulus transform: optional reflection, then rotation, dilation, translation"""
    model_config = _SECTION

    reflection_deg: Optional[float] = None
    rotation_deg: float = 0.0
    scale: float = Field(1.0, gt=0)
    dx: float = 0.0
    dy: float = 0.0

    def similarity(self) -> SimilarityParams:
        return SimilarityParams(dx=self.dx, dy=self.dy, dtheta=math.radians(self.rotation_deg), a=self.scale)

    def reflection(self) -> Optional[float]:
        return None if self.reflection_deg is None else math.radians(self.reflection_deg)


class ExperimentSettings(BaseModel):
    model_config = _SECTION

    iterations: int = Field(ge=0)
    name: str = "run"


class ExperimentConfig(BaseModel):
    """Full parameterization of one completion-field run"""
    model_config = _SECTION

    grid: GridSpec
    freqs: FrequencySettings = FrequencySettings()
    polar: PositionSettings = PositionSettings()
    velocity: PolarSampling = PolarSampling()
    process: RandomProcessParams
    bias: BiasSettings
    stimulus: StimulusSettings
    transform: Optional[TransformSettings] = None
    experiment: ExperimentSettings

    def frequency_config(self) -> FrequencyConfig:
        return self.freqs.build()

    def position_sampling(self) -> PolarSampling:
        return self.polar.build(self.grid)

    def with_seed(self, seed: int) -> "ExperimentConfig":
        return self.model_copy(update={"process": self.process.model_copy(update={"seed": seed})})


SECTION_ORDER = tuple(ExperimentConfig.model_fields)


def _locate(text: str, section: str, key: Optional[str] = None) -> Optional[int]:
    """1-based line of `key` inside `[section]`, or of the section header"""
    current = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        header = re.fullmatch(r"\[([^\]]+)\]", stripped)
        if header:
            current = header.group(1).strip()
            if key is None and current == section:
                return lineno
            continue
        if current == section and key is not None and re.match(rf"{re.escape(key)}\s*[=:]", stripped):
            return lineno
    return None


def _is_text_field(section: str, key: str) -> bool:
    """True when [section] key is declared as str or a Literal of strings"""
    outer = ExperimentConfig.model_fields.get(section)
    if outer is None:
        return False
    models = [a for a in (outer.annotation, *get_args(outer.annotation))
              if isinstance(a, type) and issubclass(a, BaseModel)]
    field = models[0].model_fields.get(key) if models else None
    if field is None:
        return False
    if field.annotation is str:
        return True
    return get_origin(field.annotation) is Literal and all(isinstance(a, str) for a in get_args(field.annotation))


def _parse_value(raw: str, section: str, key: str, text: str) -> Any:
    try:
        value = yaml.safe_load(raw)
    except yaml.YAMLError as e:
        if _is_text_field(section, key):
            return raw
        raise ConfigError(f"Cannot parse value of {section}.{key}: {e}",
                          {"section": section, "key": key, "line": _locate(text, section, key)}) from e
    if _is_text_field(section, key):
        # quoted values are unquoted by YAML; bare 2024, on or null stay as written
        return value if isinstance(value, str) else raw
    if isinstance(value, str):
        # YAML 1.1 leaves exponents without a dot (1e-5) as strings
        try:
            return float(value)
        except ValueError:
            return value
    return value


def _validation_error(e: ValidationError, text: Optional[str]) -> ConfigError:
    first = e.errors()[0]
    loc = [str(part) for part in first["loc"]]
    section = loc[0] if loc else None
    key = loc[1] if len(loc) > 1 else None
    line = _locate(text, section, key) if text and section else None
    name = ".".join(loc) or "<root>"
    return ConfigError(f"Invalid configuration at {name}: {first['msg']}",
                       {"section": section, "key": name, "line": line})


def parse_experiment(text: str) -> ExperimentConfig:
    """Parse the sectioned key-value text format"""
    parser = configparser.ConfigParser(interpolation=None, strict=True, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as e:
        lineno = getattr(e, "lineno", None)
        if lineno is None and getattr(e, "errors", None):
            lineno = e.errors[0][0]
        raise ConfigError(f"Malformed configuration: {e.message.splitlines()[0]}",
                          {"line": lineno, "section": getattr(e, "section", None),
                           "key": getattr(e, "option", None)}) from e

    data: Dict[str, Dict[str, Any]] = {}
    for section in parser.sections():
        if section not in SECTION_ORDER:
            raise ConfigError(f"Unknown section [{section}]",
                              {"section": section, "line": _locate(text, section)})
        data[section] = {key: _parse_value(raw, section, key, text) for key, raw in parser.items(section)}
    try:
        return ExperimentConfig(**data)
    except ValidationError as e:
        raise _validation_error(e, text) from e


def _format_value(value: Any) -> str:
    dumped = yaml.safe_dump(value, default_flow_style=True, width=10**9).strip()
    if dumped.endswith("\n..."):
        dumped = dumped[:-4].rstrip()
    return dumped


def serialize_experiment(cfg: ExperimentConfig) -> str:
    """Inverse of parse_experiment; sections in declaration order, unset optional sections omitted"""
    dumped = cfg.model_dump(mode="json")
    lines: List[str] = []
    for section in SECTION_ORDER:
        values = dumped.get(section)
        if values is None:
            continue
        lines.append(f"[{section}]")
        lines.extend(f"{key} = {_format_value(value)}" for key, value in values.items())
        lines.append("")
    return "\n".join(lines)


def load_experiment(path) -> ExperimentConfig:
    """Read a .cfg text file, or YAML with the same sections"""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise ConfigError(f"Cannot read configuration {path}: {e.strerror}", {"path": str(path)}) from e
    if path.suffix in (".yaml", ".yml"):
        try:
            return ExperimentConfig(**(yaml.safe_load(text) or {}))
        except yaml.YAMLError as e:
            raise ConfigError(f"Malformed YAML configuration: {e}", {"path": str(path)}) from e
        except ValidationError as e:
            raise _validation_error(e, None) from e
    return parse_experiment(text)


def config_hash(cfg: ExperimentConfig) -> str:
    """SHA-256 of the canonical JSON form; independent of key order in the source file"""
    canonical = json.dumps(cfg.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


def preset(name: str) -> ExperimentConfig:
    """Desk-scale configurations of the bundled experiments"""
    grid = GridSpec(n=128, p=48.0)
    base = dict(grid=grid, process=RandomProcessParams(), bias=BiasSettings())
    if name == "eight_dot_circle":
        return ExperimentConfig(**base, stimulus=StimulusSettings(kind="eight_dot_circle", radius=10.0),
                                experiment=ExperimentSettings(iterations=10, name=name))
    if name == "eight_dot_scaled":
        return ExperimentConfig(
            **base, stimulus=StimulusSettings(kind="eight_dot_circle", radius=10.0),
            transform=TransformSettings(rotation_deg=30.0, scale=1.5, dy=0.7),
            experiment=ExperimentSettings(iterations=10, name=name),
        )
    if name == "koffka_cross":
        return ExperimentConfig(
            **{**base,
               "process": RandomProcessParams(T=0.016, corner_weight=0.000015),
               "bias": BiasSettings(sigma_r=0.75)},
            stimulus=StimulusSettings(kind="koffka_cross", arm_distance=6.0, arm_width=3.0),
            experiment=ExperimentSettings(iterations=10, name=name),
        )
    if name == "avocado":
        return ExperimentConfig(
            **base,
            stimulus=StimulusSettings(kind="avocado", radius=8.0, contour_points=20, noise_points=20),
            transform=TransformSettings(reflection_deg=10.0, rotation_deg=70.0, scale=1.5, dy=0.7),
            experiment=ExperimentSettings(iterations=100, name=name),
        )
    raise ConfigError(f"Unknown preset {name!r}", {"key": "preset", "valid": list(PRESETS)})


PRESETS = ("eight_dot_circle", "eight_dot_scaled", "koffka_cross", "avocado")
