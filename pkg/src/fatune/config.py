"""Experiment configuration: flat INI-style key = value files with one section
per module, environment-variable overrides, and CLI flag overrides.

Precedence, lowest to highest: built-in defaults < preset scale values <
config file < FATUNE_* environment variables < CLI flags.
"""
from __future__ import annotations

import configparser
import io
import os
from dataclasses import dataclass

from .benchmarks import problem_names
from .sampling import ParameterRanges, SamplerKind
from .tuning import ProblemSpec

ENV_PREFIX = "FATUNE_"

# preset -> (num_settings, calls_per_setting, population, iterations)
PRESETS = {
    "paper": (10, 50, 20, 1000),
    "desk": (5, 10, 20, 250),
}

_DEFAULTS = {
    ("experiment", "preset"): "desk",
    ("experiment", "methods"): "MC, QMC, LHS",
    ("experiment", "problems"): ", ".join(problem_names()),
    ("experiment", "master_seed"): "20250810",
    ("experiment", "output_dir"): "fatune-out",
    ("experiment", "redraw_per_problem"): "false",
    ("firefly", "alpha0"): "1.0",
    ("ranges", "theta"): "0.9, 1.0",
    ("ranges", "beta"): "0.0, 1.0",
    ("ranges", "gamma"): "0.1, 2.5",
    ("penalty", "lambda"): "1000.0",
}

# keys a preset fills in when the config does not set them explicitly
_PRESET_KEYS = (
    ("experiment", "num_settings"),
    ("experiment", "calls_per_setting"),
    ("firefly", "population"),
    ("firefly", "iterations"),
)

_KNOWN_KEYS = set(_DEFAULTS) | set(_PRESET_KEYS)


class ConfigError(ValueError):
    """Invalid configuration; the message names the offending key."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved experiment settings (threads is a runtime flag, not config)."""

    methods: tuple[SamplerKind, ...]
    problems: tuple[ProblemSpec, ...]
    preset: str
    num_settings: int
    calls_per_setting: int
    population: int
    iterations: int
    alpha0: float
    ranges: ParameterRanges
    penalty_lambda: float
    master_seed: int
    output_dir: str
    redraw_per_problem: bool = False


def load_config(
    path: str | None = None,
    overrides: dict[tuple[str, str], str] | None = None,
    env: dict | None = None,
) -> ExperimentConfig:
    """Resolve a config from an optional file, the environment, and overrides."""
    file_values: dict[tuple[str, str], str] = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        file_values = _parse_ini(text)
    return resolve_config(file_values, overrides=overrides, env=env)


def parse_config_text(text: str) -> ExperimentConfig:
    """Resolve a config from raw INI text only (no env, no overrides)."""
    return resolve_config(_parse_ini(text), env={})


def resolve_config(
    file_values: dict[tuple[str, str], str],
    overrides: dict[tuple[str, str], str] | None = None,
    env: dict | None = None,
) -> ExperimentConfig:
    env = os.environ if env is None else env
    merged = dict(_DEFAULTS)
    merged.update(file_values)
    for section, key in _KNOWN_KEYS:
        env_name = f"{ENV_PREFIX}{section.upper()}_{key.upper()}"
        if env_name in env:
            merged[(section, key)] = env[env_name]
    if overrides:
        merged.update({k: v for k, v in overrides.items() if v is not None})

    preset = merged[("experiment", "preset")].strip().lower()
    if preset not in PRESETS:
        raise ConfigError(f"[experiment] preset: must be one of {sorted(PRESETS)}, got {preset!r}")
    scale = dict(zip(_PRESET_KEYS, PRESETS[preset]))
    for key, value in scale.items():
        merged.setdefault(key, str(value))

    methods = _parse_methods(merged[("experiment", "methods")])
    problems = _parse_problems(merged[("experiment", "problems")])
    ranges = _parse_ranges(merged)
    return ExperimentConfig(
        methods=methods,
        problems=problems,
        preset=preset,
        num_settings=_int_value(merged, ("experiment", "num_settings"), minimum=1),
        calls_per_setting=_int_value(merged, ("experiment", "calls_per_setting"), minimum=1),
        population=_int_value(merged, ("firefly", "population"), minimum=2),
        iterations=_int_value(merged, ("firefly", "iterations"), minimum=1),
        alpha0=_float_value(merged, ("firefly", "alpha0")),
        ranges=ranges,
        penalty_lambda=_float_value(merged, ("penalty", "lambda"), positive=True),
        master_seed=_int_value(merged, ("experiment", "master_seed"), minimum=0),
        output_dir=merged[("experiment", "output_dir")].strip(),
        redraw_per_problem=_bool_value(merged, ("experiment", "redraw_per_problem")),
    )


def config_to_text(cfg: ExperimentConfig) -> str:
    """Serialize a resolved config; parse_config_text(round-trip) is identity."""
    parser = configparser.ConfigParser()
    parser["experiment"] = {
        "preset": cfg.preset,
        "methods": ", ".join(m.value for m in cfg.methods),
        "problems": ", ".join(
            p.name if p.dimension is None else f"{p.name}:{p.dimension}" for p in cfg.problems
        ),
        "num_settings": str(cfg.num_settings),
        "calls_per_setting": str(cfg.calls_per_setting),
        "master_seed": str(cfg.master_seed),
        "output_dir": cfg.output_dir,
        "redraw_per_problem": "true" if cfg.redraw_per_problem else "false",
    }
    parser["firefly"] = {
        "population": str(cfg.population),
        "iterations": str(cfg.iterations),
        "alpha0": repr(cfg.alpha0),
    }
    parser["ranges"] = {
        "theta": f"{cfg.ranges.theta_range[0]!r}, {cfg.ranges.theta_range[1]!r}",
        "beta": f"{cfg.ranges.beta_range[0]!r}, {cfg.ranges.beta_range[1]!r}",
        "gamma": f"{cfg.ranges.gamma_range[0]!r}, {cfg.ranges.gamma_range[1]!r}",
    }
    parser["penalty"] = {"lambda": repr(cfg.penalty_lambda)}
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()


def config_echo(cfg: ExperimentConfig) -> dict:
    """JSON-friendly view of the resolved config, embedded in reports."""
    return {
        "preset": cfg.preset,
        "methods": [m.value for m in cfg.methods],
        "problems": [
            {"name": p.name, "dimension": p.dimension} for p in cfg.problems
        ],
        "num_settings": cfg.num_settings,
        "calls_per_setting": cfg.calls_per_setting,
        "population": cfg.population,
        "iterations": cfg.iterations,
        "alpha0": cfg.alpha0,
        "ranges": {
            "theta": list(cfg.ranges.theta_range),
            "beta": list(cfg.ranges.beta_range),
            "gamma": list(cfg.ranges.gamma_range),
        },
        "penalty_lambda": cfg.penalty_lambda,
        "master_seed": cfg.master_seed,
        "redraw_per_problem": cfg.redraw_per_problem,
    }


def _parse_ini(text: str) -> dict[tuple[str, str], str]:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    values: dict[tuple[str, str], str] = {}
    for section in parser.sections():
        for key, value in parser.items(section):
            entry = (section.lower(), key.lower())
            if entry not in _KNOWN_KEYS:
                raise ConfigError(f"[{section}] {key}: unknown configuration key")
            values[entry] = value
    return values


def _parse_methods(text: str) -> tuple[SamplerKind, ...]:
    names = [part.strip() for part in text.split(",") if part.strip()]
    if not names:
        raise ConfigError("[experiment] methods: at least one method is required")
    try:
        methods = tuple(SamplerKind.parse(name) for name in names)
    except ValueError as exc:
        raise ConfigError(f"[experiment] methods: {exc}") from exc
    if len(set(methods)) != len(methods):
        raise ConfigError("[experiment] methods: duplicate method")
    return methods


def _parse_problems(text: str) -> tuple[ProblemSpec, ...]:
    specs = []
    for part in (p.strip() for p in text.split(",")):
        if not part:
            continue
        name, _, dim_text = part.partition(":")
        name = name.strip().lower()
        if name not in problem_names():
            raise ConfigError(f"[experiment] problems: unknown problem {name!r}")
        dimension = None
        if dim_text:
            try:
                dimension = int(dim_text)
            except ValueError:
                raise ConfigError(f"[experiment] problems: bad dimension in {part!r}") from None
        specs.append(ProblemSpec(name, dimension))
    if not specs:
        raise ConfigError("[experiment] problems: at least one problem is required")
    if len({s.label for s in specs}) != len(specs):
        raise ConfigError("[experiment] problems: duplicate problem name")
    return tuple(specs)


def _parse_ranges(merged: dict) -> ParameterRanges:
    pairs = {}
    for key in ("theta", "beta", "gamma"):
        raw = merged[("ranges", key)]
        parts = [p.strip() for p in raw.split(",")]
        if len(parts) != 2:
            raise ConfigError(f"[ranges] {key}: expected 'low, high', got {raw!r}")
        try:
            low, high = float(parts[0]), float(parts[1])
        except ValueError:
            raise ConfigError(f"[ranges] {key}: non-numeric bound in {raw!r}") from None
        if not low < high:
            raise ConfigError(f"[ranges] {key}: low must be < high, got ({low}, {high})")
        pairs[key] = (low, high)
    return ParameterRanges(
        theta_range=pairs["theta"], beta_range=pairs["beta"], gamma_range=pairs["gamma"]
    )


def _int_value(merged: dict, key: tuple[str, str], minimum: int | None = None) -> int:
    raw = merged[key]
    try:
        value = int(str(raw).strip())
    except ValueError:
        raise ConfigError(f"[{key[0]}] {key[1]}: expected an integer, got {raw!r}") from None
    if minimum is not None and value < minimum:
        raise ConfigError(f"[{key[0]}] {key[1]}: must be >= {minimum}, got {value}")
    return value


def _float_value(merged: dict, key: tuple[str, str], positive: bool = False) -> float:
    raw = merged[key]
    try:
        value = float(str(raw).strip())
    except ValueError:
        raise ConfigError(f"[{key[0]}] {key[1]}: expected a number, got {raw!r}") from None
    if positive and not value > 0:
        raise ConfigError(f"[{key[0]}] {key[1]}: must be positive, got {value}")
    return value


def _bool_value(merged: dict, key: tuple[str, str]) -> bool:
    raw = str(merged[key]).strip().lower()
    if raw in ("1", "true", "yes", "on"):
        return True
    if raw in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"[{key[0]}] {key[1]}: expected a boolean, got {raw!r}")
