"""Run configuration read from an INI file.

Every key is optional; absent keys keep the defaults below. Sections
and keys::

    [network]    speed_<mode>, tariff_<mode>, fuel_price_uah_per_l,
                 fuel_consumption_l_per_km
    [scaling]    detour_time_divisor, detour_cost_divisor, profit_divisor,
                 income_divisor
    [model]      models (comma list of presets or spec-file paths), mixture
    [optimizer]  max_iterations, tolerance
    [draws]      n_draws, draw_type, seed
    [output]     out_dir, coefficient_decimals, mpe_decimals, mpe_levels

``<mode>`` is one of walking, bike, car, bus, metro, electric_ground_pt.
Unknown sections or keys are errors.
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .core import MODES, NetworkParams, ScalingConfig
from .errors import ConfigError
from .mixed import MixedOptions
from .mpe import DEFAULT_LEVELS, parse_levels

DEFAULT_MODELS = ("cost-time", "profit-time")


@dataclass(frozen=True)
class RunConfig:
    net: NetworkParams = field(default_factory=NetworkParams)
    scaling: ScalingConfig = field(default_factory=ScalingConfig)
    models: tuple[str, ...] = DEFAULT_MODELS
    mixture: bool = False
    max_iterations: int = 500
    tolerance: float = 1e-6
    n_draws: int = 100
    draw_type: str = "halton"
    seed: int = 0
    out_dir: str = "out"
    coefficient_decimals: int = 3
    mpe_decimals: int = 2
    mpe_levels: tuple[float, ...] = DEFAULT_LEVELS

    def mixed_options(self, threads: int | None = None) -> MixedOptions:
        return MixedOptions(max_iterations=self.max_iterations, tolerance=self.tolerance,
                            threads=threads, n_draws=self.n_draws,
                            draw_type=self.draw_type, seed=self.seed)


_SCALING_KEYS = tuple(f.name for f in fields(ScalingConfig))
_SECTIONS = {
    "network": {f"speed_{m.key}" for m in MODES} | {f"tariff_{m.key}" for m in MODES}
    | {"fuel_price_uah_per_l", "fuel_consumption_l_per_km"},
    "scaling": set(_SCALING_KEYS),
    "model": {"models", "mixture"},
    "optimizer": {"max_iterations", "tolerance"},
    "draws": {"n_draws", "draw_type", "seed"},
    "output": {"out_dir", "coefficient_decimals", "mpe_decimals", "mpe_levels"},
}


def _get(cp, section, key, kind):
    try:
        if kind is bool:
            return cp.getboolean(section, key)
        return kind(cp.get(section, key))
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}: {exc}") from None


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None
    for section in cp.sections():
        if section not in _SECTIONS:
            raise ConfigError(f"unknown section [{section}] in {path}")
        for key in cp[section]:
            if key not in _SECTIONS[section]:
                raise ConfigError(f"unknown key {key!r} in [{section}] of {path}")

    cfg = RunConfig()
    if cp.has_section("network"):
        net = cfg.net
        speed, tariff = dict(net.speed_kmh), dict(net.tariff_uah)
        for m in MODES:
            if cp.has_option("network", f"speed_{m.key}"):
                speed[m] = _get(cp, "network", f"speed_{m.key}", float)
            if cp.has_option("network", f"tariff_{m.key}"):
                tariff[m] = _get(cp, "network", f"tariff_{m.key}", float)
        extra = {k: _get(cp, "network", k, float)
                 for k in ("fuel_price_uah_per_l", "fuel_consumption_l_per_km")
                 if cp.has_option("network", k)}
        try:
            cfg = replace(cfg, net=NetworkParams(speed_kmh=speed, tariff_uah=tariff, **extra))
        except ValueError as exc:
            raise ConfigError(f"[network] {exc}") from None
    if cp.has_section("scaling"):
        try:
            cfg = replace(cfg, scaling=ScalingConfig(
                **{k: _get(cp, "scaling", k, float) for k in cp["scaling"]}))
        except ValueError as exc:
            raise ConfigError(f"[scaling] {exc}") from None

    kinds = {"mixture": bool, "max_iterations": int, "tolerance": float, "n_draws": int,
             "draw_type": str, "seed": int, "out_dir": str, "coefficient_decimals": int,
             "mpe_decimals": int}
    updates = {}
    for section in ("model", "optimizer", "draws", "output"):
        if not cp.has_section(section):
            continue
        for key in cp[section]:
            if key == "models":
                models = tuple(m.strip() for m in cp.get(section, key).split(",") if m.strip())
                if not models:
                    raise ConfigError("[model] models: empty list")
                updates["models"] = models
            elif key == "mpe_levels":
                try:
                    updates["mpe_levels"] = parse_levels(cp.get(section, key))
                except ValueError as exc:
                    raise ConfigError(f"[output] mpe_levels: {exc}") from None
            else:
                updates[key] = _get(cp, section, key, kinds[key])
    cfg = replace(cfg, **updates)
    if cfg.draw_type not in ("halton", "random", "pseudo_random"):
        raise ConfigError(f"[draws] draw_type: unknown {cfg.draw_type!r}")
    if cfg.n_draws < 1 or cfg.max_iterations < 1 or not cfg.tolerance > 0:
        raise ConfigError("n_draws and max_iterations must be positive, tolerance > 0")
    return cfg
