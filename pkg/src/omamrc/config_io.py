"""TOML run-configuration parsing.

Schema::

    [network]   M, L, T_max, alpha
    [rates]     values = [..]           # one rate per source, b.c.u
    [gains]     symmetric_db = x        # or explicit entries "s1->r1" = x_db
    [sweep]     kind = "symmetric_gamma" | "link_adaptation" | "delta_gamma"
                values_db = [..]
                mcs_rates = [..]        # link_adaptation only
    [run]       frames, seed, strategies = [..], workers,
                upper_bound_cap, output

``symmetric_gamma`` ignores [gains] (every link is set to the sweep value);
``delta_gamma`` adds each sweep value to the configured base matrix;
``link_adaptation`` sweeps symmetric links and picks rates from the MCS
family. Link keys use 1-based node names: s1..sM, r1..rL, d.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .network import ConfigError, NetworkConfig, symmetric_gains_db
from .strategies import ALL_SCHEMES

SWEEP_KINDS = ("symmetric_gamma", "link_adaptation", "delta_gamma")

_LINK_KEY = re.compile(r"^(s|r)(\d+)->(?:(r)(\d+)|(d))$")

DEFAULT_MCS_RATES = (0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5)
DEFAULT_UPPER_BOUND_CAP = 100_000


@dataclass(frozen=True)
class SimulationPlan:
    """A parsed run: network template, sweep definition, run parameters."""

    m: int
    l: int
    t_max: int
    alpha: float
    rates: tuple[float, ...]
    base_gains_db: np.ndarray | None
    sweep_kind: str
    sweep_values: tuple[float, ...]
    mcs_rates: tuple[float, ...]
    frames: int
    seed: int
    strategies: tuple[str, ...]
    workers: int
    upper_bound_cap: int
    output: str | None

    def network_template(self, gains_db: np.ndarray) -> NetworkConfig:
        return NetworkConfig(m=self.m, l=self.l, t_max=self.t_max,
                             alpha=self.alpha, rates=self.rates,
                             gains_db=gains_db)


def _parse_link_key(key: str, m: int, l: int) -> tuple[int, int]:
    match = _LINK_KEY.match(key)
    if not match:
        raise ConfigError([f"unparseable link key {key!r}"])
    kind, idx = match.group(1), int(match.group(2))
    if kind == "s":
        if not 1 <= idx <= m:
            raise ConfigError([f"source index out of range in {key!r}"])
        row = idx - 1
    else:
        if not 1 <= idx <= l:
            raise ConfigError([f"relay index out of range in {key!r}"])
        row = m + idx - 1
    if match.group(5):
        col = l
    else:
        ridx = int(match.group(4))
        if not 1 <= ridx <= l:
            raise ConfigError([f"relay index out of range in {key!r}"])
        col = ridx - 1
    if row == m + col:
        raise ConfigError([f"self-link {key!r} is not allowed"])
    return row, col


def _parse_gains(section: dict, m: int, l: int) -> np.ndarray:
    if "symmetric_db" in section:
        extra = set(section) - {"symmetric_db"}
        if extra:
            raise ConfigError(
                [f"[gains] mixes symmetric_db with link entries: {sorted(extra)}"])
        return symmetric_gains_db(m, l, float(section["symmetric_db"]))
    gains = np.full((m + l, l + 1), np.nan)
    for key, value in section.items():
        row, col = _parse_link_key(key, m, l)
        gains[row, col] = float(value)
    return gains


def _require(section: dict, key: str, where: str):
    if key not in section:
        raise ConfigError([f"missing {key!r} in [{where}]"])
    return section[key]


def load_plan(path: str | Path, overrides: dict | None = None) -> SimulationPlan:
    """Parse a TOML run file, applying command-line overrides."""
    overrides = overrides or {}
    try:
        with open(path, "rb") as fh:
            raw = tomllib.load(fh)
    except OSError as err:
        raise ConfigError([f"cannot read config {path}: {err}"]) from err
    except tomllib.TOMLDecodeError as err:
        raise ConfigError([f"malformed TOML in {path}: {err}"]) from err

    network = raw.get("network", {})
    m = int(_require(network, "M", "network"))
    l = int(_require(network, "L", "network"))
    t_max = int(_require(network, "T_max", "network"))
    alpha = float(_require(network, "alpha", "network"))

    rates = tuple(float(r) for r in _require(raw.get("rates", {}), "values",
                                             "rates"))

    sweep = raw.get("sweep", {})
    sweep_kind = overrides.get("sweep") or sweep.get("kind", "symmetric_gamma")
    if sweep_kind not in SWEEP_KINDS:
        raise ConfigError(
            [f"unknown sweep kind {sweep_kind!r}; expected one of {SWEEP_KINDS}"])
    sweep_values = tuple(float(v) for v in _require(sweep, "values_db", "sweep"))
    if not sweep_values:
        raise ConfigError(["empty sweep values_db"])
    mcs_rates = tuple(float(r) for r in sweep.get("mcs_rates", DEFAULT_MCS_RATES))
    if sweep_kind == "link_adaptation" and not mcs_rates:
        raise ConfigError(["empty MCS rate family"])

    base_gains = None
    if "gains" in raw and raw["gains"]:
        base_gains = _parse_gains(raw["gains"], m, l)
    if sweep_kind == "delta_gamma" and base_gains is None:
        raise ConfigError(["delta_gamma sweep requires a [gains] base matrix"])

    run = raw.get("run", {})
    frames = int(overrides.get("frames") or run.get("frames", 1000))
    seed = int(overrides["seed"] if overrides.get("seed") is not None
               else run.get("seed", 0))
    strategies = tuple(overrides.get("strategies")
                       or run.get("strategies", list(ALL_SCHEMES)))
    for name in strategies:
        if name not in ALL_SCHEMES:
            raise ConfigError(
                [f"unknown strategy {name!r}; expected one of {ALL_SCHEMES}"])
    if not strategies:
        raise ConfigError(["no strategies requested"])
    workers = int(run.get("workers", 1))
    cap = int(run.get("upper_bound_cap", DEFAULT_UPPER_BOUND_CAP))
    if "upper_bound" in strategies and (m + l) ** t_max > cap:
        raise ConfigError(
            [f"upper_bound would enumerate (M+L)^T_max = {(m + l) ** t_max} "
             f"sequences per frame, above the configured cap {cap}"])
    output = overrides.get("output") or run.get("output")

    if frames < 1:
        raise ConfigError([f"frames must be >= 1, got {frames}"])

    return SimulationPlan(
        m=m, l=l, t_max=t_max, alpha=alpha, rates=rates,
        base_gains_db=base_gains, sweep_kind=sweep_kind,
        sweep_values=sweep_values, mcs_rates=mcs_rates, frames=frames,
        seed=seed, strategies=strategies, workers=workers,
        upper_bound_cap=cap, output=output)
