"""TOML run configuration with strict key checking."""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .corridor import CorridorSpec, WageSpec, validate
from .errors import ConfigError, ModelError
from .scenarios import SCENARIOS, ModelConfig

REQUIRED = (
    "capacities", "areas", "free_flow", "beta", "gamma",
    "theta_office", "theta_remote", "t_single", "t_pair", "horizon",
)
OPTIONAL = {
    "days_per_term": 1,
    "mode": "merged_formula",
    "dt": 0.05,
    "scenarios": [],
    "out_dir": "out",
    "population": None,
    "scan_theta_remote": None,
    "scan_spacing": None,
}
MODE_ALIASES = {"exact": "exact", "merged": "merged_formula", "merged_formula": "merged_formula"}


@dataclass(frozen=True)
class RunConfig:
    model: ModelConfig
    mode: str = "merged_formula"
    dt: float = 0.05
    scenarios: tuple[str, ...] = ()
    out_dir: str = "out"
    scan_theta_remote: tuple[float, ...] | None = None
    scan_spacing: tuple[float, ...] | None = None


def _line_of(text: str, key: str) -> int | None:
    for n, line in enumerate(text.splitlines(), start=1):
        if re.match(rf"\s*{re.escape(key)}\s*=", line):
            return n
    return None


def _where(text: str, key: str) -> str:
    n = _line_of(text, key)
    return f" (line {n})" if n else ""


def parse_mode(value: str) -> str:
    try:
        return MODE_ALIASES[value]
    except KeyError:
        raise ConfigError(f"unknown mode {value!r}; expected exact or merged") from None


def _grid(value, name: str) -> tuple[float, ...] | None:
    """A list of values, or a table {start, stop, num}."""
    if value is None:
        return None
    if isinstance(value, dict):
        extra = set(value) - {"start", "stop", "num"}
        if extra or len(value) != 3:
            raise ConfigError(f"{name} table needs exactly start, stop, num")
        return tuple(float(v) for v in np.linspace(value["start"], value["stop"], int(value["num"])))
    return tuple(float(v) for v in value)


def loads(text: str) -> RunConfig:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config parse error: {exc}") from None
    unknown = sorted(set(raw) - set(REQUIRED) - set(OPTIONAL))
    if unknown:
        raise ConfigError("; ".join(f"unknown key {k!r}{_where(text, k)}" for k in unknown))
    missing = [k for k in REQUIRED if k not in raw]
    if missing:
        raise ConfigError(f"missing key(s): {', '.join(missing)}")
    vals = {**OPTIONAL, **raw}
    key = None
    try:
        key = "capacities"
        corridor = validate(CorridorSpec(tuple(vals["capacities"]), tuple(vals["free_flow"]), tuple(vals["areas"])))
        if vals["population"] is not None and abs(float(vals["population"]) - corridor.population) > 1e-9:
            key = "population"
            raise ConfigError(
                f"population {vals['population']} differs from total area {corridor.population}; "
                "only full occupancy is modelled"
            )
        key = "theta_office"
        wages = WageSpec(float(vals["theta_office"]), float(vals["theta_remote"]), int(vals["days_per_term"]))
        key = "t_pair"
        if len(vals["t_pair"]) != 2 or len(vals["horizon"]) != 2:
            raise ConfigError("t_pair and horizon need exactly two entries")
        key = "beta"
        model = ModelConfig(
            corridor=corridor,
            wages=wages,
            early=float(vals["beta"]),
            late=float(vals["gamma"]),
            t_single=float(vals["t_single"]),
            t_pair=tuple(vals["t_pair"]),
            horizon=tuple(vals["horizon"]),
        )
        model.schedule(1)
        model.schedule(2)
        key = "mode"
        mode = parse_mode(str(vals["mode"]))
        key = "scenarios"
        labels = tuple(str(s).upper() for s in vals["scenarios"])
        bad = [s for s in labels if s not in SCENARIOS]
        if bad:
            raise ConfigError(f"unknown scenario(s) {bad}")
        key = "dt"
        dt = float(vals["dt"])
        if not dt > 0:
            raise ConfigError("dt must be positive")
        key = "scan_theta_remote"
        scan_tr = _grid(vals["scan_theta_remote"], "scan_theta_remote")
        key = "scan_spacing"
        scan_d = _grid(vals["scan_spacing"], "scan_spacing")
    except (ModelError, TypeError, ValueError, KeyError) as exc:
        raise ConfigError(f"{exc}{_where(text, key) if key else ''}") from None
    return RunConfig(model, mode, dt, labels, str(vals["out_dir"]), scan_tr, scan_d)


def load(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    return loads(text)
