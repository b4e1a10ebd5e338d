"""Run configuration: a flat ``dotted.key = value`` text format.

Sections::

    protocol.*              v_a, mu
    hardware.*              HardwareParams fields
    receiver.*              ReceiverChain fields
    channel.*               attenuation_db_per_km, length_km, loss_db
    security.collective.*   SecurityParams fields (n_pt comes from hardware)
    security.coherent.*
    sweep.*                 start_db, stop_db, step_db
    optimize.*              va_lo, va_hi
    run.*                   mode, out, seed

Blank lines and ``#`` comments are ignored; unknown keys are errors.
Defaults reproduce the tabulated parameters of the reference system.
"""
from __future__ import annotations

import dataclasses
import math
import types
import typing
import warnings
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .errors import ConfigError
from .noise import HardwareParams, ReceiverChain
from .rates import SecurityParams

MODES = ("collective", "coherent", "asymptotic")


@dataclass(frozen=True)
class ChannelSpec:
    attenuation_db_per_km: float = 0.2
    length_km: float = 25.0
    loss_db: float | None = None

    @property
    def effective_loss_db(self) -> float:
        if self.loss_db is not None:
            return self.loss_db
        return self.attenuation_db_per_km * self.length_km


@dataclass(frozen=True)
class SweepGrid:
    start_db: float = 0.0
    stop_db: float = 15.0
    step_db: float = 0.1

    def __post_init__(self):
        if not self.step_db > 0:
            raise ConfigError("sweep.step_db must be > 0")
        if self.stop_db < self.start_db:
            raise ConfigError("sweep.stop_db must be >= sweep.start_db")

    def points(self) -> list[float]:
        k = int(math.floor((self.stop_db - self.start_db) / self.step_db + 1e-9))
        # rounding keeps 0.1-dB grids free of 0.30000000000000004-style labels
        return [round(self.start_db + i * self.step_db, 10) for i in range(k + 1)]


@dataclass(frozen=True)
class Protocol:
    v_a: float = 6.77
    mu: int = 2


@dataclass(frozen=True)
class Optimize:
    va_lo: float = 1.0
    va_hi: float = 20.0


@dataclass(frozen=True)
class Run:
    mode: str = "collective"
    out: str | None = None
    seed: int = 0


@dataclass(frozen=True)
class RunConfig:
    protocol: Protocol = field(default_factory=Protocol)
    hardware: HardwareParams = field(default_factory=HardwareParams)
    receiver: ReceiverChain = field(default_factory=ReceiverChain)
    channel: ChannelSpec = field(default_factory=ChannelSpec)
    collective: SecurityParams = field(default_factory=SecurityParams.collective)
    coherent: SecurityParams = field(default_factory=SecurityParams.coherent)
    sweep: SweepGrid = field(default_factory=SweepGrid)
    optimize: Optimize = field(default_factory=Optimize)
    run: Run = field(default_factory=Run)

    def __post_init__(self):
        if self.run.mode not in MODES:
            raise ConfigError(f"run.mode must be one of {MODES}, got {self.run.mode!r}")
        if not 0 < self.optimize.va_lo < self.optimize.va_hi:
            raise ConfigError("optimizer bounds need 0 < va_lo < va_hi")
        if self.protocol.mu not in (1, 2):
            raise ConfigError("protocol.mu must be 1 (homodyne) or 2 (heterodyne)")

    def security(self, mode: str) -> SecurityParams:
        sec = self.coherent if mode == "coherent" else self.collective
        # pilots are counted once, as hardware
        return replace(sec, n_pt=self.hardware.n_pt)

    def with_mode(self, mode: str) -> "RunConfig":
        return replace(self, run=replace(self.run, mode=mode))

    def with_v_a(self, v_a: float) -> "RunConfig":
        return replace(self, protocol=replace(self.protocol, v_a=v_a))


# section prefix -> RunConfig attribute
_SECTIONS = {
    "protocol": "protocol",
    "hardware": "hardware",
    "receiver": "receiver",
    "channel": "channel",
    "security.collective": "collective",
    "security.coherent": "coherent",
    "sweep": "sweep",
    "optimize": "optimize",
    "run": "run",
}
_EXCLUDED = {("collective", "n_pt"), ("coherent", "n_pt")}


def _section_fields(attr: str, obj) -> list[dataclasses.Field]:
    return [f for f in fields(obj) if f.init and (attr, f.name) not in _EXCLUDED]


def _resolve_type(cls, name: str):
    return typing.get_type_hints(cls)[name]


def _parse_value(raw: str, tp, key: str):
    text = raw.strip()
    if typing.get_origin(tp) in (typing.Union, types.UnionType) and type(None) in typing.get_args(tp):
        if text.lower() in ("none", ""):
            return None
        tp = next(a for a in typing.get_args(tp) if a is not type(None))
    try:
        if tp is int:
            value = float(text)
            if value != int(value):
                raise ValueError
            return int(value)
        if tp is float:
            return float(text)
        if tp is str:
            return text
    except ValueError:
        raise ConfigError(f"{key}: cannot parse {text!r} as {tp.__name__}") from None
    raise ConfigError(f"{key}: unsupported type {tp}")


def _format_value(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def parse_config(text: str, base: RunConfig | None = None) -> RunConfig:
    base = base or RunConfig()
    updates: dict[str, dict] = {attr: {} for attr in _SECTIONS.values()}
    seen: set[str] = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, raw = (s.strip() for s in line.split("=", 1))
        if key in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key}")
        seen.add(key)
        prefix, _, name = key.rpartition(".")
        attr = _SECTIONS.get(prefix)
        if attr is None:
            raise ConfigError(f"line {lineno}: unknown key {key}")
        section = getattr(base, attr)
        names = {f.name for f in _section_fields(attr, section)}
        if name not in names:
            raise ConfigError(f"line {lineno}: unknown key {key}")
        updates[attr][name] = _parse_value(raw, _resolve_type(type(section), name), key)

    ch = updates["channel"]
    if ch.get("loss_db") is not None and ({"attenuation_db_per_km", "length_km"} & ch.keys()):
        warnings.warn("channel.loss_db overrides channel.attenuation_db_per_km/length_km", stacklevel=2)

    try:
        parts = {attr: replace(getattr(base, attr), **kw) for attr, kw in updates.items()}
        return replace(base, **parts)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def serialize_config(cfg: RunConfig) -> str:
    lines = []
    for prefix, attr in _SECTIONS.items():
        section = getattr(cfg, attr)
        for f in _section_fields(attr, section):
            lines.append(f"{prefix}.{f.name} = {_format_value(getattr(section, f.name))}")
    return "\n".join(lines) + "\n"


def load_config(path: str | Path | None) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)
