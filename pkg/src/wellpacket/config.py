"""Run configuration: sectioned key-value files plus time-suffix parsing.

Configs are INI-style text with a fixed schema of sections and keys;
anything unrecognized is rejected with its location so typos cannot
silently fall back to defaults.  Times may be written in absolute units
or as multiples of the bounce period / revival time ("124tau", "0.5T").
"""

from __future__ import annotations

import configparser
import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .packet import PacketSpec
from .system import WellSystem

__all__ = ["ConfigError", "RunConfig", "load_config", "parse_config", "parse_time"]

# CLI-facing cap: beyond this, finite k is numerically indistinguishable
# from the box limit and must be requested as "infinity" instead.
_MAX_NUMERIC_K = 1e4


class ConfigError(Exception):
    """Invalid run configuration; message carries the [section] key location."""


def parse_time(text: str, tau: float | None = None, T: float | None = None) -> float:
    """A time literal: plain number, or number with 'tau' / 'T' suffix."""
    s = text.strip()
    try:
        if s.endswith("tau"):
            if tau is None:
                raise ConfigError(f"time {s!r} uses tau units but no packet is configured")
            return float(s[:-3]) * tau
        if s.endswith("T"):
            if T is None:
                raise ConfigError(f"time {s!r} uses T units but no packet is configured")
            return float(s[:-1]) * T
        return float(s)
    except ValueError:
        raise ConfigError(f"cannot parse time literal {s!r}") from None


@dataclass(frozen=True)
class GridSettings:
    x_points: int = 4096
    p_span: float = 1.5       # in units of p0
    p_spacing: float | None = None


@dataclass(frozen=True)
class ScheduleSettings:
    mode: str = "stroboscopic"
    n_start: int = 0
    n_stop: int = 800
    n_step: int = 1
    start: str = "0"
    stop: str = "10tau"
    count: int = 1000
    times: tuple[str, ...] = ()

    def resolve(self, tau: float, T: float) -> np.ndarray:
        if self.mode == "stroboscopic":
            ns = np.arange(self.n_start, self.n_stop + 1, self.n_step)
            return ns * tau
        if self.mode == "dense":
            a = parse_time(self.start, tau, T)
            b = parse_time(self.stop, tau, T)
            if not b > a:
                raise ConfigError("[schedule] stop must exceed start")
            return np.linspace(a, b, self.count)
        if self.mode == "explicit":
            if not self.times:
                raise ConfigError("[schedule] explicit mode needs a times list")
            vals = sorted(parse_time(s, tau, T) for s in self.times)
            return np.array(vals)
        raise ConfigError(f"[schedule] unknown mode {self.mode!r}")


@dataclass(frozen=True)
class EvolveSettings:
    times: tuple[str, ...] = ()
    representation: str = "position"


@dataclass(frozen=True)
class CorrelateSettings:
    fit: bool = False
    scan: bool = False
    threshold: float | None = None
    scan_start: str = "0"
    scan_stop: str = "1T"
    scan_resolution: str = "0.25tau"
    min_height: float = 0.3


@dataclass(frozen=True)
class PowerLawSettings:
    k_values: tuple[float, ...] = (1.0, 2.0, 4.0)
    n_min: int = 50
    n_max: int = 200
    half: bool = False
    v0: float = 1.0
    a: float = 1.0
    fit: bool = False
    fit_n0: int = 200
    fit_dn: float = 3.0


@dataclass(frozen=True)
class FlattenSettings:
    dx0_values: tuple[float, ...] = (0.025, 0.05, 0.10)
    epsilon: float = 0.05
    hold: int = 10
    t_stop: str = "480tau"
    sample_step: str = "0.25tau"


@dataclass(frozen=True)
class OutputSettings:
    format: str = "csv"
    precision: int = 12


@dataclass(frozen=True)
class RunConfig:
    system: WellSystem = WellSystem()
    packet: PacketSpec = PacketSpec(n0=400, x0=0.5, dx0=0.05)
    grids: GridSettings = GridSettings()
    schedule: ScheduleSettings = ScheduleSettings()
    evolve: EvolveSettings = EvolveSettings()
    correlate: CorrelateSettings = CorrelateSettings()
    powerlaw: PowerLawSettings = PowerLawSettings()
    flatten: FlattenSettings = FlattenSettings()
    output: OutputSettings = OutputSettings()
    config_hash: str = field(default="", compare=False)


_BOOL = {"true": True, "yes": True, "1": True, "on": True,
         "false": False, "no": False, "0": False, "off": False}


class _Section:
    """One config section with typed, location-aware accessors."""

    def __init__(self, name: str, raw: dict[str, str]):
        self.name = name
        self.raw = dict(raw)
        self.seen: set[str] = set()

    def _get(self, key: str):
        self.seen.add(key)
        return self.raw.get(key)

    def loc(self, key: str) -> str:
        return f"[{self.name}] {key}"

    def floatv(self, key, default=None):
        v = self._get(key)
        if v is None:
            return default
        try:
            return float(v)
        except ValueError:
            raise ConfigError(f"{self.loc(key)}: expected a number, got {v!r}") from None

    def intv(self, key, default=None):
        v = self._get(key)
        if v is None:
            return default
        try:
            return int(v)
        except ValueError:
            raise ConfigError(f"{self.loc(key)}: expected an integer, got {v!r}") from None

    def boolv(self, key, default=None):
        v = self._get(key)
        if v is None:
            return default
        b = _BOOL.get(v.strip().lower())
        if b is None:
            raise ConfigError(f"{self.loc(key)}: expected a boolean, got {v!r}")
        return b

    def strv(self, key, default=None, choices=None):
        v = self._get(key)
        if v is None:
            return default
        v = v.strip()
        if choices is not None and v not in choices:
            raise ConfigError(f"{self.loc(key)}: expected one of {sorted(choices)}, got {v!r}")
        return v

    def listv(self, key, default=()):
        v = self._get(key)
        if v is None:
            return tuple(default)
        items = tuple(s.strip() for s in v.split(",") if s.strip())
        if not items and v.strip():
            raise ConfigError(f"{self.loc(key)}: could not parse list {v!r}")
        return items

    def reject_unknown(self):
        unknown = set(self.raw) - self.seen
        if unknown:
            key = sorted(unknown)[0]
            raise ConfigError(f"{self.loc(key)}: unknown key")


_KNOWN_SECTIONS = {"system", "packet", "grids", "schedule", "evolve",
                   "correlate", "powerlaw", "flatten", "output"}


def parse_config(text: str) -> RunConfig:
    """Parse config text into a validated RunConfig."""
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as e:
        raise ConfigError(f"malformed config: {e}") from None

    for name in cp.sections():
        if name not in _KNOWN_SECTIONS:
            raise ConfigError(f"[{name}]: unknown section")

    def section(name: str) -> _Section:
        return _Section(name, dict(cp[name]) if cp.has_section(name) else {})

    s = section("system")
    try:
        system = WellSystem(mass=s.floatv("mass", 0.5), hbar=s.floatv("hbar", 1.0),
                            width_L=s.floatv("length", 1.0))
    except ValueError as e:
        raise ConfigError(f"[system]: {e}") from None
    s.reject_unknown()

    s = section("packet")
    alpha = s.floatv("alpha")
    dx0 = s.floatv("dx0")
    if alpha is None and dx0 is None:
        dx0 = 0.05
    try:
        packet = PacketSpec(n0=s.intv("n0", 400), x0=s.floatv("x0", 0.5),
                            alpha=alpha, dx0=dx0,
                            window_sigmas=s.floatv("window_sigmas", 8.0))
        packet.validate_for(system)
    except ValueError as e:
        raise ConfigError(f"[packet]: {e}") from None
    s.reject_unknown()

    s = section("grids")
    grids = GridSettings(x_points=s.intv("x_points", 4096),
                         p_span=s.floatv("p_span", 1.5),
                         p_spacing=s.floatv("p_spacing"))
    if grids.x_points < 2:
        raise ConfigError("[grids] x_points: need at least 2 points")
    s.reject_unknown()

    s = section("schedule")
    schedule = ScheduleSettings(
        mode=s.strv("mode", "stroboscopic", {"stroboscopic", "dense", "explicit"}),
        n_start=s.intv("n_start", 0), n_stop=s.intv("n_stop", 800),
        n_step=s.intv("n_step", 1),
        start=s.strv("start", "0"), stop=s.strv("stop", "10tau"),
        count=s.intv("count", 1000), times=s.listv("times"))
    if schedule.n_step < 1 or schedule.count < 2:
        raise ConfigError("[schedule]: n_step must be >= 1 and count >= 2")
    s.reject_unknown()

    s = section("evolve")
    evolve = EvolveSettings(
        times=s.listv("times"),
        representation=s.strv("representation", "position",
                              {"position", "momentum", "both"}))
    s.reject_unknown()

    s = section("correlate")
    correlate = CorrelateSettings(
        fit=s.boolv("fit", False), scan=s.boolv("scan", False),
        threshold=s.floatv("threshold"),
        scan_start=s.strv("scan_start", "0"), scan_stop=s.strv("scan_stop", "1T"),
        scan_resolution=s.strv("scan_resolution", "0.25tau"),
        min_height=s.floatv("min_height", 0.3))
    if correlate.threshold is not None and not 0.0 < correlate.threshold < 1.0:
        raise ConfigError("[correlate] threshold: must lie in (0, 1)")
    s.reject_unknown()

    s = section("powerlaw")
    k_values = tuple(_parse_k(item, s.loc("k")) for item in s.listv("k", ("1", "2", "4")))
    pl = PowerLawSettings(
        k_values=k_values, n_min=s.intv("n_min", 50), n_max=s.intv("n_max", 200),
        half=s.boolv("half", False), v0=s.floatv("v0", 1.0), a=s.floatv("a", 1.0),
        fit=s.boolv("fit", False), fit_n0=s.intv("fit_n0", 200),
        fit_dn=s.floatv("fit_dn", 3.0))
    if pl.n_min < 0 or pl.n_max < pl.n_min:
        raise ConfigError("[powerlaw]: need 0 <= n_min <= n_max")
    if pl.v0 <= 0 or pl.a <= 0:
        raise ConfigError("[powerlaw]: v0 and a must be positive")
    s.reject_unknown()

    s = section("flatten")
    dx0s = tuple(_parse_positive(item, s.loc("dx0")) for item in
                 s.listv("dx0", ("0.025", "0.05", "0.10")))
    flatten = FlattenSettings(dx0_values=dx0s, epsilon=s.floatv("epsilon", 0.05),
                              hold=s.intv("hold", 10), t_stop=s.strv("t_stop", "480tau"),
                              sample_step=s.strv("sample_step", "0.25tau"))
    if flatten.epsilon <= 0 or flatten.hold < 1:
        raise ConfigError("[flatten]: epsilon must be positive and hold >= 1")
    s.reject_unknown()

    s = section("output")
    output = OutputSettings(format=s.strv("format", "csv", {"csv", "json"}),
                            precision=s.intv("precision", 12))
    if not 1 <= output.precision <= 17:
        raise ConfigError("[output] precision: must lie in [1, 17]")
    s.reject_unknown()

    digest = hashlib.sha256(text.encode()).hexdigest()
    return RunConfig(system=system, packet=packet, grids=grids, schedule=schedule,
                     evolve=evolve, correlate=correlate, powerlaw=pl,
                     flatten=flatten, output=output, config_hash=digest)


def _parse_k(item: str, loc: str) -> float:
    if item.lower() in ("infinity", "inf"):
        return math.inf
    try:
        k = float(item)
    except ValueError:
        raise ConfigError(f"{loc}: expected a number or 'infinity', got {item!r}") from None
    if k <= 0:
        raise ConfigError(f"{loc}: exponent must be positive, got {item}")
    if k > _MAX_NUMERIC_K:
        raise ConfigError(
            f"{loc}: k = {item} is too large for finite arithmetic; "
            "write 'infinity' for the box limit")
    return k


def _parse_positive(item: str, loc: str) -> float:
    try:
        v = float(item)
    except ValueError:
        raise ConfigError(f"{loc}: expected a number, got {item!r}") from None
    if v <= 0:
        raise ConfigError(f"{loc}: expected a positive number, got {item}")
    return v


def load_config(path) -> RunConfig:
    """Read and parse a config file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    return parse_config(text)
