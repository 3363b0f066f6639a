"""Fronthaul scenario: configuration ingestion, overrides and provenance hash."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields, replace
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Any, Iterable, Mapping, Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from ..dimensioning import CpriCoding, MimoGeometry, ModulationScheme, RfBandPlan
from ..errors import ConfigError, RofBenchError
from ..optics import FiberParams, ModulatorSpec, PhotodetectorSpec
from ..powermodel import LinkKind, PowerParams


@dataclass(frozen=True)
class Seeds:
    payload: int = 1
    detector: int = 2
    pipe: int = 3


@dataclass(frozen=True)
class SimSettings:
    """Numerical and modelling knobs that the physical description leaves open."""

    rolloff: float = 0.2
    oversampling: int = 16
    span_symbols: int = 64
    step_km: float = 0.1
    # peak nonlinear phase per step; 0 selects fixed steps
    max_phase_rad: float = 0.0
    precision: str = "single"
    dealias_factor: float = 2.0
    demux_bandwidth_factor: float = 0.75
    quantizer_rms_factor: float = 4.0
    drof_mode: str = "ideal"
    extinction_ratio_db: float = 13.0
    ook_samples_per_bit: int = 4

    def __post_init__(self):
        if self.precision not in ("single", "double"):
            raise ConfigError(f"sim.precision must be 'single' or 'double', got {self.precision!r}")
        if self.drof_mode not in ("ideal", "budget", "ook"):
            raise ConfigError(f"sim.drof_mode must be 'ideal', 'budget' or 'ook', got {self.drof_mode!r}")
        if not self.step_km > 0:
            raise ConfigError(f"sim.step_km must be positive, got {self.step_km}")
        if self.max_phase_rad < 0:
            raise ConfigError("sim.max_phase_rad must be >= 0")


@dataclass(frozen=True)
class SweepSettings:
    laser_power_start_dbm: float = -4.0
    laser_power_stop_dbm: float = 18.0
    laser_power_step_db: float = 1.0
    wdm_counts: tuple = (1, 2, 3, 4)
    kinds: tuple = ("arof", "drof")
    threshold_percent: float = 3.5
    # the bandwidth table is evaluated at its own millimetre-wave carrier
    figure3_carrier_ghz: float = 28.0
    bw_points_ghz: tuple = tuple(round(0.05 * k, 2) for k in range(1, 21))
    antenna_counts: tuple = tuple(range(1, 65))

    def __post_init__(self):
        object.__setattr__(self, "wdm_counts", tuple(int(w) for w in self.wdm_counts))
        object.__setattr__(self, "kinds", tuple(LinkKind.parse(k).value for k in self.kinds))
        object.__setattr__(self, "bw_points_ghz", tuple(float(b) for b in self.bw_points_ghz))
        object.__setattr__(self, "antenna_counts", tuple(int(n) for n in self.antenna_counts))
        if not self.laser_power_step_db > 0:
            raise ConfigError("sweep.laser_power_step_db must be positive")
        if self.laser_power_stop_dbm < self.laser_power_start_dbm:
            raise ConfigError("sweep.laser_power_stop_dbm must be >= laser_power_start_dbm")
        if not self.wdm_counts or min(self.wdm_counts) < 1:
            raise ConfigError("sweep.wdm_counts must be a nonempty list of counts >= 1")
        if not self.kinds:
            raise ConfigError("sweep.kinds must not be empty")

    def laser_powers(self) -> list[float]:
        n = int(round((self.laser_power_stop_dbm - self.laser_power_start_dbm) / self.laser_power_step_db))
        return [round(self.laser_power_start_dbm + k * self.laser_power_step_db, 9) for k in range(n + 1)]


@dataclass(frozen=True)
class FronthaulScenario:
    link_kind: LinkKind = LinkKind.AROF
    band: RfBandPlan = RfBandPlan(6.0, 1.5)
    geom: MimoGeometry = MimoGeometry()
    mod: ModulationScheme = ModulationScheme(256)
    coding: CpriCoding = CpriCoding()
    fiber: FiberParams = FiberParams()
    modulator: ModulatorSpec = ModulatorSpec()
    detector: PhotodetectorSpec = PhotodetectorSpec()
    wdm_channels: int = 4
    spacing_ghz: float = 200.0
    payload_symbols: int = 2**14
    seeds: Seeds = Seeds()
    sim: SimSettings = SimSettings()
    sweep: SweepSettings = SweepSettings()
    power: PowerParams = field(default_factory=PowerParams.default)

    def __post_init__(self):
        object.__setattr__(self, "link_kind", LinkKind.parse(self.link_kind))
        if int(self.wdm_channels) != self.wdm_channels or self.wdm_channels < 1:
            raise ConfigError(f"wdm_channels must be an integer >= 1, got {self.wdm_channels}")
        if int(self.payload_symbols) != self.payload_symbols or self.payload_symbols < 1000:
            raise ConfigError(f"payload_symbols must be an integer >= 1000, got {self.payload_symbols}")
        if not self.spacing_ghz > 0:
            raise ConfigError(f"spacing_ghz must be positive, got {self.spacing_ghz}")

    @property
    def symbol_rate_gbaud(self) -> float:
        """Symbol rate whose shaped spectrum fills the RF band exactly."""
        return self.band.occupied_bw_ghz / (1 + self.sim.rolloff)

    def with_(self, **changes) -> "FronthaulScenario":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return _plain(asdict(self))

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()


def _plain(obj):
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


SECTIONS = {
    "band": RfBandPlan,
    "geom": MimoGeometry,
    "mod": ModulationScheme,
    "coding": CpriCoding,
    "fiber": FiberParams,
    "modulator": ModulatorSpec,
    "detector": PhotodetectorSpec,
    "seeds": Seeds,
    "sim": SimSettings,
    "sweep": SweepSettings,
}
SCALARS = ("link_kind", "wdm_channels", "spacing_ghz", "payload_symbols")


def _build(cls, base, values: Mapping, section: str):
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(values) - known)
    if unknown:
        raise ConfigError(f"unknown key(s) in [{section}]: {', '.join(unknown)}")
    return replace(base, **values) if values else base


def scenario_from_mapping(data: Mapping[str, Any], base: Optional[FronthaulScenario] = None) -> FronthaulScenario:
    """Build a scenario from nested sections layered over ``base`` (default values)."""
    base = base or FronthaulScenario()
    changes = {}
    try:
        for key, value in data.items():
            if key in SCALARS:
                changes[key] = value
            elif key in SECTIONS:
                if not isinstance(value, Mapping):
                    raise ConfigError(f"[{key}] must be a table")
                changes[key] = _build(SECTIONS[key], getattr(base, key), value, key)
            elif key == "power":
                merged = {**base.power.as_dict(), **value}
                changes[key] = PowerParams.from_mapping(merged)
            else:
                raise ConfigError(f"unknown configuration key {key!r}")
        return replace(base, **changes)
    except ConfigError:
        raise
    except (RofBenchError, TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def default_config_text() -> str:
    return resources.files("rofbench.data").joinpath("default_scenario.toml").read_text()


def load_scenario(path=None, overrides: Iterable[str] = ()) -> FronthaulScenario:
    """Shipped defaults, then the optional config file, then ``--set`` overrides."""
    scenario = scenario_from_mapping(tomllib.loads(default_config_text()))
    if path is not None:
        path = Path(path)
        try:
            data = tomllib.loads(path.read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read {path}: {exc}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        scenario = scenario_from_mapping(data, scenario)
    overrides = list(overrides)
    if overrides:
        scenario = scenario_from_mapping(parse_overrides(overrides), scenario)
    return scenario


def parse_value(text: str):
    """TOML literal if it parses as one, else the bare string."""
    try:
        return tomllib.loads(f"v = {text}")["v"]
    except tomllib.TOMLDecodeError:
        return text


def parse_overrides(items: Iterable[str]) -> dict:
    out: dict = {}
    for item in items:
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"override {item!r} is not of the form key=value")
        parts = key.split(".")
        if len(parts) == 1:
            out[parts[0]] = parse_value(value.strip())
        elif len(parts) == 2:
            out.setdefault(parts[0], {})[parts[1]] = parse_value(value.strip())
        else:
            raise ConfigError(f"override key {key!r} nests too deeply")
    return out
