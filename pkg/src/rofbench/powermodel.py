"""Component-wise CU/RRH power consumption of A-RoF and D-RoF fronthaul.

Per-wavelength items (E/O, O/E, ADC, DAC, per-antenna signal processing)
scale with the number of WDM carriers ``N_t * M``; climate control, power
supplies and the signal-processing base loads are fixed per site.

The shipped coefficients in ``data/default_power.toml`` are configuration
defaults chosen to reproduce the qualitative A-RoF/D-RoF trend only.  They
are not measured values.
"""

from __future__ import annotations

import enum
from dataclasses import asdict, dataclass, fields
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .dimensioning import MimoGeometry
from .errors import ConfigError, DomainError

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib


class LinkKind(str, enum.Enum):
    AROF = "arof"
    DROF = "drof"

    @classmethod
    def parse(cls, value) -> "LinkKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower().replace("-", ""))
        except ValueError:
            raise ConfigError(f"unknown link kind {value!r}; expected 'arof' or 'drof'") from None


@dataclass(frozen=True)
class PowerParams:
    """Power coefficients in watts."""

    climate_control: float = 0.0
    cu_supply: float = 0.0
    cu_signal_processing_base: float = 0.0
    cu_signal_processing_per_antenna: float = 0.0
    eo_per_wavelength: float = 0.0
    oe_per_wavelength: float = 0.0
    rrh_supply: float = 0.0
    rrh_signal_processing_base: float = 0.0
    rrh_signal_processing_per_antenna: float = 0.0
    adc_per_converter: float = 0.0
    dac_per_converter: float = 0.0
    # CPRI framing / SerDes load per wavelength, D-RoF only
    digital_sp_per_antenna: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not value >= 0:
                raise DomainError(f"{f.name} must be >= 0, got {value}")

    @classmethod
    def from_mapping(cls, data: Mapping) -> "PowerParams":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown power parameter(s): {', '.join(unknown)}")
        try:
            return cls(**{k: float(v) for k, v in data.items()})
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_file(cls, path) -> "PowerParams":
        path = Path(path)
        try:
            with path.open("rb") as fh:
                data = tomllib.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read {path}: {exc}") from exc
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        return cls.from_mapping(data.get("power", data))

    @classmethod
    def default(cls) -> "PowerParams":
        text = resources.files("rofbench.data").joinpath("default_power.toml").read_text()
        return cls.from_mapping(tomllib.loads(text)["power"])

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class CuPower:
    climate: float
    supply: float
    signal_processing: float
    eo: float
    adc: float

    @property
    def total(self) -> float:
        return self.climate + self.supply + self.signal_processing + self.eo + self.adc


@dataclass(frozen=True)
class RrhPower:
    oe: float
    supply: float
    signal_processing: float
    dac: float

    @property
    def total(self) -> float:
        return self.oe + self.supply + self.signal_processing + self.dac


@dataclass(frozen=True)
class PowerBreakdown:
    kind: LinkKind
    cu_watts: CuPower
    rrh_watts: RrhPower

    @property
    def total_watts(self) -> float:
        return self.cu_watts.total + self.rrh_watts.total


def link_power(params: PowerParams, geom: MimoGeometry, link_kind) -> PowerBreakdown:
    kind = LinkKind.parse(link_kind)
    n = geom.tx_antennas * geom.sectors
    digital = kind is LinkKind.DROF
    cu = CuPower(
        climate=params.climate_control,
        supply=params.cu_supply,
        signal_processing=params.cu_signal_processing_base
        + n * params.cu_signal_processing_per_antenna
        + (n * params.digital_sp_per_antenna if digital else 0.0),
        eo=n * params.eo_per_wavelength,
        adc=n * params.adc_per_converter if digital else 0.0,
    )
    rrh = RrhPower(
        oe=n * params.oe_per_wavelength,
        supply=params.rrh_supply,
        signal_processing=params.rrh_signal_processing_base
        + n * params.rrh_signal_processing_per_antenna,
        dac=n * params.dac_per_converter if digital else 0.0,
    )
    return PowerBreakdown(kind, cu, rrh)


def chain_difference(params: PowerParams, geom: MimoGeometry) -> float:
    """Closed-form D-RoF minus A-RoF total."""
    n = geom.tx_antennas * geom.sectors
    return n * (params.adc_per_converter + params.dac_per_converter + params.digital_sp_per_antenna)


@dataclass(frozen=True)
class PowerRow:
    n_t: int
    arof_watts: float
    drof_watts: float


def power_sweep(
    params: PowerParams, geom: MimoGeometry, antenna_counts: Iterable[int]
) -> list[PowerRow]:
    """Total A-RoF and D-RoF power for each transmit-antenna count.

    ``geom`` supplies the sector and receive-antenna counts; its
    ``tx_antennas`` is replaced by each entry of ``antenna_counts``.
    """
    counts = list(antenna_counts)
    if not counts:
        raise DomainError("antenna_counts must not be empty")
    rows = []
    for i, nt in enumerate(counts):
        try:
            g = MimoGeometry(nt, geom.rx_antennas, geom.sectors)
        except DomainError as exc:
            raise DomainError(f"antenna_counts[{i}] = {nt}: {exc}") from exc
        rows.append(
            PowerRow(
                nt,
                link_power(params, g, LinkKind.AROF).total_watts,
                link_power(params, g, LinkKind.DROF).total_watts,
            )
        )
    return rows


# A 20 Gbps analogue fronthaul corresponds to roughly ten times that rate once
# digitised; kept as a labelled scenario rather than a formula.
PRESETS = {
    "arof-20gbps": {
        "label": "20 Gbps A-RoF vs about 200 Gbps CPRI digital signalling",
        "geometry": MimoGeometry(tx_antennas=20, rx_antennas=20, sectors=1),
        "arof_rate_gbps": 20.0,
        "drof_rate_gbps": 200.0,
    },
}
