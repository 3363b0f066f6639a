"""Closed-form A-RoF vs D-RoF fronthaul bandwidth and bit-rate dimensioning.

All frequencies are in GHz and all bit rates in Gbps.  The analogue link
needs ``2 W_bb`` of optical bandwidth per antenna and sector, while the
digitised (CPRI-style) link ships ``f_s R 2 C_w C`` bits per second per
antenna, ``f_s`` being the smallest valid bandpass sampling rate of the RF
band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError

INF = math.inf


@dataclass(frozen=True)
class RfBandPlan:
    """RF carrier ``carrier_freq_ghz`` with single-sided baseband width ``baseband_bw_ghz``."""

    carrier_freq_ghz: float
    baseband_bw_ghz: float

    def __post_init__(self):
        if not self.baseband_bw_ghz > 0:
            raise DomainError(f"baseband_bw_ghz must be positive, got {self.baseband_bw_ghz}")
        if not self.carrier_freq_ghz > self.baseband_bw_ghz:
            raise DomainError(
                "carrier_freq_ghz must exceed baseband_bw_ghz "
                f"({self.carrier_freq_ghz} <= {self.baseband_bw_ghz})"
            )

    @property
    def f_max_ghz(self) -> float:
        return self.carrier_freq_ghz + self.baseband_bw_ghz

    @property
    def f_min_ghz(self) -> float:
        return self.carrier_freq_ghz - self.baseband_bw_ghz

    @property
    def occupied_bw_ghz(self) -> float:
        return 2.0 * self.baseband_bw_ghz

    @classmethod
    def from_bw_per_wavelength(cls, carrier_freq_ghz: float, bw_ghz: float) -> "RfBandPlan":
        return cls(carrier_freq_ghz, bw_ghz / 2.0)


@dataclass(frozen=True)
class MimoGeometry:
    """Transmit/receive antennas per sector and number of sectors.

    ``rx_antennas`` enters no dimensioning formula; it only describes the
    scenario.
    """

    tx_antennas: int = 16
    rx_antennas: int = 16
    sectors: int = 3

    def __post_init__(self):
        for name in ("tx_antennas", "rx_antennas", "sectors"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise DomainError(f"{name} must be an integer >= 1, got {value}")

    @property
    def wavelengths(self) -> int:
        """One WDM carrier per transmit antenna per sector."""
        return self.tx_antennas * self.sectors


@dataclass(frozen=True)
class CpriCoding:
    """Quantizer resolution and the two CPRI rate overheads."""

    resolution_bits: int = 15
    control_overhead: float = 16 / 15
    line_code_rate: float = 10 / 8

    def __post_init__(self):
        if int(self.resolution_bits) != self.resolution_bits or self.resolution_bits < 1:
            raise DomainError(f"resolution_bits must be an integer >= 1, got {self.resolution_bits}")
        if self.control_overhead < 1:
            raise DomainError(f"control_overhead must be >= 1, got {self.control_overhead}")
        if self.line_code_rate < 1:
            raise DomainError(f"line_code_rate must be >= 1, got {self.line_code_rate}")


@dataclass(frozen=True)
class ModulationScheme:
    """Square QAM with ``constellation_points`` = 4, 16, 64, 256, ..."""

    constellation_points: int = 256

    def __post_init__(self):
        s = self.constellation_points
        if int(s) != s or s < 4 or (int(s) & (int(s) - 1)) or int(s).bit_length() % 2 == 0:
            raise DomainError(f"constellation_points must be a power of 4 >= 4, got {s}")

    @property
    def bits_per_symbol(self) -> int:
        return int(self.constellation_points).bit_length() - 1

    @property
    def side(self) -> int:
        """Number of amplitude levels per quadrature axis."""
        return 1 << (self.bits_per_symbol // 2)


@dataclass(frozen=True)
class DimensioningReport:
    bw_per_wavelength_ghz: float
    min_sampling_rate_ghz: float
    zone_index: int
    arof_bw_ghz: float
    arof_rate_gbps: float
    drof_bw_ghz: float
    drof_rate_gbps: float
    bandwidth_ratio: float
    rate_ratio: float

    def as_row(self) -> dict:
        return {
            "bw_per_wavelength_ghz": self.bw_per_wavelength_ghz,
            "fs_ghz": self.min_sampling_rate_ghz,
            "nz": self.zone_index,
            "arof_bw_ghz": self.arof_bw_ghz,
            "arof_rate_gbps": self.arof_rate_gbps,
            "drof_bw_ghz": self.drof_bw_ghz,
            "drof_rate_gbps": self.drof_rate_gbps,
            "ratio_b": self.bandwidth_ratio,
            "ratio_c": self.rate_ratio,
        }


CSV_COLUMNS = (
    "bw_per_wavelength_ghz",
    "fs_ghz",
    "nz",
    "arof_bw_ghz",
    "arof_rate_gbps",
    "drof_bw_ghz",
    "drof_rate_gbps",
    "ratio_b",
    "ratio_c",
)


def max_zone_index(band: RfBandPlan) -> int:
    """Highest Nyquist zone that holds the whole band, ``floor(f_max / (f_max - f_min))``."""
    # exact rational arithmetic on the given floats so integer ratios never round down
    fc = Fraction(band.carrier_freq_ghz)
    w = Fraction(band.baseband_bw_ghz)
    return max(1, math.floor((fc + w) / (2 * w)))


def sampling_rate_range(band: RfBandPlan, zone: int) -> tuple[float, float]:
    """Admissible bandpass sampling rates for Nyquist zone ``zone``.

    Returns ``(2 f_max / n, 2 f_min / (n - 1))``; the upper edge is ``inf``
    for the first zone.
    """
    n_max = max_zone_index(band)
    if int(zone) != zone or not 1 <= zone <= n_max:
        raise DomainError(f"zone must be an integer in [1, {n_max}], got {zone}")
    low = 2.0 * band.f_max_ghz / zone
    high = INF if zone == 1 else 2.0 * band.f_min_ghz / (zone - 1)
    return low, high


def min_sampling_rate(band: RfBandPlan) -> float:
    return 2.0 * band.f_max_ghz / max_zone_index(band)


def arof_bandwidth(band: RfBandPlan, geom: MimoGeometry) -> float:
    return 2.0 * band.baseband_bw_ghz * geom.tx_antennas * geom.sectors


def arof_bit_rate(band: RfBandPlan, geom: MimoGeometry, mod: ModulationScheme) -> float:
    return arof_bandwidth(band, geom) * mod.bits_per_symbol


def drof_bit_rate(band: RfBandPlan, geom: MimoGeometry, coding: CpriCoding) -> float:
    """CPRI line rate: sampling rate x resolution x antennas x sectors x I/Q x overheads."""
    return (
        min_sampling_rate(band)
        * coding.resolution_bits
        * geom.tx_antennas
        * geom.sectors
        * 2
        * coding.control_overhead
        * coding.line_code_rate
    )


def drof_bandwidth(band: RfBandPlan, geom: MimoGeometry, coding: CpriCoding) -> float:
    """Optical bandwidth of the D-RoF stream with ideal rectangular pulses."""
    return drof_bit_rate(band, geom, coding) / 2.0


def bandwidth_ratio(band: RfBandPlan, coding: CpriCoding) -> float:
    return (
        min_sampling_rate(band)
        * coding.resolution_bits
        * coding.control_overhead
        * coding.line_code_rate
        / (2.0 * band.baseband_bw_ghz)
    )


def rate_ratio(band: RfBandPlan, coding: CpriCoding, mod: ModulationScheme) -> float:
    return (
        min_sampling_rate(band)
        * coding.resolution_bits
        * coding.control_overhead
        * coding.line_code_rate
        / (band.baseband_bw_ghz * mod.bits_per_symbol)
    )


def dimension(
    band: RfBandPlan, geom: MimoGeometry, coding: CpriCoding, mod: ModulationScheme
) -> DimensioningReport:
    arof_bw = arof_bandwidth(band, geom)
    drof_bw = drof_bandwidth(band, geom, coding)
    return DimensioningReport(
        bw_per_wavelength_ghz=band.occupied_bw_ghz,
        min_sampling_rate_ghz=min_sampling_rate(band),
        zone_index=max_zone_index(band),
        arof_bw_ghz=arof_bw,
        arof_rate_gbps=arof_bit_rate(band, geom, mod),
        drof_bw_ghz=drof_bw,
        drof_rate_gbps=drof_bit_rate(band, geom, coding),
        bandwidth_ratio=drof_bw / arof_bw,
        rate_ratio=rate_ratio(band, coding, mod),
    )


def dimension_sweep(
    carrier_freq_ghz: float,
    geom: MimoGeometry,
    coding: CpriCoding,
    mod: ModulationScheme,
    bw_points: Sequence[float],
) -> list[DimensioningReport]:
    """One report per RF bandwidth per wavelength (``2 W_bb``) in ``bw_points``."""
    if len(bw_points) == 0:
        raise DomainError("bw_points must not be empty")
    reports = []
    for i, bw in enumerate(bw_points):
        try:
            band = RfBandPlan.from_bw_per_wavelength(carrier_freq_ghz, float(bw))
        except DomainError as exc:
            raise DomainError(f"bw_points[{i}] = {bw}: {exc}") from exc
        reports.append(dimension(band, geom, coding, mod))
    return reports
