"""Electro-optic conversion: external Mach-Zehnder modulator and directly modulated laser."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..dsp.waveform import SampledWaveform
from ..errors import ClippingError, ConfigError, DomainError
from .field import DEFAULT_WAVELENGTH_NM, OpticalField, dbm_to_w

LOAD_OHMS = 50.0


class ModulatorKind(str, Enum):
    MZM = "mzm"
    DML = "dml"

    @classmethod
    def parse(cls, value) -> "ModulatorKind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ConfigError(f"unknown modulator kind {value!r}; expected 'mzm' or 'dml'") from None


@dataclass(frozen=True)
class ModulatorSpec:
    """Laser plus modulator.

    For the MZM the RF drive is scaled to ``rf_power_dbm`` into 50 ohm.  For
    the DML the drive is normalized to unit peak and scaled by
    ``modulation_index``.
    """

    kind: ModulatorKind = ModulatorKind.MZM
    laser_power_dbm: float = 0.0
    v_pi: float = 5.0
    bias_fraction: float = 0.5
    rf_power_dbm: float = 0.0
    modulation_index: float = 0.5
    chirp_factor: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", ModulatorKind.parse(self.kind))
        if not self.v_pi > 0:
            raise DomainError(f"v_pi must be positive, got {self.v_pi}")
        if not 0 < self.bias_fraction < 1:
            raise DomainError(f"bias_fraction must lie in (0, 1), got {self.bias_fraction}")
        if not 0 < self.modulation_index <= 1:
            raise DomainError(f"modulation_index must lie in (0, 1], got {self.modulation_index}")

    @property
    def laser_power_w(self) -> float:
        return dbm_to_w(self.laser_power_dbm)

    @property
    def drive_rms_volts(self) -> float:
        return math.sqrt(dbm_to_w(self.rf_power_dbm) * LOAD_OHMS)


def mzm_field(v: np.ndarray, spec: ModulatorSpec) -> np.ndarray:
    """Field transfer of a push-pull MZM, ``sqrt(P0) cos(pi v / (2 V_pi) + phase_bias)``.

    The bias phase ``pi b - pi/4`` puts ``b = 0.5`` at quadrature, where the
    intensity is ``P0/2`` for zero drive.
    """
    phase = (np.pi / 2) * (v / spec.v_pi) + np.pi * spec.bias_fraction - np.pi / 4
    return math.sqrt(spec.laser_power_w) * np.cos(phase)


def dml_field(v_hat: np.ndarray, spec: ModulatorSpec, force: bool = False) -> np.ndarray:
    """Chirped intensity modulation ``sqrt(P0 (1 + m v)) exp(i a/2 ln(1 + m v))``."""
    g = 1.0 + spec.modulation_index * v_hat
    if np.min(g) <= 0:
        if not force:
            raise ClippingError(
                f"laser driven below threshold at {np.mean(g <= 0):.3%} of samples "
                f"(modulation_index={spec.modulation_index})"
            )
        g = np.maximum(g, 0.0)
    with np.errstate(divide="ignore"):
        phase = np.where(g > 0, (spec.chirp_factor / 2) * np.log(np.where(g > 0, g, 1.0)), 0.0)
    return np.sqrt(spec.laser_power_w * g) * np.exp(1j * phase)


def eo_convert(
    rf: SampledWaveform,
    spec: ModulatorSpec,
    wavelength_nm: float = DEFAULT_WAVELENGTH_NM,
    force: bool = False,
) -> OpticalField:
    """Modulate a laser with the physical (real) RF signal of ``rf``.

    The RF waveform is normalized internally: to ``drive_rms_volts`` rms for
    the MZM and to unit peak for the DML.  ``force`` clamps a clipping DML
    to zero power instead of raising.
    """
    v = rf.to_real().samples
    if spec.kind is ModulatorKind.MZM:
        rms = math.sqrt(float(np.mean(v**2)))
        drive = v * (spec.drive_rms_volts / rms) if rms > 0 else v
        a = mzm_field(drive, spec).astype(np.complex128)
    else:
        peak = float(np.max(np.abs(v)))
        a = dml_field(v / peak if peak > 0 else v, spec, force=force)
    return OpticalField(a, rf.sample_rate_ghz, wavelength_nm, ((0, 0.0),), rf.sample_rate_ghz)
