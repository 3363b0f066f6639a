"""Sampled optical fields."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
import scipy.fft as sfft

from ..errors import DomainError

C_NM_PER_NS = 2.99792458e8  # speed of light, nm/ns
DEFAULT_WAVELENGTH_NM = 1310.0


@dataclass(frozen=True, eq=False)
class OpticalField:
    """Complex field envelope ``A(t)`` in sqrt(W) around a reference wavelength.

    ``channel_plan`` lists ``(channel_index, offset_ghz)`` pairs relative to
    the reference.  ``channel_rate_ghz`` is the per-channel sample rate the
    field was built from; ``spacing_ghz`` the WDM grid, when multiplexed.
    Offsets follow the FFT sign convention of the envelope, i.e. content at
    offset ``f`` varies as ``exp(+2j pi f t)``.
    """

    envelope: np.ndarray
    sample_rate_ghz: float
    center_wavelength_nm: float = DEFAULT_WAVELENGTH_NM
    channel_plan: tuple = ((0, 0.0),)
    channel_rate_ghz: Optional[float] = None
    spacing_ghz: Optional[float] = None

    def __post_init__(self):
        a = np.array(self.envelope, copy=True)
        if a.ndim != 1 or a.size == 0:
            raise DomainError("envelope must be a nonempty 1-D sequence")
        if not np.iscomplexobj(a):
            a = a.astype(np.complex128)
        a.setflags(write=False)
        object.__setattr__(self, "envelope", a)
        object.__setattr__(self, "channel_plan", tuple((int(k), float(f)) for k, f in self.channel_plan))
        if not self.sample_rate_ghz > 0:
            raise DomainError(f"sample_rate_ghz must be positive, got {self.sample_rate_ghz}")
        if not self.center_wavelength_nm > 0:
            raise DomainError(f"center_wavelength_nm must be positive, got {self.center_wavelength_nm}")
        if not self.channel_plan:
            raise DomainError("channel_plan must not be empty")
        span = max(abs(f) for _, f in self.channel_plan)
        if span >= self.sample_rate_ghz / 2:
            raise DomainError(
                f"channel at {span} GHz offset is not representable at {self.sample_rate_ghz} GHz"
            )

    def __len__(self):
        return self.envelope.size

    @property
    def duration_ns(self) -> float:
        return self.envelope.size / self.sample_rate_ghz

    @property
    def center_freq_thz(self) -> float:
        return C_NM_PER_NS / self.center_wavelength_nm / 1e3

    def power_w(self) -> np.ndarray:
        return np.abs(self.envelope) ** 2

    @property
    def mean_power_w(self) -> float:
        return float(np.mean(self.power_w()))

    @property
    def peak_power_w(self) -> float:
        return float(np.max(self.power_w()))

    @property
    def energy(self) -> float:
        """Field energy in W*ns (nJ)."""
        return float(np.sum(self.power_w(), dtype=np.float64) / self.sample_rate_ghz)

    def freqs_ghz(self) -> np.ndarray:
        return sfft.fftfreq(self.envelope.size, 1.0 / self.sample_rate_ghz)

    def time_ns(self) -> np.ndarray:
        return np.arange(self.envelope.size) / self.sample_rate_ghz

    def offset_of(self, channel_index: int) -> float:
        for k, f in self.channel_plan:
            if k == channel_index:
                return f
        raise DomainError(f"channel {channel_index} is not in the plan {[k for k, _ in self.channel_plan]}")

    def with_envelope(self, envelope, **changes) -> "OpticalField":
        return replace(self, envelope=envelope, **changes)


def dbm_to_w(p_dbm: float) -> float:
    return 1e-3 * 10.0 ** (p_dbm / 10.0)


def w_to_dbm(p_w: float) -> float:
    return 10.0 * np.log10(p_w / 1e-3)
