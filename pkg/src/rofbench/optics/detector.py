"""Square-law photodetection and the receiver's electrical bandpass filter."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
import scipy.fft as sfft

from ..dsp.waveform import SampledWaveform
from ..errors import DomainError
from .field import OpticalField

ELECTRON_CHARGE = 1.602176634e-19


@dataclass(frozen=True)
class PhotodetectorSpec:
    responsivity_a_per_w: float = 0.8
    thermal_noise_a_per_sqrt_hz: float = 20e-12
    shot_noise_enabled: bool = True

    def __post_init__(self):
        if not self.responsivity_a_per_w > 0:
            raise DomainError(f"responsivity must be positive, got {self.responsivity_a_per_w}")
        if not self.thermal_noise_a_per_sqrt_hz >= 0:
            raise DomainError("thermal noise density must be >= 0")

    def noiseless(self) -> "PhotodetectorSpec":
        return PhotodetectorSpec(self.responsivity_a_per_w, 0.0, False)


def photodetect(
    field: OpticalField,
    spec: PhotodetectorSpec,
    seed: Union[int, np.random.SeedSequence, None] = None,
    center_freq_ghz: float = 0.0,
) -> SampledWaveform:
    """Photocurrent ``R |A|^2`` in A plus thermal and shot noise.

    Both noise terms are white over the simulation bandwidth ``fs/2``:
    thermal variance ``i_n^2 fs/2`` and shot variance ``2 q i(t) fs/2``.
    ``center_freq_ghz`` labels the RF carrier of the detected signal.
    """
    power = np.abs(field.envelope.astype(np.complex128)) ** 2
    i = spec.responsivity_a_per_w * power
    bandwidth_hz = field.sample_rate_ghz * 1e9 / 2
    var = np.zeros_like(i)
    if spec.thermal_noise_a_per_sqrt_hz > 0:
        var += spec.thermal_noise_a_per_sqrt_hz**2 * bandwidth_hz
    if spec.shot_noise_enabled:
        var = var + 2 * ELECTRON_CHARGE * i * bandwidth_hz
    if np.any(var > 0):
        rng = np.random.default_rng(seed)
        i = i + np.sqrt(var) * rng.standard_normal(i.size)
    return SampledWaveform(i, field.sample_rate_ghz, center_freq_ghz)


def bandpass_response(freqs_ghz: np.ndarray, low: float, high: float, transition: float) -> np.ndarray:
    """Zero-phase mask: 1 on ``[low, high]``, raised-cosine roll-off over ``transition``."""
    f = np.asarray(freqs_ghz, dtype=np.float64)
    h = np.zeros_like(f)
    h[(f >= low) & (f <= high)] = 1.0
    if transition > 0:
        lo = (f > low - transition) & (f < low)
        h[lo] = 0.5 * (1 + np.cos(np.pi * (low - f[lo]) / transition))
        hi = (f > high) & (f < high + transition)
        h[hi] = 0.5 * (1 + np.cos(np.pi * (f[hi] - high) / transition))
    return h


def electrical_bandpass(
    rf: SampledWaveform,
    center_ghz: float,
    bandwidth_ghz: float,
    transition_ghz: Optional[float] = None,
) -> SampledWaveform:
    """Linear-phase bandpass around ``center_ghz``.

    The response is exactly flat over ``center +- bandwidth/2`` and rolls
    off to zero over ``transition_ghz`` on each side (default a quarter of
    the bandwidth).  Real inputs are filtered symmetrically in ``|f|``.
    """
    if transition_ghz is None:
        transition_ghz = bandwidth_ghz / 4
    if not bandwidth_ghz > 0 or transition_ghz < 0:
        raise DomainError("bandwidth must be positive and transition nonnegative")
    low = center_ghz - bandwidth_ghz / 2
    high = center_ghz + bandwidth_ghz / 2
    if low - transition_ghz < 0 or high + transition_ghz > rf.sample_rate_ghz / 2:
        raise DomainError(
            f"band [{low - transition_ghz}, {high + transition_ghz}] GHz is outside "
            f"[0, {rf.sample_rate_ghz / 2}] GHz"
        )
    f = rf.freqs_ghz()
    h = bandpass_response(np.abs(f) if rf.is_real else f, low, high, transition_ghz)
    out = sfft.ifft(sfft.fft(rf.samples) * h)
    return rf.with_samples(out.real if rf.is_real else out, center_freq_ghz=center_ghz)
