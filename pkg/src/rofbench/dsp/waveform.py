"""Uniformly sampled electrical waveforms and frequency translation.

Conventions
-----------
Time is in ns and frequency in GHz.  Every block is treated as one period
of a periodic signal, so filtering and resampling are exact circular
operations without start-up transients.

Complex arrays are complex envelopes.  A waveform with
``center_freq_ghz = f_c > 0`` is the analytic representation of the
physical signal ``x(t) = sqrt(2) Re{z(t)}``, which has the same mean power as
``z``.  Real arrays are physical signals; their ``center_freq_ghz`` records
the RF carrier of their content, or 0 when unknown.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
import scipy.fft as sfft

from ..errors import DomainError

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class SampledWaveform:
    samples: np.ndarray
    sample_rate_ghz: float
    center_freq_ghz: float = 0.0
    # occupied double-sided bandwidth around center_freq_ghz, if known
    bandwidth_ghz: Optional[float] = None

    def __post_init__(self):
        x = np.array(self.samples, copy=True)
        if x.ndim != 1 or x.size == 0:
            raise DomainError("samples must be a nonempty 1-D sequence")
        if not np.iscomplexobj(x):
            x = x.astype(np.float64, copy=False)
        x.setflags(write=False)
        object.__setattr__(self, "samples", x)
        if not self.sample_rate_ghz > 0:
            raise DomainError(f"sample_rate_ghz must be positive, got {self.sample_rate_ghz}")
        if self.center_freq_ghz < 0:
            raise DomainError(f"center_freq_ghz must be >= 0, got {self.center_freq_ghz}")

    def __len__(self):
        return self.samples.size

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.samples)

    @property
    def duration_ns(self) -> float:
        return self.samples.size / self.sample_rate_ghz

    def time_ns(self) -> np.ndarray:
        return np.arange(self.samples.size) / self.sample_rate_ghz

    def freqs_ghz(self) -> np.ndarray:
        return sfft.fftfreq(self.samples.size, 1.0 / self.sample_rate_ghz)

    @property
    def mean_power(self) -> float:
        return float(np.mean(np.abs(self.samples) ** 2))

    @property
    def energy(self) -> float:
        """Sum of |x|^2 dt, in (amplitude^2 ns)."""
        return float(np.sum(np.abs(self.samples) ** 2) / self.sample_rate_ghz)

    def with_samples(self, samples, **changes) -> "SampledWaveform":
        return replace(self, samples=samples, **changes)

    def to_real(self) -> "SampledWaveform":
        """Physical passband signal ``sqrt(2) Re{z}``."""
        if self.is_real:
            return self
        return self.with_samples(SQRT2 * self.samples.real)

    def analytic(self) -> "SampledWaveform":
        """Analytic (one-sided) complex representation of a real waveform."""
        if not self.is_real:
            return self
        return self.with_samples(analytic_signal(self.samples))


def analytic_signal(x: np.ndarray) -> np.ndarray:
    """``z`` with only nonnegative frequencies such that ``sqrt(2) Re{z} = x``."""
    n = x.size
    spec = sfft.fft(x)
    h = np.zeros(n)
    h[0] = 1.0 / SQRT2
    if n % 2 == 0:
        h[1 : n // 2] = SQRT2
        h[n // 2] = 1.0 / SQRT2
    else:
        h[1 : (n + 1) // 2] = SQRT2
    return sfft.ifft(spec * h)


def resample(x: np.ndarray, n_out: int) -> np.ndarray:
    """Band-limited periodic interpolation/decimation to ``n_out`` samples.

    Sample values (not sums) are preserved, so mean power and energy per
    unit time are unchanged for band-limited input.  Content above the new
    Nyquist frequency is discarded.
    """
    n = x.size
    if n_out == n:
        return np.array(x, copy=True)
    if not np.iscomplexobj(x):
        return sfft.irfft(_fit_rfft(sfft.rfft(x), n, n_out), n_out) * (n_out / n)
    spec = sfft.fft(x)
    out = np.zeros(n_out, dtype=spec.dtype)
    m = min(n, n_out)
    pos = (m + 1) // 2  # DC and positive bins
    neg = m - pos
    out[:pos] = spec[:pos]
    if neg:
        out[n_out - neg :] = spec[n - neg :]
    return sfft.ifft(out) * (n_out / n)


def _fit_rfft(spec, n, n_out):
    out = np.zeros(n_out // 2 + 1, dtype=spec.dtype)
    m = min(spec.size, out.size)
    out[:m] = spec[:m]
    if n_out < n and n_out % 2 == 0:
        out[-1] = out[-1].real
    return out


def resample_waveform(wave: SampledWaveform, n_out: int) -> SampledWaveform:
    n_out = int(n_out)
    return wave.with_samples(
        resample(wave.samples, n_out), sample_rate_ghz=wave.sample_rate_ghz * n_out / len(wave)
    )


def snap_frequency(f_ghz: float, duration_ns: float) -> float:
    """Nearest frequency with an integer number of cycles in the block.

    Carriers are placed on the block's frequency grid so that shifted
    signals stay periodic; the error is at most ``1 / (2 duration)``.
    """
    return round(f_ghz * duration_ns) / duration_ns


def required_rate_ghz(center_ghz: float, bandwidth_ghz: float) -> float:
    """Smallest sample rate representing a band up to ``center + bandwidth/2``."""
    return 2.0 * (center_ghz + bandwidth_ghz / 2.0)


def upconvert(
    bb: SampledWaveform, f_c: float, sample_rate_ghz: Optional[float] = None
) -> SampledWaveform:
    """Shift a complex envelope up by ``f_c`` GHz (snapped to the block grid).

    Without ``sample_rate_ghz`` the input is interpolated by the smallest
    integer factor that represents the shifted band; with it, the output is
    resampled to that rate, which must be sufficient.
    """
    if f_c < 0:
        raise DomainError(f"carrier must be >= 0, got {f_c}")
    x = bb.analytic()
    bw = x.bandwidth_ghz if x.bandwidth_ghz is not None else x.sample_rate_ghz
    center = x.center_freq_ghz + f_c
    need = required_rate_ghz(center, bw)
    if sample_rate_ghz is None:
        factor = int(np.floor(need / x.sample_rate_ghz)) + 1
        x = resample_waveform(x, factor * len(x)) if factor > 1 else x
    else:
        if sample_rate_ghz <= need:
            raise DomainError(
                f"sample rate {sample_rate_ghz} GHz cannot carry a band reaching "
                f"{center + bw / 2} GHz (need > {need} GHz)"
            )
        x = resample_waveform(x, round(sample_rate_ghz * x.duration_ns))
    carrier = np.exp(2j * np.pi * snap_frequency(f_c, x.duration_ns) * x.time_ns())
    return x.with_samples(x.samples * carrier, center_freq_ghz=center, bandwidth_ghz=bw)


def downconvert(passband: SampledWaveform, f_c: float) -> SampledWaveform:
    """Shift content at ``f_c`` GHz down to baseband (inverse of :func:`upconvert`)."""
    x = passband.analytic()
    carrier = np.exp(-2j * np.pi * snap_frequency(f_c, x.duration_ns) * x.time_ns())
    center = 0.0 if passband.is_real else max(x.center_freq_ghz - f_c, 0.0)
    return x.with_samples(x.samples * carrier, center_freq_ghz=center)


def band_mask(freqs: np.ndarray, low: float, high: float) -> np.ndarray:
    return (freqs >= low) & (freqs <= high)


def power_outside(wave: SampledWaveform, low: float, high: float) -> float:
    """Fraction of (one-sided for real input) power outside ``[low, high]`` GHz."""
    spec = np.abs(sfft.fft(wave.samples)) ** 2
    f = wave.freqs_ghz()
    if wave.is_real:
        keep = f > 0
        spec, f = spec[keep], f[keep]
    total = spec.sum()
    if total == 0:
        return 0.0
    return float(spec[~band_mask(f, low, high)].sum() / total)


def time_shift(wave: SampledWaveform, delay_ns: float) -> SampledWaveform:
    """Circularly delay a waveform by ``delay_ns`` (fractional delays via a phase ramp)."""
    spec = sfft.fft(wave.samples) * np.exp(-2j * np.pi * wave.freqs_ghz() * delay_ns)
    n = len(wave)
    if wave.is_real and n % 2 == 0:
        # keep the Nyquist bin real so the output stays real
        spec[n // 2] = spec[n // 2].real
    out = sfft.ifft(spec)
    return wave.with_samples(out.real if wave.is_real else out)
