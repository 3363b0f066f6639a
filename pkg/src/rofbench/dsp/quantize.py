"""D-RoF digitisation: bandpass-rate I/Q sampling, uniform quantization, DAC."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.fft as sfft

from ..dimensioning import RfBandPlan, max_zone_index, min_sampling_rate
from ..errors import DomainError
from .waveform import (
    SampledWaveform,
    downconvert,
    power_outside,
    required_rate_ghz,
    resample,
    snap_frequency,
)


@dataclass(frozen=True)
class QuantizerSpec:
    """Uniform mid-rise quantizer with ``2**resolution_bits`` levels over ``+-full_scale``."""

    resolution_bits: int
    full_scale: float

    def __post_init__(self):
        if int(self.resolution_bits) != self.resolution_bits or not 1 <= self.resolution_bits <= 32:
            raise DomainError(f"resolution_bits must be an integer in [1, 32], got {self.resolution_bits}")
        if not self.full_scale > 0:
            raise DomainError(f"full_scale must be positive, got {self.full_scale}")

    @property
    def levels(self) -> int:
        return 1 << self.resolution_bits

    @property
    def step(self) -> float:
        return 2.0 * self.full_scale / self.levels


def quantize(x: np.ndarray, spec: QuantizerSpec) -> np.ndarray:
    """Integer codes in ``[0, 2**R)``; inputs beyond full scale clip to the end codes."""
    half = spec.levels // 2
    codes = np.floor(np.asarray(x, dtype=np.float64) / spec.step) + half
    return np.clip(codes, 0, spec.levels - 1).astype(np.int64)


def dequantize(codes: np.ndarray, spec: QuantizerSpec) -> np.ndarray:
    return (np.asarray(codes, dtype=np.float64) - spec.levels // 2 + 0.5) * spec.step


@dataclass(frozen=True, eq=False)
class QuantizedStream:
    """I and Q code streams at the bandpass sampling rate."""

    codes_i: np.ndarray
    codes_q: np.ndarray
    sample_rate_ghz: float
    band: RfBandPlan
    spec: QuantizerSpec
    zone_index: int
    clip_fraction: float

    def __len__(self):
        return self.codes_i.size

    @property
    def duration_ns(self) -> float:
        return self.codes_i.size / self.sample_rate_ghz

    def values(self) -> np.ndarray:
        return dequantize(self.codes_i, self.spec) + 1j * dequantize(self.codes_q, self.spec)

    def to_bits(self) -> np.ndarray:
        """Serialised words, one row per sample: I word then Q word, MSB first."""
        r = self.spec.resolution_bits
        shifts = np.arange(r - 1, -1, -1)
        i_bits = (self.codes_i[:, None] >> shifts) & 1
        q_bits = (self.codes_q[:, None] >> shifts) & 1
        return np.hstack([i_bits, q_bits]).astype(np.uint8)

    def with_bits(self, bits: np.ndarray) -> "QuantizedStream":
        r = self.spec.resolution_bits
        bits = np.asarray(bits, dtype=np.int64).reshape(len(self), 2 * r)
        weights = 1 << np.arange(r - 1, -1, -1)
        return replace(self, codes_i=bits[:, :r] @ weights, codes_q=bits[:, r:] @ weights)

    @property
    def line_bits(self) -> int:
        return 2 * self.spec.resolution_bits * len(self)


def bandpass_sample_quantize(
    passband: SampledWaveform, band: RfBandPlan, q: QuantizerSpec
) -> QuantizedStream:
    """Sample the band's I/Q components at the minimum bandpass rate and quantize.

    The sampling rate is the lowest edge of the highest valid Nyquist zone of
    ``band``.  Both quadrature components are quantized independently with
    ``q``, so the stream carries ``2 R`` bits per sampling instant.
    """
    if passband.bandwidth_ghz is not None and not passband.is_real:
        low = passband.center_freq_ghz - passband.bandwidth_ghz / 2
        high = passband.center_freq_ghz + passband.bandwidth_ghz / 2
        tol = 1e-9 * band.f_max_ghz
        if low < band.f_min_ghz - tol or high > band.f_max_ghz + tol:
            raise DomainError(
                f"occupied band [{low}, {high}] GHz exceeds [{band.f_min_ghz}, {band.f_max_ghz}] GHz"
            )
    elif power_outside(passband, band.f_min_ghz, band.f_max_ghz) > 1e-4:
        raise DomainError(
            f"waveform has significant power outside [{band.f_min_ghz}, {band.f_max_ghz}] GHz"
        )
    fs = min_sampling_rate(band)
    bb = downconvert(passband, band.carrier_freq_ghz)
    n_out = max(1, int(round(fs * bb.duration_ns)))
    iq = resample(bb.samples, n_out)
    ci = quantize(iq.real, q)
    cq = quantize(iq.imag, q)
    clipped = np.mean(np.abs(iq.real) > q.full_scale) + np.mean(np.abs(iq.imag) > q.full_scale)
    return QuantizedStream(
        codes_i=ci,
        codes_q=cq,
        sample_rate_ghz=n_out / bb.duration_ns,
        band=band,
        spec=q,
        zone_index=max_zone_index(band),
        clip_fraction=float(clipped / 2),
    )


def dac_reconstruct(stream: QuantizedStream, target_rate_ghz: float) -> SampledWaveform:
    """Ideal DAC plus reconstruction filter confining the output to ``[f_min, f_max]``.

    Returns the analytic passband waveform centred on the band's carrier.
    """
    band = stream.band
    need = required_rate_ghz(band.carrier_freq_ghz, band.occupied_bw_ghz)
    if target_rate_ghz <= need:
        raise DomainError(f"target rate {target_rate_ghz} GHz must exceed {need} GHz")
    n_out = int(round(target_rate_ghz * stream.duration_ns))
    bb = resample(stream.values(), n_out)
    f = sfft.fftfreq(n_out, stream.duration_ns / n_out)
    spec = sfft.fft(bb)
    spec[np.abs(f) > band.baseband_bw_ghz] = 0.0
    rate = n_out / stream.duration_ns
    t = np.arange(n_out) / rate
    fc = snap_frequency(band.carrier_freq_ghz, stream.duration_ns)
    z = sfft.ifft(spec) * np.exp(2j * np.pi * fc * t)
    return SampledWaveform(z, rate, band.carrier_freq_ghz, band.occupied_bw_ghz)


def relative_quantizer(resolution_bits: int, iq: np.ndarray, rms_factor: float = 4.0) -> QuantizerSpec:
    """Full scale set to ``rms_factor`` times the per-axis rms of ``iq``."""
    per_axis = np.sqrt(np.mean(np.abs(iq) ** 2) / 2.0)
    return QuantizerSpec(resolution_bits, rms_factor * per_axis)
