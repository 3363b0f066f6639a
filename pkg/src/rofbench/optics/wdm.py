"""Wavelength multiplexing and channel selection."""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np
import scipy.fft as sfft

from ..errors import ConfigError, DomainError
from .field import OpticalField

# composite rate = DEALIAS_FACTOR * (span + channel rate) keeps the
# third-order mixing products of the outer channels off the occupied band
DEALIAS_FACTOR = 2.0
MAX_RATE_GHZ = 8000.0


def channel_offsets(n_channels: int, spacing_ghz: float) -> list[float]:
    """Symmetric grid ``(k - (N-1)/2) * spacing``."""
    return [(k - (n_channels - 1) / 2) * spacing_ghz for k in range(n_channels)]


def composite_rate_ghz(n_channels: int, spacing_ghz: float, channel_rate_ghz: float,
                       dealias_factor: float = DEALIAS_FACTOR) -> float:
    span = (n_channels - 1) * spacing_ghz
    return dealias_factor * (span + channel_rate_ghz)


def _place(spec: np.ndarray, n_out: int, shift: int) -> np.ndarray:
    """Copy an FFT-ordered spectrum into ``n_out`` bins, shifted by ``shift`` bins."""
    n = spec.size
    k = sfft.fftfreq(n, 1.0 / n).astype(np.int64)
    out = np.zeros(n_out, dtype=spec.dtype)
    out[(k + shift) % n_out] = spec
    return out


def _take(spec: np.ndarray, n_out: int, shift: int) -> np.ndarray:
    """Inverse of :func:`_place`: bins ``shift + k`` for the ``n_out`` output frequencies."""
    k = sfft.fftfreq(n_out, 1.0 / n_out).astype(np.int64)
    return spec[(k + shift) % spec.size]


def wdm_mux(
    channels: Sequence[OpticalField],
    spacing_ghz: float,
    dealias_factor: float = DEALIAS_FACTOR,
    max_rate_ghz: float = MAX_RATE_GHZ,
) -> OpticalField:
    """Combine single-channel fields on a symmetric grid around the reference.

    Channel ``k`` lands at ``(k - (N-1)/2) * spacing``.  Each channel keeps
    its spectrum (band-limited interpolation), so energies add exactly.
    Offsets are snapped to the block's frequency grid.
    """
    if not channels:
        raise DomainError("at least one channel is required")
    first = channels[0]
    n_ch, rate = len(first), first.sample_rate_ghz
    for c in channels:
        if len(c) != n_ch or c.sample_rate_ghz != rate:
            raise DomainError("all channels must share sample rate and length")
        if c.center_wavelength_nm != first.center_wavelength_nm:
            raise DomainError("all channels must share the reference wavelength")
        if len(c.channel_plan) != 1:
            raise DomainError("inputs must be single-channel fields")
    if not spacing_ghz > 0:
        raise DomainError(f"spacing_ghz must be positive, got {spacing_ghz}")
    n = len(channels)
    if n > 1 and spacing_ghz < rate:
        raise ConfigError(f"channel bandwidth {rate} GHz exceeds the {spacing_ghz} GHz grid")
    if n == 1:
        return first.with_envelope(first.envelope, channel_rate_ghz=rate, spacing_ghz=spacing_ghz)
    need = composite_rate_ghz(n, spacing_ghz, rate, dealias_factor)
    if need > max_rate_ghz:
        raise ConfigError(
            f"{n} channels at {spacing_ghz} GHz need {need:g} GHz sampling, above the {max_rate_ghz:g} GHz limit"
        )
    duration = first.duration_ns
    n_out = sfft.next_fast_len(max(n_ch, math.ceil(need * duration)))
    dtype = np.result_type(*[c.envelope.dtype for c in channels])
    spec = np.zeros(n_out, dtype=dtype)
    plan = []
    for k, (c, f) in enumerate(zip(channels, channel_offsets(n, spacing_ghz))):
        shift = int(round(f * duration))
        spec += _place(sfft.fft(c.envelope), n_out, shift)
        plan.append((k, shift / duration))
    env = sfft.ifft(spec) * (n_out / n_ch)
    return OpticalField(
        env.astype(dtype, copy=False),
        n_out / duration,
        first.center_wavelength_nm,
        tuple(plan),
        rate,
        spacing_ghz,
    )


def super_gaussian(f_ghz: np.ndarray, bandwidth_ghz: float, order: int = 2) -> np.ndarray:
    """Field response with 3 dB (power) bandwidth ``bandwidth_ghz``."""
    return np.exp(-0.5 * math.log(2.0) * (2.0 * f_ghz / bandwidth_ghz) ** (2 * order))


def wdm_demux(
    composite: OpticalField,
    channel_index: Optional[int] = None,
    *,
    offset_ghz: Optional[float] = None,
    bandwidth_ghz: Optional[float] = None,
    order: int = 2,
    out_rate_ghz: Optional[float] = None,
) -> OpticalField:
    """Select one channel, shift it to zero offset and filter it.

    The filter is a super-Gaussian of the given ``order`` with 3 dB
    bandwidth ``0.75 * spacing`` unless ``bandwidth_ghz`` is set.  Without
    any known spacing or bandwidth no filter is applied.  The result is
    decimated to ``out_rate_ghz`` (default: the per-channel rate).
    """
    if (channel_index is None) == (offset_ghz is None):
        raise DomainError("give exactly one of channel_index or offset_ghz")
    if offset_ghz is None:
        offset_ghz = composite.offset_of(channel_index)
    elif abs(offset_ghz) >= composite.sample_rate_ghz / 2:
        raise DomainError(f"offset {offset_ghz} GHz is outside the simulated band")
    if bandwidth_ghz is None and composite.spacing_ghz is not None:
        bandwidth_ghz = 0.75 * composite.spacing_ghz
    duration = composite.duration_ns
    n = len(composite)
    rate = out_rate_ghz or composite.channel_rate_ghz or composite.sample_rate_ghz
    n_out = min(n, int(round(rate * duration)))
    shift = int(round(offset_ghz * duration))
    spec = _take(sfft.fft(composite.envelope), n_out, shift)
    if bandwidth_ghz is not None:
        f = sfft.fftfreq(n_out, duration / n_out)
        spec = spec * super_gaussian(f, bandwidth_ghz, order).astype(spec.real.dtype)
    env = sfft.ifft(spec) * (n_out / n)
    index = channel_index if channel_index is not None else -1
    return OpticalField(
        env,
        n_out / duration,
        composite.center_wavelength_nm,
        ((index, 0.0),),
        composite.channel_rate_ghz,
        composite.spacing_ghz,
    )
