"""Root-raised-cosine pulse shaping and matched filtering."""

from __future__ import annotations

import numpy as np
import scipy.fft as sfft

from ..errors import DomainError
from .qam import SymbolFrame
from .waveform import SampledWaveform, resample_waveform


def rrc_taps(rolloff: float, oversampling: int, span_symbols: int) -> np.ndarray:
    """Unit-energy RRC impulse response, ``span_symbols * oversampling + 1`` taps."""
    if not 0.0 <= rolloff <= 1.0:
        raise DomainError(f"rolloff must lie in [0, 1], got {rolloff}")
    if int(oversampling) != oversampling or oversampling < 2:
        raise DomainError(f"oversampling must be an integer >= 2, got {oversampling}")
    if int(span_symbols) != span_symbols or span_symbols < 2 or span_symbols % 2:
        raise DomainError(f"span_symbols must be an even integer >= 2, got {span_symbols}")
    t = np.arange(-span_symbols * oversampling // 2, span_symbols * oversampling // 2 + 1) / oversampling
    b = rolloff
    h = np.empty_like(t)
    with np.errstate(divide="ignore", invalid="ignore"):
        if b == 0:
            h = np.sinc(t)
        else:
            num = np.sin(np.pi * t * (1 - b)) + 4 * b * t * np.cos(np.pi * t * (1 + b))
            den = np.pi * t * (1 - (4 * b * t) ** 2)
            h = num / den
            h[np.isclose(t, 0.0)] = 1 - b + 4 * b / np.pi
            edge = np.isclose(np.abs(t), 1 / (4 * b))
            h[edge] = (b / np.sqrt(2)) * (
                (1 + 2 / np.pi) * np.sin(np.pi / (4 * b)) + (1 - 2 / np.pi) * np.cos(np.pi / (4 * b))
            )
    return h / np.sqrt(np.sum(h**2))


def _circular_filter(x: np.ndarray, taps: np.ndarray) -> np.ndarray:
    """Zero-delay circular convolution with a centered odd-length FIR."""
    n = x.size
    if taps.size > n:
        raise DomainError(f"filter ({taps.size} taps) is longer than the signal ({n} samples)")
    kernel = np.zeros(n)
    half = taps.size // 2
    kernel[: half + 1] = taps[half:]
    kernel[n - half :] = taps[:half]
    return sfft.ifft(sfft.fft(x) * sfft.fft(kernel))


def pulse_shape(
    frame: SymbolFrame, rolloff: float = 0.2, oversampling: int = 16, span_symbols: int = 64
) -> SampledWaveform:
    """Baseband RRC waveform at ``symbol_rate * oversampling`` samples/ns."""
    taps = rrc_taps(rolloff, oversampling, span_symbols)
    up = np.zeros(len(frame) * oversampling, dtype=np.complex128)
    up[::oversampling] = frame.symbols
    rs = frame.symbol_rate_gbaud
    return SampledWaveform(
        _circular_filter(up, taps),
        sample_rate_ghz=rs * oversampling,
        center_freq_ghz=0.0,
        bandwidth_ghz=rs * (1 + rolloff),
    )


def matched_filter(
    wave: SampledWaveform,
    template: SymbolFrame,
    rolloff: float = 0.2,
    span_symbols: int = 64,
) -> SymbolFrame:
    """RRC matched filter and symbol-instant sampling of a baseband waveform.

    Timing is ideal: symbol ``k`` is taken at ``t = k / symbol_rate``.  The
    waveform is first resampled to an integer number of samples per symbol
    if needed.  ``template`` supplies the scheme, rate and symbol count.
    """
    n_sym = len(template)
    rs = template.symbol_rate_gbaud
    sps = max(2, int(round(wave.sample_rate_ghz / rs)))
    if abs(wave.sample_rate_ghz - sps * rs) > 1e-9 * wave.sample_rate_ghz or len(wave) != n_sym * sps:
        wave = resample_waveform(wave.analytic(), n_sym * sps)
    y = _circular_filter(wave.analytic().samples, rrc_taps(rolloff, sps, span_symbols))
    return SymbolFrame(y[::sps][:n_sym], template.scheme, rs)
