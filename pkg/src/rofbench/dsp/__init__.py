"""Electrical-domain signal chain."""

from .evm import EvmReport, measure_evm
from .qam import SymbolFrame, constellation, qam_demodulate, qam_modulate, random_bits, slice_symbols
from .quantize import (
    QuantizedStream,
    QuantizerSpec,
    bandpass_sample_quantize,
    dac_reconstruct,
    dequantize,
    quantize,
    relative_quantizer,
)
from .shaping import matched_filter, pulse_shape, rrc_taps
from .waveform import (
    SampledWaveform,
    analytic_signal,
    downconvert,
    resample,
    resample_waveform,
    time_shift,
    upconvert,
)

__all__ = [
    "EvmReport",
    "QuantizedStream",
    "QuantizerSpec",
    "SampledWaveform",
    "SymbolFrame",
    "analytic_signal",
    "bandpass_sample_quantize",
    "constellation",
    "dac_reconstruct",
    "dequantize",
    "downconvert",
    "matched_filter",
    "measure_evm",
    "pulse_shape",
    "qam_demodulate",
    "qam_modulate",
    "quantize",
    "random_bits",
    "relative_quantizer",
    "resample",
    "resample_waveform",
    "rrc_taps",
    "slice_symbols",
    "time_shift",
    "upconvert",
]
