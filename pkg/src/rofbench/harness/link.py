"""End-to-end link simulation for one scenario."""

from __future__ import annotations

import math
from contextlib import contextmanager
from typing import Optional

import numpy as np

from ..dimensioning import min_sampling_rate
from ..dsp import (
    EvmReport,
    SampledWaveform,
    SymbolFrame,
    bandpass_sample_quantize,
    dac_reconstruct,
    downconvert,
    matched_filter,
    measure_evm,
    pulse_shape,
    qam_modulate,
    random_bits,
    relative_quantizer,
    time_shift,
    upconvert,
)
from ..errors import ConfigError, RofBenchError, StageError
from ..optics import (
    OokBudget,
    OpticalField,
    electrical_bandpass,
    eo_convert,
    fiber_propagate,
    flip_bits,
    group_delay_ns,
    photodetect,
    received_power_w,
    wdm_demux,
    wdm_mux,
)
from ..optics.field import dbm_to_w
from ..powermodel import LinkKind
from .scenario import FronthaulScenario


@contextmanager
def stage(name: str, channel: Optional[int] = None):
    try:
        yield
    except StageError:
        raise
    except (RofBenchError, ValueError, ArithmeticError, MemoryError) as exc:
        raise StageError(name, channel, exc) from exc


def _rng(seed: int, channel: int) -> np.random.Generator:
    return np.random.default_rng([seed, channel])


def transmit_frames(sc: FronthaulScenario) -> list[SymbolFrame]:
    frames = []
    for k in range(sc.wdm_channels):
        with stage("qam_modulate", k):
            bits = random_bits(_rng(sc.seeds.payload, k), sc.payload_symbols, sc.mod)
            frames.append(qam_modulate(bits, sc.mod, sc.symbol_rate_gbaud))
    return frames


def rf_waveform(sc: FronthaulScenario, frame: SymbolFrame, channel: int) -> SampledWaveform:
    with stage("pulse_shape", channel):
        bb = pulse_shape(frame, sc.sim.rolloff, sc.sim.oversampling, sc.sim.span_symbols)
    with stage("upconvert", channel):
        return upconvert(bb, sc.band.carrier_freq_ghz)


def receive(sc: FronthaulScenario, rf: SampledWaveform, frame: SymbolFrame, channel: int) -> EvmReport:
    fc = sc.band.carrier_freq_ghz
    with stage("electrical_bandpass", channel):
        filtered = electrical_bandpass(rf, fc, sc.band.occupied_bw_ghz)
    with stage("downconvert", channel):
        bb = downconvert(filtered, fc)
    with stage("matched_filter", channel):
        rx = matched_filter(bb, frame, sc.sim.rolloff, sc.sim.span_symbols)
    with stage("measure_evm", channel):
        return measure_evm(frame, rx)


def _dtype(sc: FronthaulScenario):
    return np.complex64 if sc.sim.precision == "single" else np.complex128


def _optical_path(sc: FronthaulScenario, fields: list[OpticalField]) -> tuple[OpticalField, list[float]]:
    """Multiplex, propagate; return the fiber output and per-channel group delays."""
    with stage("wdm_mux"):
        comp = wdm_mux(fields, sc.spacing_ghz, dealias_factor=sc.sim.dealias_factor)
    with stage("fiber_propagate"):
        out = fiber_propagate(comp, sc.fiber, sc.sim.step_km, sc.sim.max_phase_rad or None)
    delays = [group_delay_ns(sc.fiber, f, comp.center_wavelength_nm) for _, f in comp.channel_plan]
    return out, delays


def _demux(sc: FronthaulScenario, out: OpticalField, k: int) -> OpticalField:
    with stage("wdm_demux", k):
        return wdm_demux(out, k, bandwidth_ghz=sc.sim.demux_bandwidth_factor * sc.spacing_ghz)


def _detector_seed(sc: FronthaulScenario, k: int):
    return np.random.SeedSequence([sc.seeds.detector, k])


def run_arof(sc: FronthaulScenario) -> EvmReport:
    frames = transmit_frames(sc)
    dtype = _dtype(sc)
    fields, rf_rates = [], []
    for k, fr in enumerate(frames):
        rf = rf_waveform(sc, fr, k)
        with stage("eo_convert", k):
            f = eo_convert(rf, sc.modulator)
        fields.append(f.with_envelope(f.envelope.astype(dtype)))
        rf_rates.append(rf.sample_rate_ghz)
    out, delays = _optical_path(sc, fields)
    reports = []
    for k, fr in enumerate(frames):
        ch = _demux(sc, out, k)
        with stage("photodetect", k):
            current = photodetect(ch, sc.detector, _detector_seed(sc, k), sc.band.carrier_freq_ghz)
            # ideal synchronisation removes the channel's group delay
            current = time_shift(current, -delays[k])
        reports.append(receive(sc, current, fr, k))
    return EvmReport.merge(reports)


def drof_line_rate_gbps(sc: FronthaulScenario) -> float:
    """Serial rate of one wavelength: I/Q words plus control and line coding."""
    c = sc.coding
    return min_sampling_rate(sc.band) * 2 * c.resolution_bits * c.control_overhead * c.line_code_rate


def drof_ber(sc: FronthaulScenario) -> float:
    budget = OokBudget(drof_line_rate_gbps(sc), sc.sim.extinction_ratio_db)
    # the OOK transmitter averages half the laser power
    launch = dbm_to_w(sc.modulator.laser_power_dbm) / 2
    return budget.ber(received_power_w(launch, sc.fiber), sc.detector)


def _quantize(sc: FronthaulScenario, rf: SampledWaveform, k: int):
    with stage("bandpass_sample_quantize", k):
        iq = downconvert(rf, sc.band.carrier_freq_ghz).samples
        q = relative_quantizer(sc.coding.resolution_bits, iq, sc.sim.quantizer_rms_factor)
        return bandpass_sample_quantize(rf, sc.band, q)


def run_drof(sc: FronthaulScenario) -> EvmReport:
    if sc.sim.drof_mode == "ook":
        return run_drof_ook(sc)
    frames = transmit_frames(sc)
    with stage("digital_pipe"):
        # "ideal" is an error-free pipe; "budget" flips bits at the OOK link-budget BER
        ber = drof_ber(sc) if sc.sim.drof_mode == "budget" else 0.0
    reports = []
    for k, fr in enumerate(frames):
        rf = rf_waveform(sc, fr, k)
        stream = _quantize(sc, rf, k)
        if ber > 0:
            with stage("digital_pipe", k):
                bits = flip_bits(stream.to_bits(), ber, _rng(sc.seeds.pipe, k))
                stream = stream.with_bits(bits)
        with stage("dac_reconstruct", k):
            rec = dac_reconstruct(stream, rf.sample_rate_ghz)
        reports.append(receive(sc, rec, fr, k))
    return EvmReport.merge(reports)


def _ook_field(sc: FronthaulScenario, bits: np.ndarray, sps: int, rate_ghz: float) -> OpticalField:
    r = 10 ** (sc.sim.extinction_ratio_db / 10)
    p_avg = dbm_to_w(sc.modulator.laser_power_dbm) / 2
    p0 = 2 * p_avg / (r + 1)
    power = p0 * (1 + (r - 1) * np.repeat(bits.astype(np.float64), sps))
    return OpticalField(np.sqrt(power).astype(_dtype(sc)), rate_ghz, channel_rate_ghz=rate_ghz)


def run_drof_ook(sc: FronthaulScenario) -> EvmReport:
    """D-RoF with the quantized words sent as NRZ on-off keying through the optics.

    Only the I/Q payload bits are serialized; control words and line coding
    are not synthesized.  Decisions use the midpoint of the two levels at
    the centre of each bit.
    """
    frames = transmit_frames(sc)
    sps = sc.sim.ook_samples_per_bit
    streams, rfs, fields = [], [], []
    for k, fr in enumerate(frames):
        rf = rf_waveform(sc, fr, k)
        stream = _quantize(sc, rf, k)
        bits = stream.to_bits().reshape(-1)
        line_rate = bits.size / stream.duration_ns
        rate = sps * line_rate
        if sc.wdm_channels > 1 and rate > sc.spacing_ghz:
            raise ConfigError(
                f"OOK line rate {line_rate:.4g} Gbps at {sps} samples/bit does not fit the "
                f"{sc.spacing_ghz} GHz grid"
            )
        with stage("eo_convert", k):
            fields.append(_ook_field(sc, bits, sps, rate))
        streams.append(stream)
        rfs.append(rf)
    out, delays = _optical_path(sc, fields)
    reports = []
    for k, fr in enumerate(frames):
        ch = _demux(sc, out, k)
        with stage("photodetect", k):
            current = photodetect(ch, sc.detector, _detector_seed(sc, k))
            current = time_shift(current, -delays[k])
            samples = current.samples[sps // 2 :: sps]
            threshold = 0.5 * (np.percentile(samples, 90) + np.percentile(samples, 10))
            bits = (samples > threshold).astype(np.uint8)
            stream = streams[k].with_bits(bits)
        with stage("dac_reconstruct", k):
            rec = dac_reconstruct(stream, rfs[k].sample_rate_ghz)
        reports.append(receive(sc, rec, fr, k))
    return EvmReport.merge(reports)


def run_link(sc: FronthaulScenario) -> EvmReport:
    """Per-channel EVM of one scenario; deterministic under its seeds."""
    if sc.link_kind is LinkKind.AROF:
        return run_arof(sc)
    return run_drof(sc)
