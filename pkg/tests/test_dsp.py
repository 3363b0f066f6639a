import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import erfc

from rofbench.dimensioning import ModulationScheme, RfBandPlan
from rofbench.dsp import (
    QuantizerSpec,
    SampledWaveform,
    SymbolFrame,
    bandpass_sample_quantize,
    constellation,
    dac_reconstruct,
    dequantize,
    downconvert,
    matched_filter,
    measure_evm,
    pulse_shape,
    qam_demodulate,
    qam_modulate,
    quantize,
    random_bits,
    relative_quantizer,
    rrc_taps,
    upconvert,
)
from rofbench.errors import DomainError

QAM256 = ModulationScheme(256)
BAND = RfBandPlan(6.0, 1.5)


def frame(n, scheme=QAM256, seed=1, rate=2.5):
    rng = np.random.default_rng(seed)
    return qam_modulate(random_bits(rng, n, scheme), scheme, rate)


def passband(fr):
    return upconvert(pulse_shape(fr), BAND.carrier_freq_ghz)


def receive(wave, fr):
    return matched_filter(downconvert(wave, BAND.carrier_freq_ghz), fr)


# --- QAM -------------------------------------------------------------------


def test_qpsk_geometry():
    for bits in ([0, 0], [0, 1], [1, 0], [1, 1]):
        (s,) = qam_modulate(bits, ModulationScheme(4)).symbols
        assert abs(abs(s.real) - 1 / np.sqrt(2)) < 1e-15
        assert abs(abs(s.imag) - 1 / np.sqrt(2)) < 1e-15


@pytest.mark.parametrize("s", [4, 16, 64, 256])
def test_constellation_unit_energy_and_gray(s):
    scheme = ModulationScheme(s)
    pts = constellation(scheme)
    assert np.mean(np.abs(pts) ** 2) == pytest.approx(1.0, abs=1e-12)
    # Gray labelling: nearest neighbours differ in exactly one bit
    dmin = np.min(np.abs(pts[:, None] - pts[None, :])[~np.eye(s, dtype=bool)])
    for a in range(s):
        for b in range(s):
            if a != b and abs(abs(pts[a] - pts[b]) - dmin) < 1e-9:
                assert bin(a ^ b).count("1") == 1


def test_random_256qam_energy():
    # 1e5 symbols: sampling std of the mean is about 0.002
    fr = frame(100_000)
    assert np.mean(np.abs(fr.symbols) ** 2) == pytest.approx(1.0, abs=0.01)
    assert fr.is_on_grid()


def test_bit_count_must_divide():
    with pytest.raises(DomainError):
        qam_modulate([0, 1, 1], QAM256)


@settings(max_examples=50, deadline=None)
@given(s=st.sampled_from([4, 16, 64, 256]), data=st.data())
def test_roundtrip(s, data):
    scheme = ModulationScheme(s)
    n = data.draw(st.integers(1, 40))
    bits = np.array(data.draw(st.lists(st.integers(0, 1), min_size=n * scheme.bits_per_symbol,
                                       max_size=n * scheme.bits_per_symbol)), dtype=np.uint8)
    assert np.array_equal(qam_demodulate(qam_modulate(bits, scheme)), bits)


def test_small_displacement_keeps_bits():
    rng = np.random.default_rng(5)
    fr = frame(2000)
    half_dmin = 1 / np.sqrt(170)  # (2 / sqrt(2 * 255 / 3)) / 2
    offsets = 0.99 * half_dmin * rng.uniform(-1, 1, len(fr)) * (1 + 1j) / np.sqrt(2)
    noisy = SymbolFrame(fr.symbols + offsets, QAM256)
    assert np.array_equal(qam_demodulate(noisy), qam_demodulate(fr))


def test_awgn_ber_matches_theory():
    n = 200_000
    rng = np.random.default_rng(7)
    bits = random_bits(rng, n, QAM256)
    fr = qam_modulate(bits, QAM256)
    esn0 = 10 ** (30 / 10)
    sigma = np.sqrt(1 / esn0 / 2)
    noisy = SymbolFrame(fr.symbols + sigma * (rng.standard_normal(n) + 1j * rng.standard_normal(n)), QAM256)
    ber = np.mean(qam_demodulate(noisy) != bits)
    m = 256
    q = 0.5 * erfc(np.sqrt(3 * esn0 / (m - 1)) / np.sqrt(2))
    theory = 4 / np.log2(m) * (1 - 1 / np.sqrt(m)) * q
    assert ber < 1e-3
    assert 0.7 * theory < ber < 1.3 * theory


# --- pulse shaping -----------------------------------------------------------


def test_rrc_occupied_bandwidth():
    w = pulse_shape(frame(4096))
    assert w.bandwidth_ghz == pytest.approx(3.0, rel=1e-12)
    spec = np.abs(np.fft.fft(w.samples)) ** 2
    outside = spec[np.abs(w.freqs_ghz()) > 1.5 * 1.01].sum() / spec.sum()
    assert outside < 1e-4


def test_single_symbol_gives_impulse_response():
    one = SymbolFrame(np.r_[1.0, np.zeros(99)], QAM256, 1.0)
    w = pulse_shape(one, rolloff=0.3, oversampling=8, span_symbols=16)
    h = rrc_taps(0.3, 8, 16)
    half = h.size // 2
    assert np.allclose(np.roll(w.samples, half)[: h.size], h, atol=1e-12)
    assert np.sum(h**2) == pytest.approx(1.0)


def test_shape_and_matched_filter_recover_symbols():
    fr = frame(4096)
    rx = matched_filter(pulse_shape(fr), fr)
    assert measure_evm(fr, rx).evm_percent[0] < 0.1


@pytest.mark.parametrize("span", [32, 64, 128])
def test_cascade_close_to_nyquist(span):
    sps = 16
    h = rrc_taps(0.2, sps, span)
    c = np.convolve(h, h)
    mid = c.size // 2
    samples = c[mid % sps :: sps]
    k0 = mid // sps
    samples = samples / samples[k0]
    samples[k0] -= 1
    assert np.max(np.abs(samples)) < 1e-3


@pytest.mark.parametrize("rolloff", [-0.1, 1.5])
def test_rolloff_domain(rolloff):
    with pytest.raises(DomainError):
        pulse_shape(frame(200), rolloff=rolloff)


# --- up/down conversion ------------------------------------------------------


def test_up_down_roundtrip_and_energy():
    bb = pulse_shape(frame(2048))
    up = upconvert(bb, 6.0)
    assert up.sample_rate_ghz > 2 * 7.5
    down = downconvert(up, 6.0)
    assert np.max(np.abs(down.samples - bb.samples)) <= 1e-6 * np.max(np.abs(bb.samples))
    assert up.energy == pytest.approx(bb.energy, rel=1e-9)
    # the physical real signal has the same energy up to out-of-band leakage
    assert up.to_real().energy == pytest.approx(bb.energy, rel=1e-4)


def test_tone_shift():
    fs, n, f0 = 64.0, 4096, 0.5
    t = np.arange(n) / fs
    tone = SampledWaveform(np.exp(2j * np.pi * f0 * t), fs, 0.0, 0.1)
    up = upconvert(tone, 10.0)
    spec = np.abs(np.fft.fft(up.samples))
    assert up.freqs_ghz()[np.argmax(spec)] == pytest.approx(10.5, abs=fs / n)


def test_insufficient_rate_rejected():
    bb = pulse_shape(frame(256))
    with pytest.raises(DomainError):
        upconvert(bb, 6.0, sample_rate_ghz=14.0)


def test_real_passband_downconverts():
    fr = frame(2048)
    up = passband(fr)
    rx = receive(up.to_real(), fr)
    assert measure_evm(fr, rx).evm_percent[0] < 0.1


# --- quantizer and DAC -------------------------------------------------------


def test_midrise_zero_input():
    spec = QuantizerSpec(8, 1.0)
    values = dequantize(quantize(np.zeros(10), spec), spec)
    assert np.allclose(np.abs(values), spec.step / 2)
    both = dequantize(quantize(np.array([1e-12, -1e-12]), spec), spec)
    assert set(np.round(both / spec.step, 6)) == {0.5, -0.5}


def test_quantizer_clips_and_levels():
    spec = QuantizerSpec(3, 1.0)
    codes = quantize(np.linspace(-2, 2, 101), spec)
    assert codes.min() == 0 and codes.max() == 7
    assert len(np.unique(codes)) == spec.levels


def quantized_chain(fr, bits, scale=4.0):
    up = passband(fr)
    q = relative_quantizer(bits, downconvert(up, 6.0).samples, scale)
    stream = bandpass_sample_quantize(up, BAND, q)
    return stream, dac_reconstruct(stream, up.sample_rate_ghz)


def test_quantization_penalty_r15():
    fr = frame(4096)
    clean = receive(passband(fr), fr)
    _, rec = quantized_chain(fr, 15)
    assert measure_evm(clean, receive(rec, fr)).evm_percent[0] < 0.05


def test_one_bit_quantizer_destroys_256qam():
    fr = frame(4096)
    _, rec = quantized_chain(fr, 1)
    assert measure_evm(fr, receive(rec, fr)).evm_percent[0] > 20


def test_quantization_evm_monotone_in_resolution():
    fr = frame(4096)
    evm = [measure_evm(fr, receive(quantized_chain(fr, r)[1], fr)).evm_percent[0]
           for r in (1, 2, 4, 6, 8, 10, 12, 15)]
    assert all(a >= b for a, b in zip(evm, evm[1:]))


def test_stream_metadata_and_bits_roundtrip():
    fr = frame(2048)
    stream, _ = quantized_chain(fr, 6)
    assert stream.sample_rate_ghz == pytest.approx(7.5, rel=1e-3)
    assert stream.zone_index == 2
    assert 0 <= stream.clip_fraction < 1e-3
    bits = stream.to_bits()
    assert bits.shape == (len(stream), 12)
    again = stream.with_bits(bits)
    assert np.array_equal(again.codes_i, stream.codes_i)
    assert np.array_equal(again.codes_q, stream.codes_q)


def test_out_of_band_waveform_rejected():
    fr = frame(1024)
    up = upconvert(pulse_shape(fr), 8.0)
    with pytest.raises(DomainError):
        bandpass_sample_quantize(up, BAND, QuantizerSpec(8, 1.0))
    with pytest.raises(DomainError):
        bandpass_sample_quantize(up.to_real(), BAND, QuantizerSpec(8, 1.0))


def test_dac_output_confined_to_band():
    fr = frame(2048)
    _, rec = quantized_chain(fr, 4)
    spec = np.abs(np.fft.fft(rec.samples)) ** 2
    f = rec.freqs_ghz()
    outside = spec[(f < BAND.f_min_ghz - 1e-9) | (f > BAND.f_max_ghz + 1e-9)].sum()
    assert outside <= 1e-20 * spec.sum()


def test_dac_dc_stream():
    fr = frame(1024)
    stream, _ = quantized_chain(fr, 8)
    const = stream.with_bits(np.tile(stream.to_bits()[:1], (len(stream), 1)))
    out = downconvert(dac_reconstruct(const, 40.0), 6.0).samples
    assert np.allclose(out, const.values()[0], rtol=1e-9, atol=1e-12)


# --- EVM ---------------------------------------------------------------------


def test_evm_identity_and_gain():
    fr = frame(1000)
    assert measure_evm(fr, fr).evm_percent[0] == pytest.approx(0, abs=1e-12)
    scaled = SymbolFrame(2 * fr.symbols, QAM256)
    rep = measure_evm(fr, scaled)
    assert rep.evm_percent[0] == pytest.approx(0, abs=1e-12)
    assert rep.equalizer_gain[0] == pytest.approx(0.5)


def test_evm_awgn_calibration():
    n = 20000
    fr = frame(n)
    rng = np.random.default_rng(11)
    for sigma in (0.01, 0.035, 0.08):
        noise = sigma * (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)
        rep = measure_evm(fr, SymbolFrame(fr.symbols + noise, QAM256))
        assert rep.evm_percent[0] == pytest.approx(100 * sigma, rel=0.05)


def test_evm_length_checks():
    fr = frame(200)
    with pytest.raises(DomainError):
        measure_evm(fr, SymbolFrame(fr.symbols[:150], QAM256))
    short = frame(50)
    with pytest.raises(DomainError):
        measure_evm(short, short)


@settings(max_examples=50, deadline=None)
@given(mag=st.floats(1e-3, 1e3), phase=st.floats(-np.pi, np.pi))
def test_evm_scale_invariant(mag, phase):
    fr = frame(300, seed=3)
    rng = np.random.default_rng(4)
    rx = fr.symbols + 0.05 * (rng.standard_normal(300) + 1j * rng.standard_normal(300))
    base = measure_evm(fr, SymbolFrame(rx, QAM256)).evm_percent[0]
    g = mag * np.exp(1j * phase)
    assert measure_evm(fr, SymbolFrame(g * rx, QAM256)).evm_percent[0] == pytest.approx(base, rel=1e-9)
