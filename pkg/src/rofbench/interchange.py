"""Binary dump format for electrical waveforms and optical fields.

Layout (little-endian)::

    magic      4 bytes   b"ROFW" (electrical) or b"ROFO" (optical)
    version    u32
    rate       f64       sample rate in Hz
    center     f64       carrier in Hz (ROFW) or center wavelength in nm (ROFO)
    count      u64       number of complex samples
    payload    count x (re f64, im f64)
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import Union

import numpy as np

from .errors import ConfigError

HEADER = struct.Struct("<4sIddQ")
VERSION = 1
MAGIC_WAVE = b"ROFW"
MAGIC_OPTICAL = b"ROFO"

PathLike = Union[str, Path]


def write_samples(path: PathLike, magic: bytes, sample_rate_hz: float, center: float, samples) -> None:
    x = np.asarray(samples, dtype=np.complex128)
    with open(path, "wb") as fh:
        fh.write(HEADER.pack(magic, VERSION, float(sample_rate_hz), float(center), x.size))
        fh.write(x.astype("<c16").tobytes())


def read_samples(path: PathLike):
    """Return ``(magic, sample_rate_hz, center, samples)``."""
    data = Path(path).read_bytes()
    if len(data) < HEADER.size:
        raise ConfigError(f"{path}: truncated header")
    magic, version, rate, center, count = HEADER.unpack_from(data)
    if magic not in (MAGIC_WAVE, MAGIC_OPTICAL):
        raise ConfigError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise ConfigError(f"{path}: unsupported version {version}")
    body = data[HEADER.size :]
    if len(body) != 16 * count:
        raise ConfigError(f"{path}: expected {count} samples, found {len(body) / 16:g}")
    return magic, rate, center, np.frombuffer(body, dtype="<c16").astype(np.complex128)


def save_waveform(path: PathLike, wave) -> None:
    write_samples(path, MAGIC_WAVE, wave.sample_rate_ghz * 1e9, wave.center_freq_ghz * 1e9, wave.samples)


def load_waveform(path: PathLike):
    from .dsp.waveform import SampledWaveform

    magic, rate, center, x = read_samples(path)
    if magic != MAGIC_WAVE:
        raise ConfigError(f"{path}: not an electrical waveform file")
    # real signals are stored with zero imaginary parts
    if x.size and not np.any(x.imag):
        x = x.real
    return SampledWaveform(x, rate / 1e9, center / 1e9)


def save_field(path: PathLike, field) -> None:
    write_samples(path, MAGIC_OPTICAL, field.sample_rate_ghz * 1e9, field.center_wavelength_nm, field.envelope)


def load_field(path: PathLike):
    from .optics.field import OpticalField

    magic, rate, center, x = read_samples(path)
    if magic != MAGIC_OPTICAL:
        raise ConfigError(f"{path}: not an optical field file")
    return OpticalField(x, rate / 1e9, center)
