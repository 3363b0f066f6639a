"""Gray-coded square QAM with unit average symbol energy.

Each symbol carries ``log2(S)`` bits, MSB first.  The first half of the bits
selects the in-phase level and the second half the quadrature level; on
each axis the level index ``i`` (0 = most negative) carries the Gray code
``i ^ (i >> 1)``.  Levels are ``2 i - (L - 1)`` scaled by
``1 / sqrt(2 (S - 1) / 3)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dimensioning import ModulationScheme
from ..errors import DomainError


@dataclass(frozen=True, eq=False)
class SymbolFrame:
    symbols: np.ndarray
    scheme: ModulationScheme
    symbol_rate_gbaud: float = 1.0

    def __post_init__(self):
        s = np.array(self.symbols, dtype=np.complex128, copy=True).ravel()
        s.setflags(write=False)
        object.__setattr__(self, "symbols", s)
        if not self.symbol_rate_gbaud > 0:
            raise DomainError(f"symbol_rate_gbaud must be positive, got {self.symbol_rate_gbaud}")

    def __len__(self):
        return self.symbols.size

    def is_on_grid(self, atol: float = 1e-9) -> bool:
        return bool(np.all(np.abs(self.symbols - slice_symbols(self.symbols, self.scheme)) <= atol))


def _scale(scheme: ModulationScheme) -> float:
    return 1.0 / np.sqrt(2.0 * (scheme.constellation_points - 1) / 3.0)


def _gray_to_index(g: np.ndarray) -> np.ndarray:
    i = g.copy()
    shift = g >> 1
    while np.any(shift):
        i ^= shift
        shift >>= 1
    return i


def _bits_to_int(bits: np.ndarray) -> np.ndarray:
    weights = 1 << np.arange(bits.shape[1] - 1, -1, -1)
    return bits.astype(np.int64) @ weights


def _int_to_bits(values: np.ndarray, width: int) -> np.ndarray:
    shifts = np.arange(width - 1, -1, -1)
    return ((values[:, None] >> shifts) & 1).astype(np.uint8)


def constellation(scheme: ModulationScheme) -> np.ndarray:
    """All points, indexed by the integer value of their bit label."""
    k = scheme.bits_per_symbol
    labels = np.arange(scheme.constellation_points)
    return qam_modulate(_int_to_bits(labels, k).ravel(), scheme).symbols


def qam_modulate(bits, scheme: ModulationScheme, symbol_rate_gbaud: float = 1.0) -> SymbolFrame:
    bits = np.asarray(bits).astype(np.int64).ravel()
    k = scheme.bits_per_symbol
    if bits.size % k:
        raise DomainError(f"bit count {bits.size} is not divisible by {k} bits/symbol")
    if np.any((bits != 0) & (bits != 1)):
        raise DomainError("bits must be 0 or 1")
    words = bits.reshape(-1, k)
    half = k // 2
    side = scheme.side
    i_idx = _gray_to_index(_bits_to_int(words[:, :half]))
    q_idx = _gray_to_index(_bits_to_int(words[:, half:]))
    levels = 2.0 * np.arange(side) - (side - 1)
    symbols = (levels[i_idx] + 1j * levels[q_idx]) * _scale(scheme)
    return SymbolFrame(symbols, scheme, symbol_rate_gbaud)


def _axis_index(x: np.ndarray, scheme: ModulationScheme) -> np.ndarray:
    side = scheme.side
    return np.clip(np.rint((x / _scale(scheme) + side - 1) / 2.0), 0, side - 1).astype(np.int64)


def slice_symbols(symbols: np.ndarray, scheme: ModulationScheme) -> np.ndarray:
    """Nearest constellation point of every symbol."""
    side = scheme.side
    levels = (2.0 * np.arange(side) - (side - 1)) * _scale(scheme)
    return levels[_axis_index(symbols.real, scheme)] + 1j * levels[_axis_index(symbols.imag, scheme)]


def qam_demodulate(frame: SymbolFrame) -> np.ndarray:
    """Minimum-distance decisions and Gray demapping; returns a uint8 bit array."""
    scheme = frame.scheme
    half = scheme.bits_per_symbol // 2
    i_idx = _axis_index(frame.symbols.real, scheme)
    q_idx = _axis_index(frame.symbols.imag, scheme)
    i_bits = _int_to_bits(i_idx ^ (i_idx >> 1), half)
    q_bits = _int_to_bits(q_idx ^ (q_idx >> 1), half)
    return np.hstack([i_bits, q_bits]).ravel()


def random_bits(rng: np.random.Generator, n_symbols: int, scheme: ModulationScheme) -> np.ndarray:
    return rng.integers(0, 2, size=n_symbols * scheme.bits_per_symbol, dtype=np.uint8)
