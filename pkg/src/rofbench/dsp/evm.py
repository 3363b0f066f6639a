"""Error vector magnitude after single-tap complex gain equalization."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import DomainError
from .qam import SymbolFrame

MIN_SYMBOLS = 100


@dataclass(frozen=True)
class EvmReport:
    """rms EVM in percent, one entry per channel."""

    evm_percent: tuple[float, ...]
    symbols_used: int
    equalizer_gain: tuple[complex, ...]

    def __post_init__(self):
        if any(not v >= 0 for v in self.evm_percent):
            raise DomainError("EVM values must be >= 0")

    @property
    def worst(self) -> float:
        return max(self.evm_percent)

    @property
    def mean(self) -> float:
        return float(np.mean(self.evm_percent))

    @property
    def spread(self) -> float:
        return max(self.evm_percent) - min(self.evm_percent)

    @classmethod
    def merge(cls, reports: Sequence["EvmReport"]) -> "EvmReport":
        return cls(
            tuple(v for r in reports for v in r.evm_percent),
            min(r.symbols_used for r in reports),
            tuple(g for r in reports for g in r.equalizer_gain),
        )


def measure_evm(reference: SymbolFrame, received: SymbolFrame) -> EvmReport:
    s = reference.symbols
    r = received.symbols
    if s.size != r.size:
        raise DomainError(f"length mismatch: {s.size} reference vs {r.size} received symbols")
    if s.size < MIN_SYMBOLS:
        raise DomainError(f"at least {MIN_SYMBOLS} symbols are required, got {s.size}")
    rr = np.vdot(r, r).real
    if rr == 0:
        raise DomainError("received frame is identically zero")
    # least-squares complex gain mapping received onto reference
    gain = np.vdot(r, s) / rr
    err = np.mean(np.abs(gain * r - s) ** 2)
    evm = 100.0 * np.sqrt(err / np.mean(np.abs(s) ** 2))
    return EvmReport((float(evm),), int(s.size), (complex(gain),))
