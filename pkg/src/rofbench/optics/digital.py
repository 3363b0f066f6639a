"""Digital fronthaul pipe: analytic on-off-keying link budget and bit errors.

The D-RoF branch carries quantized samples as a bit stream.  Instead of
simulating that stream sample by sample, its bit error ratio follows from
the standard Gaussian Q-factor of an NRZ receiver::

    Q = (I1 - I0) / (sigma1 + sigma0),   BER = erfc(Q / sqrt(2)) / 2

with thermal noise over the receiver bandwidth and shot noise on each
level.  Fiber nonlinearity is not part of the budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from ..errors import DomainError
from .detector import ELECTRON_CHARGE, PhotodetectorSpec
from .fiber import FiberParams


@dataclass(frozen=True)
class OokBudget:
    line_rate_gbps: float
    extinction_ratio_db: float = 13.0
    # receiver noise bandwidth as a fraction of the line rate
    bandwidth_factor: float = 0.7

    def __post_init__(self):
        if not self.line_rate_gbps > 0:
            raise DomainError(f"line rate must be positive, got {self.line_rate_gbps}")
        if not self.extinction_ratio_db > 0:
            raise DomainError("extinction ratio must be positive")
        if not self.bandwidth_factor > 0:
            raise DomainError("bandwidth_factor must be positive")

    @property
    def bandwidth_hz(self) -> float:
        return self.bandwidth_factor * self.line_rate_gbps * 1e9

    def levels_w(self, mean_power_w: float) -> tuple[float, float]:
        """Optical power of the '1' and '0' levels for a given mean power."""
        r = 10 ** (self.extinction_ratio_db / 10)
        return 2 * mean_power_w * r / (r + 1), 2 * mean_power_w / (r + 1)

    def q_factor(self, received_mean_w: float, detector: PhotodetectorSpec) -> float:
        p1, p0 = self.levels_w(received_mean_w)
        i1 = detector.responsivity_a_per_w * p1
        i0 = detector.responsivity_a_per_w * p0
        b = self.bandwidth_hz
        thermal = detector.thermal_noise_a_per_sqrt_hz**2 * b
        shot1 = 2 * ELECTRON_CHARGE * i1 * b if detector.shot_noise_enabled else 0.0
        shot0 = 2 * ELECTRON_CHARGE * i0 * b if detector.shot_noise_enabled else 0.0
        s = math.sqrt(thermal + shot1) + math.sqrt(thermal + shot0)
        return math.inf if s == 0 else (i1 - i0) / s

    def ber(self, received_mean_w: float, detector: PhotodetectorSpec) -> float:
        q = self.q_factor(received_mean_w, detector)
        return 0.0 if math.isinf(q) else float(0.5 * erfc(q / math.sqrt(2)))


def received_power_w(launch_mean_w: float, fiber: FiberParams) -> float:
    return launch_mean_w * 10 ** ((fiber.output_gain_db - fiber.attenuation_db_per_km * fiber.length_km) / 10)


def flip_bits(bits: np.ndarray, ber: float, rng: np.random.Generator) -> np.ndarray:
    """Independent bit errors with probability ``ber``."""
    if not 0 <= ber <= 0.5:
        raise DomainError(f"ber must lie in [0, 0.5], got {ber}")
    bits = np.asarray(bits, dtype=np.uint8)
    if ber == 0:
        return bits.copy()
    # draw the error count first so tiny BERs cost nothing
    n_err = rng.binomial(bits.size, ber)
    out = bits.copy().reshape(-1)
    if n_err:
        idx = rng.choice(bits.size, size=n_err, replace=False)
        out[idx] ^= 1
    return out.reshape(bits.shape)
