"""Single-mode fiber propagation by the symmetric split-step Fourier method.

The scalar envelope obeys

    dA/dz = -(alpha/2) A - i (beta2/2) d2A/dt2 + (beta3/6) d3A/dt3 + i gamma |A|^2 A

with z in km, t in ns, A in sqrt(W).  With the FFT convention
``A(t) = sum_k A_k exp(+i w_k t)`` the linear operator is diagonal,
``L(w) = -alpha/2 + i beta2 w^2 / 2 - i beta3 w^3 / 6``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.fft as sfft

from ..errors import DomainError, NumericalError
from .field import C_NM_PER_NS, OpticalField

PS2_TO_NS2 = 1e-6
PS3_TO_NS3 = 1e-9
DB_TO_NEPER = math.log(10.0) / 10.0


@dataclass(frozen=True)
class FiberParams:
    """Fiber span; defaults are representative O-band SSMF values at 1310 nm."""

    length_km: float = 15.0
    attenuation_db_per_km: float = 0.35
    dispersion_ps_nm_km: float = 0.5
    dispersion_slope_ps_nm2_km: float = 0.0
    gamma_per_w_km: float = 1.3
    # noiseless lumped gain applied at the fiber output
    output_gain_db: float = 0.0

    def __post_init__(self):
        for name in ("length_km", "attenuation_db_per_km", "gamma_per_w_km"):
            if not getattr(self, name) >= 0:
                raise DomainError(f"{name} must be >= 0, got {getattr(self, name)}")

    @property
    def alpha_per_km(self) -> float:
        """Power attenuation coefficient in 1/km."""
        return self.attenuation_db_per_km * DB_TO_NEPER

    def beta2_ps2_per_km(self, wavelength_nm: float) -> float:
        c = C_NM_PER_NS * 1e-3  # nm/ps
        return -self.dispersion_ps_nm_km * wavelength_nm**2 / (2 * math.pi * c)

    def beta3_ps3_per_km(self, wavelength_nm: float) -> float:
        # third-order dispersion is off unless a slope is configured
        if not self.dispersion_slope_ps_nm2_km:
            return 0.0
        c = C_NM_PER_NS * 1e-3
        lam = wavelength_nm
        return (lam / (2 * math.pi * c)) ** 2 * (
            lam**2 * self.dispersion_slope_ps_nm2_km + 2 * lam * self.dispersion_ps_nm_km
        )

    def effective_length_km(self) -> float:
        a = self.alpha_per_km
        return self.length_km if a == 0 else (1 - math.exp(-a * self.length_km)) / a


def linear_operator(fiber: FiberParams, omega: np.ndarray, wavelength_nm: float) -> np.ndarray:
    """Diagonal linear operator per km, ``omega`` in rad/ns."""
    b2 = fiber.beta2_ps2_per_km(wavelength_nm) * PS2_TO_NS2
    b3 = fiber.beta3_ps3_per_km(wavelength_nm) * PS3_TO_NS3
    return -fiber.alpha_per_km / 2 + 1j * b2 * omega**2 / 2 - 1j * b3 * omega**3 / 6


def group_delay_ns(fiber: FiberParams, offset_ghz: float, wavelength_nm: float) -> float:
    """Delay of content at ``offset_ghz`` relative to the reference frequency."""
    w = 2 * math.pi * offset_ghz
    b2 = fiber.beta2_ps2_per_km(wavelength_nm) * PS2_TO_NS2
    b3 = fiber.beta3_ps3_per_km(wavelength_nm) * PS3_TO_NS3
    # stationary phase of exp(i (w t + phi(w) L)) with phi = b2 w^2/2 - b3 w^3/6
    return -(b2 * w - b3 * w**2 / 2) * fiber.length_km


def _phasor(phase: np.ndarray, dtype) -> np.ndarray:
    # exp(i phase) via cos/sin, much faster than a complex exp
    out = np.empty(phase.shape, dtype=dtype)
    out.real = np.cos(phase)
    out.imag = np.sin(phase)
    return out


def fiber_propagate(
    field: OpticalField,
    fiber: FiberParams,
    step_km: Optional[float] = 0.1,
    max_phase_rad: Optional[float] = None,
) -> OpticalField:
    """Propagate ``field`` through ``fiber``.

    Parameters
    ----------
    step_km
        Fixed step.  The last step is shortened to land on the fiber end.
        In adaptive mode it is the upper bound on the step.
    max_phase_rad
        If given, each step is limited so the peak nonlinear phase rotation
        ``gamma * max|A|^2 * h`` stays below this value.

    The dtype of the envelope is preserved, so complex64 fields propagate in
    single precision.
    """
    if step_km is None or not step_km > 0:
        raise DomainError(f"step_km must be positive, got {step_km}")
    if max_phase_rad is not None and not max_phase_rad > 0:
        raise DomainError(f"max_phase_rad must be positive, got {max_phase_rad}")
    a = np.array(field.envelope, copy=True)
    dtype = a.dtype
    length = fiber.length_km
    gamma = fiber.gamma_per_w_km
    omega = 2 * np.pi * field.freqs_ghz()
    lin = linear_operator(fiber, omega, field.center_wavelength_nm)

    if not np.any(lin):
        # no loss or dispersion: the Kerr phase is exact in one time-domain step
        if gamma > 0:
            a *= _phasor(gamma * length * (a.real**2 + a.imag**2), dtype)
        return _finish(field, fiber, a, 1)

    cache = {}

    def op(h):
        # exp(L h), cached because fixed-step runs reuse one or two step sizes
        if h not in cache:
            cache[h] = np.exp(lin * h).astype(dtype)
        return cache[h]

    def next_step(z, spec):
        h = min(step_km, length - z)
        if max_phase_rad is not None and gamma > 0:
            peak = float(np.max(np.abs(sfft.ifft(spec)) ** 2))
            if peak > 0:
                h = min(h, max_phase_rad / (gamma * peak))
        return h

    z = 0.0
    spec = sfft.fft(a)
    steps = 0
    pending = 0.0  # linear half-step not yet applied
    # tolerance guards against a sliver of a step from rounding
    while length - z > 1e-12 * max(length, 1.0):
        h = next_step(z, spec)
        if gamma > 0:
            spec = spec * op(pending + h / 2)
            a = sfft.ifft(spec)
            a *= _phasor(gamma * h * (a.real**2 + a.imag**2), dtype)
            spec = sfft.fft(a)
            pending = h / 2
        else:
            spec = spec * op(h)
        z += h
        steps += 1
        if steps % 16 == 0 and not np.all(np.isfinite(spec)):
            raise NumericalError(f"non-finite field after {z:.4g} km ({steps} steps)")
    if pending:
        spec = spec * op(pending)
    return _finish(field, fiber, sfft.ifft(spec).astype(dtype, copy=False), steps)


def _finish(field, fiber, a, steps):
    if not np.all(np.isfinite(a)):
        raise NumericalError(f"non-finite field at fiber output after {steps} steps")
    if fiber.output_gain_db:
        a = a * a.dtype.type(10 ** (fiber.output_gain_db / 20))
    return field.with_envelope(a)
