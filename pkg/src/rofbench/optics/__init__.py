"""Optical-domain models."""

from .detector import PhotodetectorSpec, electrical_bandpass, photodetect
from .digital import OokBudget, flip_bits, received_power_w
from .fiber import FiberParams, fiber_propagate, group_delay_ns
from .field import OpticalField, dbm_to_w, w_to_dbm
from .modulator import ModulatorKind, ModulatorSpec, eo_convert
from .wdm import channel_offsets, super_gaussian, wdm_demux, wdm_mux

__all__ = [
    "FiberParams",
    "ModulatorKind",
    "ModulatorSpec",
    "OokBudget",
    "OpticalField",
    "PhotodetectorSpec",
    "channel_offsets",
    "dbm_to_w",
    "electrical_bandpass",
    "eo_convert",
    "fiber_propagate",
    "flip_bits",
    "group_delay_ns",
    "photodetect",
    "received_power_w",
    "super_gaussian",
    "w_to_dbm",
    "wdm_demux",
    "wdm_mux",
]
