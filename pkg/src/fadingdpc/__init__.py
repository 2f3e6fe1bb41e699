"""Lattice dirty-paper coding over fading channels: rate bounds, a nested-lattice
transceiver simulator and broadcast-channel rate regions."""

from .errors import (ConfigurationError, FadingDpcError, InputError, NumericalError,
                     PreconditionError, ResourceError)
from .fading import FadingSpec, real_equivalent, sample_channel, sample_channels
from .mc import Estimate, SeedSpec, mc_matrix, mc_scalar
from .bounds import PowerConfig, dpc_inner, lattice_inner, outer_bound
from .lattice import Lattice, NestedLatticeCode
from .dpc_sim import DpcConfig, run_trials
from .bc_regions import BcConfig, RegionCurve, RegionPoint, sweep_region

__version__ = "0.1.0"

__all__ = [
    "BcConfig", "ConfigurationError", "DpcConfig", "Estimate", "FadingDpcError", "FadingSpec",
    "InputError", "Lattice", "NestedLatticeCode", "NumericalError", "PowerConfig",
    "PreconditionError", "RegionCurve", "RegionPoint", "ResourceError", "SeedSpec",
    "dpc_inner", "lattice_inner", "mc_matrix", "mc_scalar", "outer_bound", "real_equivalent",
    "run_trials", "sample_channel", "sample_channels", "sweep_region",
]
