"""Trusted-noise CV-QKD security analysis: noise budgets, Holevo bounds and finite-size key rates."""
from .config import RunConfig, load_config, parse_config, serialize_config
from .entropic import TrustedNoiseScenario, holevo_bound
from .noise import HardwareParams, ReceiverChain, compute_budget
from .rates import SecurityParams

__all__ = [
    "HardwareParams",
    "ReceiverChain",
    "RunConfig",
    "SecurityParams",
    "TrustedNoiseScenario",
    "compute_budget",
    "holevo_bound",
    "load_config",
    "parse_config",
    "serialize_config",
]
__version__ = "0.1.0"
