"""commnet: hotspot small-cell network mobility and coverage toolkit."""

from .coverage import (
    ChannelParams,
    ConstantNoise,
    CoverageResult,
    Deployment,
    GaussianAmplitudeNoise,
    MacroMobility,
)
from .errors import ConfigError, ConvergenceError
from .geometry import Layout, QuadratureSpec, Rect, RegionPair, RegionTag
from .metrics import Attribution, MobilityInputs, TimeFractions
from .mobility import ImmParams, Jump, Trajectory, WaitModel, backend_name

__all__ = [
    "Attribution",
    "ChannelParams",
    "ConfigError",
    "ConstantNoise",
    "ConvergenceError",
    "CoverageResult",
    "Deployment",
    "GaussianAmplitudeNoise",
    "ImmParams",
    "Jump",
    "Layout",
    "MacroMobility",
    "MobilityInputs",
    "QuadratureSpec",
    "Rect",
    "RegionPair",
    "RegionTag",
    "TimeFractions",
    "Trajectory",
    "WaitModel",
    "backend_name",
]

__version__ = "0.1.0"
