"""Numerical laboratory for dilatively stable processes.

Submodules: ``levy_models`` (drivers), ``kernels``, ``quadrature``,
``charexp`` (exponent oracles), ``scaling`` (law verification and
estimation), ``montecarlo`` and ``cli``.
"""

from .charexp import (
    ExponentQuery,
    GFLPOracle,
    LevyOracle,
    StableIntegralOracle,
    StableLevyOracle,
    WienerOracle,
    ZBetaOracle,
    gflp_covariance,
    gflp_exponent,
    stable_exponent,
    wiener_exponent,
    zbeta_exponent,
)
from .kernels import ScalingLaw, kernel_from_dict
from .levy_models import LevyModel
from .quadrature import QuadratureConfig

__version__ = "0.1.0"

__all__ = [
    "ExponentQuery",
    "GFLPOracle",
    "LevyOracle",
    "StableIntegralOracle",
    "StableLevyOracle",
    "WienerOracle",
    "ZBetaOracle",
    "gflp_covariance",
    "gflp_exponent",
    "stable_exponent",
    "wiener_exponent",
    "zbeta_exponent",
    "ScalingLaw",
    "kernel_from_dict",
    "LevyModel",
    "QuadratureConfig",
]
