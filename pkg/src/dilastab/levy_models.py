"""Centered, symmetric, finite-variance pure-jump Lévy drivers.

Both families are compound Poisson with a symmetric jump law, so the
characteristic exponent ``phi(theta) = ∫ (1 - cos(theta x)) mu(dx)`` is real,
even and available in closed form, and paths can be sampled exactly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "Family",
    "LevyModel",
    "phi",
    "second_moment",
    "levy_multi_exponent",
    "stable_multi_exponent",
    "sample_jumps",
    "draw_jumps",
    "path_rng",
]


class Family(str, enum.Enum):
    TWO_POINT = "two_point"
    LAPLACE = "laplace"


@dataclass(frozen=True)
class LevyModel:
    """Jump law ``family`` arriving at rate ``intensity``.

    ``jump_param`` is the jump magnitude ``a`` (jumps are ±a) for the two-point
    family and the rate ``b`` of the Laplace density ``(b/2) exp(-b|x|)``.
    """

    family: Family
    intensity: float
    jump_param: float

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if not (np.isfinite(self.intensity) and self.intensity > 0):
            raise ValueError(f"intensity must be positive, got {self.intensity!r}")
        if not (np.isfinite(self.jump_param) and self.jump_param > 0):
            raise ValueError(f"jump_param must be positive, got {self.jump_param!r}")

    @classmethod
    def two_point(cls, a: float = 1.0, intensity: float = 1.0) -> "LevyModel":
        return cls(Family.TWO_POINT, intensity, a)

    @classmethod
    def laplace(cls, b: float = 1.0, intensity: float = 1.0) -> "LevyModel":
        return cls(Family.LAPLACE, intensity, b)

    @classmethod
    def from_dict(cls, spec: dict) -> "LevyModel":
        try:
            family = Family(spec["family"])
        except ValueError:
            raise ValueError(f"unknown Lévy family {spec['family']!r}") from None
        return cls(family, float(spec["intensity"]), float(spec["jump_param"]))

    def to_dict(self) -> dict:
        return {"family": self.family.value, "intensity": self.intensity, "jump_param": self.jump_param}


def phi(model: LevyModel, theta):
    """Characteristic exponent of ``L_1``; vectorized over ``theta``."""
    theta = np.asarray(theta, dtype=float)
    lam, p = model.intensity, model.jump_param
    if model.family is Family.TWO_POINT:
        out = 2.0 * lam * np.sin(0.5 * p * theta) ** 2
    else:
        th2 = theta * theta
        out = lam * th2 / (p * p + th2)
    return out if out.ndim else float(out)


def second_moment(model: LevyModel) -> float:
    """``E(L_1^2) = ∫ x^2 mu(dx)``."""
    lam, p = model.intensity, model.jump_param
    if model.family is Family.TWO_POINT:
        return lam * p * p
    return 2.0 * lam / (p * p)


def _check_times(times: Sequence[float], thetas: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    t = np.asarray(times, dtype=float)
    th = np.asarray(thetas, dtype=float)
    if t.ndim != 1 or t.shape != th.shape or t.size == 0:
        raise ValueError("times and thetas must be non-empty 1-d sequences of equal length")
    if np.any(t <= 0):
        raise ValueError("times must be positive")
    if np.any(np.diff(t) <= 0):
        raise ValueError("times must be strictly ascending")
    return t, th


def _increment_weights(t: np.ndarray, th: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    dt = np.diff(t, prepend=0.0)
    tail_sums = np.cumsum(th[::-1])[::-1]
    return dt, tail_sums


def levy_multi_exponent(model: LevyModel, times: Sequence[float], thetas: Sequence[float]) -> float:
    """Exact exponent of ``(L_{t_1}, ..., L_{t_k})`` via independent increments:
    ``sum_j (t_j - t_{j-1}) phi(theta_j + ... + theta_k)`` with ``t_0 = 0``."""
    t, th = _check_times(times, thetas)
    dt, tail_sums = _increment_weights(t, th)
    return float(np.dot(dt, phi(model, tail_sums)))


def stable_multi_exponent(hurst: float, scale: float, times: Sequence[float], thetas: Sequence[float]) -> float:
    """Exponent of a symmetric ``1/hurst``-stable Lévy process with
    ``psi_t(theta) = scale * t * |theta|^(1/hurst)``."""
    if not 0.5 <= hurst:
        raise ValueError("hurst must be >= 1/2 (stable index in (0, 2])")
    t, th = _check_times(times, thetas)
    dt, tail_sums = _increment_weights(t, th)
    return float(scale * np.dot(dt, np.abs(tail_sums) ** (1.0 / hurst)))


def path_rng(seed: int, index: int) -> np.random.Generator:
    """Independent generator for work item ``index`` under master ``seed``.

    The stream depends only on ``(seed, index)``, never on scheduling.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(int(index),))))


def draw_jumps(model: LevyModel, lo: float, hi: float, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Jumps of the driver on ``[lo, hi]``: count, then sorted positions, then sizes."""
    n = rng.poisson(model.intensity * (hi - lo))
    positions = np.sort(rng.uniform(lo, hi, n))
    if model.family is Family.TWO_POINT:
        sizes = model.jump_param * (2.0 * rng.integers(0, 2, n) - 1.0)
    else:
        sizes = rng.laplace(0.0, 1.0 / model.jump_param, n)
    return positions, sizes


def sample_jumps(model: LevyModel, window, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Jump positions and sizes of the compound-Poisson driver on a window.

    ``window`` is either a radius ``U`` (meaning ``[-U, U]``) or a pair ``(lo, hi)``.
    Returns ``(positions, sizes)``; identical for identical ``seed``.
    """
    if np.ndim(window) == 0:
        lo, hi = -float(window), float(window)
    else:
        lo, hi = map(float, window)
    if not hi > lo or not np.isfinite(hi - lo):
        raise ValueError(f"window must have positive finite length, got {window!r}")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))
    return draw_jumps(model, lo, hi, rng)
