"""Single-cycle thermodynamics of the two-qubit swap engine.

System R (spacing ``a1``) starts thermalized with the hot bath ``t_hot``,
system S (spacing ``a2``) with the cold bath ``t_cold``. The work stroke swaps
their occupation distributions. Units have k_B = 1, so temperatures and level
spacings share one energy unit.

All per-cycle functions accept scalars or numpy arrays.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

__all__ = [
    "DomainError",
    "BathPair",
    "EngineConfig",
    "CycleQuantities",
    "fermi",
    "occupation_ground",
    "initial_energy",
    "final_energy",
    "work",
    "heat_hot",
    "heat_cold",
    "cycle",
    "is_engine",
    "heat_capacity",
    "swap_is_optimal",
]


class DomainError(ValueError):
    """An argument lies outside the domain where a quantity is defined."""


def _check_temperature(t):
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)) or np.any(t <= 0):
        raise DomainError(f"temperature must be finite and positive, got {t!r}")
    return t


def _check_spacing(a, strict=True):
    a = np.asarray(a, dtype=float)
    bad = (a <= 0) if strict else (a < 0)
    if not np.all(np.isfinite(a)) or np.any(bad):
        kind = "positive" if strict else "non-negative"
        raise DomainError(f"level spacing must be finite and {kind}, got {a!r}")
    return a


@dataclass(frozen=True)
class BathPair:
    t_hot: float
    t_cold: float

    def __post_init__(self):
        for name in ("t_hot", "t_cold"):
            v = getattr(self, name)
            if not math.isfinite(v) or v <= 0:
                raise DomainError(f"{name} must be finite and positive, got {v}")
        if not self.t_hot > self.t_cold:
            raise DomainError(
                f"need t_hot > t_cold, got t_hot={self.t_hot}, t_cold={self.t_cold}"
            )

    @property
    def theta(self) -> float:
        """Temperature ratio t_cold / t_hot, in (0, 1)."""
        return self.t_cold / self.t_hot

    @classmethod
    def from_theta(cls, t_hot: float, theta: float) -> "BathPair":
        if not 0 < theta < 1:
            raise DomainError(f"theta must lie in (0, 1), got {theta}")
        return cls(t_hot, t_hot * theta)


@dataclass(frozen=True)
class EngineConfig:
    a1: float
    a2: float

    def __post_init__(self):
        for name in ("a1", "a2"):
            v = getattr(self, name)
            if not math.isfinite(v) or v <= 0:
                raise DomainError(f"{name} must be finite and positive, got {v}")


@dataclass(frozen=True)
class CycleQuantities:
    work: float
    heat_hot: float
    heat_cold: float
    efficiency: float
    temp_final_hot_side: float
    temp_final_cold_side: float

    def as_dict(self) -> dict:
        return {
            "work": self.work,
            "heat_hot": self.heat_hot,
            "heat_cold": self.heat_cold,
            "efficiency": self.efficiency,
            "temp_final_hot_side": self.temp_final_hot_side,
            "temp_final_cold_side": self.temp_final_cold_side,
        }


def fermi(x):
    """Excited-state occupation 1/(1+e^x), overflow-free for any real x."""
    return expit(-np.asarray(x, dtype=float))


def occupation_ground(a, t):
    """Ground-state occupation 1/(1+e^{-a/t}) of a thermal two-level system."""
    t = _check_temperature(t)
    a = _check_spacing(a, strict=False)
    return expit(a / t)


def initial_energy(a, t):
    """Thermal mean energy a/(1+e^{a/t})."""
    t = _check_temperature(t)
    a = _check_spacing(a)
    return a * fermi(a / t)


def final_energy(a_own, a_other, t_other):
    """Mean energy after the swap: own spacing, partner's thermal occupation."""
    t_other = _check_temperature(t_other)
    a_own = _check_spacing(a_own)
    a_other = _check_spacing(a_other)
    return a_own * fermi(a_other / t_other)


def _bracket(a1, a2, baths):
    # excited population handed from R to S minus the one coming back
    return fermi(a1 / baths.t_hot) - fermi(a2 / baths.t_cold)


def work(a1, a2, baths: BathPair):
    return (np.asarray(a1, dtype=float) - a2) * _bracket(a1, a2, baths)


def heat_hot(a1, a2, baths: BathPair):
    """Heat drawn from the hot bath while re-thermalizing R."""
    return np.asarray(a1, dtype=float) * _bracket(a1, a2, baths)


def heat_cold(a1, a2, baths: BathPair):
    """Heat exchanged with the cold bath; negative when the bath absorbs heat."""
    return -np.asarray(a2, dtype=float) * _bracket(a1, a2, baths)


def cycle(config: EngineConfig, baths: BathPair) -> CycleQuantities:
    a1, a2 = config.a1, config.a2
    b = float(_bracket(a1, a2, baths))
    return CycleQuantities(
        work=(a1 - a2) * b,
        heat_hot=a1 * b,
        heat_cold=-a2 * b,
        efficiency=1.0 - a2 / a1,
        temp_final_hot_side=baths.t_cold * a1 / a2,
        temp_final_cold_side=baths.t_hot * a2 / a1,
    )


def is_engine(config: EngineConfig, baths: BathPair) -> bool:
    return config.a1 * baths.theta <= config.a2 <= config.a1


def heat_capacity(a, t):
    """Heat capacity (a/t)^2 e^{a/t} / (1+e^{a/t})^2 of a thermal qubit."""
    t = _check_temperature(t)
    a = _check_spacing(a)
    x = a / t
    return x * x * expit(x) * expit(-x)


def _composite_levels(config):
    # index (i, j): i = state of R, j = state of S, 0 = ground
    a1, a2 = config.a1, config.a2
    return {(0, 0): 0.0, (0, 1): a2, (1, 0): a1, (1, 1): a1 + a2}


def swap_is_optimal(config: EngineConfig, baths: BathPair, rtol: float = 1e-12) -> bool:
    """Check by exhaustion that the swap minimizes the final mean energy.

    A unitary on the composite system can only permute the eigenvalues of the
    (diagonal) product state, so the 24 assignments of the four populations
    r_i s_j to the levels {0, a2, a1, a1 + a2} cover every reachable diagonal
    final state.

    Note that the swap is optimal only when a2/t_cold >= a1/t_hot; below the
    engine band the identity beats it.
    """
    r1 = float(occupation_ground(config.a1, baths.t_hot))
    s1 = float(occupation_ground(config.a2, baths.t_cold))
    r = (r1, 1.0 - r1)
    s = (s1, 1.0 - s1)
    levels = _composite_levels(config)
    keys = list(levels)
    energies = [levels[k] for k in keys]
    probs = [r[i] * s[j] for i, j in keys]

    best = min(
        sum(p * e for p, e in zip(perm, energies))
        for perm in itertools.permutations(probs)
    )
    # after the swap R carries S's populations and vice versa
    swap = sum(s[i] * r[j] * levels[(i, j)] for i, j in keys)
    return swap <= best + rtol * max(abs(best), abs(swap), 1e-300)
