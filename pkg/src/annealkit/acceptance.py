"""Acceptance rules mapping a cost difference and a temperature to an
accept/reject probability.

All rules return a probability in [0, 1] that is non-increasing in the
uphill size and, for positive deltas, non-decreasing in temperature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigError

__all__ = ["AcceptanceSpec", "accept_probability", "decide", "ACCEPTANCE_KINDS"]

ACCEPTANCE_KINDS = ("metropolis", "generalized", "barker", "johnson_linear")

# Temperature map used by the generalized rule must be positive and
# strictly increasing; checked on this grid at spec construction.
_GAMMA_GRID = np.logspace(-6.0, 6.0, 25)


@dataclass(frozen=True)
class AcceptanceSpec:
    """Tagged acceptance rule.

    ``generalized`` rescales the temperature through gamma(T) = T**gamma_power.
    ``sechen_table`` switches the metropolis exponential to a 4096-entry
    interpolation table (<= 1e-4 absolute error on its domain).
    """

    kind: str
    gamma_power: float = 1.0
    sechen_table: bool = False

    def __post_init__(self):
        if self.kind not in ACCEPTANCE_KINDS:
            raise ConfigError(f"unknown acceptance kind {self.kind!r}")
        if self.kind == "generalized":
            if self.gamma_power <= 0.0:
                raise ConfigError("gamma_power must be positive")
            gammas = _GAMMA_GRID**self.gamma_power
            if not (np.all(gammas > 0.0) and np.all(np.diff(gammas) > 0.0)):
                raise ConfigError("temperature map must be positive and strictly increasing")
        if self.sechen_table and self.kind != "metropolis":
            raise ConfigError("the exp lookup table only applies to the metropolis rule")


_TABLE_SIZE = 4096
_TABLE_MAX = 20.0


@lru_cache(maxsize=1)
def _exp_table():
    ys = np.linspace(0.0, _TABLE_MAX, _TABLE_SIZE)
    return ys, np.exp(-ys)


def _table_exp_neg(y: float) -> float:
    """exp(-y) for y >= 0 via linear interpolation (0 beyond the domain)."""
    if y >= _TABLE_MAX:
        return 0.0
    ys, vals = _exp_table()
    step = _TABLE_MAX / (_TABLE_SIZE - 1)
    i = int(y / step)
    frac = y / step - i
    return float(vals[i] + frac * (vals[i + 1] - vals[i]))


def accept_probability(spec: AcceptanceSpec, delta: float, temperature: float) -> float:
    """Probability of accepting a move with cost difference ``delta`` at the
    given temperature."""
    if not math.isfinite(delta):
        raise ValueError("delta must be finite")
    if not temperature > 0.0:
        raise ValueError("temperature must be positive")

    kind = spec.kind
    if kind == "metropolis":
        if delta <= 0.0:
            return 1.0
        y = delta / temperature
        if spec.sechen_table:
            return _table_exp_neg(y)
        return math.exp(-y) if y < 745.0 else 0.0
    if kind == "generalized":
        if delta <= 0.0:
            return 1.0
        y = delta / temperature**spec.gamma_power
        return math.exp(-y) if y < 745.0 else 0.0
    if kind == "barker":
        y = delta / temperature
        if y > 700.0:
            return 0.0
        if y < -700.0:
            return 1.0
        return 1.0 / (1.0 + math.exp(y))
    # johnson_linear: min{1, 1 - delta/T}, clamped below at zero so the
    # result is a probability.
    return min(1.0, max(0.0, 1.0 - delta / temperature))


def decide(spec: AcceptanceSpec, delta: float, temperature: float, rng: np.random.Generator) -> bool:
    """One accept/reject decision; consumes exactly one uniform draw."""
    p = accept_probability(spec, delta, temperature)
    return rng.random() < p
