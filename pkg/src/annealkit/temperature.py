"""Initial-temperature selection and cooling schedules.

Initial-temperature procedures estimate a starting temperature from
sampled objective values or sampled move deltas.  Cooling schedules map
the current temperature (or the outer-iteration index) to the next one;
all of them drive the temperature to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from . import problems
from .errors import ConfigError

__all__ = [
    "InitTempSpec",
    "ScheduleSpec",
    "TemperatureStats",
    "aarts_temperature",
    "closed_form",
    "cool",
    "huang_uncapped",
    "init_temp",
    "johnson_temperature",
    "maxdiff_temperature",
    "init_temp_kinds",
    "schedule_kinds",
]

INIT_TEMP_KINDS = ("kirkpatrick", "johnson", "aarts", "variance", "maxdiff")
SCHEDULE_KINDS = (
    "geometric",
    "lundy_mees",
    "aarts_laarhoven",
    "boltzmann",
    "fast",
    "vfsr",
    "power",
    "huang",
)


def init_temp_kinds() -> tuple[str, ...]:
    return INIT_TEMP_KINDS


def schedule_kinds() -> tuple[str, ...]:
    return SCHEDULE_KINDS


@dataclass(frozen=True)
class InitTempSpec:
    """Tagged choice of initial-temperature procedure.

    kinds: kirkpatrick (grow T until the measured acceptance rate reaches
    chi0), johnson (mean positive delta over ln(1/chi0)), aarts (counts of
    decreasing/increasing moves), variance (variance of sampled objective
    values), maxdiff (largest sampled objective difference scaled by the
    target initial acceptance probability p_r).
    """

    kind: str
    chi0: float = 0.8
    chi: float = 0.8
    p_r: float = 0.9
    sample_count: int = 100
    growth: float = 1.5

    def __post_init__(self):
        if self.kind not in INIT_TEMP_KINDS:
            raise ConfigError(f"unknown init_temp kind {self.kind!r}")
        if self.sample_count < 2:
            raise ConfigError("sample_count must be >= 2")
        for label, value in (("chi0", self.chi0), ("chi", self.chi), ("p_r", self.p_r)):
            if not 0.0 < value < 1.0:
                raise ConfigError(f"{label} must lie in (0, 1)")
        if self.growth <= 1.0:
            raise ConfigError("growth must exceed 1")


@dataclass(frozen=True)
class ScheduleSpec:
    """Tagged cooling law with its parameters.

    Recurrence laws (geometric, lundy_mees, aarts_laarhoven, huang) map
    T_k to T_{k+1}; index laws (boltzmann, fast, vfsr, power) compute the
    temperature directly from (t0, k).
    """

    kind: str
    t0: float | None = None
    t_final: float | None = None
    alpha: float = 0.95
    beta: float = 1e-3
    epsilon: float = 0.1
    c: float = math.e
    c_scale: float = 1.0
    n: int = 1

    def __post_init__(self):
        if self.kind not in SCHEDULE_KINDS:
            raise ConfigError(f"unknown cooling kind {self.kind!r}")
        if self.kind == "geometric" and not 0.0 < self.alpha < 1.0:
            raise ConfigError("geometric cooling needs alpha in (0, 1)")
        if self.kind == "lundy_mees" and self.beta <= 0.0:
            raise ConfigError("lundy_mees cooling needs beta > 0")
        if self.kind == "aarts_laarhoven" and self.epsilon <= 0.0:
            raise ConfigError("aarts_laarhoven cooling needs epsilon > 0")
        if self.kind == "boltzmann" and self.c < 1.0:
            raise ConfigError("boltzmann cooling needs c >= 1")
        if self.kind == "vfsr" and self.c_scale <= 0.0:
            raise ConfigError("vfsr cooling needs c_scale > 0")
        if self.kind in ("vfsr", "power") and self.n < 1:
            raise ConfigError("dimension parameter n must be a positive integer")
        if self.t0 is not None and self.t0 <= 0.0:
            raise ConfigError("t0 must be positive")
        if self.t_final is not None:
            if self.t0 is not None and not 0.0 < self.t_final < self.t0:
                raise ConfigError("t_final must lie in (0, t0)")
            if self.t0 is None and self.t_final <= 0.0:
                raise ConfigError("t_final must be positive")


@dataclass(frozen=True)
class TemperatureStats:
    """Per-temperature chain statistics consumed by the adaptive laws:
    standard deviation of observed objective values, and the mean observed
    values at the current and previous temperatures."""

    sigma: float
    f_mean: float = math.nan
    f_mean_prev: float = math.nan


# ---------------------------------------------------------------------------
# Closed-form initial-temperature helpers
# ---------------------------------------------------------------------------


def johnson_temperature(mean_positive_delta: float, chi0: float) -> float:
    """T0 = mean positive delta / ln(1/chi0)."""
    if mean_positive_delta <= 0.0:
        raise ValueError("mean positive delta must be positive")
    if not 0.0 < chi0 < 1.0:
        raise ValueError("chi0 must lie in (0, 1)")
    return mean_positive_delta / math.log(1.0 / chi0)


def aarts_temperature(m1: int, m2: int, mean_positive_delta: float, chi: float) -> float:
    """T0 = mean positive delta / ln(m2 / (m2*chi - m1*(1 - chi))).

    m1 counts sampled moves that decreased the objective, m2 those that
    increased it.  Undefined (raises) when the denominator of the log
    argument is non-positive or the argument does not exceed 1.
    """
    if mean_positive_delta <= 0.0:
        raise ValueError("mean positive delta must be positive")
    denom = m2 * chi - m1 * (1.0 - chi)
    if denom <= 0.0:
        raise ValueError("acceptance-balance denominator m2*chi - m1*(1-chi) is non-positive")
    arg = m2 / denom
    if arg <= 1.0:
        raise ValueError("log argument must exceed 1 for a positive temperature")
    return mean_positive_delta / math.log(arg)


def maxdiff_temperature(max_difference: float, p_r: float) -> float:
    """T0 = |max difference| / (-ln p_r)."""
    if max_difference <= 0.0:
        raise ValueError("maximum objective difference must be positive")
    if not 0.0 < p_r < 1.0:
        raise ValueError("p_r must lie in (0, 1)")
    return max_difference / (-math.log(p_r))


# ---------------------------------------------------------------------------
# Sampling-based initial temperature
# ---------------------------------------------------------------------------


def _default_neighbor(problem, x, rng):
    # One uniformly-chosen coordinate resampled within its bounds (the
    # engine's default move), kept local to avoid importing the moves module.
    if isinstance(problem.region, problems.UnitSimplex):
        from .moves import propose_simplex

        return propose_simplex(x, rng)
    i = int(rng.integers(problem.n))
    x_new = np.array(x, dtype=float)
    x_new[i] = rng.uniform(problem.region.lower[i], problem.region.upper[i])
    return x_new


def _sample_deltas(problem, rng, count, evaluate_fn):
    deltas = np.empty(count)
    for i in range(count):
        x = problems.random_feasible(problem, rng)
        x_new = _default_neighbor(problem, x, rng)
        deltas[i] = evaluate_fn(problem, x_new) - evaluate_fn(problem, x)
    return deltas


def _sample_values(problem, rng, count, evaluate_fn):
    return np.array(
        [evaluate_fn(problem, problems.random_feasible(problem, rng)) for _ in range(count)]
    )


def init_temp(
    spec: InitTempSpec,
    problem: problems.Problem,
    rng: np.random.Generator,
    evaluate_fn: Callable | None = None,
) -> float:
    """Run the selected initial-temperature procedure and return T0 > 0.

    ``evaluate_fn`` lets callers count the objective evaluations the
    sampling consumes.
    """
    ev = evaluate_fn if evaluate_fn is not None else problems.evaluate

    if spec.kind == "johnson":
        deltas = _sample_deltas(problem, rng, spec.sample_count, ev)
        positive = deltas[deltas > 0.0]
        if positive.size == 0:
            raise ValueError("no uphill moves sampled; cannot apply the mean-positive-delta formula")
        return johnson_temperature(float(positive.mean()), spec.chi0)

    if spec.kind == "aarts":
        deltas = _sample_deltas(problem, rng, spec.sample_count, ev)
        positive = deltas[deltas > 0.0]
        if positive.size == 0:
            raise ValueError("no uphill moves sampled; cannot apply the acceptance-balance formula")
        m1 = int(np.sum(deltas < 0.0))
        m2 = int(positive.size)
        return aarts_temperature(m1, m2, float(positive.mean()), spec.chi)

    if spec.kind == "variance":
        values = _sample_values(problem, rng, spec.sample_count, ev)
        var = float(np.var(values, ddof=1))
        if not var > 0.0:
            raise ValueError("sampled objective values have zero variance")
        return var

    if spec.kind == "maxdiff":
        values = _sample_values(problem, rng, spec.sample_count, ev)
        spread = float(values.max() - values.min())
        return maxdiff_temperature(spread, spec.p_r)

    # kirkpatrick: start from a variance estimate and grow until the
    # simulated acceptance rate reaches chi0 (hard cap at 1e6x the start).
    values = _sample_values(problem, rng, spec.sample_count, ev)
    t = float(np.var(values, ddof=1))
    if not t > 0.0:
        raise ValueError("sampled objective values have zero variance")
    cap = 1e6 * t
    while True:
        deltas = _sample_deltas(problem, rng, spec.sample_count, ev)
        accepted = 0
        for d in deltas:
            if d <= 0.0 or rng.random() < math.exp(-d / t):
                accepted += 1
        if accepted / deltas.size >= spec.chi0:
            return t
        t *= spec.growth
        if t >= cap:
            return cap


# ---------------------------------------------------------------------------
# Cooling
# ---------------------------------------------------------------------------


def huang_uncapped(t_k: float, f_mean: float, f_mean_prev: float, sigma: float) -> float:
    """Raw next temperature t_k * exp(-t_k * (f_mean - f_mean_prev) / sigma^2),
    before the monotone cap."""
    if sigma <= 0.0:
        raise ValueError("sigma must be positive")
    return t_k * math.exp(-t_k * (f_mean - f_mean_prev) / (sigma * sigma))


def cool(
    spec: ScheduleSpec,
    t_k: float,
    k: int,
    stats: TemperatureStats | None = None,
) -> float:
    """Next temperature under the selected law.

    For index laws, ``k`` is the index of the temperature being computed
    (so boltzmann with c=e and k=0 returns t0 unchanged).  The adaptive
    laws read ``stats``; the one driven by mean objective change is capped
    at t_k so it never reheats.
    """
    if t_k <= 0.0:
        raise ValueError("current temperature must be positive")
    if k < 0:
        raise ValueError("iteration index must be non-negative")

    kind = spec.kind
    if kind == "geometric":
        return spec.alpha * t_k
    if kind == "lundy_mees":
        return t_k / (1.0 + spec.beta * t_k)
    if kind == "aarts_laarhoven":
        if stats is None or not stats.sigma > 0.0:
            raise ValueError("aarts_laarhoven cooling needs a positive objective-value sigma")
        return t_k / (1.0 + t_k * math.log(1.0 + spec.epsilon) / (3.0 * stats.sigma))
    if kind == "huang":
        if stats is None or not stats.sigma > 0.0:
            raise ValueError("huang cooling needs a positive objective-value sigma")
        raw = huang_uncapped(t_k, stats.f_mean, stats.f_mean_prev, stats.sigma)
        return min(t_k, raw)

    t0 = spec.t0
    if t0 is None:
        raise ConfigError(f"{kind} cooling needs t0")
    if kind == "boltzmann":
        log_term = math.log(k + spec.c)
        if log_term <= 0.0:
            raise ValueError("boltzmann cooling needs k + c > 1")
        return t0 / log_term
    if kind == "fast":
        return t0 / (k + 1.0)
    if kind == "vfsr":
        return t0 * math.exp(-spec.c_scale * k ** (1.0 / spec.n))
    if kind == "power":
        return t0 / (k + 1.0) ** (1.0 / spec.n)
    raise ConfigError(f"unknown cooling kind {kind!r}")


def closed_form(spec: ScheduleSpec, k: int) -> float:
    """Temperature after k cooling steps, for the laws with closed forms
    (geometric and lundy_mees)."""
    if k < 0:
        raise ValueError("iteration index must be non-negative")
    if spec.t0 is None:
        raise ConfigError("closed form needs t0")
    if spec.kind == "geometric":
        return spec.t0 * spec.alpha**k
    if spec.kind == "lundy_mees":
        return spec.t0 / (1.0 + k * spec.beta * spec.t0)
    raise ValueError(f"no closed form for {spec.kind!r} cooling")


def bind_t0(spec: ScheduleSpec, t0: float) -> ScheduleSpec:
    """Copy of ``spec`` with the runtime initial temperature filled in."""
    if t0 <= 0.0:
        raise ValueError("t0 must be positive")
    t_final = spec.t_final if spec.t_final is None or spec.t_final < t0 else None
    return replace(spec, t0=t0, t_final=t_final)
