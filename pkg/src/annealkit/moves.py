"""Neighborhood-solution generators.

Every generator takes the current feasible point and returns a new
feasible point.  The step-direction generator owns an adaptive step
length that grows when the windowed acceptance rate is high and shrinks
when it is low.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import problems
from .errors import ConfigError

__all__ = ["MoveSpec", "MoveState", "MOVE_KINDS", "adapt_step", "propose", "propose_simplex", "step_gain"]

MOVE_KINDS = (
    "single_coordinate",
    "random_subset",
    "simplex",
    "step_direction",
    "corana",
    "gaussian",
    "cauchy",
)

_STEP_RETRIES = 100


@dataclass(frozen=True)
class MoveSpec:
    """Tagged neighborhood generator.

    single_coordinate resamples one uniformly chosen coordinate within its
    bounds; random_subset resamples one coordinate, an m-subset, or the
    whole vector (each branch drawn uniformly); simplex applies the
    unit-simplex resampling rule; step_direction perturbs one coordinate
    by q*d with d uniform on (-1, 1) and adapts q; corana perturbs the
    cycling axis by r*v_i with r uniform on [-1, 1]; gaussian/cauchy add
    i.i.d. noise of the named distribution to every coordinate and repair.
    """

    kind: str
    q0: float = 1.0
    target_acc: float = 0.5
    window: int = 50
    v: float | tuple[float, ...] = 1.0
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in MOVE_KINDS:
            raise ConfigError(f"unknown move kind {self.kind!r}")
        if self.q0 <= 0.0:
            raise ConfigError("q0 must be positive")
        if not 0.0 < self.target_acc < 1.0:
            raise ConfigError("target_acc must lie in (0, 1)")
        if self.window < 1:
            raise ConfigError("window must be >= 1")
        if self.scale <= 0.0:
            raise ConfigError("scale must be positive")
        v = self.v
        if isinstance(v, (tuple, list, np.ndarray)):
            v = tuple(float(e) for e in v)
            object.__setattr__(self, "v", v)
            if any(e <= 0.0 for e in v):
                raise ConfigError("per-axis steps must be positive")
        elif v <= 0.0:
            raise ConfigError("per-axis step must be positive")

    def axis_steps(self, n: int) -> np.ndarray:
        if isinstance(self.v, tuple):
            if len(self.v) != n:
                raise ConfigError(f"per-axis step vector has length {len(self.v)}, expected {n}")
            return np.asarray(self.v)
        return np.full(n, float(self.v))


@dataclass
class MoveState:
    """Mutable per-run state: adaptive step length, the cycling axis cursor,
    and the accepted/proposed counts of the current adaptation window."""

    q: float = 1.0
    axis_cursor: int = 0
    accepted: int = 0
    proposed: int = 0

    def __post_init__(self):
        if self.q <= 0.0:
            raise ValueError("step length must be positive")
        if not 0 <= self.accepted <= self.proposed:
            raise ValueError("need 0 <= accepted <= proposed")


def new_state(spec: MoveSpec) -> MoveState:
    return MoveState(q=spec.q0)


def step_gain(acceptance_rate: float) -> float:
    """Step-length gain g(x) = (x - 0.5)^3 + 1: neutral at 0.5, growing with
    high acceptance, shrinking with low acceptance."""
    return (acceptance_rate - 0.5) ** 3 + 1.0


def adapt_step(state: MoveState) -> MoveState:
    """Rescale q by g(accepted/proposed) and reset the window counters."""
    if state.proposed < 1:
        raise ValueError("cannot adapt before any proposal was made")
    acc = state.accepted / state.proposed
    state.q *= step_gain(acc)
    state.accepted = 0
    state.proposed = 0
    return state


def propose_simplex(x, rng: np.random.Generator) -> np.ndarray:
    """Unit-simplex move: keep n-2 uniformly chosen elements, resample one
    of the remaining two uniformly so the running sum stays <= 1, and give
    the last element the slack 1 - sum."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < 2:
        raise ValueError("simplex move needs dimension >= 2")
    order = rng.permutation(n)
    i, j = int(order[0]), int(order[1])
    kept = 1.0 - x[i] - x[j]
    u = rng.uniform(0.0, max(0.0, 1.0 - kept))
    x_new = x.copy()
    x_new[i] = u
    x_new[j] = max(0.0, 1.0 - kept - u)
    return x_new


def _resample_coords(x, idx, box, rng):
    x_new = np.array(x, dtype=float)
    x_new[idx] = rng.uniform(box.lower[idx], box.upper[idx])
    return x_new


def propose(
    spec: MoveSpec,
    state: MoveState,
    x,
    problem: problems.Problem,
    rng: np.random.Generator,
) -> np.ndarray:
    """Generate a feasible neighbor of ``x`` under the selected generator."""
    x = np.asarray(x, dtype=float)
    region = problem.region
    n = problem.n

    if isinstance(region, problems.UnitSimplex):
        if spec.kind in ("single_coordinate", "random_subset", "simplex"):
            return propose_simplex(x, rng)
        if spec.kind in ("gaussian", "cauchy"):
            noise = rng.standard_normal(n) if spec.kind == "gaussian" else rng.standard_cauchy(n)
            return region.repair(x + spec.scale * noise)
        raise ValueError(f"{spec.kind!r} moves are not defined on the unit simplex")

    if spec.kind == "simplex":
        raise ValueError("simplex moves need a unit-simplex region")

    if spec.kind == "single_coordinate":
        i = int(rng.integers(n))
        return _resample_coords(x, np.array([i]), region, rng)

    if spec.kind == "random_subset":
        branch = int(rng.integers(1, 4))
        if branch == 1:
            idx = np.array([int(rng.integers(n))])
        elif branch == 2:
            m = int(rng.integers(1, n + 1))
            idx = rng.choice(n, size=m, replace=False)
        else:
            idx = np.arange(n)
        return _resample_coords(x, idx, region, rng)

    if spec.kind == "step_direction":
        i = int(rng.integers(n))
        # The adaptive step can drift far above the box scale on flat
        # stretches (acceptance ~1 keeps growing it); cap the effective
        # magnitude so proposals stay meaningful.
        q_eff = min(state.q, 0.5 * float(region.width[i]))
        d = rng.uniform(-1.0, 1.0)
        x_new = np.array(x, dtype=float)
        x_new[i] += q_eff * d
        if region.contains(x_new):
            return x_new
        for d in rng.uniform(-1.0, 1.0, size=_STEP_RETRIES - 1):
            x_new[i] = x[i] + q_eff * d
            if region.contains(x_new):
                return x_new
        x_new = region.repair(x_new)
        if not region.contains(x_new):
            raise RuntimeError("step-direction move failed to reach a feasible point")
        return x_new

    if spec.kind == "corana":
        steps = spec.axis_steps(n)
        i = state.axis_cursor % n
        r = rng.uniform(-1.0, 1.0)
        x_new = np.array(x, dtype=float)
        x_new[i] += r * steps[i]
        state.axis_cursor = (state.axis_cursor + 1) % n
        return region.repair(x_new)

    noise = rng.standard_normal(n) if spec.kind == "gaussian" else rng.standard_cauchy(n)
    return region.repair(x + spec.scale * noise)
