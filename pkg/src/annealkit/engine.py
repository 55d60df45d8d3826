"""The nested-loop simulated-annealing driver.

The outer loop controls the temperature; the inner loop makes a bounded
number of proposals at each temperature.  A strict improvement (cost
difference below -delta_threshold) is always accepted; anything else goes
through the configured acceptance rule.  Bookkeeping follows the classic
renew / iteration_count / best_count / frozen_count scheme:

* ``renew`` counts acceptances within the current inner loop;
* ``best_count`` counts incumbent improvements;
* ``frozen_count`` is reset whenever an inner loop improved the incumbent
  and incremented whenever the inner acceptance rate falls below 1/N_size.

Variants: heating (start near zero temperature, accept every uphill move
and multiply the temperature instead of cooling on such steps), memory
(identical search, tracks a no-improvement index and returns to the
incumbent), and the two local-search alternations.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from . import acceptance as accept_mod
from . import moves as moves_mod
from . import problems as problems_mod
from . import temperature as temp_mod
from .errors import ConfigError

__all__ = [
    "AnnealConfig",
    "AnnealState",
    "EvalCounter",
    "RunRecord",
    "TracePoint",
    "inner_loop",
    "run_annealing_then_local",
    "run_heating_annealing",
    "run_local_then_annealing",
    "run_memory_annealing",
    "run_sa",
    "stop_inner",
    "stop_outer",
    "trace_to_csv",
]

# Outer-loop stop causes, in the priority order they are checked.
STOP_REASONS = (
    "final_temperature",
    "frozen",
    "acceptance_rate",
    "objective",
    "probability_floor",
    "max_evaluations",
    "max_outer",
    "max_seconds",
)

_T_FLOOR = 1e-300


class EvalCounter:
    """Per-run objective-evaluation counter."""

    __slots__ = ("count",)

    def __init__(self):
        self.count = 0

    def evaluate(self, problem, x):
        self.count += 1
        return problems_mod.evaluate(problem, x)


@dataclass
class AnnealConfig:
    """Full parameterization of one annealing run.

    ``init_temp`` is either an explicit starting temperature or an
    initial-temperature procedure; when absent, the cooling spec must
    carry t0.  ``n_size`` is the neighborhood-size surrogate (default
    100*n); the inner loop runs min(n_factor*n_size, markov_cap) proposals
    unless the renew cap cut*n_factor*n_size ends it early.

    Optional outer stops: final temperature ``t_final``, freeze threshold
    ``frozen_limit``, final acceptance rate ``chi_final``, the objective
    tolerance ``eps_objective`` (also enables the inner stable-window stop
    when ``stable_window`` is set), the acceptance-probability floor
    ``prob_floor``, and ``target_tolerance`` which stops once the incumbent
    is within that relative distance of a known optimum.  The resource
    caps are always enabled.
    """

    cooling: temp_mod.ScheduleSpec
    move: moves_mod.MoveSpec = field(default_factory=lambda: moves_mod.MoveSpec("single_coordinate"))
    acceptance: accept_mod.AcceptanceSpec = field(
        default_factory=lambda: accept_mod.AcceptanceSpec("metropolis")
    )
    init_temp: temp_mod.InitTempSpec | float | None = None
    delta_threshold: float = 1e-12
    n_size: int | None = None
    n_factor: int = 10
    cut: float = 1.0
    frozen_limit: int = 10
    t_final: float | None = None
    eps_objective: float | None = None
    stable_window: int | None = None
    chi_final: float | None = None
    prob_floor: float | None = None
    target_tolerance: float | None = None
    max_evaluations: int = 1_000_000
    max_outer: int = 1_000
    max_seconds: float | None = None
    markov_cap: int | None = None
    t0_fallback: float | None = None
    seed: int = 0
    record_trace: bool = False

    def __post_init__(self):
        if self.delta_threshold < 0.0:
            raise ConfigError("delta_threshold must be >= 0")
        if self.n_size is not None and self.n_size < 1:
            raise ConfigError("n_size must be positive")
        if self.n_factor < 1:
            raise ConfigError("n_factor must be positive")
        if self.cut <= 0.0:
            raise ConfigError("cut must be positive")
        if self.frozen_limit < 1:
            raise ConfigError("frozen_limit must be positive")
        if self.t_final is not None and self.t_final <= 0.0:
            raise ConfigError("t_final must be positive")
        if self.chi_final is not None and not 0.0 < self.chi_final < 1.0:
            raise ConfigError("chi_final must lie in (0, 1)")
        if self.prob_floor is not None and not 0.0 < self.prob_floor < 1.0:
            raise ConfigError("prob_floor must lie in (0, 1)")
        if self.eps_objective is not None and self.eps_objective <= 0.0:
            raise ConfigError("eps_objective must be positive")
        if self.target_tolerance is not None and self.target_tolerance <= 0.0:
            raise ConfigError("target_tolerance must be positive")
        if self.stable_window is not None and self.stable_window < 2:
            raise ConfigError("stable_window must be >= 2")
        if self.max_evaluations < 1:
            raise ConfigError("max_evaluations must be positive")
        if self.max_outer < 0:
            raise ConfigError("max_outer must be >= 0")
        if self.max_seconds is not None and self.max_seconds <= 0.0:
            raise ConfigError("max_seconds must be positive")
        if self.markov_cap is not None and self.markov_cap < 1:
            raise ConfigError("markov_cap must be positive")
        if isinstance(self.init_temp, (int, float)) and self.init_temp <= 0.0:
            raise ConfigError("explicit initial temperature must be positive")


@dataclass
class TracePoint:
    k: int
    T: float
    iteration_count: int
    renew: int
    f: float
    f_best: float
    acc_rate: float
    extras: dict = field(default_factory=dict)


TRACE_COLUMNS = ("k", "T", "iteration_count", "renew", "f", "f_best", "acc_rate")


def trace_to_csv(trace: Sequence[TracePoint]) -> str:
    lines = [",".join(TRACE_COLUMNS)]
    for p in trace:
        lines.append(
            f"{p.k},{p.T!r},{p.iteration_count},{p.renew},{p.f!r},{p.f_best!r},{p.acc_rate!r}"
        )
    return "\n".join(lines) + "\n"


@dataclass
class RunRecord:
    """Outcome of one seeded run."""

    problem: str
    method: str
    seed: int
    f_best: float
    x_best: list[float]
    evaluations: int
    outer_iterations: int
    wall_seconds: float
    stop_reason: str
    trace: list[TracePoint] | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "problem": self.problem,
            "method": self.method,
            "seed": self.seed,
            "f_best": self.f_best,
            "x_best": list(self.x_best),
            "evaluations": self.evaluations,
            "outer_iterations": self.outer_iterations,
            "wall_seconds": self.wall_seconds,
            "stop_reason": self.stop_reason,
        }
        if self.extra:
            d["extra"] = self.extra
        if self.trace is not None:
            d["trace"] = [
                {
                    "k": p.k,
                    "T": p.T,
                    "iteration_count": p.iteration_count,
                    "renew": p.renew,
                    "f": p.f,
                    "f_best": p.f_best,
                    "acc_rate": p.acc_rate,
                    **({"extras": p.extras} if p.extras else {}),
                }
                for p in self.trace
            ]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunRecord":
        trace = None
        if "trace" in d:
            trace = [
                TracePoint(
                    k=p["k"],
                    T=p["T"],
                    iteration_count=p["iteration_count"],
                    renew=p["renew"],
                    f=p["f"],
                    f_best=p["f_best"],
                    acc_rate=p["acc_rate"],
                    extras=p.get("extras", {}),
                )
                for p in d["trace"]
            ]
        return cls(
            problem=d["problem"],
            method=d["method"],
            seed=d["seed"],
            f_best=d["f_best"],
            x_best=list(d["x_best"]),
            evaluations=d["evaluations"],
            outer_iterations=d["outer_iterations"],
            wall_seconds=d.get("wall_seconds", 0.0),
            stop_reason=d["stop_reason"],
            trace=trace,
            extra=d.get("extra", {}),
        )


@dataclass
class AnnealState:
    """Mutable bookkeeping of a run in flight."""

    x: np.ndarray
    f: float
    T: float
    n_size: int
    f_opt: float | None = None
    k: int = 0
    iteration_count: int = 0
    renew: int = 0
    best_count: int = 0
    frozen_count: int = 0
    x_best: np.ndarray | None = None
    f_best: float = math.inf
    evaluations: int = 0
    last_delta: float = math.nan
    acc_rate_last: float | None = None
    prob_mean_last: float | None = None
    f_mean_last: float = math.nan
    f_mean_prev: float = math.nan
    f_sigma_last: float = math.nan
    inner_f_history: list = field(default_factory=list)
    move_state: moves_mod.MoveState = field(default_factory=moves_mod.MoveState)
    start_time: float = 0.0
    trace: list[TracePoint] | None = None

    # memory-variant bookkeeping
    index_inner: int = 0
    index_outer: int = 0


def _elapsed(state: AnnealState) -> float:
    return time.perf_counter() - state.start_time


def stop_inner(state: AnnealState, config: AnnealConfig) -> tuple[bool, str | None]:
    """Inner-loop stopping test: fixed length (optionally capped by the
    Markov-chain bound), the renew cap, and the optional stable-window
    objective test."""
    limit = config.n_factor * state.n_size
    if config.markov_cap is not None:
        limit = min(limit, config.markov_cap)
    if state.iteration_count >= limit:
        return True, "fixed_length"
    if state.renew >= config.cut * config.n_factor * state.n_size:
        return True, "renew_cap"
    if config.stable_window is not None and config.eps_objective is not None:
        w = config.stable_window
        hist = state.inner_f_history
        if len(hist) >= w:
            window = hist[-w:]
            if max(window) - min(window) <= config.eps_objective:
                return True, "stable_mean"
    return False, None


def stop_outer(state: AnnealState, config: AnnealConfig) -> tuple[bool, str | None]:
    """Outer-loop stopping test; the returned cause is the first enabled
    criterion that fires, in the documented priority order."""
    if config.t_final is not None and state.T <= config.t_final:
        return True, "final_temperature"
    if state.T <= _T_FLOOR:
        return True, "final_temperature"
    if state.frozen_count >= config.frozen_limit:
        return True, "frozen"
    if (
        config.chi_final is not None
        and state.acc_rate_last is not None
        and state.acc_rate_last <= config.chi_final
    ):
        return True, "acceptance_rate"
    eps = config.eps_objective
    if eps is not None:
        if (
            math.isfinite(state.last_delta)
            and abs(state.last_delta) <= eps
            and state.f - state.f_best <= eps
        ):
            return True, "objective"
        if state.f_opt is not None and _target_gap(state.f_best, state.f_opt) <= eps:
            return True, "objective"
    if (
        config.target_tolerance is not None
        and state.f_opt is not None
        and _target_gap(state.f_best, state.f_opt) <= config.target_tolerance
    ):
        return True, "objective"
    if (
        config.prob_floor is not None
        and state.prob_mean_last is not None
        and state.prob_mean_last <= config.prob_floor
    ):
        return True, "probability_floor"
    if state.evaluations >= config.max_evaluations:
        return True, "max_evaluations"
    if state.k >= config.max_outer:
        return True, "max_outer"
    if config.max_seconds is not None and _elapsed(state) >= config.max_seconds:
        return True, "max_seconds"
    return False, None


def _target_gap(f_best: float, f_opt: float) -> float:
    return (f_best - f_opt) / max(abs(f_opt), 1.0)


def _accept_and_book(state: AnnealState, x_new, f_new):
    state.x = x_new
    state.f = f_new
    state.renew += 1
    if f_new < state.f_best:
        state.x_best = np.array(x_new)
        state.f_best = f_new
        state.best_count += 1
        state.index_inner = 0
        return True
    return False


def inner_loop(
    state: AnnealState,
    problem: problems_mod.Problem,
    config: AnnealConfig,
    rng: np.random.Generator,
    counter: EvalCounter | None = None,
    eval_limit: int | None = None,
    mode: str = "sa",
    heat_factor: float = 2.0,
) -> tuple[str | None, bool, bool]:
    """Run one temperature's worth of proposals.

    Returns (inner stop cause, hit_resource_cap, heated).  Updates the
    per-temperature statistics on ``state``.
    """
    counter = counter if counter is not None else EvalCounter()
    limit = eval_limit if eval_limit is not None else config.max_evaluations
    state.iteration_count = 0
    state.renew = 0
    state.inner_f_history = []
    probs_sum = 0.0
    heated = False
    hit_cap = False
    cause = None
    ms = state.move_state
    incremental = problem.incremental

    while True:
        if counter.count >= limit:
            hit_cap = True
            break
        if config.max_seconds is not None and _elapsed(state) >= config.max_seconds:
            hit_cap = True
            break

        x_new = moves_mod.propose(config.move, ms, state.x, problem, rng)
        if incremental is not None:
            d = float(np.dot(incremental.a, x_new - state.x))
            f_new = state.f + d
        else:
            f_new = counter.evaluate(problem, x_new)
            d = f_new - state.f
        state.last_delta = d
        probs_sum += accept_mod.accept_probability(config.acceptance, d, state.T)

        accepted = False
        if mode == "heating" and d > 0.0:
            # Uphill proposals are taken unconditionally and reheat.
            accepted = True
            state.T *= heat_factor
            heated = True
        elif d < -config.delta_threshold:
            accepted = True
        else:
            accepted = accept_mod.decide(config.acceptance, d, state.T, rng)

        improved = False
        if accepted:
            improved = _accept_and_book(state, x_new, f_new)
        if not improved:
            state.index_inner += 1

        state.iteration_count += 1
        state.inner_f_history.append(state.f)
        ms.proposed += 1
        if accepted:
            ms.accepted += 1
        if config.move.kind == "step_direction" and ms.proposed >= config.move.window:
            moves_mod.adapt_step(ms)

        done, cause = stop_inner(state, config)
        if done:
            break

    state.evaluations = counter.count
    if state.iteration_count > 0:
        state.acc_rate_last = state.renew / state.iteration_count
        state.prob_mean_last = probs_sum / state.iteration_count
        hist = np.asarray(state.inner_f_history)
        state.f_mean_prev = state.f_mean_last
        state.f_mean_last = float(hist.mean())
        state.f_sigma_last = float(hist.std())
        if math.isnan(state.f_mean_prev):
            state.f_mean_prev = state.f_mean_last
    return cause, hit_cap, heated


def _resolve_t0(problem, config, rng, counter) -> float:
    it = config.init_temp
    if isinstance(it, (int, float)):
        return float(it)
    if isinstance(it, temp_mod.InitTempSpec):
        try:
            return temp_mod.init_temp(it, problem, rng, evaluate_fn=counter.evaluate)
        except ValueError:
            # Degenerate sample (e.g. a flat plateau).  Fall back when the
            # config provides for it, otherwise keep the procedure's error.
            if config.t0_fallback is not None:
                return config.t0_fallback
            raise
    if config.cooling.t0 is not None:
        return config.cooling.t0
    raise ConfigError("no initial temperature: set init_temp or cooling.t0")


def _run_core(
    problem: problems_mod.Problem,
    config: AnnealConfig,
    rng: np.random.Generator | None = None,
    counter: EvalCounter | None = None,
    x0=None,
    eval_limit: int | None = None,
    mode: str = "sa",
    heat_factor: float = 2.0,
    method: str = "sa",
) -> RunRecord:
    rng = rng if rng is not None else np.random.default_rng(config.seed)
    counter = counter if counter is not None else EvalCounter()
    limit = eval_limit if eval_limit is not None else config.max_evaluations
    start = time.perf_counter()
    eval_start = counter.count

    if x0 is None:
        x = problems_mod.random_feasible(problem, rng)
    else:
        x = problems_mod.repair(problem, np.asarray(x0, dtype=float))
    f = counter.evaluate(problem, x)

    if mode == "heating":
        # Start essentially cold; uphill moves reheat.  The scale comes from
        # a small variance estimate so the floor is problem-relative.
        values = [counter.evaluate(problem, problems_mod.random_feasible(problem, rng)) for _ in range(16)]
        var = float(np.var(values, ddof=1))
        t0 = 1e-6 * var if var > 0.0 else 1e-12
    else:
        t0 = _resolve_t0(problem, config, rng, counter)
    if t0 <= 0.0:
        raise ConfigError("initial temperature must be positive")

    schedule = temp_mod.bind_t0(config.cooling, t0)
    n_size = config.n_size if config.n_size is not None else 100 * problem.n
    state = AnnealState(
        x=x,
        f=f,
        T=t0,
        n_size=n_size,
        f_opt=problem.known_optimum,
        x_best=np.array(x),
        f_best=f,
        move_state=moves_mod.new_state(config.move),
        start_time=start,
        trace=[] if config.record_trace else None,
    )
    state.evaluations = counter.count
    heat_events = 0
    stop_reason = None

    while True:
        # Resource guards up front so a zero-length budget does no work.
        if state.k >= config.max_outer:
            stop_reason = "max_outer"
            break
        if counter.count >= limit:
            stop_reason = "max_evaluations"
            break
        if config.max_seconds is not None and _elapsed(state) >= config.max_seconds:
            stop_reason = "max_seconds"
            break

        best_before = state.best_count
        t_before = state.T
        cause, hit_cap, heated = inner_loop(
            state, problem, config, rng, counter, limit, mode=mode, heat_factor=heat_factor
        )
        if heated:
            heat_events += 1
        if state.best_count == best_before:
            state.index_outer += 1
        else:
            state.index_outer = 0

        extras = {}
        if state.trace is not None:
            extras["inner_stop"] = cause or "resource_cap"
            if mode == "memory":
                extras["index_inner"] = state.index_inner
                extras["index_outer"] = state.index_outer
            if heated:
                extras["heated"] = True
                extras["t_before_inner"] = t_before

        if not hit_cap and state.iteration_count > 0:
            if not (mode == "heating" and heated):
                stats = temp_mod.TemperatureStats(
                    sigma=state.f_sigma_last,
                    f_mean=state.f_mean_last,
                    f_mean_prev=state.f_mean_prev,
                )
                if config.cooling.kind == "huang" and state.trace is not None:
                    if stats.sigma > 0.0:
                        extras["t_next_uncapped"] = temp_mod.huang_uncapped(
                            state.T, stats.f_mean, stats.f_mean_prev, stats.sigma
                        )
                state.T = temp_mod.cool(schedule, state.T, state.k + 1, stats)
            state.k += 1
            if state.best_count > best_before:
                state.frozen_count = 0
            if state.renew / state.iteration_count < 1.0 / state.n_size:
                state.frozen_count += 1

        if state.trace is not None:
            acc = state.acc_rate_last if state.acc_rate_last is not None else 0.0
            state.trace.append(
                TracePoint(
                    k=state.k,
                    T=state.T,
                    iteration_count=state.iteration_count,
                    renew=state.renew,
                    f=state.f,
                    f_best=state.f_best,
                    acc_rate=acc,
                    extras=extras,
                )
            )

        if counter.count >= limit and config.max_evaluations > limit:
            # An embedding caller imposed a tighter budget than the config.
            stop_reason = "max_evaluations"
            break
        done, cause_out = stop_outer(state, config)
        if done:
            stop_reason = cause_out
            break
        if hit_cap:
            stop_reason = "max_evaluations"
            break

    if mode == "memory":
        state.x = np.array(state.x_best)
        state.f = state.f_best

    extra = {}
    if mode == "heating":
        extra["heat_events"] = heat_events
    if mode == "memory":
        extra["index_inner"] = state.index_inner
        extra["index_outer"] = state.index_outer

    return RunRecord(
        problem=problem.name,
        method=method,
        seed=config.seed,
        f_best=state.f_best,
        x_best=[float(v) for v in state.x_best],
        evaluations=counter.count - eval_start,
        outer_iterations=state.k,
        wall_seconds=time.perf_counter() - start,
        stop_reason=stop_reason,
        trace=state.trace,
        extra=extra,
    )


def run_sa(
    problem: problems_mod.Problem,
    config: AnnealConfig,
    x0=None,
    rng: np.random.Generator | None = None,
    counter: EvalCounter | None = None,
    eval_limit: int | None = None,
) -> RunRecord:
    """Run the annealing loop to completion and return its record.

    Deterministic: the same problem and config (including seed) produce
    the same record apart from wall time.  ``x0`` overrides the random
    initial point; ``rng``/``counter``/``eval_limit`` let other drivers
    embed annealing phases under a shared stream and budget.
    """
    return _run_core(
        problem, config, rng=rng, counter=counter, x0=x0, eval_limit=eval_limit, method="sa"
    )


def run_heating_annealing(
    problem: problems_mod.Problem,
    config: AnnealConfig,
    heat_factor: float = 2.0,
    x0=None,
) -> RunRecord:
    """Heating variant: start near zero temperature; accepted uphill moves
    multiply the temperature by ``heat_factor`` and suppress that outer
    step's cooling."""
    if heat_factor <= 1.0:
        raise ConfigError("heat_factor must exceed 1")
    return _run_core(problem, config, x0=x0, mode="heating", heat_factor=heat_factor, method="heating")


def run_memory_annealing(problem: problems_mod.Problem, config: AnnealConfig, x0=None) -> RunRecord:
    """Memory variant: same search as run_sa seed-for-seed, but tracks a
    no-improvement index and finishes on the incumbent."""
    return _run_core(problem, config, x0=x0, mode="memory", method="memory")


def run_annealing_then_local(
    problem: problems_mod.Problem,
    config: AnnealConfig,
    ls,
    x0=None,
) -> RunRecord:
    """Anneal to completion, then polish the incumbent with one local
    search; return the better of the two."""
    from . import local_search as ls_mod

    rng = np.random.default_rng(config.seed)
    counter = EvalCounter()
    rec = _run_core(problem, config, rng=rng, counter=counter, x0=x0, method="anneal_local")
    result = ls_mod.local_search(
        ls, problem, np.asarray(rec.x_best), rng=rng, evaluate_fn=counter.evaluate
    )
    f_best, x_best = rec.f_best, list(rec.x_best)
    if result.f_star < f_best:
        f_best, x_best = result.f_star, [float(v) for v in result.x_star]
    rec.extra["sa_f_best"] = rec.f_best
    rec.extra["local_f_best"] = result.f_star
    rec.f_best = f_best
    rec.x_best = x_best
    rec.evaluations = counter.count
    return rec


def run_local_then_annealing(
    problem: problems_mod.Problem,
    config: AnnealConfig,
    ls,
    snun: int = 1,
) -> RunRecord:
    """Alternate (local-search phase, annealing phase) ``snun`` times,
    keeping the incumbent across phase boundaries."""
    from . import local_search as ls_mod

    if snun < 1:
        raise ConfigError("snun must be >= 1")
    rng = np.random.default_rng(config.seed)
    counter = EvalCounter()
    start = time.perf_counter()

    x_best = problems_mod.random_feasible(problem, rng)
    f_best = counter.evaluate(problem, x_best)
    phases = []
    stop_reason = "phase_count"
    for m in range(snun):
        result = ls_mod.local_search(ls, problem, x_best, rng=rng, evaluate_fn=counter.evaluate)
        if result.f_star < f_best:
            f_best, x_best = result.f_star, np.asarray(result.x_star)
        rec = _run_core(
            problem, config, rng=rng, counter=counter, x0=x_best, method="local_anneal"
        )
        if rec.f_best < f_best:
            f_best, x_best = rec.f_best, np.asarray(rec.x_best)
        phases.append({"phase": m + 1, "local_f": result.f_star, "sa_f": rec.f_best})
        if (
            config.target_tolerance is not None
            and problem.known_optimum is not None
            and _target_gap(f_best, problem.known_optimum) <= config.target_tolerance
        ):
            stop_reason = "objective"
            break

    return RunRecord(
        problem=problem.name,
        method="local_anneal",
        seed=config.seed,
        f_best=f_best,
        x_best=[float(v) for v in x_best],
        evaluations=counter.count,
        outer_iterations=len(phases),
        wall_seconds=time.perf_counter() - start,
        stop_reason=stop_reason,
        extra={"phases": phases},
    )
