"""Method registry and documented default configurations.

``solve(problem, method, seed)`` runs any of the registered methods with
defaults that adapt only to the problem dimension.  These defaults are
the ones the benchmark harness and the acceptance suite use; override any
field through the ``overrides`` mapping (nested dicts mirror the config
dataclasses).
"""

from __future__ import annotations

from dataclasses import fields, replace
from typing import Callable

from . import problems as problems_mod
from .acceptance import AcceptanceSpec
from .engine import (
    AnnealConfig,
    RunRecord,
    run_annealing_then_local,
    run_heating_annealing,
    run_local_then_annealing,
    run_memory_annealing,
    run_sa,
)
from .errors import ConfigError
from .hybrid import EvoConfig, HybridConfig, run_hybrid_ls_sa, run_sa_sacep, run_sa_saes
from .local_search import LocalSearchSpec, local_search
from .moves import MoveSpec
from .temperature import InitTempSpec, ScheduleSpec

__all__ = [
    "METHODS",
    "default_anneal_config",
    "default_evo_config",
    "default_hybrid_config",
    "default_local_spec",
    "make_solver",
    "solve",
]

METHODS = (
    "sa",
    "heating",
    "memory",
    "anneal-local",
    "local-anneal",
    "hybrid",
    "sa-saes",
    "sa-sacep",
    "saes",
    "sacep",
    "nelder-mead",
    "sds",
)


def _apply_overrides(cfg, overrides: dict | None):
    if not overrides:
        return cfg
    names = {f.name for f in fields(cfg)}
    unknown = set(overrides) - names
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    merged = {}
    for key, value in overrides.items():
        current = getattr(cfg, key)
        if isinstance(value, dict) and hasattr(current, "__dataclass_fields__"):
            merged[key] = _apply_overrides(current, value)
        else:
            merged[key] = value
    return replace(cfg, **merged)


def default_anneal_config(problem: problems_mod.Problem, seed: int = 0, **overrides) -> AnnealConfig:
    """Standalone annealing defaults: single-coordinate uniform moves,
    geometric cooling at 0.95, a spread-based initial temperature, and
    dimension-scaled inner loops."""
    n = problem.n
    cfg = AnnealConfig(
        cooling=ScheduleSpec("geometric", alpha=0.95),
        move=MoveSpec("single_coordinate"),
        acceptance=AcceptanceSpec("metropolis"),
        init_temp=InitTempSpec("maxdiff", p_r=0.9, sample_count=32),
        n_size=100 * n,
        n_factor=10,
        markov_cap=200 * n,
        frozen_limit=12,
        t0_fallback=1.0,
        target_tolerance=1e-4,
        max_outer=200,
        max_evaluations=200_000,
        seed=seed,
    )
    return _apply_overrides(cfg, overrides) if overrides else cfg


def default_local_spec(**overrides) -> LocalSearchSpec:
    spec = LocalSearchSpec(kind="nelder_mead", tol=1e-10, initial_simplex_scale=0.05)
    return _apply_overrides(spec, overrides) if overrides else spec


def default_hybrid_config(problem: problems_mod.Problem, seed: int = 0, **overrides) -> HybridConfig:
    """Defaults for the local-search/annealing alternation.

    The annealing phase uses the mixed resampling move (one coordinate, a
    random subset, or the whole vector) so each phase can escape the
    current basin; the polishing is left to the local phases.  Budgets
    scale with dimension and the whole run is capped at 500k evaluations.
    """
    n = problem.n
    inner = 50 * max(4, n)
    sa = AnnealConfig(
        cooling=ScheduleSpec("geometric", alpha=0.85),
        move=MoveSpec("random_subset"),
        acceptance=AcceptanceSpec("metropolis"),
        init_temp=InitTempSpec("maxdiff", p_r=0.5, sample_count=24),
        n_size=100 * n,
        n_factor=10,
        markov_cap=inner,
        frozen_limit=15,
        t0_fallback=1.0,
        target_tolerance=1e-4,
        max_outer=100,
        max_evaluations=100 * inner + 200,
        seed=seed,
    )
    ls = LocalSearchSpec(
        kind="nelder_mead",
        tol=1e-12,
        max_iterations=400 * n,
        initial_simplex_scale=0.05,
    )
    cfg = HybridConfig(sa=sa, ls=ls, improvement_threshold=0.001, max_rounds=20, max_evaluations=500_000)
    return _apply_overrides(cfg, overrides) if overrides else cfg


def default_evo_config(problem: problems_mod.Problem, seed: int = 0, with_sa: bool = True, **overrides) -> EvoConfig:
    """Defaults for the evolution strategies.

    The embedded annealing budget is small (five temperatures of 10n
    proposals with adaptive step lengths) so refinement stays cheap next
    to the population work.
    """
    n = problem.n
    sa_budget = None
    if with_sa:
        sa_budget = AnnealConfig(
            cooling=ScheduleSpec("geometric", alpha=0.75),
            move=MoveSpec("single_coordinate"),
            acceptance=AcceptanceSpec("metropolis"),
            init_temp=InitTempSpec("maxdiff", p_r=0.5, sample_count=8),
            markov_cap=10 * n,
            max_outer=5,
            frozen_limit=5,
            t0_fallback=1.0,
            target_tolerance=1e-4,
            max_evaluations=8 + 50 * n,
            seed=seed,
        )
    cfg = EvoConfig(
        mu=10,
        lambda_=70,
        zeta=10,
        sa_budget=sa_budget,
        generations=10_000,
        max_evaluations=100_000,
        target_tolerance=1e-4,
        seed=seed,
    )
    return _apply_overrides(cfg, overrides) if overrides else cfg


def _local_record(problem, spec, seed) -> RunRecord:
    import time

    import numpy as np

    rng = np.random.default_rng(seed)
    from .engine import EvalCounter

    counter = EvalCounter()
    start = time.perf_counter()
    x0 = problems_mod.random_feasible(problem, rng)
    result = local_search(spec, problem, x0, rng=rng, evaluate_fn=counter.evaluate)
    return RunRecord(
        problem=problem.name,
        method=spec.kind,
        seed=seed,
        f_best=result.f_star,
        x_best=[float(v) for v in result.x_star],
        evaluations=counter.count,
        outer_iterations=result.iterations,
        wall_seconds=time.perf_counter() - start,
        stop_reason=result.reason or ("converged" if result.converged else "stopped"),
    )


def solve(
    problem: problems_mod.Problem,
    method: str,
    seed: int = 0,
    overrides: dict | None = None,
) -> RunRecord:
    """Run one method on one problem with the documented defaults."""
    overrides = overrides or {}
    if method == "sa":
        return run_sa(problem, default_anneal_config(problem, seed, **overrides.get("sa", {})))
    if method == "heating":
        heat = overrides.get("heat_factor", 2.0)
        return run_heating_annealing(
            problem, default_anneal_config(problem, seed, **overrides.get("sa", {})), heat_factor=heat
        )
    if method == "memory":
        return run_memory_annealing(problem, default_anneal_config(problem, seed, **overrides.get("sa", {})))
    if method == "anneal-local":
        return run_annealing_then_local(
            problem,
            default_anneal_config(problem, seed, **overrides.get("sa", {})),
            default_local_spec(**overrides.get("local_search", {})),
        )
    if method == "local-anneal":
        return run_local_then_annealing(
            problem,
            default_anneal_config(problem, seed, **overrides.get("sa", {})),
            default_local_spec(**overrides.get("local_search", {})),
            snun=overrides.get("snun", 2),
        )
    if method == "hybrid":
        return run_hybrid_ls_sa(problem, default_hybrid_config(problem, seed, **overrides.get("hybrid", {})))
    if method in ("sa-saes", "saes"):
        cfg = default_evo_config(problem, seed, with_sa=method == "sa-saes", **overrides.get("evo", {}))
        return run_sa_saes(problem, cfg)
    if method in ("sa-sacep", "sacep"):
        cfg = default_evo_config(problem, seed, with_sa=method == "sa-sacep", **overrides.get("evo", {}))
        return run_sa_sacep(problem, cfg)
    if method == "nelder-mead":
        return _local_record(problem, default_local_spec(**overrides.get("local_search", {})), seed)
    if method == "sds":
        spec = default_local_spec(**{"kind": "sds", **overrides.get("local_search", {})})
        return _local_record(problem, spec, seed)
    raise ConfigError(f"unknown method {method!r}; choose from {METHODS}")


def make_solver(method: str, overrides: dict | None = None) -> Callable[[problems_mod.Problem, int], RunRecord]:
    """A picklable (problem, seed) -> RunRecord callable for bench runs."""
    return _Solver(method, overrides)


class _Solver:
    def __init__(self, method, overrides):
        if method not in METHODS:
            raise ConfigError(f"unknown method {method!r}; choose from {METHODS}")
        self.method = method
        self.overrides = overrides or {}

    def __call__(self, problem, seed):
        return solve(problem, self.method, seed, self.overrides)
