"""Hybrid drivers: local-search/annealing alternation and annealing-
enhanced evolution strategies.

The alternation runs a local-search phase from the incumbent, then a full
annealing phase from the local result, and keeps alternating while the
annealing phase beats the local result by more than a threshold.

The evolution strategies maintain (x, sigma) individuals with log-normal
self-adaptation of the per-coordinate step sizes.  Annealing refines every
parent of the initial generation; in later generations it refines the best
selected individual (optionally every parent, matching the stricter loop).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from . import problems as problems_mod
from .engine import AnnealConfig, EvalCounter, RunRecord, _run_core, _target_gap
from .errors import ConfigError
from .local_search import LocalSearchSpec, local_search

__all__ = [
    "EvoConfig",
    "HybridConfig",
    "Individual",
    "mutate",
    "recombine_discrete",
    "run_hybrid_ls_sa",
    "run_sa_sacep",
    "run_sa_saes",
    "self_adaptation_rates",
]


# ---------------------------------------------------------------------------
# Local-search / annealing alternation
# ---------------------------------------------------------------------------


@dataclass
class HybridConfig:
    """Alternation parameters.

    ``improvement_threshold`` is the margin (stored as a magnitude) by
    which an annealing phase must beat the preceding local-search result
    for another round to run.  ``max_evaluations`` caps the whole run;
    each annealing phase is additionally capped by ``sa.max_evaluations``.
    """

    sa: AnnealConfig
    ls: LocalSearchSpec = field(default_factory=LocalSearchSpec)
    improvement_threshold: float = 0.001
    max_rounds: int = 20
    max_evaluations: int | None = None

    def __post_init__(self):
        if self.improvement_threshold <= 0.0:
            raise ConfigError("improvement_threshold must be positive")
        if self.max_rounds < 1:
            raise ConfigError("max_rounds must be >= 1")
        if self.max_evaluations is not None and self.max_evaluations < 1:
            raise ConfigError("max_evaluations must be positive")


def run_hybrid_ls_sa(problem: problems_mod.Problem, config: HybridConfig) -> RunRecord:
    """Alternate local search and annealing until the annealing phase stops
    improving on the local result (or a cap binds); return the incumbent."""
    rng = np.random.default_rng(config.sa.seed)
    counter = EvalCounter()
    total_limit = config.max_evaluations if config.max_evaluations is not None else (
        config.max_rounds * (config.sa.max_evaluations + 10_000 * problem.n)
    )
    start = time.perf_counter()

    x = problems_mod.random_feasible(problem, rng)
    f = counter.evaluate(problem, x)
    x_best, f_best = np.array(x), f
    rounds = []
    stop_reason = "no_improvement"

    for round_no in range(1, config.max_rounds + 1):
        remaining = total_limit - counter.count
        if remaining <= 0:
            stop_reason = "max_evaluations"
            break

        result = local_search(
            config.ls, problem, x_best, rng=rng,
            evaluate_fn=counter.evaluate, max_evaluations=remaining,
        )
        f_best_local = result.f_star
        x = np.asarray(result.x_star)
        if f_best_local < f_best:
            x_best, f_best = np.array(x), f_best_local

        remaining = min(total_limit, counter.count + config.sa.max_evaluations)
        sa_rec = _run_core(
            problem, config.sa, rng=rng, counter=counter, x0=x,
            eval_limit=remaining, method="hybrid",
        )
        if sa_rec.f_best < f_best:
            x_best, f_best = np.asarray(sa_rec.x_best), sa_rec.f_best

        rounds.append(
            {
                "round": round_no,
                "f_local": f_best_local,
                "f_after_sa": f_best,
                "evaluations": counter.count,
            }
        )

        if (
            config.sa.target_tolerance is not None
            and problem.known_optimum is not None
            and _target_gap(f_best, problem.known_optimum) <= config.sa.target_tolerance
        ):
            stop_reason = "objective"
            break
        if not (f_best - f_best_local <= -config.improvement_threshold):
            stop_reason = "no_improvement"
            break
        if round_no == config.max_rounds:
            stop_reason = "max_rounds"

    return RunRecord(
        problem=problem.name,
        method="hybrid",
        seed=config.sa.seed,
        f_best=f_best,
        x_best=[float(v) for v in x_best],
        evaluations=counter.count,
        outer_iterations=len(rounds),
        wall_seconds=time.perf_counter() - start,
        stop_reason=stop_reason,
        extra={"rounds": rounds},
    )


# ---------------------------------------------------------------------------
# Evolution strategies
# ---------------------------------------------------------------------------


@dataclass
class Individual:
    """(x, sigma) pair with its objective value."""

    x: np.ndarray
    sigma: np.ndarray
    fitness: float = math.nan

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.sigma = np.asarray(self.sigma, dtype=float)
        if self.x.shape != self.sigma.shape:
            raise ValueError("x and sigma must have the same shape")
        if not np.all(self.sigma > 0.0):
            raise ValueError("step sizes must all be positive")


def self_adaptation_rates(n: int) -> tuple[float, float]:
    """Default log-normal adaptation rates (tau, tau_prime) for dimension n:
    1/sqrt(2*sqrt(n)) and 1/sqrt(2*n)."""
    if n < 1:
        raise ValueError("dimension must be positive")
    return 1.0 / math.sqrt(2.0 * math.sqrt(n)), 1.0 / math.sqrt(2.0 * n)


@dataclass
class EvoConfig:
    """Population parameters for the two strategies.

    ``sa_budget`` is the annealing configuration used to refine
    individuals; None disables refinement entirely (the plain baseline).
    ``sa_parents_once`` keeps per-parent refinement to generation 0 and
    refines only the best selected individual afterwards; switching it off
    re-refines every parent each generation.
    """

    mu: int = 10
    lambda_: int = 70
    zeta: int = 10
    tau: float | None = None
    tau_prime: float | None = None
    sigma0: float | None = None
    sa_budget: AnnealConfig | None = None
    generations: int = 200
    max_evaluations: int = 100_000
    target_tolerance: float | None = None
    sa_parents_once: bool = True
    seed: int = 0
    record_population: bool = False

    def __post_init__(self):
        if self.mu < 2:
            raise ConfigError("mu must be >= 2 (recombination needs two parents)")
        if self.lambda_ < self.mu:
            raise ConfigError("lambda must be >= mu")
        if self.zeta < 1:
            raise ConfigError("zeta must be >= 1")
        if self.tau is not None and self.tau <= 0.0:
            raise ConfigError("tau must be positive")
        if self.tau_prime is not None and self.tau_prime <= 0.0:
            raise ConfigError("tau_prime must be positive")
        if self.sigma0 is not None and self.sigma0 <= 0.0:
            raise ConfigError("sigma0 must be positive")
        if self.generations < 1:
            raise ConfigError("generations must be >= 1")
        if self.max_evaluations < 1:
            raise ConfigError("max_evaluations must be positive")


def mutate(
    ind: Individual,
    tau: float,
    tau_prime: float,
    rng: np.random.Generator,
    problem: problems_mod.Problem | None = None,
) -> Individual:
    """Log-normal self-adaptive mutation.

    Draws one global normal for the individual and one normal per
    coordinate; the offspring point uses the pre-mutation step sizes and
    is repaired to feasibility, while the step sizes are rescaled by
    exp(tau_prime * global + tau * per-coordinate).
    """
    n_global = float(rng.standard_normal())
    n_each = rng.standard_normal(ind.x.size)
    x_new = ind.x + ind.sigma * n_each
    sigma_new = ind.sigma * np.exp(tau_prime * n_global + tau * n_each)
    if problem is not None:
        x_new = problems_mod.repair(problem, x_new)
    return Individual(x=x_new, sigma=sigma_new)


def recombine_discrete(p1: Individual, p2: Individual, rng: np.random.Generator) -> Individual:
    """Discrete recombination: per coordinate a fair coin picks which parent
    supplies the (x_i, sigma_i) pair; the pair always travels together."""
    if p1.x.size != p2.x.size:
        raise ValueError("parents must have the same dimension")
    coins = rng.integers(0, 2, size=p1.x.size) == 0
    x = np.where(coins, p1.x, p2.x)
    sigma = np.where(coins, p1.sigma, p2.sigma)
    return Individual(x=x, sigma=sigma)


def _initial_population(problem, config, rng, counter):
    if config.sigma0 is not None:
        sigma0 = np.full(problem.n, config.sigma0)
    elif isinstance(problem.region, problems_mod.Box):
        sigma0 = 0.1 * problem.region.width
    else:
        sigma0 = np.full(problem.n, 0.1)
    population = []
    for _ in range(config.mu):
        x = problems_mod.random_feasible(problem, rng)
        ind = Individual(x=x, sigma=sigma0.copy(), fitness=counter.evaluate(problem, x))
        population.append(ind)
    return population


def _refine(ind, problem, config, rng, counter, total_limit):
    budget = config.sa_budget
    limit = min(total_limit, counter.count + budget.max_evaluations)
    if limit <= counter.count:
        return
    rec = _run_core(
        problem, budget, rng=rng, counter=counter, x0=ind.x, eval_limit=limit, method="sa"
    )
    if rec.f_best <= ind.fitness:
        ind.x = np.asarray(rec.x_best)
        ind.fitness = rec.f_best


def _evo_setup(problem, config):
    tau, tau_prime = self_adaptation_rates(problem.n)
    if config.tau is not None:
        tau = config.tau
    if config.tau_prime is not None:
        tau_prime = config.tau_prime
    return tau, tau_prime


def _population_snapshot(generation, population):
    return [
        {"generation": generation, "index": i, "f": ind.fitness, "mean_sigma": float(ind.sigma.mean())}
        for i, ind in enumerate(population)
    ]


def _evo_record(problem, config, method, f_best, x_best, counter, generations, stop_reason, start, snapshots):
    extra = {}
    if snapshots is not None:
        extra["population"] = snapshots
    return RunRecord(
        problem=problem.name,
        method=method,
        seed=config.seed,
        f_best=f_best,
        x_best=[float(v) for v in x_best],
        evaluations=counter.count,
        outer_iterations=generations,
        wall_seconds=time.perf_counter() - start,
        stop_reason=stop_reason,
        extra=extra,
    )


def _target_reached(config, problem, f_best):
    return (
        config.target_tolerance is not None
        and problem.known_optimum is not None
        and _target_gap(f_best, problem.known_optimum) <= config.target_tolerance
    )


def run_sa_saes(problem: problems_mod.Problem, config: EvoConfig) -> RunRecord:
    """(mu + lambda) self-adaptive evolution strategy with annealing
    refinement: every parent of generation 0, then the best selected
    individual each generation."""
    rng = np.random.default_rng(config.seed)
    counter = EvalCounter()
    start = time.perf_counter()
    tau, tau_prime = _evo_setup(problem, config)

    parents = _initial_population(problem, config, rng, counter)
    if config.sa_budget is not None:
        for ind in parents:
            _refine(ind, problem, config, rng, counter, config.max_evaluations)
    parents.sort(key=lambda ind: ind.fitness)
    best = min(parents, key=lambda ind: ind.fitness)
    f_best, x_best = best.fitness, np.array(best.x)

    snapshots = _population_snapshot(0, parents) if config.record_population else None
    method = "sa_saes" if config.sa_budget is not None else "saes"
    stop_reason = "generations"
    generation = 0

    for generation in range(1, config.generations + 1):
        if counter.count >= config.max_evaluations:
            stop_reason = "max_evaluations"
            generation -= 1
            break
        children = []
        while len(children) < config.lambda_ and counter.count < config.max_evaluations:
            i, j = rng.choice(config.mu, size=2, replace=False)
            child = mutate(recombine_discrete(parents[i], parents[j], rng), tau, tau_prime, rng, problem)
            child.fitness = counter.evaluate(problem, child.x)
            if child.fitness < f_best:
                f_best, x_best = child.fitness, np.array(child.x)
            children.append(child)

        pool = parents + children
        pool.sort(key=lambda ind: ind.fitness)
        parents = pool[: config.mu]
        if config.sa_budget is not None:
            _refine(parents[0], problem, config, rng, counter, config.max_evaluations)
            parents.sort(key=lambda ind: ind.fitness)
        if parents[0].fitness < f_best:
            f_best, x_best = parents[0].fitness, np.array(parents[0].x)

        if config.record_population:
            snapshots.extend(_population_snapshot(generation, parents))
        if _target_reached(config, problem, f_best):
            stop_reason = "objective"
            break
        if counter.count >= config.max_evaluations:
            stop_reason = "max_evaluations"
            break

    return _evo_record(
        problem, config, method, f_best, x_best, counter, generation, stop_reason, start, snapshots
    )


def run_sa_sacep(problem: problems_mod.Problem, config: EvoConfig) -> RunRecord:
    """Tournament-selection evolutionary programming with annealing
    refinement: one mutated child per parent, win-count tournament over
    the joint pool, truncation by wins."""
    rng = np.random.default_rng(config.seed)
    counter = EvalCounter()
    start = time.perf_counter()
    tau, tau_prime = _evo_setup(problem, config)

    parents = _initial_population(problem, config, rng, counter)
    if config.sa_budget is not None:
        for ind in parents:
            _refine(ind, problem, config, rng, counter, config.max_evaluations)
    best = min(parents, key=lambda ind: ind.fitness)
    f_best, x_best = best.fitness, np.array(best.x)

    snapshots = _population_snapshot(0, parents) if config.record_population else None
    method = "sa_sacep" if config.sa_budget is not None else "sacep"
    stop_reason = "generations"
    generation = 0

    for generation in range(1, config.generations + 1):
        if counter.count >= config.max_evaluations:
            stop_reason = "max_evaluations"
            generation -= 1
            break
        if config.sa_budget is not None and not config.sa_parents_once:
            for ind in parents:
                _refine(ind, problem, config, rng, counter, config.max_evaluations)

        children = []
        for parent in parents:
            if counter.count >= config.max_evaluations:
                break
            child = mutate(parent, tau, tau_prime, rng, problem)
            child.fitness = counter.evaluate(problem, child.x)
            if child.fitness < f_best:
                f_best, x_best = child.fitness, np.array(child.x)
            children.append(child)

        pool = parents + children
        wins = []
        for ind in pool:
            opponents = rng.integers(0, len(pool), size=config.zeta)
            wins.append(int(sum(1 for j in opponents if ind.fitness < pool[j].fitness)))
        order = sorted(range(len(pool)), key=lambda i: (-wins[i], pool[i].fitness, i))
        parents = [pool[i] for i in order[: config.mu]]
        if config.sa_budget is not None:
            best_idx = min(range(len(parents)), key=lambda i: parents[i].fitness)
            _refine(parents[best_idx], problem, config, rng, counter, config.max_evaluations)
        gen_best = min(parents, key=lambda ind: ind.fitness)
        if gen_best.fitness < f_best:
            f_best, x_best = gen_best.fitness, np.array(gen_best.x)

        if config.record_population:
            snapshots.extend(_population_snapshot(generation, parents))
        if _target_reached(config, problem, f_best):
            stop_reason = "objective"
            break
        if counter.count >= config.max_evaluations:
            stop_reason = "max_evaluations"
            break

    return _evo_record(
        problem, config, method, f_best, x_best, counter, generation, stop_reason, start, snapshots
    )
