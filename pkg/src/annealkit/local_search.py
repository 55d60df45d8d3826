"""Derivative-free local searchers.

Three simplex methods share one entry point: the classic
reflect/expand/contract/shrink simplex descent, a reflect-shrink variant
that tries reflecting each of the n worst vertices before shrinking, and
a thermalized version of the latter that ranks vertices under random
fluctuations proportional to a temperature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import problems as problems_mod
from .errors import ConfigError

__all__ = ["LocalResult", "LocalSearchSpec", "local_search", "trial_statistics"]

LOCAL_SEARCH_KINDS = ("nelder_mead", "sds", "sds_thermal")

_Z_FLOOR = 1e-12


@dataclass(frozen=True)
class LocalSearchSpec:
    """Simplex-search configuration.

    Coefficients follow the usual admissible ranges (reflect > 0,
    expand > 1, contract and shrink in (0, 1)).  The initial simplex puts
    one vertex at the start point and offsets each axis by
    ``initial_simplex_scale`` times the box width.  ``k_b`` times
    ``temperature`` scales the vertex-ranking fluctuation of the
    thermalized variant.
    """

    kind: str = "nelder_mead"
    reflect: float = 1.0
    expand: float = 2.0
    contract: float = 0.5
    shrink: float = 0.5
    n_worst_reflections: int | None = None
    k_b: float = 1.0
    temperature: float = 0.0
    tol: float = 1e-10
    max_iterations: int | None = None
    initial_simplex_scale: float = 0.05

    def __post_init__(self):
        if self.kind not in LOCAL_SEARCH_KINDS:
            raise ConfigError(f"unknown local search kind {self.kind!r}")
        if self.reflect <= 0.0:
            raise ConfigError("reflect coefficient must be positive")
        if self.expand <= 1.0:
            raise ConfigError("expand coefficient must exceed 1")
        if not 0.0 < self.contract < 1.0:
            raise ConfigError("contract coefficient must lie in (0, 1)")
        if not 0.0 < self.shrink < 1.0:
            raise ConfigError("shrink coefficient must lie in (0, 1)")
        if self.tol <= 0.0:
            raise ConfigError("tol must be positive")
        if self.max_iterations is not None and self.max_iterations < 1:
            raise ConfigError("max_iterations must be positive")
        if self.initial_simplex_scale <= 0.0:
            raise ConfigError("initial_simplex_scale must be positive")
        if self.n_worst_reflections is not None and self.n_worst_reflections < 1:
            raise ConfigError("n_worst_reflections must be positive")
        if self.temperature < 0.0:
            raise ConfigError("temperature must be >= 0")


@dataclass
class LocalResult:
    x_star: np.ndarray
    f_star: float
    evaluations: int
    converged: bool
    iterations: int
    reason: str = ""
    extra: dict = field(default_factory=dict)


class _Budget:
    """Evaluation bookkeeping for one search, with an optional cap."""

    def __init__(self, problem, evaluate_fn, max_evaluations):
        self.problem = problem
        self._ev = evaluate_fn if evaluate_fn is not None else problems_mod.evaluate
        self.max_evaluations = max_evaluations
        self.used = 0

    def exhausted(self) -> bool:
        return self.max_evaluations is not None and self.used >= self.max_evaluations

    def __call__(self, x) -> float:
        self.used += 1
        return self._ev(self.problem, x)


def _initial_simplex(problem, x0, scale):
    n = problem.n
    widths = problem.region.width if isinstance(problem.region, problems_mod.Box) else np.full(n, 1.0)
    vertices = [np.array(x0, dtype=float)]
    for i in range(n):
        v = np.array(x0, dtype=float)
        step = scale * widths[i]
        v[i] += step
        v = problems_mod.repair(problem, v)
        if np.allclose(v, x0):
            v = np.array(x0, dtype=float)
            v[i] -= step
            v = problems_mod.repair(problem, v)
        vertices.append(v)
    return vertices


def _simplex_diameter(vertices) -> float:
    base = vertices[0]
    return max(float(np.max(np.abs(v - base))) for v in vertices[1:])


def local_search(
    spec: LocalSearchSpec,
    problem: problems_mod.Problem,
    x0,
    rng: np.random.Generator | None = None,
    evaluate_fn=None,
    max_evaluations: int | None = None,
) -> LocalResult:
    """Minimize from ``x0`` (which must be feasible) and return the best
    vertex found.  Never returns a point worse than the start."""
    x0 = np.asarray(x0, dtype=float)
    if not problem.region.contains(x0, atol=1e-9):
        raise ValueError("local search needs a feasible start point")
    budget = _Budget(problem, evaluate_fn, max_evaluations)
    if spec.kind == "nelder_mead":
        return _nelder_mead(spec, problem, x0, budget)
    if rng is None:
        rng = np.random.default_rng(0)
    return _sds(spec, problem, x0, budget, rng)


def _nelder_mead(spec, problem, x0, budget) -> LocalResult:
    n = problem.n
    max_iter = spec.max_iterations if spec.max_iterations is not None else 200 * n
    vertices = _initial_simplex(problem, x0, spec.initial_simplex_scale)
    values = [budget(v) for v in vertices]
    best_x, best_f = min(zip(vertices, values), key=lambda t: t[1])
    best_x = np.array(best_x)
    restarted = False
    iterations = 0
    converged = False
    reason = "max_iterations"

    while iterations < max_iter:
        iterations += 1
        order = np.argsort(values, kind="stable")
        vertices = [vertices[i] for i in order]
        values = [values[i] for i in order]
        if values[0] < best_f:
            best_f, best_x = values[0], np.array(vertices[0])

        if values[-1] - values[0] <= spec.tol:
            converged = True
            reason = "f_spread"
            break
        if budget.exhausted():
            reason = "max_evaluations"
            break
        if _simplex_diameter(vertices) < 1e-12:
            # Repair clipping can flatten the simplex at a boundary; rebuild
            # it once at the best vertex before giving up.
            if restarted:
                reason = "degenerate"
                break
            restarted = True
            vertices = _initial_simplex(problem, best_x, spec.initial_simplex_scale)
            values = [budget(v) for v in vertices]
            continue

        centroid = np.mean(vertices[:-1], axis=0)
        worst = vertices[-1]
        x_r = problems_mod.repair(problem, centroid + spec.reflect * (centroid - worst))
        f_r = budget(x_r)

        if f_r < values[0]:
            x_e = problems_mod.repair(problem, centroid + spec.expand * (centroid - worst))
            f_e = budget(x_e)
            if f_e < f_r:
                vertices[-1], values[-1] = x_e, f_e
            else:
                vertices[-1], values[-1] = x_r, f_r
        elif f_r < values[-2]:
            vertices[-1], values[-1] = x_r, f_r
        else:
            if f_r < values[-1]:
                x_c = problems_mod.repair(problem, centroid + spec.contract * (x_r - centroid))
            else:
                x_c = problems_mod.repair(problem, centroid + spec.contract * (worst - centroid))
            f_c = budget(x_c)
            if f_c < min(f_r, values[-1]):
                vertices[-1], values[-1] = x_c, f_c
            else:
                base = vertices[0]
                for i in range(1, n + 1):
                    vertices[i] = problems_mod.repair(
                        problem, base + spec.shrink * (vertices[i] - base)
                    )
                    values[i] = budget(vertices[i])

    order = np.argsort(values, kind="stable")
    if values[order[0]] < best_f:
        best_f, best_x = values[order[0]], np.array(vertices[order[0]])
    return LocalResult(
        x_star=best_x,
        f_star=best_f,
        evaluations=budget.used,
        converged=converged,
        iterations=iterations,
        reason=reason,
    )


def _sds(spec, problem, x0, budget, rng) -> LocalResult:
    """Reflect-shrink simplex: reflect each of the n worst vertices through
    the centroid of the others; shrink everything toward the best vertex
    only when every reflection of the pass failed."""
    n = problem.n
    thermal = spec.kind == "sds_thermal"
    fluctuation = spec.k_b * spec.temperature
    max_iter = spec.max_iterations if spec.max_iterations is not None else 200 * n
    n_reflections = spec.n_worst_reflections if spec.n_worst_reflections is not None else n

    vertices = _initial_simplex(problem, x0, spec.initial_simplex_scale)
    values = [budget(v) for v in vertices]
    best_x, best_f = min(zip(vertices, values), key=lambda t: t[1])
    best_x = np.array(best_x)

    iterations = 0
    converged = False
    reason = "max_iterations"
    shrinks = 0
    reflections = 0
    failed_before_shrink = []

    while iterations < max_iter:
        iterations += 1
        keys = list(values)
        if thermal:
            # Rank under a random downward fluctuation per vertex.
            zs = rng.uniform(_Z_FLOOR, 1.0, size=len(vertices))
            keys = [v + fluctuation * math.log(z) for v, z in zip(values, zs)]
        order = np.argsort(keys, kind="stable")
        vertices = [vertices[i] for i in order]
        values = [values[i] for i in order]
        if values[0] < best_f:
            best_f, best_x = values[0], np.array(vertices[0])

        if max(values) - min(values) <= spec.tol:
            converged = True
            reason = "f_spread"
            break
        if budget.exhausted():
            reason = "max_evaluations"
            break

        improved = False
        failures = 0
        for pos in range(len(vertices) - 1, max(0, len(vertices) - 1 - n_reflections), -1):
            others = vertices[:pos] + vertices[pos + 1 :]
            centroid = np.mean(others, axis=0)
            x_r = problems_mod.repair(problem, centroid + (centroid - vertices[pos]))
            f_r = budget(x_r)
            reflections += 1
            if f_r < values[pos]:
                vertices[pos], values[pos] = x_r, f_r
                if f_r < best_f:
                    best_f, best_x = f_r, np.array(x_r)
                improved = True
                break
            failures += 1
            if budget.exhausted():
                break

        if not improved and not budget.exhausted():
            failed_before_shrink.append(failures)
            shrinks += 1
            base = vertices[0]
            for i in range(1, len(vertices)):
                vertices[i] = problems_mod.repair(
                    problem, base + spec.shrink * (vertices[i] - base)
                )
                values[i] = budget(vertices[i])

    order = np.argsort(values, kind="stable")
    if values[order[0]] < best_f:
        best_f, best_x = values[order[0]], np.array(vertices[order[0]])
    return LocalResult(
        x_star=best_x,
        f_star=best_f,
        evaluations=budget.used,
        converged=converged,
        iterations=iterations,
        reason=reason,
        extra={
            "shrinks": shrinks,
            "reflections": reflections,
            "failed_reflections_before_shrink": failed_before_shrink,
        },
    )


def trial_statistics(
    spec: LocalSearchSpec,
    problem: problems_mod.Problem,
    starts: int,
    seed: int = 0,
    match_delta: float = 1e-4,
) -> tuple[float, float, float, float]:
    """Run the searcher from ``starts`` random feasible points and aggregate
    the results: (best value, frequency of matching the best, mean, sample
    variance)."""
    from .bench import aggregate

    if starts < 1:
        raise ValueError("starts must be >= 1")
    rng = np.random.default_rng(seed)
    finals = []
    for _ in range(starts):
        x0 = problems_mod.random_feasible(problem, rng)
        result = local_search(spec, problem, x0, rng=rng)
        finals.append(result.f_star)
    return aggregate(finals, match_delta)
