"""Optimization problems: feasible regions, the benchmark suite, and
objective-value utilities.

A :class:`Problem` bundles a deterministic objective with its feasible
region (axis-aligned box or unit simplex), dimension, and the best known
objective value / minimizer where one is published.  The standard suite
covers the classic global-optimization test functions (Ackley, Branin,
Shekel, Shubert, ...) with their conventional bounds.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Callable, Sequence

import numpy as np

from .errors import NonFiniteObjectiveError

__all__ = [
    "Affine",
    "Box",
    "Problem",
    "SuiteEntry",
    "UnitSimplex",
    "delta",
    "evaluate",
    "fitness_transform",
    "get_problem",
    "make_standard_suite",
    "problem_names",
    "random_feasible",
    "repair",
    "suite_catalog",
]


# ---------------------------------------------------------------------------
# Feasible regions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Box:
    """Axis-aligned box {x : lower <= x <= upper}, strict per-axis width."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if lower.shape != upper.shape or lower.ndim != 1:
            raise ValueError("box bounds must be 1-d arrays of equal length")
        if not np.all(lower < upper):
            raise ValueError("box requires lower_i < upper_i for every axis")

    @property
    def n(self) -> int:
        return self.lower.size

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def contains(self, x, atol: float = 0.0) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= self.lower - atol) and np.all(x <= self.upper + atol))

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(self.lower, self.upper)

    def repair(self, x) -> np.ndarray:
        return np.clip(np.asarray(x, dtype=float), self.lower, self.upper)


@dataclass(frozen=True)
class UnitSimplex:
    """Unit simplex {x : x_i >= 0, sum(x) = 1}."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("unit simplex needs dimension >= 2")

    def contains(self, x, atol: float = 1e-9) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= -atol) and abs(float(x.sum()) - 1.0) <= atol)

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        return rng.dirichlet(np.ones(self.n))

    def repair(self, x) -> np.ndarray:
        x = np.maximum(np.asarray(x, dtype=float), 0.0)
        total = float(x.sum())
        if total <= 0.0:
            return np.full(self.n, 1.0 / self.n)
        return x / total


Region = Box | UnitSimplex


@dataclass(frozen=True)
class Affine:
    """Descriptor of an affine objective f(x) = a.x + b, enabling
    incremental cost differences a.(x' - x)."""

    a: np.ndarray
    b: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "a", np.asarray(self.a, dtype=float))
        object.__setattr__(self, "b", float(self.b))


# ---------------------------------------------------------------------------
# Problem
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Problem:
    """A box- or simplex-constrained minimization problem.

    The objective must be pure: the same input always yields the same
    float.  ``known_optimum`` and ``known_minimizer`` are optional
    published reference values used by benchmarks and stopping rules.
    """

    name: str
    n: int
    region: Region
    objective: Callable[[np.ndarray], float]
    known_optimum: float | None = None
    known_minimizer: np.ndarray | None = None
    incremental: Affine | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be positive")
        region_n = self.region.n
        if region_n != self.n:
            raise ValueError(f"region dimension {region_n} != problem dimension {self.n}")
        if self.known_minimizer is not None:
            object.__setattr__(
                self, "known_minimizer", np.asarray(self.known_minimizer, dtype=float)
            )
            if self.known_minimizer.size != self.n:
                raise ValueError("known_minimizer has wrong length")
        if self.incremental is not None:
            if self.incremental.a.size != self.n:
                raise ValueError("incremental coefficient row has wrong length")
            self._check_incremental()

    def _check_incremental(self):
        # Spot-check that the declared affine form matches the objective.
        probes = [self._probe_point(t) for t in (0.0, 0.5, 1.0)]
        for x in probes:
            expected = float(np.dot(self.incremental.a, x) + self.incremental.b)
            got = float(self.objective(x))
            if abs(expected - got) > 1e-9 * max(1.0, abs(expected)):
                raise ValueError(
                    "incremental descriptor disagrees with the objective at "
                    f"x={x!r}: {expected} vs {got}"
                )

    def _probe_point(self, t: float) -> np.ndarray:
        if isinstance(self.region, Box):
            return self.region.lower + t * self.region.width
        x = np.ones(self.n)
        x[0] += t
        return x / x.sum()


@dataclass(frozen=True)
class SuiteEntry:
    """One benchmark-suite member: a representative problem instance, the
    dimensions it is catalogued at, and the results table that lists it."""

    problem: Problem
    dimensions: tuple[int, ...]
    source_tag: str
    # Best values reported elsewhere that the implemented formula does not
    # attain (kept for auditability, never used as oracles).
    reported_values: dict[int, float] = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Core operations
# ---------------------------------------------------------------------------


def evaluate(problem: Problem, x) -> float:
    """Evaluate the objective at ``x``.

    Raises on dimension mismatch and on non-finite output (the latter
    signals a bad formula or an overflow, and carries ``x``).
    """
    x = np.asarray(x, dtype=float)
    if x.size != problem.n:
        raise ValueError(f"{problem.name}: expected {problem.n} coordinates, got {x.size}")
    value = float(problem.objective(x))
    if not math.isfinite(value):
        raise NonFiniteObjectiveError(problem.name, x)
    return value


def random_feasible(problem: Problem, rng: np.random.Generator) -> np.ndarray:
    """Uniform feasible point: per-axis uniform for boxes, Dirichlet(1,..,1)
    for the unit simplex."""
    return problem.region.sample(rng)


def repair(problem: Problem, x) -> np.ndarray:
    """Project ``x`` back into the feasible region.

    Boxes clip per coordinate; the simplex clips negatives to zero and
    renormalizes (an all-zero vector becomes the uniform point).
    """
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("cannot repair a non-finite point")
    return problem.region.repair(x)


def delta(
    problem: Problem,
    x,
    x_new,
    f_x: float | None = None,
    evaluate_fn: Callable[[Problem, np.ndarray], float] | None = None,
) -> float:
    """Cost difference f(x_new) - f(x).

    Affine problems use the incremental form a.(x_new - x), which costs no
    objective evaluations.  Otherwise the objective is evaluated at x_new
    (and at x too unless ``f_x`` is supplied).  ``evaluate_fn`` lets a
    caller route evaluations through its own counter.
    """
    x = np.asarray(x, dtype=float)
    x_new = np.asarray(x_new, dtype=float)
    if problem.incremental is not None:
        return float(np.dot(problem.incremental.a, x_new - x))
    ev = evaluate_fn if evaluate_fn is not None else evaluate
    f_new = ev(problem, x_new)
    if f_x is None:
        f_x = ev(problem, x)
    return f_new - f_x


def fitness_transform(values: Sequence[float], kind: str, a: float = 1.0, b: float = 0.0) -> np.ndarray:
    """Map raw objective values to fitness values.

    ``proportional`` divides by the sum (which must be nonzero); ``linear``
    applies a*f + b.
    """
    values = np.asarray(values, dtype=float)
    if kind == "proportional":
        total = float(values.sum())
        if total == 0.0:
            raise ValueError("proportional fitness undefined for zero-sum values")
        return values / total
    if kind == "linear":
        return a * values + b
    raise ValueError(f"unknown fitness transform {kind!r}")


# ---------------------------------------------------------------------------
# Benchmark objective formulas
# ---------------------------------------------------------------------------

_TWO_PI = 2.0 * math.pi


def _sphere(x):
    return float(np.dot(x, x))


def _ackley(x):
    n = x.size
    return float(
        -20.0 * math.exp(-0.2 * math.sqrt(float(np.dot(x, x)) / n))
        - math.exp(float(np.cos(_TWO_PI * x).sum()) / n)
        + 20.0
        + math.e
    )


def _bohachevsky1(x):
    x1, x2 = x
    return float(
        x1 * x1 + 2.0 * x2 * x2
        - 0.3 * math.cos(3.0 * math.pi * x1)
        - 0.4 * math.cos(4.0 * math.pi * x2)
        + 0.7
    )


def _bohachevsky2(x):
    x1, x2 = x
    return float(
        x1 * x1 + 2.0 * x2 * x2
        - 0.3 * math.cos(3.0 * math.pi * x1) * math.cos(4.0 * math.pi * x2)
        + 0.3
    )


def _bohachevsky3(x):
    x1, x2 = x
    return float(
        x1 * x1 + 2.0 * x2 * x2
        - 0.3 * math.cos(3.0 * math.pi * x1 + 4.0 * math.pi * x2)
        + 0.3
    )


def _branin(x):
    x1, x2 = x
    b = 5.1 / (4.0 * math.pi**2)
    c = 5.0 / math.pi
    t = 1.0 / (8.0 * math.pi)
    return float((x2 - b * x1 * x1 + c * x1 - 6.0) ** 2 + 10.0 * (1.0 - t) * math.cos(x1) + 10.0)


def _camel(x):
    x1, x2 = x
    return float(
        (4.0 - 2.1 * x1 * x1 + x1**4 / 3.0) * x1 * x1
        + x1 * x2
        + (-4.0 + 4.0 * x2 * x2) * x2 * x2
    )


def _easom(x):
    x1, x2 = x
    return float(
        -math.cos(x1) * math.cos(x2) * math.exp(-((x1 - math.pi) ** 2 + (x2 - math.pi) ** 2))
    )


def _goldstein_price(x):
    x1, x2 = x
    a = 1.0 + (x1 + x2 + 1.0) ** 2 * (
        19.0 - 14.0 * x1 + 3.0 * x1 * x1 - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2 * x2
    )
    b = 30.0 + (2.0 * x1 - 3.0 * x2) ** 2 * (
        18.0 - 32.0 * x1 + 12.0 * x1 * x1 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2 * x2
    )
    return float(a * b)


def _griewank(x):
    idx = np.sqrt(np.arange(1, x.size + 1, dtype=float))
    return float(np.dot(x, x) / 4000.0 - np.prod(np.cos(x / idx)) + 1.0)


def _hansen(x):
    x1, x2 = x
    i = np.arange(1.0, 6.0)
    s1 = float(np.sum(i * np.cos((i - 1.0) * x1 + i)))
    s2 = float(np.sum(i * np.cos((i + 1.0) * x2 + i)))
    return s1 * s2


def _load_coefficients() -> dict:
    text = resources.files("annealkit.data").joinpath("coefficients.json").read_text()
    return json.loads(text)


_COEF = _load_coefficients()
_HART3 = {k: np.asarray(v, dtype=float) for k, v in _COEF["hartman3"].items()}
_HART6 = {k: np.asarray(v, dtype=float) for k, v in _COEF["hartman6"].items()}
_SHEKEL_A = np.asarray(_COEF["shekel"]["a"], dtype=float)
_SHEKEL_C = np.asarray(_COEF["shekel"]["c"], dtype=float)


def _hartman3(x):
    inner = np.sum(_HART3["A"] * (x - _HART3["P"]) ** 2, axis=1)
    return float(-np.dot(_HART3["alpha"], np.exp(-inner)))


def _hartman6(x):
    inner = np.sum(_HART6["A"] * (x - _HART6["P"]) ** 2, axis=1)
    return float(-np.dot(_HART6["alpha"], np.exp(-inner)))


def _hump(x):
    # Six-hump camel shifted so the global minimum value is zero.
    return _camel(x) + 1.0316285


def _hyper_ellipsoid(x):
    return float(np.dot(np.arange(1, x.size + 1, dtype=float), x * x))


def _levy1(x):
    n = x.size
    y = 1.0 + (x + 1.0) / 4.0
    s = 10.0 * math.sin(math.pi * y[0]) ** 2
    if n > 1:
        s += float(np.sum((y[:-1] - 1.0) ** 2 * (1.0 + 10.0 * np.sin(math.pi * y[1:]) ** 2)))
    s += float((y[-1] - 1.0) ** 2)
    return math.pi / n * s


def _levy2(x):
    s = math.sin(3.0 * math.pi * x[0]) ** 2
    if x.size > 1:
        s += float(np.sum((x[:-1] - 1.0) ** 2 * (1.0 + np.sin(3.0 * math.pi * x[1:]) ** 2)))
    s += float((x[-1] - 1.0) ** 2 * (1.0 + math.sin(2.0 * math.pi * x[-1]) ** 2))
    return 0.1 * s


def _levy3(x):
    y = 1.0 + (x - 1.0) / 4.0
    s = math.sin(math.pi * y[0]) ** 2
    if x.size > 1:
        s += float(np.sum((y[:-1] - 1.0) ** 2 * (1.0 + 10.0 * np.sin(math.pi * y[:-1] + 1.0) ** 2)))
    s += float((y[-1] - 1.0) ** 2 * (1.0 + math.sin(2.0 * math.pi * x[-1]) ** 2))
    return s


def _michalewicz(x):
    i = np.arange(1, x.size + 1, dtype=float)
    return float(-np.sum(np.sin(x) * np.sin(i * x * x / math.pi) ** 20))


_NEUMAIER2_B = np.array([8.0, 18.0, 44.0, 114.0])


def _neumaier2(x):
    powers = np.array([np.sum(x**k) for k in range(1, 5)])
    return float(np.sum((_NEUMAIER2_B - powers) ** 2))


def _neumaier3(x):
    return float(np.sum((x - 1.0) ** 2) - np.sum(x[1:] * x[:-1]))


def _rastrigin(x):
    return float(10.0 * x.size + np.sum(x * x - 10.0 * np.cos(_TWO_PI * x)))


def _rosenbrock(x):
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))


def _schaffer1(x):
    r2 = float(np.dot(x, x))
    return 0.5 + (math.sin(math.sqrt(r2)) ** 2 - 0.5) / (1.0 + 0.001 * r2) ** 2


def _schaffer2(x):
    r2 = float(np.dot(x, x))
    return r2**0.25 * (math.sin(50.0 * r2**0.1) ** 2 + 1.0)


def _shekel(x, m):
    diff = x - _SHEKEL_A[:m]
    return float(-np.sum(1.0 / (np.sum(diff * diff, axis=1) + _SHEKEL_C[:m])))


def _shubert_factor(x_d):
    j = np.arange(1.0, 6.0)
    return float(np.sum(j * np.cos((j + 1.0) * x_d + j)))


def _shubert1(x):
    return _shubert_factor(x[0]) * _shubert_factor(x[1])


def _shubert2(x):
    x1, x2 = x
    return _shubert1(x) + 0.5 * ((x1 + 1.42513) ** 2 + (x2 + 0.80032) ** 2)


def _shubert3(x):
    j = np.arange(1.0, 6.0)
    return float(sum(np.sum(j * np.sin((j + 1.0) * xd + j)) for xd in x))


def _step(x):
    return float(np.sum(np.floor(x + 0.5) ** 2))


def _zakharov(x):
    i = np.arange(1, x.size + 1, dtype=float)
    s = 0.5 * float(np.dot(i, x))
    return float(np.dot(x, x)) + s**2 + s**4


def _zimmermann(x):
    x1, x2 = x
    value = 9.0 - x1 - x2
    circle = (x1 - 3.0) ** 2 + (x2 - 2.0) ** 2 - 16.0
    if circle > 0.0:
        value = max(value, 100.0 * (1.0 + circle))
    product = x1 * x2 - 14.0
    if product > 0.0:
        value = max(value, 100.0 * (1.0 + product))
    return float(value)


# ---------------------------------------------------------------------------
# Suite catalog
# ---------------------------------------------------------------------------

HYBRID_TABLE = "hybrid-results"
LOCAL_TABLE = "derivative-free-comparison"
EVO_TABLE = "evolutionary-comparison"


def _const_bounds(lo: float, hi: float):
    return lambda n: (np.full(n, lo), np.full(n, hi))


def _origin(n):
    return np.zeros(n)


def _ones(n):
    return np.ones(n)


def _neg_ones(n):
    return -np.ones(n)


def _neumaier3_minimizer(n):
    i = np.arange(1, n + 1, dtype=float)
    return i * (n + 1 - i)


@dataclass(frozen=True)
class _Family:
    name: str
    fn: Callable[[np.ndarray], float]
    dims: tuple[int, ...]
    bounds: Callable[[int], tuple[np.ndarray, np.ndarray]]
    f_opt: float | Callable[[int], float]
    minimizer: Callable[[int], np.ndarray] | None
    source_tag: str
    any_dim: bool = False
    reported_values: dict[int, float] = field(default_factory=dict)
    notes: str = ""

    def optimum(self, n: int) -> float:
        return self.f_opt(n) if callable(self.f_opt) else self.f_opt


# High-precision minimizers for the fixed-dimension multimodal functions
# (refined numerically from the standard published starting values).
_BRANIN_XSTAR = np.array([math.pi, 2.275])
_CAMEL_XSTAR = np.array([0.08984201368301331, -0.7126564032704135])
_HANSEN_XSTAR = np.array([-7.589893028746099, -7.708313735499347])
_HARTMAN3_XSTAR = np.array([0.11461434, 0.55564885, 0.85254695])
_HARTMAN6_XSTAR = np.array([0.20168952, 0.15001069, 0.47687398, 0.27533243, 0.31165162, 0.65730054])
_MICHALEWICZ_XSTAR = np.array([2.2029055201726, 1.5707963267949])
_SHEKEL5_XSTAR = np.array([4.00003715, 4.00013327, 4.00003715, 4.00013327])
_SHEKEL7_XSTAR = np.array([4.00057292, 4.00068937, 3.99948971, 3.99960616])
_SHEKEL10_XSTAR = np.array([4.00074653, 4.00059294, 3.99966340, 3.99950980])
_SHUBERT_XSTAR = np.array([-1.4251284292, -0.8003210990])
_SHUBERT3_XSTAR = np.array([-1.1140996877273617, -1.1140996877273617])
_ZIMMERMANN_XSTAR = np.array([7.0, 2.0])

_FAMILIES: tuple[_Family, ...] = (
    _Family("ackley", _ackley, (2, 3, 5, 7, 10, 20, 30), _const_bounds(-15.0, 30.0), 0.0, _origin, HYBRID_TABLE, any_dim=True),
    _Family("bohachevsky-1", _bohachevsky1, (2,), _const_bounds(-100.0, 100.0), 0.0, _origin, HYBRID_TABLE),
    _Family("bohachevsky-2", _bohachevsky2, (2,), _const_bounds(-100.0, 100.0), 0.0, _origin, HYBRID_TABLE),
    _Family("bohachevsky-3", _bohachevsky3, (2,), _const_bounds(-100.0, 100.0), 0.0, _origin, HYBRID_TABLE),
    _Family("branin", _branin, (2,), lambda n: (np.array([-5.0, 0.0]), np.array([10.0, 15.0])), 0.397887, lambda n: _BRANIN_XSTAR, HYBRID_TABLE),
    _Family("camel", _camel, (2,), lambda n: (np.array([-3.0, -2.0]), np.array([3.0, 2.0])), -1.031628, lambda n: _CAMEL_XSTAR, LOCAL_TABLE),
    _Family("de-jong", _sphere, (3,), _const_bounds(-5.12, 5.12), 0.0, _origin, HYBRID_TABLE, any_dim=True, notes="first De Jong function; same quadratic as sphere"),
    _Family("easom", _easom, (2,), _const_bounds(-100.0, 100.0), -1.0, lambda n: np.array([math.pi, math.pi]), HYBRID_TABLE),
    _Family("goldstein-price", _goldstein_price, (2,), _const_bounds(-2.0, 2.0), 3.0, lambda n: np.array([0.0, -1.0]), HYBRID_TABLE),
    _Family("griewank", _griewank, (1, 2, 3, 4, 5, 6, 10, 20, 30), _const_bounds(-600.0, 600.0), 0.0, _origin, HYBRID_TABLE, any_dim=True),
    _Family("hansen", _hansen, (2,), _const_bounds(-10.0, 10.0), -176.541793, lambda n: _HANSEN_XSTAR, LOCAL_TABLE),
    _Family("hartman-3", _hartman3, (3,), _const_bounds(0.0, 1.0), -3.86278215, lambda n: _HARTMAN3_XSTAR, HYBRID_TABLE),
    _Family("hartman-6", _hartman6, (6,), _const_bounds(0.0, 1.0), -3.3223680, lambda n: _HARTMAN6_XSTAR, HYBRID_TABLE),
    _Family("hump", _hump, (2,), _const_bounds(-5.0, 5.0), 0.0, lambda n: _CAMEL_XSTAR, HYBRID_TABLE, notes="six-hump camel shifted by +1.0316285"),
    _Family("hyper-ellipsoid", _hyper_ellipsoid, (30,), _const_bounds(-5.12, 5.12), 0.0, _origin, HYBRID_TABLE, any_dim=True),
    _Family("levy-1", _levy1, (2, 5, 10, 20, 30, 50, 100), _const_bounds(-10.0, 10.0), 0.0, _neg_ones, HYBRID_TABLE, any_dim=True),
    _Family("levy-2", _levy2, (2, 5, 10, 20, 30, 50, 100), _const_bounds(-5.0, 5.0), 0.0, _ones, HYBRID_TABLE, any_dim=True),
    _Family(
        "levy-3", _levy3, (4, 5), _const_bounds(-10.0, 10.0), 0.0, _ones, LOCAL_TABLE, any_dim=True,
        reported_values={4: -21.502355, 5: -11.504402},
        notes="catalogued formula attains 0; the comparison table cites a variant "
        "with the recorded best values, whose formula is not published",
    ),
    _Family("michalewicz", _michalewicz, (2,), _const_bounds(0.0, math.pi), -1.8013, lambda n: _MICHALEWICZ_XSTAR, HYBRID_TABLE),
    _Family("neumaier-2", _neumaier2, (4,), _const_bounds(0.0, 4.0), 0.0, lambda n: np.array([1.0, 2.0, 2.0, 3.0]), HYBRID_TABLE),
    _Family(
        "neumaier-3", _neumaier3, (10,), lambda n: (np.full(n, -float(n * n)), np.full(n, float(n * n))),
        lambda n: -n * (n + 4) * (n - 1) / 6.0, _neumaier3_minimizer, HYBRID_TABLE, any_dim=True,
    ),
    _Family("rastrigin", _rastrigin, (2, 3, 5, 7, 10), _const_bounds(-5.12, 5.12), 0.0, _origin, HYBRID_TABLE, any_dim=True),
    _Family("rosenbrock", _rosenbrock, (2, 5, 10), _const_bounds(-5.0, 10.0), 0.0, _ones, HYBRID_TABLE, any_dim=True),
    _Family("schaffer-1", _schaffer1, (2,), _const_bounds(-100.0, 100.0), 0.0, _origin, HYBRID_TABLE),
    _Family("schaffer-2", _schaffer2, (2,), _const_bounds(-100.0, 100.0), 0.0, _origin, HYBRID_TABLE),
    _Family("shekel-5", lambda x: _shekel(x, 5), (4,), _const_bounds(0.0, 10.0), -10.15320, lambda n: _SHEKEL5_XSTAR, HYBRID_TABLE),
    _Family("shekel-7", lambda x: _shekel(x, 7), (4,), _const_bounds(0.0, 10.0), -10.40294, lambda n: _SHEKEL7_XSTAR, HYBRID_TABLE),
    _Family("shekel-10", lambda x: _shekel(x, 10), (4,), _const_bounds(0.0, 10.0), -10.53641, lambda n: _SHEKEL10_XSTAR, HYBRID_TABLE),
    _Family("shubert-1", _shubert1, (2,), _const_bounds(-10.0, 10.0), -186.7309088, lambda n: _SHUBERT_XSTAR, HYBRID_TABLE),
    _Family("shubert-2", _shubert2, (2,), _const_bounds(-10.0, 10.0), -186.730909, lambda n: _SHUBERT_XSTAR, HYBRID_TABLE, notes="product form plus quadratic tie-break penalty"),
    _Family(
        "shubert-3", _shubert3, (2,), _const_bounds(-10.0, 10.0), -29.6759000514, lambda n: _SHUBERT3_XSTAR, LOCAL_TABLE,
        reported_values={2: -24.062499},
        notes="additive sine form whose optimum is -29.6759; the comparison table "
        "cites a variant with the recorded best value, whose formula is not published",
    ),
    _Family("sphere", _sphere, (3,), _const_bounds(-5.12, 5.12), 0.0, _origin, HYBRID_TABLE, any_dim=True),
    _Family("step", _step, (5, 10, 50), _const_bounds(-100.0, 100.0), 0.0, _origin, HYBRID_TABLE, any_dim=True),
    _Family("zakharov", _zakharov, (2, 5, 10), _const_bounds(-5.0, 10.0), 0.0, _origin, HYBRID_TABLE, any_dim=True),
    _Family(
        "zimmermann", _zimmermann, (2,), _const_bounds(0.0, 100.0), 0.0, lambda n: _ZIMMERMANN_XSTAR, HYBRID_TABLE,
        reported_values={2: -494.741},
        notes="penalized formulation with optimum 0 at (7, 2); an alternative "
        "published formulation reports -494.741",
    ),
)

_BY_NAME = {fam.name: fam for fam in _FAMILIES}

_ALIASES = {
    "dejong": "de-jong",
    "goldstein": "goldstein-price",
    "hyperellipsoid": "hyper-ellipsoid",
    "six-hump-camel": "camel",
}


def _canonical(name: str) -> str:
    key = name.strip().lower().replace("_", "-").replace(" ", "-")
    key = _ALIASES.get(key.replace("-", ""), _ALIASES.get(key, key))
    if key in _BY_NAME:
        return key
    compact = key.replace("-", "")
    for fam in _FAMILIES:
        if fam.name.replace("-", "") == compact:
            return fam.name
    raise KeyError(f"unknown problem {name!r}")


def problem_names() -> list[str]:
    return [fam.name for fam in _FAMILIES]


def get_problem(name: str, n: int | None = None) -> Problem:
    """Build a suite problem by name at dimension ``n`` (default: the first
    catalogued dimension)."""
    fam = _BY_NAME[_canonical(name)]
    if n is None:
        n = fam.dims[0]
    if n not in fam.dims and not fam.any_dim:
        raise ValueError(f"{fam.name} is only defined for n in {fam.dims}")
    if n < 1:
        raise ValueError("dimension must be positive")
    lower, upper = fam.bounds(n)
    minimizer = fam.minimizer(n) if fam.minimizer is not None else None
    return Problem(
        name=fam.name,
        n=n,
        region=Box(lower, upper),
        objective=fam.fn,
        known_optimum=fam.optimum(n),
        known_minimizer=minimizer,
    )


def make_standard_suite() -> list[SuiteEntry]:
    """The full benchmark suite, one entry per function family (built at its
    first catalogued dimension)."""
    entries = []
    for fam in _FAMILIES:
        entries.append(
            SuiteEntry(
                problem=get_problem(fam.name),
                dimensions=fam.dims,
                source_tag=fam.source_tag,
                reported_values=dict(fam.reported_values),
            )
        )
    return entries


def suite_catalog() -> list[dict]:
    """JSON-ready catalog: one row per (function, dimension) with name, n,
    bounds, best known value, minimizer (when known), and source tag."""
    rows = []
    for fam in _FAMILIES:
        for n in fam.dims:
            lower, upper = fam.bounds(n)
            minimizer = fam.minimizer(n) if fam.minimizer is not None else None
            row = {
                "name": fam.name,
                "n": n,
                "bounds": [[float(lo), float(hi)] for lo, hi in zip(lower, upper)],
                "f_opt": float(fam.optimum(n)),
                "minimizer": None if minimizer is None else [float(v) for v in minimizer],
                "source_tag": fam.source_tag,
            }
            if fam.reported_values.get(n) is not None:
                row["reported_value"] = fam.reported_values[n]
            if fam.notes:
                row["notes"] = fam.notes
            rows.append(row)
    return rows
