"""Repeated-trial benchmarking, table aggregation, and performance profiles.

A benchmark runs each registered solver ``reps`` times per problem with
consecutive seeds, aggregates best/frequency/mean/variance per
(problem, solver), and can turn the retained raw records into
performance-ratio profiles over a tau grid.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .engine import RunRecord

__all__ = [
    "BenchRow",
    "BenchmarkReport",
    "PerformanceProfile",
    "aggregate",
    "performance_profile",
    "performance_ratio",
    "profile_from_records",
    "run_trials",
]

REPORT_COLUMNS = (
    "problem",
    "dim",
    "solver",
    "reps",
    "best",
    "frequency",
    "mean",
    "variance",
    "mean_evals",
    "mean_seconds",
)

PROFILE_COLUMNS = ("solver", "tau", "p")

DEFAULT_MATCH_DELTA = 1e-4
RHO_MAX_FLOOR = 100.0


def aggregate(values: Sequence[float], delta: float) -> tuple[float, float, float, float]:
    """(best, frequency, mean, sample variance) of a non-empty value list.

    ``frequency`` is the fraction of values within delta * max(|best|, 1)
    of the best; the variance uses the (n-1) denominator and is 0 for a
    single sample.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("cannot aggregate an empty list")
    best = float(values.min())
    tol = delta * max(abs(best), 1.0)
    frequency = float(np.mean(np.abs(values - best) <= tol))
    mean = float(values.mean())
    variance = float(values.var(ddof=1)) if values.size > 1 else 0.0
    return best, frequency, mean, variance


def performance_ratio(
    t: float,
    t_min: float,
    o: float,
    b: float,
    delta: float = DEFAULT_MATCH_DELTA,
    rho_max: float = RHO_MAX_FLOOR,
) -> float:
    """Resource ratio t/t_min when the solver matched the best value b
    within relative delta, else the failure cap rho_max.  A zero best value
    is replaced by 1 in the denominator of the match test."""
    if t <= 0.0 or t_min <= 0.0:
        raise ValueError("resources must be positive")
    if rho_max < 1.0:
        raise ValueError("rho_max must be >= 1")
    b_ref = b if b != 0.0 else 1.0
    if abs((o - b) / b_ref) <= delta:
        return t / t_min
    return rho_max


@dataclass
class PerformanceProfile:
    solvers: list[str]
    ratios: dict[str, list[float]]
    taus: list[float]
    curves: dict[str, list[float]]

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(PROFILE_COLUMNS)
        for solver in self.solvers:
            for tau, p in zip(self.taus, self.curves[solver]):
                writer.writerow([solver, repr(tau), repr(p)])
        return out.getvalue()


def performance_profile(
    ratios: Mapping[str, Sequence[float]],
    taus: Sequence[float],
) -> PerformanceProfile:
    """Cumulative fraction of problems with ratio <= tau, per solver."""
    solvers = list(ratios)
    lengths = {len(ratios[s]) for s in solvers}
    if len(lengths) != 1:
        raise ValueError("every solver needs one ratio per problem")
    (n_p,) = lengths
    if n_p == 0:
        raise ValueError("no problems to profile")
    taus = [float(t) for t in taus]
    curves = {}
    for s in solvers:
        arr = np.asarray(ratios[s], dtype=float)
        curves[s] = [float(np.mean(arr <= tau)) for tau in taus]
    return PerformanceProfile(
        solvers=solvers,
        ratios={s: [float(r) for r in ratios[s]] for s in solvers},
        taus=taus,
        curves=curves,
    )


@dataclass
class BenchRow:
    problem: str
    dim: int
    solver: str
    reps: int
    best: float
    frequency: float
    mean: float
    variance: float
    mean_evals: float
    mean_seconds: float
    failures: int = 0


@dataclass
class BenchmarkReport:
    rows: list[BenchRow]
    records: dict[tuple[str, int, str], list[RunRecord]]
    delta: float = DEFAULT_MATCH_DELTA
    failures: dict[tuple[str, int, str], int] = field(default_factory=dict)

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(REPORT_COLUMNS)
        for r in self.rows:
            writer.writerow(
                [
                    r.problem,
                    r.dim,
                    r.solver,
                    r.reps,
                    repr(r.best),
                    repr(r.frequency),
                    repr(r.mean),
                    repr(r.variance),
                    repr(r.mean_evals),
                    repr(r.mean_seconds),
                ]
            )
        return out.getvalue()

    def records_jsonl(self) -> str:
        lines = []
        for recs in self.records.values():
            for rec in recs:
                lines.append(json.dumps(rec.to_dict()))
        return "\n".join(lines) + ("\n" if lines else "")

    def reaggregate(self) -> list[BenchRow]:
        """Rebuild the summary rows from the retained records."""
        rows = []
        for (problem, dim, solver), recs in self.records.items():
            rows.append(
                _make_row(problem, dim, solver, recs, self.delta, self.failures.get((problem, dim, solver), 0))
            )
        return rows


def _make_row(problem, dim, solver, records, delta, failures) -> BenchRow:
    values = [r.f_best for r in records if math.isfinite(r.f_best)]
    if values:
        best, freq, mean, var = aggregate(values, delta)
    else:
        best = freq = mean = var = math.nan
    evals = [r.evaluations for r in records]
    secs = [r.wall_seconds for r in records]
    return BenchRow(
        problem=problem,
        dim=dim,
        solver=solver,
        reps=len(records) + failures,
        best=best,
        frequency=freq,
        mean=mean,
        variance=var,
        mean_evals=float(np.mean(evals)) if evals else math.nan,
        mean_seconds=float(np.mean(secs)) if secs else math.nan,
        failures=failures,
    )


def run_trials(
    problems: Sequence,
    solvers: Mapping[str, Callable],
    reps: int,
    base_seed: int = 0,
    delta: float = DEFAULT_MATCH_DELTA,
    jobs: int = 1,
) -> BenchmarkReport:
    """Run every (problem, solver) pair ``reps`` times with seeds
    base_seed .. base_seed+reps-1 and aggregate.

    Solver callables take (problem, seed) and return a RunRecord.  A
    failing run is recorded as a failure, not a fatal error.  Results are
    keyed by (problem, dim, solver, rep), so any execution order -- and
    ``jobs`` > 1 -- yields the same report.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    tasks = [
        (problem, name, rep)
        for problem in problems
        for name in solvers
        for rep in range(reps)
    ]
    results: dict[tuple[str, int, str, int], RunRecord | None] = {}

    def _key(problem, name, rep):
        return (problem.name, problem.n, name, rep)

    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {
                pool.submit(_run_one, solvers[name], problem, base_seed + rep): _key(problem, name, rep)
                for problem, name, rep in tasks
            }
            for fut, key in futures.items():
                results[key] = fut.result()
    else:
        for problem, name, rep in tasks:
            results[_key(problem, name, rep)] = _run_one(solvers[name], problem, base_seed + rep)

    records: dict[tuple[str, int, str], list[RunRecord]] = {}
    failures: dict[tuple[str, int, str], int] = {}
    for problem in problems:
        for name in solvers:
            key = (problem.name, problem.n, name)
            records[key] = []
            failures[key] = 0
            for rep in range(reps):
                rec = results[(problem.name, problem.n, name, rep)]
                if rec is None:
                    failures[key] += 1
                else:
                    records[key].append(rec)

    report = BenchmarkReport(rows=[], records=records, delta=delta, failures=failures)
    report.rows = report.reaggregate()
    return report


def _run_one(solver_fn, problem, seed):
    try:
        rec = solver_fn(problem, seed)
        if not math.isfinite(rec.f_best):
            return None
        return rec
    except Exception:
        return None


def profile_from_records(
    records: Mapping[tuple[str, int, str], Sequence[RunRecord]],
    delta: float = DEFAULT_MATCH_DELTA,
    rho_max: float | None = None,
    tau_points: int = 64,
) -> PerformanceProfile:
    """Build a performance profile from raw records.

    Per (problem, solver): the solution value is the best f_best over the
    reps and the resource is the mean evaluation count.  The best value
    over all solvers defines the match target; unmatched or failed pairs
    receive the cap ratio.  When ``rho_max`` is not given it defaults to
    twice the largest successful ratio, with a floor of 100.
    """
    problems = sorted({(p, d) for (p, d, _s) in records})
    solvers = sorted({s for (_p, _d, s) in records})
    if not problems or not solvers:
        raise ValueError("no records to profile")

    per_problem: dict[tuple[str, int], dict[str, tuple[float, float]]] = {}
    for p, d in problems:
        entry = {}
        for s in solvers:
            recs = list(records.get((p, d, s), []))
            finite = [r.f_best for r in recs if math.isfinite(r.f_best)]
            if finite:
                entry[s] = (min(finite), float(np.mean([r.evaluations for r in recs])))
        per_problem[(p, d)] = entry

    raw: dict[str, list[float | None]] = {s: [] for s in solvers}
    for p, d in problems:
        entry = per_problem[(p, d)]
        if not entry:
            for s in solvers:
                raw[s].append(None)
            continue
        b = min(o for o, _t in entry.values())
        b_ref = b if b != 0.0 else 1.0
        matched = {s for s, (o, _t) in entry.items() if abs((o - b) / b_ref) <= delta}
        t_min = min(t for s, (_o, t) in entry.items() if s in matched)
        for s in solvers:
            if s in matched:
                raw[s].append(entry[s][1] / t_min)
            else:
                raw[s].append(None)

    successful = [r for rs in raw.values() for r in rs if r is not None]
    if rho_max is None:
        rho_max = max(RHO_MAX_FLOOR, 2.0 * max(successful)) if successful else RHO_MAX_FLOOR
    ratios = {
        s: [r if r is not None else rho_max for r in rs] for s, rs in raw.items()
    }
    taus = list(np.geomspace(1.0, rho_max, tau_points))
    return performance_profile(ratios, taus)
