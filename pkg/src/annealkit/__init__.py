"""Composable simulated-annealing toolkit for continuous global minimization.

Modules: ``problems`` (benchmark suite and feasibility handling),
``temperature`` (initial temperatures and cooling schedules), ``moves``
(neighborhood generators), ``acceptance`` (accept/reject rules),
``engine`` (the nested-loop driver and its variants), ``local_search``
(simplex searchers), ``hybrid`` (local-search/annealing alternation and
evolution strategies), ``bench`` (repeated trials and performance
profiles), ``solvers`` (method registry with documented defaults), and
``cli`` (command-line surface).
"""

from .acceptance import AcceptanceSpec, accept_probability, decide
from .engine import (
    AnnealConfig,
    AnnealState,
    RunRecord,
    run_annealing_then_local,
    run_heating_annealing,
    run_local_then_annealing,
    run_memory_annealing,
    run_sa,
)
from .errors import AnnealkitError, ConfigError, NonFiniteObjectiveError
from .hybrid import (
    EvoConfig,
    HybridConfig,
    Individual,
    mutate,
    recombine_discrete,
    run_hybrid_ls_sa,
    run_sa_sacep,
    run_sa_saes,
)
from .local_search import LocalResult, LocalSearchSpec, local_search, trial_statistics
from .moves import MoveSpec, MoveState, adapt_step, propose, propose_simplex
from .problems import (
    Problem,
    SuiteEntry,
    delta,
    evaluate,
    fitness_transform,
    get_problem,
    make_standard_suite,
    random_feasible,
    repair,
    suite_catalog,
)
from .temperature import InitTempSpec, ScheduleSpec, closed_form, cool, init_temp

__version__ = "0.1.0"
