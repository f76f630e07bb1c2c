"""Hemisphere jet clustering for e+e- events via thrust optimization:
exact and iterative thrust, QUBO/Ising formulations, simulated and reverse
annealing, chain-embedded solving, and a benchmark harness."""

from .events import Event, GeneratorConfig, balance, generate_dijet_event, load_events, save_events
from .qubo import (
    IsingProblem,
    QuboProblem,
    auto_scale,
    build_singlecone_qubo,
    build_thrust_qubo,
    objective,
    thrust_from_objective,
    to_ising,
)
from .shapes import (
    SphericityResult,
    ThrustResult,
    iterative_thrust,
    sphericity,
    thrust_brute_force,
    thrust_exact,
    thrust_of_axis,
    thrust_of_partition,
)
from .solvers import (
    AnnealSchedule,
    SolveResult,
    SolverConfig,
    SpvarConfig,
    best_of_reverse,
    exhaustive,
    hybrid_seed_iterate,
    reverse_anneal,
    simulated_anneal,
    spvar,
)

__version__ = "0.1.0"
