"""QUBO optimizers: exhaustive oracle, simulated annealing, reverse
annealing, multi-start SPVAR, and the hybrid seed-then-iterate pipeline.

All solvers minimize; maximize-sense QUBOs are negated internally, so
"energy" always means the minimize-sense value (see qubo.energy).  The
annealing-time analog maps schedule duration to Monte Carlo sweeps via
sweeps_per_unit_time (default 50, so the default 20-unit forward schedule
runs 1000 sweeps per read).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import sa_kernel
from .events import Event
from .qubo import QuboProblem, auto_scale, energy, objective
from .shapes import ThrustResult, canonical_partition, iterative_thrust

EXHAUSTIVE_MAX_N = 20


@dataclass(frozen=True)
class AnnealSchedule:
    """Piecewise-linear control trajectory: ordered (time, s) points.

    s = 0 is the hottest point of the anneal, s = 1 the coldest; forward
    annealing ramps 0 -> 1, reverse annealing dips 1 -> 0.5 -> 1.
    """

    points: tuple

    def __post_init__(self):
        pts = tuple((float(t), float(s)) for t, s in self.points)
        if len(pts) < 2:
            raise ValueError("schedule needs at least 2 points")
        if pts[0][0] != 0.0:
            raise ValueError("schedule must start at t = 0")
        times = [t for t, _ in pts]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("schedule times must be strictly increasing")
        if any(not 0.0 <= s <= 1.0 for _, s in pts):
            raise ValueError("schedule s values must lie in [0, 1]")
        object.__setattr__(self, "points", pts)

    @classmethod
    def forward(cls, duration: float = 20.0) -> "AnnealSchedule":
        return cls(((0.0, 0.0), (duration, 1.0)))

    @classmethod
    def reverse(cls, t_mid: float, duration: float = 20.0) -> "AnnealSchedule":
        return cls(((0.0, 1.0), (t_mid, 0.5), (duration, 1.0)))

    @property
    def duration(self) -> float:
        return self.points[-1][0] - self.points[0][0]

    def s_values(self, times: np.ndarray) -> np.ndarray:
        ts = np.array([t for t, _ in self.points])
        ss = np.array([s for _, s in self.points])
        return np.interp(times, ts, ss)


@dataclass(frozen=True)
class SolverConfig:
    num_reads: int = 100
    sweeps_per_unit_time: int = 50
    beta_min: float | None = None  # default 0.1 / max|Q| of the given problem
    beta_max: float | None = None  # default 50 / max|Q|
    rng_seed: int = 0

    def __post_init__(self):
        if self.num_reads < 1 or self.sweeps_per_unit_time < 1:
            raise ValueError("num_reads and sweeps_per_unit_time must be >= 1")
        if self.beta_min is not None and self.beta_max is not None:
            if not 0.0 < self.beta_min < self.beta_max:
                raise ValueError("need 0 < beta_min < beta_max")


@dataclass(frozen=True)
class SpvarConfig:
    num_starts: int = 10
    fixing_threshold: float = 0.65
    elite_threshold: float = 100.0  # percentile of reads kept for statistics
    energy_floor: float = -np.inf   # quality below this is discarded first

    def __post_init__(self):
        if self.num_starts < 1:
            raise ValueError("num_starts must be >= 1")
        if not 0.5 < self.fixing_threshold <= 1.0:
            raise ValueError("fixing_threshold must lie in (0.5, 1]")
        if not 0.0 < self.elite_threshold <= 100.0:
            raise ValueError("elite_threshold must lie in (0, 100]")


@dataclass(frozen=True)
class SolveResult:
    best_assignment: np.ndarray
    best_energy: float
    read_energies: np.ndarray
    read_states: np.ndarray  # (reads, n) uint8, best state per read
    reads_used: int
    sweeps_used: int
    wall_time: float
    provenance: dict = field(default_factory=dict)
    final_states: np.ndarray | None = None  # last configuration per read


def read_seeds(rng_seed: int, num_reads: int, stream: int = 0) -> np.ndarray:
    """Per-read RNG seeds keyed by (rng_seed, stream, read_index).

    Prefix-stable: the first k seeds do not depend on num_reads, so larger
    read budgets strictly extend smaller ones.
    """
    return np.array(
        [
            np.random.SeedSequence((rng_seed, stream, r)).generate_state(1, np.uint64)[0]
            for r in range(num_reads)
        ],
        dtype=np.uint64,
    )


def _minimize_matrix(qubo: QuboProblem) -> np.ndarray:
    return -qubo.q if qubo.sense == "maximize" else qubo.q


def _betas(qubo: QuboProblem, schedule: AnnealSchedule, config: SolverConfig) -> np.ndarray:
    total = max(1, int(round(config.sweeps_per_unit_time * schedule.duration)))
    m = qubo.max_abs_coeff or 1.0
    beta_min = config.beta_min if config.beta_min is not None else 0.1 / m
    beta_max = config.beta_max if config.beta_max is not None else 50.0 / m
    t0 = schedule.points[0][0]
    times = t0 + (np.arange(total) + 0.5) / total * schedule.duration
    s = schedule.s_values(times)
    return beta_min * (beta_max / beta_min) ** s


def exhaustive(qubo: QuboProblem) -> SolveResult:
    """Global optimum by enumeration; canonical representative on ties with
    the complement.  Refuses n > 20."""
    n = qubo.n
    if n > EXHAUSTIVE_MAX_N:
        raise ValueError(f"exhaustive search refused for n={n} > {EXHAUSTIVE_MAX_N}")
    t_start = time.perf_counter()
    qe = _minimize_matrix(qubo)
    best_e = np.inf
    best_bits = np.zeros(n, dtype=np.uint8)
    chunk = 1 << 16
    total = 1 << n
    shifts = np.arange(n, dtype=np.uint32)
    for lo in range(0, total, chunk):
        masks = np.arange(lo, min(lo + chunk, total), dtype=np.uint32)
        bits = ((masks[:, None] >> shifts) & 1).astype(np.float64)
        e = np.einsum("ri,ij,rj->r", bits, qe, bits)
        k = int(np.argmin(e))
        if e[k] < best_e:
            best_e = float(e[k])
            best_bits = bits[k].astype(np.uint8)
    best_bits = canonical_partition(best_bits)
    best_e += qubo.offset
    return SolveResult(
        best_assignment=best_bits,
        best_energy=best_e,
        read_energies=np.array([best_e]),
        read_states=best_bits[None, :],
        reads_used=1,
        sweeps_used=0,
        wall_time=time.perf_counter() - t_start,
        provenance={"method": "exhaustive"},
    )


def simulated_anneal(
    qubo: QuboProblem,
    schedule: AnnealSchedule | None = None,
    config: SolverConfig | None = None,
) -> SolveResult:
    """Forward simulated annealing: independent reads, geometric beta ramp
    beta(s) = beta_min (beta_max / beta_min)^s along the schedule, fixed
    variable order per sweep, best-seen state tracked per read."""
    schedule = schedule or AnnealSchedule.forward()
    config = config or SolverConfig()
    t_start = time.perf_counter()
    qe = _minimize_matrix(qubo)
    betas = _betas(qubo, schedule, config)
    seeds = read_seeds(config.rng_seed, config.num_reads)
    dummy = np.zeros((1, qubo.n), dtype=np.uint8)
    states, energies, finals = sa_kernel.anneal_many(qe, betas, seeds, dummy, False)
    energies = energies + qubo.offset
    k = int(np.argmin(energies))
    return SolveResult(
        best_assignment=states[k].copy(),
        best_energy=float(energies[k]),
        read_energies=energies,
        read_states=states,
        reads_used=config.num_reads,
        sweeps_used=betas.shape[0],
        wall_time=time.perf_counter() - t_start,
        provenance={"method": "simulated_anneal", "schedule": schedule.points},
        final_states=finals,
    )


def reverse_anneal(
    qubo: QuboProblem,
    initial_state: np.ndarray,
    schedule: AnnealSchedule | None = None,
    config: SolverConfig | None = None,
) -> SolveResult:
    """Reverse annealing with incumbent chaining.

    The schedule must begin and end at s = 1.  The first read starts from
    initial_state; each later read starts from the best state found so far,
    so the returned energy can never exceed the initial state's energy.
    """
    schedule = schedule or AnnealSchedule.reverse(10.0)
    config = config or SolverConfig()
    if schedule.points[0][1] != 1.0 or schedule.points[-1][1] != 1.0:
        raise ValueError("reverse schedule must begin and end at s = 1")
    initial_state = np.ascontiguousarray(initial_state, dtype=np.uint8)
    if initial_state.shape[0] != qubo.n:
        raise ValueError(f"initial state length {initial_state.shape[0]} != n={qubo.n}")
    t_start = time.perf_counter()
    qe = _minimize_matrix(qubo)
    betas = _betas(qubo, schedule, config)
    seeds = read_seeds(config.rng_seed, config.num_reads)
    states, energies = sa_kernel.anneal_chain(qe, betas, seeds, initial_state)
    energies = energies + qubo.offset
    k = int(np.argmin(energies))
    return SolveResult(
        best_assignment=states[k].copy(),
        best_energy=float(energies[k]),
        read_energies=energies,
        read_states=states,
        reads_used=config.num_reads,
        sweeps_used=betas.shape[0],
        wall_time=time.perf_counter() - t_start,
        provenance={"method": "reverse_anneal", "schedule": schedule.points},
    )


def best_of_reverse(
    qubo: QuboProblem,
    initial_state: np.ndarray,
    t_values=(5.0, 10.0, 15.0),
    config: SolverConfig | None = None,
    duration: float = 20.0,
) -> SolveResult:
    """Best result over reverse schedules {[0,1],[t,0.5],[duration,1]}.

    Each schedule runs with the same seeds as a standalone reverse_anneal
    call, so the best-of is never worse than any single schedule.
    """
    results = [
        reverse_anneal(qubo, initial_state, AnnealSchedule.reverse(t, duration), config)
        for t in t_values
    ]
    best = min(results, key=lambda r: r.best_energy)
    return replace(
        best,
        wall_time=sum(r.wall_time for r in results),
        provenance={"method": "best_of_reverse", "t_values": tuple(t_values)},
    )


def fix_variables(qubo: QuboProblem, fixed: dict) -> tuple[QuboProblem, np.ndarray]:
    """Substitute fixed bit values into a QUBO.

    Returns the reduced problem over the remaining variables (original
    order preserved) and the array of free original indices.  The constant
    and linear contributions of the fixed bits are absorbed into the
    reduced offset and diagonal, so energies of assembled states match the
    original problem exactly.
    """
    free = np.array([i for i in range(qubo.n) if i not in fixed], dtype=np.int64)
    fixed_idx = np.array(sorted(fixed), dtype=np.int64)
    values = np.array([float(fixed[i]) for i in fixed_idx])
    sign = -1.0 if qubo.sense == "maximize" else 1.0

    q = qubo.q
    const = float(values @ q[np.ix_(fixed_idx, fixed_idx)] @ values)
    reduced = q[np.ix_(free, free)].copy()
    if fixed_idx.size and free.size:
        linear = 2.0 * (q[np.ix_(free, fixed_idx)] @ values)
        reduced[np.diag_indices(free.size)] += linear
    reduced_qubo = QuboProblem(
        reduced,
        sense=qubo.sense,
        scale_factor=qubo.scale_factor,
        offset=qubo.offset + sign * const,
    )
    return reduced_qubo, free


def _quality(qubo: QuboProblem, energies: np.ndarray) -> np.ndarray:
    # higher is better regardless of sense; for maximize problems this is
    # the raw objective value
    return qubo.offset - energies if qubo.sense == "maximize" else -energies


def spvar(
    qubo: QuboProblem,
    spvar_config: SpvarConfig | None = None,
    inner_config: SolverConfig | None = None,
    schedule: AnnealSchedule | None = None,
) -> SolveResult:
    """Multi-start sample persistence variable reduction.

    Per start: anneal the current reduced problem, discard reads whose
    quality falls below energy_floor, keep the elite_threshold percentile,
    and fix every variable whose mean spin value (in the +-1 convention)
    has magnitude >= fixing_threshold.  The final answer assembles the
    fixed values with the best solution of the residual problem; the best
    full assignment seen across all starts is returned.
    """
    spvar_config = spvar_config or SpvarConfig()
    inner_config = inner_config or SolverConfig()
    schedule = schedule or AnnealSchedule.forward()
    t_start = time.perf_counter()

    fixed: dict[int, int] = {}
    best_bits: np.ndarray | None = None
    best_e = np.inf
    all_energies: list[np.ndarray] = []
    starts_run = 0
    floor_contradiction = False

    for start in range(spvar_config.num_starts):
        if len(fixed) == qubo.n:
            break
        reduced, free = fix_variables(qubo, fixed)
        start_config = (
            inner_config
            if start == 0
            else replace(
                inner_config,
                rng_seed=int(
                    np.random.SeedSequence((inner_config.rng_seed, 1, start)).generate_state(1)[0]
                ),
            )
        )
        res = simulated_anneal(reduced, schedule, start_config)
        starts_run += 1

        # lift every read to a full assignment; track the best
        full = np.zeros((res.reads_used, qubo.n), dtype=np.uint8)
        full[:, free] = res.read_states
        for i, v in fixed.items():
            full[:, i] = v
        full_energies = np.array([energy(qubo, row) for row in full])
        k = int(np.argmin(full_energies))
        if full_energies[k] < best_e:
            best_e = float(full_energies[k])
            best_bits = full[k].copy()
        all_energies.append(full_energies)

        quality = _quality(reduced, res.read_energies)
        keep = quality >= spvar_config.energy_floor
        if not np.any(keep):
            floor_contradiction = True
            continue  # no usable samples this start; skip fixing
        kept_q = quality[keep]
        kept_states = res.read_states[keep]
        cutoff = np.percentile(kept_q, 100.0 - spvar_config.elite_threshold)
        elite = kept_states[kept_q >= cutoff]
        if elite.shape[0] == 0:
            continue

        spins = 2.0 * elite.astype(np.float64) - 1.0
        means = spins.mean(axis=0)
        for local_i in np.nonzero(np.abs(means) >= spvar_config.fixing_threshold)[0]:
            fixed[int(free[local_i])] = int(means[local_i] > 0.0)

    return SolveResult(
        best_assignment=best_bits,
        best_energy=best_e,
        read_energies=np.concatenate(all_energies) if all_energies else np.array([]),
        read_states=best_bits[None, :],
        reads_used=starts_run * inner_config.num_reads,
        sweeps_used=0,
        wall_time=time.perf_counter() - t_start,
        provenance={
            "method": "spvar",
            "fixed": dict(sorted(fixed.items())),
            "starts_run": starts_run,
            "floor_contradiction": floor_contradiction,
        },
    )


def thrust_energy_floor(event: Event) -> float:
    """Quality floor for the auto-scaled thrust QUBO: sum_i |p_i| / 6."""
    return event.sum_abs_p / 6.0


def hybrid_seed_iterate(event: Event, solve_result: SolveResult) -> tuple[ThrustResult, int]:
    """Iterative thrust refinement seeded by a solver's hemisphere assignment."""
    bits = np.asarray(solve_result.best_assignment)
    if bits.shape[0] != event.n:
        raise ValueError(f"assignment length {bits.shape[0]} != N={event.n}")
    seed = bits.astype(np.float64) @ event.momenta
    if np.linalg.norm(seed) == 0.0:
        seed = event.momenta[int(np.argmax(event.energies))]
    return iterative_thrust(event, seed)
