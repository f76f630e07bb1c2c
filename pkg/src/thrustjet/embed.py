"""Chain-based embedding of fully connected Ising problems onto a sparse
physical graph, with a classical annealer standing in for the hardware.

The synthetic topology gives each logical variable a ferromagnetic chain of
physical spins (a path) and exactly one bridge coupler per logical pair,
with bridge endpoints distributed round-robin along each chain.  Chain
couplers carry the absolute chain strength ACS = RCS * max|Q_ij|.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace

import numpy as np

from .qubo import IsingProblem, QuboProblem, auto_scale, energy, ising_to_qubo, to_ising
from .solvers import AnnealSchedule, SolveResult, SolverConfig, simulated_anneal


@dataclass(frozen=True)
class HardwareGraph:
    num_physical: int
    couplers: frozenset  # unordered (a, b) pairs, a < b

    def __post_init__(self):
        for a, b in self.couplers:
            if a == b:
                raise ValueError(f"self-loop on physical qubit {a}")
            if not (0 <= a < self.num_physical and 0 <= b < self.num_physical):
                raise ValueError(f"coupler ({a}, {b}) out of range")


@dataclass(frozen=True)
class ChainEmbedding:
    chains: tuple            # per logical variable, tuple of physical indices
    chain_length: int
    inter_chain: dict        # {(i, j): (phys_a, phys_b)} with i < j

    @property
    def n_logical(self) -> int:
        return len(self.chains)

    @property
    def num_physical(self) -> int:
        return sum(len(c) for c in self.chains)


@dataclass(frozen=True)
class ChainConfig:
    rcs: float  # relative chain strength

    def __post_init__(self):
        if self.rcs <= 0.0:
            raise ValueError("rcs must be positive")

    def absolute_strength(self, max_abs_coeff: float) -> float:
        """ACS = RCS * max|Q_ij|."""
        return self.rcs * max_abs_coeff


@dataclass(frozen=True)
class UnembedReport:
    logical_sample: np.ndarray | None  # None under the discard policy
    broken_chains: int
    broken_indices: tuple
    resolution: str


@dataclass(frozen=True)
class ChainStats:
    breaks_per_read: np.ndarray  # broken chain count per read
    break_rate: float            # mean fraction of broken chains per read


def synth_clique_embedding(n_logical: int, chain_length: int) -> tuple[HardwareGraph, ChainEmbedding]:
    """Synthetic clique embedding: n disjoint paths plus one bridge per pair.

    Total physical qubits = n_logical * chain_length; bridge endpoints are
    spread round-robin along each chain so no physical qubit hoards bridges.
    """
    if n_logical < 2:
        raise ValueError("need at least 2 logical variables")
    if chain_length < 1:
        raise ValueError("chain_length must be >= 1")
    chains = tuple(
        tuple(range(i * chain_length, (i + 1) * chain_length)) for i in range(n_logical)
    )
    couplers = set()
    for chain in chains:
        for a, b in zip(chain, chain[1:]):
            couplers.add((a, b))
    slot = [0] * n_logical
    inter_chain = {}
    for i in range(n_logical):
        for j in range(i + 1, n_logical):
            pa = chains[i][slot[i] % chain_length]
            pb = chains[j][slot[j] % chain_length]
            slot[i] += 1
            slot[j] += 1
            inter_chain[(i, j)] = (pa, pb)
            couplers.add((min(pa, pb), max(pa, pb)))
    graph = HardwareGraph(n_logical * chain_length, frozenset(couplers))
    return graph, ChainEmbedding(chains, chain_length, inter_chain)


def embed_problem(ising: IsingProblem, embedding: ChainEmbedding, acs: float) -> IsingProblem:
    """Map a logical Ising problem onto the physical chain graph.

    Logical fields are split evenly across each chain, logical couplings go
    on the assigned bridge couplers, and every intra-chain coupler is set
    ferromagnetic with magnitude acs.  The aligned-chain constant
    -acs * n * (L - 1) is absorbed into the offset, so chain-consistent
    physical states have exactly the logical energy.
    """
    if ising.n != embedding.n_logical:
        raise ValueError(f"problem size {ising.n} != embedding size {embedding.n_logical}")
    num_phys = embedding.num_physical
    h = np.zeros(num_phys)
    j: dict = {}
    n_chain_couplers = 0
    for i, chain in enumerate(embedding.chains):
        h[list(chain)] = ising.h[i] / len(chain)
        for a, b in zip(chain, chain[1:]):
            j[(min(a, b), max(a, b))] = -acs
            n_chain_couplers += 1
    for (i, k), val in ising.j.items():
        pa, pb = embedding.inter_chain[(min(i, k), max(i, k))]
        key = (min(pa, pb), max(pa, pb))
        j[key] = j.get(key, 0.0) + val
    offset = ising.offset + acs * n_chain_couplers
    return IsingProblem(h, j, offset)


def unembed(physical_state: np.ndarray, embedding: ChainEmbedding, policy: str = "majority_vote") -> UnembedReport:
    """Read a logical sample out of a physical bit state.

    Chains whose physical bits disagree count as broken; majority vote
    resolves them (even-split ties go to 0), while the discard policy marks
    the whole sample invalid instead.
    """
    if policy not in ("majority_vote", "discard"):
        raise ValueError(f"unknown policy {policy!r}")
    physical_state = np.asarray(physical_state)
    if physical_state.shape[0] != embedding.num_physical:
        raise ValueError(
            f"state length {physical_state.shape[0]} != {embedding.num_physical} physical qubits"
        )
    logical = np.zeros(embedding.n_logical, dtype=np.uint8)
    broken = []
    for i, chain in enumerate(embedding.chains):
        vals = physical_state[list(chain)]
        ones = int(vals.sum())
        if 0 < ones < len(chain):
            broken.append(i)
        logical[i] = 1 if 2 * ones > len(chain) else 0
    if policy == "discard" and broken:
        return UnembedReport(None, len(broken), tuple(broken), "discard")
    return UnembedReport(logical, len(broken), tuple(broken), policy)


def chained_solve(
    qubo: QuboProblem,
    chain_config: ChainConfig,
    schedule: AnnealSchedule | None = None,
    solver_config: SolverConfig | None = None,
    chain_length: int = 3,
) -> tuple[SolveResult, ChainStats]:
    """Anneal a QUBO through the synthetic chain embedding.

    Pipeline: auto-scale, convert to Ising, embed on chains, anneal the
    physical problem, majority-vote unembed every read, and report the best
    logical state with energies evaluated on the original problem.  Each
    read's sample is its final annealed configuration (the hardware-readout
    analog), which is where chain breaks show up; the inverse-temperature
    range is pinned to the logical coefficient scale so the chain strength
    changes the landscape, not the effective temperature.
    """
    t_start = time.perf_counter()
    scaled = auto_scale(qubo)
    acs = chain_config.absolute_strength(scaled.max_abs_coeff)
    ising = to_ising(scaled)
    _, embedding = synth_clique_embedding(qubo.n, chain_length)
    physical = embed_problem(ising, embedding, acs)

    solver_config = solver_config or SolverConfig()
    if solver_config.beta_min is None:
        m = scaled.max_abs_coeff
        solver_config = replace(solver_config, beta_min=0.1 / m, beta_max=50.0 / m)
    res = simulated_anneal(ising_to_qubo(physical), schedule, solver_config)

    reads = res.reads_used
    logical_states = np.zeros((reads, qubo.n), dtype=np.uint8)
    breaks = np.zeros(reads, dtype=np.int64)
    for r in range(reads):
        report = unembed(res.final_states[r], embedding, "majority_vote")
        logical_states[r] = report.logical_sample
        breaks[r] = report.broken_chains
    logical_energies = np.array([energy(qubo, row) for row in logical_states])
    k = int(np.argmin(logical_energies))

    stats = ChainStats(breaks, float(breaks.mean()) / qubo.n)
    result = SolveResult(
        best_assignment=logical_states[k].copy(),
        best_energy=float(logical_energies[k]),
        read_energies=logical_energies,
        read_states=logical_states,
        reads_used=reads,
        sweeps_used=res.sweeps_used,
        wall_time=time.perf_counter() - t_start,
        provenance={
            "method": "chained_solve",
            "rcs": chain_config.rcs,
            "acs": acs,
            "chain_length": chain_length,
        },
    )
    return result, stats


def save_embedding(path, embedding: ChainEmbedding) -> None:
    """Embedding file: ``C <logical> <k> <p1> ... <pk>`` then ``B <i> <j> <pa> <pb>``."""
    with open(path, "w", encoding="utf-8") as fh:
        for i, chain in enumerate(embedding.chains):
            fh.write(f"C {i} {len(chain)} " + " ".join(str(p) for p in chain) + "\n")
        for (i, j), (pa, pb) in sorted(embedding.inter_chain.items()):
            fh.write(f"B {i} {j} {pa} {pb}\n")


def load_embedding(path) -> ChainEmbedding:
    chains: dict[int, tuple] = {}
    inter_chain: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            if parts[0] == "C":
                idx, k = int(parts[1]), int(parts[2])
                phys = tuple(int(p) for p in parts[3:])
                if len(phys) != k:
                    raise ValueError(f"line {line_no}: chain {idx} expects {k} qubits, got {len(phys)}")
                chains[idx] = phys
            elif parts[0] == "B":
                i, j, pa, pb = (int(p) for p in parts[1:5])
                inter_chain[(min(i, j), max(i, j))] = (pa, pb)
            else:
                raise ValueError(f"line {line_no}: unknown record {parts[0]!r}")
    ordered = tuple(chains[i] for i in sorted(chains))
    length = max(len(c) for c in ordered)
    return ChainEmbedding(ordered, length, inter_chain)
