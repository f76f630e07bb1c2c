"""QUBO construction and algebra for hemisphere jet clustering.

The thrust QUBO maximizes sum_ij (p_i . p_j) x_i x_j = |sum_i x_i p_i|^2.
SingleCone generalizes it with a cone-radius parameter R and reduces to the
thrust matrix at R = pi/2 for massless particles.  Solvers always minimize,
so maximize-sense problems are negated at the solver boundary; the Ising
form folds that sign so its ground state matches the QUBO optimum.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .events import Event

SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class QuboProblem:
    q: np.ndarray            # symmetric (n, n)
    sense: str = "maximize"  # "maximize" | "minimize"
    scale_factor: float = 1.0
    offset: float = 0.0      # added to the minimize-sense energy

    def __post_init__(self):
        q = np.ascontiguousarray(np.asarray(self.q, dtype=np.float64))
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise ValueError(f"Q must be square, got {q.shape}")
        if self.sense not in ("maximize", "minimize"):
            raise ValueError(f"bad sense {self.sense!r}")
        scale = max(1.0, float(np.abs(q).max())) if q.size else 1.0
        if np.abs(q - q.T).max(initial=0.0) > SYMMETRY_TOL * scale:
            raise ValueError("Q is not symmetric")
        q.setflags(write=False)
        object.__setattr__(self, "q", q)

    @property
    def n(self) -> int:
        return self.q.shape[0]

    @property
    def max_abs_coeff(self) -> float:
        return float(np.abs(self.q).max())


@dataclass(frozen=True)
class IsingProblem:
    """Minimize-sense spin problem: E(s) = sum h_i s_i + sum_{i<j} J_ij s_i s_j + offset."""

    h: np.ndarray
    j: dict  # {(i, j): coupling} with i < j
    offset: float

    @property
    def n(self) -> int:
        return self.h.shape[0]

    def energy(self, spins: np.ndarray) -> float:
        spins = np.asarray(spins, dtype=np.float64)
        e = float(self.h @ spins) + self.offset
        for (i, jj), val in self.j.items():
            e += val * spins[i] * spins[jj]
        return e


def build_thrust_qubo(event: Event) -> QuboProblem:
    """Q_ij = p_i . p_j, sense maximize; objective(x) = |sum_i x_i p_i|^2."""
    return QuboProblem(event.momenta @ event.momenta.T, sense="maximize")


def build_singlecone_qubo(event: Event, radius: float) -> QuboProblem:
    """Q_ij = (p_i . p_j - E_i E_j cos R) / (1 - cos R), massless E_i = |p_i|."""
    cos_r = np.cos(radius)
    if abs(cos_r) < 1e-15:
        cos_r = 0.0  # R = pi/2 up to float noise; reduce to thrust exactly
    if not 0.0 < radius <= np.pi or abs(1.0 - cos_r) < 1e-12:
        raise ValueError(f"cone radius must be in (0, pi], got {radius}")
    energies = np.linalg.norm(event.momenta, axis=1)
    q = (event.momenta @ event.momenta.T - cos_r * np.outer(energies, energies)) / (1.0 - cos_r)
    return QuboProblem(q, sense="maximize")


def objective(qubo: QuboProblem, bits: np.ndarray) -> float:
    """sum_ij Q_ij x_i x_j (sense-agnostic raw value)."""
    bits = np.asarray(bits, dtype=np.float64)
    if bits.shape[0] != qubo.n:
        raise ValueError(f"assignment length {bits.shape[0]} != n={qubo.n}")
    return float(bits @ qubo.q @ bits)


def energy(qubo: QuboProblem, bits: np.ndarray) -> float:
    """Minimize-sense energy: -objective for maximize problems, plus offset."""
    sign = -1.0 if qubo.sense == "maximize" else 1.0
    return sign * objective(qubo, bits) + qubo.offset


def auto_scale(qubo: QuboProblem) -> QuboProblem:
    """Divide Q by max|Q_ij| so coefficients lie in [-1, 1]; idempotent."""
    m = qubo.max_abs_coeff
    if m == 0.0:
        raise ValueError("cannot auto-scale an all-zero matrix")
    return replace(
        qubo, q=qubo.q / m, scale_factor=qubo.scale_factor * m, offset=qubo.offset / m
    )


def thrust_from_objective(event: Event, value: float) -> float:
    """Invert the unscaled thrust-QUBO objective |sum x p|^2 to a thrust value.

    Values that are negative only through floating-point cancellation (the
    objective is a Gram form, so it is non-negative in exact arithmetic) are
    clamped to zero.
    """
    scale = (event.sum_abs_p / 2.0) ** 2
    if value < -1e-9 * scale:
        raise ValueError(f"thrust objective must be >= 0, got {value}")
    return 2.0 * float(np.sqrt(max(value, 0.0))) / event.sum_abs_p


def to_ising(qubo: QuboProblem) -> IsingProblem:
    """Change of variables x = (1 + s) / 2, minimize sense.

    The Ising energy of s equals the minimize-sense QUBO energy of the
    corresponding x (maximize problems are negated), so annealers can treat
    every problem as ground-state search.
    """
    sign = -1.0 if qubo.sense == "maximize" else 1.0
    q = sign * qubo.q
    row_sums = q.sum(axis=1)
    h = row_sums / 2.0
    j = {}
    for i in range(qubo.n):
        for k in range(i + 1, qubo.n):
            if q[i, k] != 0.0:
                j[(i, k)] = q[i, k] / 2.0
    offset = float(q.sum()) / 4.0 + float(np.trace(q)) / 4.0 + qubo.offset
    return IsingProblem(h, j, offset)


def ising_to_qubo(ising: IsingProblem) -> QuboProblem:
    """Inverse change of variables s = 2x - 1; always minimize sense."""
    n = ising.n
    q = np.zeros((n, n))
    q[np.diag_indices(n)] = 2.0 * ising.h
    offset = ising.offset - float(ising.h.sum())
    for (i, k), val in ising.j.items():
        q[i, k] += 2.0 * val
        q[k, i] += 2.0 * val
        q[i, i] -= 2.0 * val
        q[k, k] -= 2.0 * val
        offset += val
    return QuboProblem(q, sense="minimize", offset=offset)


def save_qubo(path, qubo: QuboProblem) -> None:
    """Debug export: header ``Q <n>``, then upper-triangle ``i j value`` lines."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"Q {qubo.n}\n")
        for i in range(qubo.n):
            for j in range(i, qubo.n):
                fh.write(f"{i} {j} {qubo.q[i, j]:.17g}\n")


def load_qubo(path, sense: str = "maximize") -> QuboProblem:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2 or header[0] != "Q":
            raise ValueError(f"expected 'Q <n>' header, got {header}")
        n = int(header[1])
        q = np.zeros((n, n))
        for line in fh:
            if not line.strip():
                continue
            i_s, j_s, v_s = line.split()
            i, j, v = int(i_s), int(j_s), float(v_s)
            q[i, j] = v
            q[j, i] = v
    return QuboProblem(q, sense=sense)
