"""Event shapes: thrust (exact, brute force, iterative) and sphericity.

Thrust is handled in its partition formulation: a bit vector x marks the
particles inside one hemisphere jet, and T(x) = 2 |sum_i x_i p_i| / sum_i |p_i|
on a balanced event.  Partitions are canonicalized to the lexicographically
smaller of (x, ~x) so results are comparable across solving methods.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .events import Event

BRUTE_FORCE_MAX_N = 20


@dataclass(frozen=True)
class ThrustResult:
    thrust: float
    axis: np.ndarray        # unit vector
    partition: np.ndarray   # uint8 bits, canonical representative
    jet_momentum: np.ndarray
    used_fallback: bool = False

    @property
    def one_minus_t(self) -> float:
        return 1.0 - self.thrust


@dataclass(frozen=True)
class SphericityResult:
    eigenvalues: np.ndarray  # sorted descending, trace-normalized
    sphericity: float
    axis: np.ndarray         # leading eigenvector, sign-fixed
    r: int


def canonical_partition(bits: np.ndarray) -> np.ndarray:
    """Lexicographically smaller of a bit vector and its complement."""
    bits = np.ascontiguousarray(bits, dtype=np.uint8)
    comp = np.ascontiguousarray(1 - bits)
    return bits if bits.tobytes() <= comp.tobytes() else comp


def thrust_of_partition(event: Event, bits: np.ndarray) -> float:
    """T(x) = 2 |sum_i x_i p_i| / sum_i |p_i|."""
    bits = np.asarray(bits)
    if bits.shape[0] != event.n:
        raise ValueError(f"partition length {bits.shape[0]} != N={event.n}")
    denom = event.sum_abs_p
    if denom == 0.0:
        raise ValueError("all momenta are zero")
    jet = bits.astype(np.float64) @ event.momenta
    return 2.0 * float(np.linalg.norm(jet)) / denom


def thrust_of_axis(event: Event, axis: np.ndarray) -> tuple[float, np.ndarray]:
    """Axis thrust sum_i |n.p_i| / sum_i |p_i| and the induced hemisphere bits.

    The induced partition is x_i = 1 iff n.p_i > 0; exact zeros go to 0.
    """
    axis = np.asarray(axis, dtype=np.float64)
    norm = np.linalg.norm(axis)
    if norm == 0.0:
        raise ValueError("zero axis")
    n_hat = axis / norm
    dots = event.momenta @ n_hat
    t = float(np.abs(dots).sum()) / event.sum_abs_p
    return t, (dots > 0.0).astype(np.uint8)


def _result_from_bits(event: Event, bits: np.ndarray, used_fallback: bool = False) -> ThrustResult:
    bits = canonical_partition(bits)
    jet = bits.astype(np.float64) @ event.momenta
    norm = np.linalg.norm(jet)
    if norm > 0.0:
        axis = jet / norm
    else:
        # direction of the hardest particle; arbitrary but deterministic
        axis = event.momenta[int(np.argmax(event.energies))].copy()
        axis = axis / np.linalg.norm(axis)
        used_fallback = True
    t = 2.0 * float(norm) / event.sum_abs_p
    return ThrustResult(t, axis, bits, jet, used_fallback)


def thrust_exact(event: Event) -> ThrustResult:
    """Exact thrust via enumeration of candidate hemisphere planes.

    Every optimal hemisphere is bounded by a plane that can be rotated onto
    two particles, so it suffices to check, for each pair (i, j), the
    partition induced by the normal p_i x p_j with all four inclusion choices
    for i and j.  Collinear pairs span no plane and are skipped; single
    particle directions are also tried, which covers degenerate events.
    """
    p = event.momenta
    n = event.n
    denom = event.sum_abs_p
    if denom == 0.0:
        raise ValueError("all momenta are zero")

    best_norm2 = -1.0
    best_bits: np.ndarray | None = None

    # single-axis candidates (cover fully collinear events, N = 2 included)
    dots = p @ p.T
    cand = (dots > 0.0).astype(np.float64)
    sums = cand @ p
    norms2 = np.einsum("ij,ij->i", sums, sums)
    k = int(np.argmax(norms2))
    best_norm2 = float(norms2[k])
    best_bits = (dots[k] > 0.0).astype(np.uint8)

    ii, jj = np.triu_indices(n, k=1)
    if ii.size:
        ref = np.cross(p[ii], p[jj])
        scale = np.linalg.norm(p[ii], axis=1) * np.linalg.norm(p[jj], axis=1)
        ok = np.linalg.norm(ref, axis=1) > 1e-14 * np.maximum(scale, 1e-300)
        ii, jj, ref = ii[ok], jj[ok], ref[ok]
    if ii.size:
        d = ref @ p.T                      # (pairs, N)
        rows = np.arange(ii.size)
        base = (d > 0.0).astype(np.float64)
        base[rows, ii] = 0.0
        base[rows, jj] = 0.0
        base_sum = base @ p                # (pairs, 3)
        for inc_i in (0.0, 1.0):
            for inc_j in (0.0, 1.0):
                jet = base_sum + inc_i * p[ii] + inc_j * p[jj]
                norms2 = np.einsum("ij,ij->i", jet, jet)
                k = int(np.argmax(norms2))
                if norms2[k] > best_norm2:
                    best_norm2 = float(norms2[k])
                    bits = (d[k] > 0.0).astype(np.uint8)
                    bits[ii[k]] = int(inc_i)
                    bits[jj[k]] = int(inc_j)
                    best_bits = bits

    return _result_from_bits(event, best_bits)


def thrust_brute_force(event: Event) -> ThrustResult:
    """Exact thrust by enumerating all hemisphere partitions (oracle).

    Fixes particle 0 outside the jet (x_0 = 0, the canonical side) and
    enumerates the 2^(N-1) assignments of the rest.  Refuses N > 20.
    """
    n = event.n
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute force refused for N={n} > {BRUTE_FORCE_MAX_N}")
    masks = np.arange(1 << (n - 1), dtype=np.uint32)
    bits = ((masks[:, None] >> np.arange(n - 1, dtype=np.uint32)) & 1).astype(np.float64)
    jets = bits @ event.momenta[1:]
    norms2 = np.einsum("ij,ij->i", jets, jets)
    k = int(np.argmax(norms2))
    best = np.zeros(n, dtype=np.uint8)
    best[1:] = (masks[k] >> np.arange(n - 1)) & 1
    return _result_from_bits(event, best)


def iterative_thrust(
    event: Event, seed_axis: np.ndarray, max_iter: int | None = None
) -> tuple[ThrustResult, int]:
    """EM-style local thrust search from a seed axis.

    Alternates between partitioning by the current axis and re-aligning the
    axis with the hemisphere momentum sum; |P| is non-decreasing, so the
    loop terminates at a fixed point.  Returns the result and the number of
    axis updates that changed the partition.
    """
    if max_iter is None:
        max_iter = event.n * (event.n - 1) // 2 + 1
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    _, bits = thrust_of_axis(event, seed_axis)
    used_fallback = False
    n_iter = 0
    for _ in range(max_iter):
        jet = bits.astype(np.float64) @ event.momenta
        norm = np.linalg.norm(jet)
        if norm == 0.0:
            axis = event.momenta[int(np.argmax(event.energies))]
            used_fallback = True
        else:
            axis = jet
        _, new_bits = thrust_of_axis(event, axis)
        if np.array_equal(new_bits, bits):
            break
        bits = new_bits
        n_iter += 1
    return _result_from_bits(event, bits, used_fallback=used_fallback), n_iter


def sphericity(event: Event, r: int = 1) -> SphericityResult:
    """Generalized sphericity from the |p|^(r-2)-weighted momentum tensor.

    The tensor is normalized by its own trace so the eigenvalues sum to 1
    for both r = 1 (linearized, infrared/collinear safe) and r = 2.  The
    axis is the leading eigenvector with its sign fixed to positive z
    component (ties broken by positive y, then x).
    """
    if r not in (1, 2):
        raise ValueError(f"r must be 1 or 2, got {r}")
    p = event.momenta
    mags = event.energies
    if mags.sum() == 0.0:
        raise ValueError("all momenta are zero")
    weights = np.where(mags > 0.0, mags ** (r - 2), 0.0)
    tensor = np.einsum("i,ia,ib->ab", weights, p, p)
    tensor /= np.trace(tensor)

    eigvals, eigvecs = np.linalg.eigh(tensor)
    order = np.argsort(eigvals)[::-1]
    eigvals = eigvals[order]
    axis = eigvecs[:, order[0]].copy()
    for comp in (2, 1, 0):
        if axis[comp] != 0.0:
            if axis[comp] < 0.0:
                axis = -axis
            break
    s = 1.5 * float(eigvals[1] + eigvals[2])
    return SphericityResult(eigvals, s, axis, r)
