"""Numba kernels for single-bit-flip Metropolis annealing.

Each read owns a private splitmix64 stream keyed from the outside, so
results are independent of thread scheduling.  Energies here are relative
(no offset); the caller folds sense and offset.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_INV53 = 1.0 / float(1 << 53)


@njit(cache=True, inline="always")
def _next_u64(state):
    state = state + _GOLDEN
    z = state
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    z = z ^ (z >> np.uint64(31))
    return state, z


@njit(cache=True, inline="always")
def _next_uniform(state):
    state, z = _next_u64(state)
    return state, float(z >> np.uint64(11)) * _INV53


@njit(cache=True, nogil=True)
def anneal_single(q, betas, state, x):
    """Anneal one read in place; returns (best_x, best_e, rng_state).

    q is the minimize-sense coefficient matrix; x is the starting bits
    (modified in place); betas is the per-sweep inverse temperature ramp.
    """
    n = q.shape[0]
    xf = x.astype(np.float64)
    f = q @ xf
    e = 0.0
    for i in range(n):
        if x[i]:
            e += f[i]
    best_e = e
    best_x = x.copy()

    for sweep in range(betas.shape[0]):
        beta = betas[sweep]
        for i in range(n):
            d = 1.0 - 2.0 * x[i]
            de = 2.0 * d * f[i] + q[i, i]
            accept = de <= 0.0
            if not accept:
                state, u = _next_uniform(state)
                accept = u < np.exp(-beta * de)
            if accept:
                x[i] = 1 - x[i]
                e += de
                for k in range(n):
                    f[k] += d * q[i, k]
                if e < best_e:
                    best_e = e
                    best_x[:] = x
    return best_x, best_e, state


@njit(cache=True, nogil=True, parallel=True)
def anneal_many(q, betas, seeds, init_states, use_init):
    """Independent reads in parallel.

    Returns (best_states, best_energies, final_states); the final state of
    a read is its last annealed configuration, the analog of a hardware
    readout sample.
    """
    reads = seeds.shape[0]
    n = q.shape[0]
    best_states = np.zeros((reads, n), dtype=np.uint8)
    best_energies = np.zeros(reads)
    final_states = np.zeros((reads, n), dtype=np.uint8)
    for r in prange(reads):
        state = seeds[r]
        x = np.zeros(n, dtype=np.uint8)
        if use_init:
            x[:] = init_states[r]
        else:
            for i in range(n):
                state, z = _next_u64(state)
                x[i] = np.uint8(z & np.uint64(1))
        bx, be, state = anneal_single(q, betas, state, x)
        best_states[r] = bx
        best_energies[r] = be
        final_states[r] = x
    return best_states, best_energies, final_states


@njit(cache=True, nogil=True)
def anneal_chain(q, betas, seeds, init_state):
    """Sequential reads where each read starts from the best state so far."""
    reads = seeds.shape[0]
    n = q.shape[0]
    best_states = np.zeros((reads, n), dtype=np.uint8)
    best_energies = np.zeros(reads)
    incumbent = init_state.copy()
    xf = incumbent.astype(np.float64)
    incumbent_e = float(xf @ (q @ xf))
    for r in range(reads):
        x = incumbent.copy()
        bx, be, _ = anneal_single(q, betas, seeds[r], x)
        if be < incumbent_e:
            incumbent = bx.copy()
            incumbent_e = be
        best_states[r] = incumbent
        best_energies[r] = incumbent_e
    return best_states, best_energies
