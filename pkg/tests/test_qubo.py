import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import back_to_back, toy_events
from thrustjet.qubo import (
    IsingProblem,
    QuboProblem,
    auto_scale,
    build_singlecone_qubo,
    build_thrust_qubo,
    energy,
    ising_to_qubo,
    load_qubo,
    objective,
    save_qubo,
    thrust_from_objective,
    to_ising,
)
from thrustjet.shapes import canonical_partition, thrust_exact, thrust_of_partition


def _random_qubo(n, seed, sense="minimize"):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(n, n))
    return QuboProblem((m + m.T) / 2.0, sense=sense)


def test_qubo_validation():
    with pytest.raises(ValueError):
        QuboProblem(np.arange(6.0).reshape(2, 3))
    with pytest.raises(ValueError):
        QuboProblem(np.array([[0.0, 1.0], [2.0, 0.0]]))  # asymmetric
    with pytest.raises(ValueError):
        QuboProblem(np.zeros((2, 2)), sense="max")
    q = QuboProblem(np.eye(3))
    with pytest.raises(ValueError):
        q.q[0, 0] = 5.0  # matrix is read-only


def test_thrust_qubo_two_particles():
    ev = back_to_back(p=2.0)
    qubo = build_thrust_qubo(ev)
    assert qubo.sense == "maximize"
    np.testing.assert_allclose(qubo.q, [[4.0, -4.0], [-4.0, 4.0]])


def test_thrust_qubo_objective_is_jet_momentum_squared():
    for ev in toy_events(10, 4, 20, seed=20):
        qubo = build_thrust_qubo(ev)
        rng = np.random.default_rng(ev.event_id)
        for _ in range(10):
            bits = rng.integers(0, 2, size=ev.n)
            jet = bits.astype(float) @ ev.momenta
            assert objective(qubo, bits) == pytest.approx(
                float(jet @ jet), rel=1e-12, abs=1e-12
            )


def test_thrust_qubo_argmax_matches_exact_thrust():
    for ev in toy_events(10, 4, 12, seed=21):
        qubo = build_thrust_qubo(ev)
        best_bits = max(
            (np.array(b, dtype=np.uint8) for b in itertools.product((0, 1), repeat=ev.n)),
            key=lambda b: objective(qubo, b),
        )
        exact = thrust_exact(ev)
        assert canonical_partition(best_bits).tobytes() == exact.partition.tobytes()
        assert thrust_from_objective(ev, objective(qubo, best_bits)) == pytest.approx(
            exact.thrust, rel=1e-12
        )


def test_singlecone_reduces_to_thrust_at_right_angle():
    for ev in toy_events(5, 4, 15, seed=22):
        sc = build_singlecone_qubo(ev, np.pi / 2.0)
        thrust = build_thrust_qubo(ev)
        np.testing.assert_allclose(sc.q, thrust.q, rtol=1e-12, atol=1e-12)


def test_singlecone_formula_and_diagonal():
    ev = toy_events(1, 6, 6, seed=23)[0]
    radius = 1.0
    sc = build_singlecone_qubo(ev, radius)
    energies = ev.energies
    cos_r = np.cos(radius)
    expected = (ev.momenta @ ev.momenta.T - cos_r * np.outer(energies, energies)) / (
        1.0 - cos_r
    )
    np.testing.assert_allclose(sc.q, expected, rtol=1e-12)
    # massless particles: p_i.p_i = E_i^2, so the diagonal is E_i^2 at any R
    np.testing.assert_allclose(np.diag(sc.q), energies**2, rtol=1e-12)
    with pytest.raises(ValueError):
        build_singlecone_qubo(ev, 0.0)
    with pytest.raises(ValueError):
        build_singlecone_qubo(ev, 4.0)


def test_energy_sense_handling():
    qubo = _random_qubo(5, 0, sense="maximize")
    bits = np.array([1, 0, 1, 1, 0])
    assert energy(qubo, bits) == pytest.approx(-objective(qubo, bits))
    qmin = _random_qubo(5, 0, sense="minimize")
    assert energy(qmin, bits) == pytest.approx(objective(qmin, bits))


def test_auto_scale():
    qubo = _random_qubo(6, 1)
    scaled = auto_scale(qubo)
    assert scaled.max_abs_coeff == pytest.approx(1.0, rel=1e-12)
    assert scaled.scale_factor == pytest.approx(qubo.max_abs_coeff, rel=1e-12)
    np.testing.assert_allclose(scaled.q * scaled.scale_factor, qubo.q, rtol=1e-12)
    # idempotent up to float noise
    twice = auto_scale(scaled)
    np.testing.assert_allclose(twice.q, scaled.q, rtol=1e-12)
    assert twice.scale_factor == pytest.approx(scaled.scale_factor, rel=1e-12)
    with pytest.raises(ValueError):
        auto_scale(QuboProblem(np.zeros((3, 3))))


def test_thrust_from_objective_round_trip():
    for ev in toy_events(5, 4, 15, seed=24):
        qubo = build_thrust_qubo(ev)
        rng = np.random.default_rng(ev.event_id)
        bits = rng.integers(0, 2, size=ev.n)
        t = thrust_from_objective(ev, objective(qubo, bits))
        assert t == pytest.approx(thrust_of_partition(ev, bits), rel=1e-12, abs=1e-12)
    with pytest.raises(ValueError):
        thrust_from_objective(toy_events(1, 4, 4)[0], -1.0)


def test_to_ising_small_enumeration():
    ev = back_to_back(p=3.0)
    qubo = build_thrust_qubo(ev)
    ising = to_ising(qubo)
    for bits in itertools.product((0, 1), repeat=2):
        spins = 2 * np.array(bits) - 1
        assert ising.energy(spins) == pytest.approx(
            energy(qubo, np.array(bits)), rel=1e-12, abs=1e-9
        )


@pytest.mark.parametrize("sense", ["minimize", "maximize"])
def test_ising_round_trip_full_enumeration(sense):
    qubo = _random_qubo(8, 42, sense=sense)
    ising = to_ising(qubo)
    back = ising_to_qubo(ising)
    assert back.sense == "minimize"
    for bits in itertools.product((0, 1), repeat=8):
        x = np.array(bits, dtype=float)
        spins = 2 * x - 1
        e_qubo = energy(qubo, x)
        assert ising.energy(spins) == pytest.approx(e_qubo, rel=1e-9, abs=1e-9)
        assert energy(back, x) == pytest.approx(e_qubo, rel=1e-9, abs=1e-9)


@given(st.integers(0, 10_000), st.integers(2, 7))
@settings(max_examples=40, deadline=None)
def test_ising_equivalence_property(seed, n):
    qubo = _random_qubo(n, seed, sense="maximize" if seed % 2 else "minimize")
    ising = to_ising(qubo)
    rng = np.random.default_rng(seed + 1)
    bits = rng.integers(0, 2, size=n).astype(float)
    assert ising.energy(2 * bits - 1) == pytest.approx(energy(qubo, bits), abs=1e-9)


def test_ising_problem_structure():
    qubo = _random_qubo(5, 7)
    ising = to_ising(qubo)
    assert ising.n == 5
    assert all(i < j for (i, j) in ising.j)
    # minimize sense: h_i is half the i-th row sum of Q
    np.testing.assert_allclose(ising.h, qubo.q.sum(axis=1) / 2.0)


def test_qubo_file_round_trip(tmp_path):
    qubo = build_thrust_qubo(toy_events(1, 8, 8, seed=25)[0])
    path = tmp_path / "problem.qubo"
    save_qubo(path, qubo)
    loaded = load_qubo(path, sense="maximize")
    np.testing.assert_allclose(loaded.q, qubo.q, rtol=1e-15)
    assert loaded.sense == "maximize"
    with pytest.raises(ValueError):
        bad = tmp_path / "bad.qubo"
        bad.write_text("X 3\n")
        load_qubo(bad)
