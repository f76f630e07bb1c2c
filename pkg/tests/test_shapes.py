import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import back_to_back, fourfold_planar, threefold_planar, toy_events
from thrustjet.events import Event, balance
from thrustjet.shapes import (
    canonical_partition,
    iterative_thrust,
    sphericity,
    thrust_brute_force,
    thrust_exact,
    thrust_of_axis,
    thrust_of_partition,
)


def test_canonical_partition_picks_lexicographically_smaller():
    np.testing.assert_array_equal(
        canonical_partition(np.array([1, 0, 1], dtype=np.uint8)), [0, 1, 0]
    )
    np.testing.assert_array_equal(
        canonical_partition(np.array([0, 1, 1], dtype=np.uint8)), [0, 1, 1]
    )
    # canonical representative always has x_0 = 0
    rng = np.random.default_rng(0)
    for _ in range(50):
        bits = rng.integers(0, 2, size=7).astype(np.uint8)
        canon = canonical_partition(bits)
        assert canon[0] == 0
        assert np.array_equal(canon, bits) or np.array_equal(canon, 1 - bits)


def test_thrust_of_partition_known_cases():
    ev = back_to_back()
    assert thrust_of_partition(ev, [0, 1]) == pytest.approx(1.0)
    assert thrust_of_partition(ev, [1, 0]) == pytest.approx(1.0)
    assert thrust_of_partition(ev, [0, 0]) == 0.0
    assert thrust_of_partition(ev, [1, 1]) == pytest.approx(0.0, abs=1e-15)


def test_thrust_of_partition_complement_invariant():
    for ev in toy_events(5, 4, 10, seed=1):
        rng = np.random.default_rng(ev.event_id)
        bits = rng.integers(0, 2, size=ev.n).astype(np.uint8)
        assert thrust_of_partition(ev, bits) == pytest.approx(
            thrust_of_partition(ev, 1 - bits), rel=0, abs=1e-9
        )


def test_thrust_of_axis_basics():
    ev = back_to_back()
    t, bits = thrust_of_axis(ev, [0.0, 0.0, 1.0])
    assert t == pytest.approx(1.0)
    np.testing.assert_array_equal(bits, [1, 0])
    # sign flip gives the complement partition, same axis thrust
    t2, bits2 = thrust_of_axis(ev, [0.0, 0.0, -1.0])
    assert t2 == pytest.approx(t)
    np.testing.assert_array_equal(bits2, 1 - bits)
    with pytest.raises(ValueError):
        thrust_of_axis(ev, [0.0, 0.0, 0.0])


def test_axis_thrust_bounded_by_induced_partition_thrust():
    # T(n) <= T(x(n)) always, with equality when n is the exact thrust axis
    for ev in toy_events(10, 5, 20, seed=2):
        rng = np.random.default_rng(ev.event_id)
        axis = rng.normal(size=3)
        t_axis, bits = thrust_of_axis(ev, axis)
        assert t_axis <= thrust_of_partition(ev, bits) + 1e-12
        exact = thrust_exact(ev)
        t_at_exact, bits_at_exact = thrust_of_axis(ev, exact.axis)
        assert t_at_exact == pytest.approx(exact.thrust, rel=1e-12)
        assert canonical_partition(bits_at_exact).tobytes() == exact.partition.tobytes()


def test_thrust_known_values():
    assert thrust_exact(back_to_back()).thrust == pytest.approx(1.0, rel=1e-12)
    assert thrust_exact(threefold_planar()).thrust == pytest.approx(2.0 / 3.0, rel=1e-12)
    assert thrust_exact(fourfold_planar()).thrust == pytest.approx(
        np.sqrt(2.0) / 2.0, rel=1e-12
    )
    # brute-force oracle agrees on all three
    for ev in (back_to_back(), threefold_planar(), fourfold_planar()):
        assert thrust_brute_force(ev).thrust == pytest.approx(
            thrust_exact(ev).thrust, rel=1e-12
        )


def test_exact_matches_brute_force_on_toy_events():
    for ev in toy_events(50, 4, 14, seed=3):
        exact = thrust_exact(ev)
        brute = thrust_brute_force(ev)
        assert exact.thrust == pytest.approx(brute.thrust, rel=1e-9)
        assert exact.partition.tobytes() == brute.partition.tobytes()


def test_exact_handles_collinear_event():
    ev = Event(0, np.array([[0, 0, 2.0], [0, 0, 1.0], [0, 0, -3.0]]))
    res = thrust_exact(ev)
    assert res.thrust == pytest.approx(1.0, rel=1e-12)
    assert thrust_brute_force(ev).thrust == pytest.approx(1.0, rel=1e-12)


def test_thrust_result_fields_consistent():
    for ev in toy_events(5, 6, 16, seed=4):
        res = thrust_exact(ev)
        assert 0.5 <= res.thrust <= 1.0 + 1e-12
        assert res.one_minus_t == pytest.approx(1.0 - res.thrust)
        assert np.linalg.norm(res.axis) == pytest.approx(1.0, rel=1e-12)
        np.testing.assert_allclose(
            res.jet_momentum, res.partition.astype(float) @ ev.momenta, atol=1e-12
        )
        assert res.partition[0] == 0
        assert not res.used_fallback


def test_brute_force_refuses_large_n():
    ev = toy_events(1, 21, 21, seed=5)[0]
    with pytest.raises(ValueError):
        thrust_brute_force(ev)


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_thrust_range_property(seed):
    rng = np.random.default_rng(seed)
    ev = balance(Event(0, rng.normal(size=(rng.integers(3, 12), 3))))
    res = thrust_exact(ev)
    assert 0.5 - 1e-12 <= res.thrust <= 1.0 + 1e-12
    assert res.thrust == pytest.approx(thrust_of_partition(ev, res.partition), rel=1e-12)
    # no partition beats it (spot check a few)
    for _ in range(5):
        bits = rng.integers(0, 2, size=ev.n)
        assert thrust_of_partition(ev, bits) <= res.thrust + 1e-9


def test_iterative_thrust_fixed_point_at_exact_axis():
    for ev in toy_events(10, 5, 20, seed=6):
        exact = thrust_exact(ev)
        res, n_iter = iterative_thrust(ev, exact.axis)
        assert n_iter == 0
        assert res.thrust == pytest.approx(exact.thrust, rel=1e-12)
        assert res.partition.tobytes() == exact.partition.tobytes()


def test_iterative_thrust_pair_converges_immediately():
    ev = back_to_back()
    for seed_axis in ([1.0, 0.2, 0.1], [0.0, 1.0, 0.0], [0.0, 0.01, -1.0]):
        res, n_iter = iterative_thrust(ev, seed_axis)
        assert n_iter <= 1
        assert res.thrust == pytest.approx(1.0, rel=1e-12)


def test_iterative_thrust_monotone_and_bounded():
    # |P| never decreases between axis updates and the loop terminates
    # within N(N-1)/2 + 1 updates; final thrust never exceeds the exact one
    for ev in toy_events(20, 5, 25, seed=7):
        rng = np.random.default_rng(ev.event_id)
        seed_axis = rng.normal(size=3)
        res, n_iter = iterative_thrust(ev, seed_axis)
        assert n_iter <= ev.n * (ev.n - 1) // 2 + 1
        exact = thrust_exact(ev)
        assert res.thrust <= exact.thrust + 1e-12
        # independent re-walk of the iteration recording |P| at each step
        _, bits = thrust_of_axis(ev, seed_axis)
        norms = [np.linalg.norm(bits.astype(float) @ ev.momenta)]
        for _ in range(n_iter + 1):
            jet = bits.astype(float) @ ev.momenta
            _, new_bits = thrust_of_axis(ev, jet)
            if np.array_equal(new_bits, bits):
                break
            bits = new_bits
            norms.append(np.linalg.norm(bits.astype(float) @ ev.momenta))
        assert all(b >= a - 1e-12 for a, b in zip(norms, norms[1:]))
        assert res.thrust >= 2.0 * norms[0] / ev.sum_abs_p - 1e-12


def test_iterative_thrust_seed_from_partition_sum_improves():
    for ev in toy_events(10, 6, 18, seed=8):
        rng = np.random.default_rng(ev.event_id + 77)
        bits = rng.integers(0, 2, size=ev.n).astype(np.uint8)
        jet = bits.astype(float) @ ev.momenta
        if np.linalg.norm(jet) == 0.0:
            continue
        res, _ = iterative_thrust(ev, jet)
        assert res.thrust >= thrust_of_partition(ev, bits) - 1e-12


def test_sphericity_pencil_like_pair():
    res = sphericity(back_to_back(), r=1)
    np.testing.assert_allclose(res.eigenvalues, [1.0, 0.0, 0.0], atol=1e-12)
    assert res.sphericity == pytest.approx(0.0, abs=1e-12)
    np.testing.assert_allclose(np.abs(res.axis), [0.0, 0.0, 1.0], atol=1e-12)
    assert res.axis[2] > 0.0  # sign fixed


def test_sphericity_isotropic_three_pairs():
    p = np.array(
        [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]],
        dtype=float,
    )
    for r in (1, 2):
        res = sphericity(Event(0, p), r=r)
        np.testing.assert_allclose(res.eigenvalues, [1 / 3] * 3, atol=1e-12)
        assert res.sphericity == pytest.approx(1.0, rel=1e-12)


def test_sphericity_invariants():
    for ev in toy_events(20, 4, 30, seed=9):
        for r in (1, 2):
            res = sphericity(ev, r=r)
            assert res.eigenvalues.sum() == pytest.approx(1.0, rel=1e-9)
            assert np.all(np.diff(res.eigenvalues) <= 1e-12)  # sorted descending
            assert np.all(res.eigenvalues >= -1e-12)
            assert 0.0 <= res.sphericity <= 1.0 + 1e-9
            assert np.linalg.norm(res.axis) == pytest.approx(1.0, rel=1e-9)
    with pytest.raises(ValueError):
        sphericity(toy_events(1, 4, 6)[0], r=3)


def test_sphericity_axis_aligns_with_jet_axis_for_clean_dijets():
    for ev in toy_events(10, 20, 40, smear=0.05, seed=10):
        s_axis = sphericity(ev, r=1).axis
        t_axis = thrust_exact(ev).axis
        assert abs(float(s_axis @ t_axis)) > 0.999
