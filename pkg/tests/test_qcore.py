"""Statevector engine tests: preparation, gates, Bell measurement."""

import math
import random

import numpy as np
import pytest

from ghzshare.qcore import (
    BELL_OUTCOMES,
    GATES,
    LABELS,
    BellOutcome,
    PauliGate,
    StateLabel,
    apply_gate,
    bell_probabilities,
    bits_to_index,
    global_phase_equal,
    measure_bell,
    norm,
    partial_inner,
    prepare_state,
)

A_P, A_M, B_P, B_M = BELL_OUTCOMES


def amplitudes_of(state):
    return {i: round(float(state[i]), 9) for i in range(64) if abs(state[i]) > 1e-9}


def test_prepare_a_support():
    state = prepare_state(StateLabel.A)
    expected = {int(s, 2): 0.5 for s in ("000000", "000111", "111000", "111111")}
    assert amplitudes_of(state) == expected


def test_prepare_b_support():
    state = prepare_state(StateLabel.B)
    expected = {int(s, 2): 0.5 for s in ("001001", "001110", "110001", "110110")}
    assert amplitudes_of(state) == expected


@pytest.mark.parametrize("label", LABELS)
def test_prepare_normalized(label):
    state = prepare_state(label)
    assert abs(norm(state) - 1.0) <= 1e-12
    assert len(amplitudes_of(state)) == 4


def test_iy_on_first_qubit_of_a():
    state = apply_gate(prepare_state(StateLabel.A), PauliGate.IY, 1)
    expected = {
        int("100000", 2): -0.5,
        int("100111", 2): -0.5,
        int("011000", 2): 0.5,
        int("011111", 2): 0.5,
    }
    assert amplitudes_of(state) == expected


def test_z_on_first_qubit_of_a():
    state = apply_gate(prepare_state(StateLabel.A), PauliGate.Z, 1)
    expected = {
        int("000000", 2): 0.5,
        int("000111", 2): 0.5,
        int("111000", 2): -0.5,
        int("111111", 2): -0.5,
    }
    assert amplitudes_of(state) == expected


@pytest.mark.parametrize("label", LABELS)
@pytest.mark.parametrize("q", [1, 2, 3, 4, 5, 6])
def test_identity_gate_is_identity(label, q):
    state = prepare_state(label)
    assert np.array_equal(apply_gate(state, PauliGate.I, q), state)


@pytest.mark.parametrize("gate", [PauliGate.X, PauliGate.Z])
@pytest.mark.parametrize("q", [1, 4, 6])
def test_x_and_z_are_involutions(gate, q):
    state = apply_gate(prepare_state(StateLabel.C), PauliGate.IY, 2)
    twice = apply_gate(apply_gate(state, gate, q), gate, q)
    assert np.max(np.abs(twice - state)) <= 1e-14


@pytest.mark.parametrize("q", [1, 3, 6])
def test_iy_squares_to_minus_identity(q):
    state = prepare_state(StateLabel.D)
    twice = apply_gate(apply_gate(state, PauliGate.IY, q), PauliGate.IY, q)
    assert np.max(np.abs(twice + state)) <= 1e-14
    assert global_phase_equal(twice, state)
    four = apply_gate(apply_gate(twice, PauliGate.IY, q), PauliGate.IY, q)
    assert np.max(np.abs(four - state)) <= 1e-14


@pytest.mark.parametrize("gate", GATES)
@pytest.mark.parametrize("q", [1, 2, 5, 6])
def test_gates_preserve_norm(gate, q):
    state = apply_gate(prepare_state(StateLabel.B), PauliGate.X, 3)
    assert abs(norm(apply_gate(state, gate, q)) - 1.0) <= 1e-14


@pytest.mark.parametrize("label", LABELS)
def test_uniform_bell_probabilities_on_p1_pair(label):
    probs = bell_probabilities(prepare_state(label), (1, 6))
    for outcome in BELL_OUTCOMES:
        p, post = probs[outcome]
        assert abs(p - 0.25) <= 1e-12
        assert post is not None and abs(norm(post) - 1.0) <= 1e-12


@pytest.mark.parametrize("label", LABELS)
@pytest.mark.parametrize("pair", [(1, 6), (2, 5), (3, 4)])
def test_probabilities_sum_to_one(label, pair):
    state = apply_gate(prepare_state(label), PauliGate.IY, 6)
    probs = bell_probabilities(state, pair)
    assert abs(sum(p for p, _ in probs.values()) - 1.0) <= 1e-12


def test_collapse_of_iy_run_matches_worked_example():
    # iY at qubit 1 on state A, then b+ on (1,6): the (2,3,4,5) factor is
    # -|0000> + |1111> (the -a+a- - a-a+ Bell product in the (2,3),(4,5) pairing).
    state = apply_gate(prepare_state(StateLabel.A), PauliGate.IY, 1)
    rest = partial_inner(state, (1, 6), B_P)
    rest = rest / np.linalg.norm(rest)
    expected = np.zeros(16)
    expected[0b0000] = -1.0 / math.sqrt(2)
    expected[0b1111] = 1.0 / math.sqrt(2)
    assert np.max(np.abs(rest - expected)) <= 1e-12


def test_eigenstate_measures_with_certainty():
    state = np.zeros(64)
    # a+ on (1,6) tensored with |0000> on (2,3,4,5)
    state[bits_to_index((0, 0, 0, 0, 0, 0))] = 1.0 / math.sqrt(2)
    state[bits_to_index((1, 0, 0, 0, 0, 1))] = 1.0 / math.sqrt(2)
    probs = bell_probabilities(state, (1, 6))
    assert abs(probs[A_P][0] - 1.0) <= 1e-12
    for outcome in (A_M, B_P, B_M):
        assert probs[outcome][0] == 0.0
        assert probs[outcome][1] is None
    outcome, post = measure_bell(state, (1, 6), random.Random(99))
    assert outcome is A_P
    assert global_phase_equal(post, state)


def test_measure_bell_deterministic_per_seed():
    state = prepare_state(StateLabel.A)
    first = measure_bell(state, (1, 6), random.Random(1234))
    second = measure_bell(state, (1, 6), random.Random(1234))
    assert first[0] is second[0]
    assert np.array_equal(first[1], second[1])


def test_measure_bell_frequencies_within_four_sigma():
    state = prepare_state(StateLabel.A)
    rng = random.Random(2024)
    counts = {o: 0 for o in BELL_OUTCOMES}
    n = 4096
    for _ in range(n):
        outcome, _ = measure_bell(state, (1, 6), rng)
        counts[outcome] += 1
    bound = 4 * math.sqrt(n * 0.25 * 0.75)
    for outcome in BELL_OUTCOMES:
        assert abs(counts[outcome] - n / 4) <= bound


@pytest.mark.parametrize("label", LABELS)
def test_remaining_pairs_stay_bell_correlated(label):
    # After measuring (1,6) of a prepared state, measuring (2,3) pins (4,5).
    for _, post in bell_probabilities(prepare_state(label), (1, 6)).values():
        assert post is not None
        for _, post23 in bell_probabilities(post, (2, 3)).items():
            p23, s23 = post23
            if s23 is None:
                continue
            probs45 = [p for p, _ in bell_probabilities(s23, (4, 5)).values()]
            assert sum(1 for p in probs45 if abs(p - 1.0) <= 1e-9) == 1
            assert all(p <= 1e-9 or abs(p - 1.0) <= 1e-9 for p in probs45)


def _joint_distribution(state, order):
    dist = {}

    def rec(s, acc, prob):
        if len(acc) == len(order):
            dist[tuple(sorted(acc.items()))] = prob
            return
        pair = order[len(acc)]
        for outcome, (p, post) in bell_probabilities(s, pair).items():
            if post is None:
                continue
            rec(post, {**acc, pair: outcome.ascii}, prob * p)

    rec(state, {}, 1.0)
    return dist


@pytest.mark.parametrize(
    "label,gate,position",
    [(StateLabel.A, PauliGate.IY, 1), (StateLabel.C, PauliGate.Z, 6)],
)
def test_measurement_order_independence(label, gate, position):
    state = apply_gate(prepare_state(label), gate, position)
    orders = [
        [(1, 6), (2, 5), (3, 4)],
        [(2, 5), (3, 4), (1, 6)],
        [(3, 4), (1, 6), (2, 5)],
    ]
    base = _joint_distribution(state, orders[0])
    for order in orders[1:]:
        other = _joint_distribution(state, order)
        assert set(base) == set(other)
        for key in base:
            assert abs(base[key] - other[key]) <= 1e-12


def test_global_phase_equal_basics():
    v = prepare_state(StateLabel.A)
    assert global_phase_equal(v, -v)
    assert global_phase_equal(v, 1j * v)
    e0 = np.zeros(64)
    e0[0] = 1.0
    e63 = np.zeros(64)
    e63[63] = 1.0
    assert not global_phase_equal(e0, e63)
