"""Symmetry-test attack and forward-search closed forms."""

import math

import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from qpke.symmetry import (
    PairOutcome,
    average_success_symmetry,
    enumerate_pair_table,
    forward_search_length,
    forward_search_success,
    pair_fidelity,
    pair_success,
    parity_iteration,
)

TWO_PI = 2.0 * math.pi


@pytest.mark.parametrize("omega,expected", [(0.0, 1.0), (math.pi, 0.0), (math.pi / 2, 0.5)])
def test_pair_fidelity_examples(omega, expected):
    assert pair_fidelity(omega) == pytest.approx(expected, abs=1e-15)


def test_pair_success_endpoints():
    assert pair_success(0.0) == pytest.approx(1.0, abs=1e-15)
    assert pair_success(math.pi) == pytest.approx(1.0, abs=1e-15)  # both wrong
    assert pair_success(math.pi / 2) == pytest.approx(0.5, abs=1e-15)


def test_pair_success_uniform_average_is_three_quarters():
    integral, _ = quad(pair_success, 0.0, TWO_PI, limit=200)
    assert integral / TWO_PI == pytest.approx(0.75, abs=1e-12)
    assert average_success_symmetry(1) == 0.75


@settings(max_examples=80, deadline=None)
@given(st.floats(min_value=0.0, max_value=TWO_PI))
def test_pair_success_symmetries(omega):
    value = pair_success(omega)
    assert value >= 0.5 - 1e-15
    assert value == pytest.approx(pair_success(TWO_PI - omega), abs=1e-12)
    assert value == pytest.approx(pair_success(omega + math.pi), abs=1e-12)


def test_pair_outcome_verdict():
    assert PairOutcome(0).verdict_correct
    assert not PairOutcome(1).verdict_correct
    assert PairOutcome(2).verdict_correct
    with pytest.raises(ValueError):
        PairOutcome(3)


@pytest.mark.parametrize("s,expected", [(1, 0.75), (3, 0.5625)])
def test_average_success_symmetry_values(s, expected):
    assert average_success_symmetry(s) == expected


def test_forward_search_success_values():
    assert forward_search_success(1, 1) == 0.75
    assert forward_search_success(2, 2) == pytest.approx(0.78125, abs=1e-15)
    assert forward_search_success(10**6, 3) > 1.0 - 1e-5


def test_symmetry_equals_single_copy_forward_search():
    for s in range(1, 65):
        assert forward_search_success(1, s) == average_success_symmetry(s)


def test_success_monotonicity():
    # decreasing toward 1/2 in s, increasing in T
    for T in (1, 2, 5):
        values = [forward_search_success(T, s) for s in range(1, 30)]
        assert all(a > b for a, b in zip(values, values[1:]))
        assert all(v > 0.5 for v in values)
    for s in (1, 4):
        values = [forward_search_success(T, s) for T in range(1, 20)]
        assert all(a < b for a, b in zip(values, values[1:]))
    values = [average_success_symmetry(s) for s in range(1, 30)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_forward_search_length_examples():
    assert forward_search_length(2.0 ** -5, 2) == 8
    assert forward_search_length(0.5, 3) == 0
    with pytest.raises(ValueError):
        forward_search_length(0.7, 2)
    with pytest.raises(ValueError):
        forward_search_length(-0.1, 2)


def test_parity_iteration_examples():
    for s in (1, 3, 7):
        assert parity_iteration(1.0, s) == 1.0
    assert parity_iteration(0.9, 3) == pytest.approx(0.756, abs=1e-12)


def brute_force_even_error(q1, s):
    total = 0.0
    for pattern in range(1 << s):
        wrong = bin(pattern).count("1")
        if wrong % 2 == 0:
            total += (1.0 - q1) ** wrong * q1 ** (s - wrong)
    return total


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=0.0, max_value=1.0), st.integers(min_value=1, max_value=12))
def test_parity_iteration_matches_enumeration_and_closed_form(q1, s):
    value = parity_iteration(q1, s)
    assert value == pytest.approx(brute_force_even_error(q1, s), abs=1e-12)
    assert value == pytest.approx(0.5 + (2.0 * q1 - 1.0) ** s / 2.0, abs=1e-12)


# the eight even-error combinations for s = 2: (public, cipher, e1, e2, e)
TWO_PAIR_SUCCESS_ROWS = {
    (("t", "t"), ("t", "t"), 0, 0, 0),
    (("t", "f"), ("t", "f"), 0, 2, 2),
    (("t", "t"), ("f", "f"), 1, 1, 2),
    (("t", "f"), ("f", "t"), 1, 1, 2),
    (("f", "t"), ("t", "f"), 1, 1, 2),
    (("f", "f"), ("t", "t"), 1, 1, 2),
    (("f", "t"), ("f", "t"), 2, 0, 2),
    (("f", "f"), ("f", "f"), 2, 2, 4),
}


def test_enumerate_pair_table():
    rows = enumerate_pair_table()
    assert len(rows) == 16
    success_rows = {
        (row.public, row.cipher, row.e1, row.e2, row.e) for row in rows if row.success
    }
    assert success_rows == TWO_PAIR_SUCCESS_ROWS
    for row in rows:
        assert row.e == row.e1 + row.e2
        assert row.success == (row.e % 2 == 0)
