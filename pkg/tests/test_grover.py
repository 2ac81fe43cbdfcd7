import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmclaw.grover import (
    BackendLimitError,
    BbhtSchedule,
    SearchSpace,
    bbht_expected_bound,
    bbht_search,
    bbht_search_indices,
    grover_success_prob,
    statevector_grover,
)
from qmclaw.ledger import QueryLedger


def test_exact_rotation():
    assert grover_success_prob(SearchSpace(4, 1), 1) == pytest.approx(1.0, abs=1e-15)


def test_zero_iterations_is_marked_fraction():
    assert grover_success_prob(SearchSpace(100, 25), 0) == 0.25


def test_nothing_marked_rejected():
    with pytest.raises(ValueError):
        grover_success_prob(SearchSpace(10, 0), 3)


def test_closed_form_matches_statevector_single_marked():
    space = SearchSpace(1024, 1)
    assert abs(grover_success_prob(space, 25) - statevector_grover(space, [17], 25)) < 1e-9


def test_statevector_small_cases():
    assert statevector_grover(SearchSpace(4, 1), {2}, 1) == pytest.approx(1.0, abs=1e-12)
    assert statevector_grover(SearchSpace(2, 2), {0, 1}, 0) == pytest.approx(1.0, abs=1e-15)


def test_statevector_sweep_512():
    rng = np.random.default_rng(5)
    marked = rng.choice(512, size=7, replace=False)
    space = SearchSpace(512, 7)
    for j in range(31):
        assert abs(statevector_grover(space, marked, j) - grover_success_prob(space, j)) < 1e-9


def test_statevector_backend_limit():
    with pytest.raises(BackendLimitError):
        statevector_grover(SearchSpace(2**12 + 1, 1), [0], 1)


def test_statevector_marked_set_must_match_count():
    with pytest.raises(ValueError):
        statevector_grover(SearchSpace(8, 2), [1], 1)


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_backends_agree(data):
    n = data.draw(st.integers(1, 2**12))
    t = data.draw(st.integers(1, n))
    j = data.draw(st.integers(0, math.floor(3 * math.sqrt(n))))
    marked = np.random.default_rng(n * 31 + t).choice(n, size=t, replace=False)
    space = SearchSpace(n, t)
    p = grover_success_prob(space, j)
    assert 0.0 <= p <= 1.0
    assert abs(statevector_grover(space, marked, j) - p) < 1e-9


@given(st.integers(1, 10**9), st.data())
def test_zero_iterations_exact(n, data):
    t = data.draw(st.integers(1, n))
    assert grover_success_prob(SearchSpace(n, t), 0) == t / n


def test_search_space_validation():
    with pytest.raises(ValueError):
        SearchSpace(0, 0)
    with pytest.raises(ValueError):
        SearchSpace(5, 6)


def test_schedule_validation():
    with pytest.raises(ValueError):
        BbhtSchedule(growth_factor=1.0)


def test_bbht_returns_marked():
    marked = list(range(0, 81, 5))[:17]
    rng = np.random.default_rng(2)
    for _ in range(200):
        out = bbht_search_indices(81, marked, QueryLedger(10**6), rng)
        assert out.found in marked


def test_bbht_no_marked_runs_to_limit():
    out = bbht_search(SearchSpace(1024, 0), None, QueryLedger(100), np.random.default_rng(0))
    assert out.found is None
    assert out.queries_charged == 100


def test_bbht_mean_within_bound():
    n, t = 1000, 90
    rng = np.random.default_rng(12)
    marked = rng.choice(n, size=t, replace=False)
    q = [bbht_search_indices(n, marked, QueryLedger(10**9), rng).queries_charged for _ in range(10_000)]
    bound = bbht_expected_bound(SearchSpace(n, t))
    assert bound == pytest.approx(4 * 1000 / math.sqrt(910 * 90))
    assert np.mean(q) <= 1.05 * bound


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 5000), st.data(), st.integers(0, 2**32))
def test_bbht_charges_at_least_one_per_round(n, data, seed):
    t = data.draw(st.integers(1, max(1, n // 5)))
    out = bbht_search(SearchSpace(n, t), lambda g: 0, QueryLedger(10**9), np.random.default_rng(seed))
    assert out.rounds >= 1
    assert out.queries_charged >= out.rounds


def test_bbht_abort_mid_search():
    # a huge space with one marked item cannot be found within 5 queries
    out = bbht_search(SearchSpace(10**8, 1), lambda g: 0, QueryLedger(5), np.random.default_rng(1))
    assert out.found is None and out.queries_charged == 5
