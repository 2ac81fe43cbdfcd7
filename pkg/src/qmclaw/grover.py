"""Grover search in the query model.

Two independent routes to the success probability of ``j`` Grover
iterations are provided: the closed form ``sin^2((2j+1) theta)`` and an
explicit amplitude-vector simulation for small search spaces.  The
randomized driver :func:`bbht_search` handles an unknown number of marked
items by drawing iteration counts from a geometrically growing window, and
samples each measurement outcome from the closed form so that it scales far
beyond state-vector sizes.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, Iterable

import numpy as np

from .ledger import QueryLedger

log = logging.getLogger(__name__)

#: Largest search space the amplitude-vector backend accepts.
STATEVECTOR_MAX_SIZE = 2**12

#: Marked fraction below which the BBHT expectation bound applies.
BBHT_MAX_FRACTION = 17 / 81


class BackendLimitError(ValueError):
    """Raised when a search space is too large for the state-vector backend."""


@dataclass(frozen=True)
class SearchSpace:
    size: int
    marked_count: int

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValueError(f"search space must be non-empty, got size={self.size}")
        if not 0 <= self.marked_count <= self.size:
            raise ValueError(
                f"marked_count must lie in [0, {self.size}], got {self.marked_count}"
            )

    @property
    def fraction(self) -> float:
        return self.marked_count / self.size


@dataclass(frozen=True)
class BbhtSchedule:
    """Iteration window schedule for the unknown-count search.

    ``growth_factor`` multiplies the window after every failed round; the
    window never exceeds ``sqrt(size)``.
    """

    growth_factor: float = 6 / 5
    initial_bound: float = 1.0

    def __post_init__(self) -> None:
        if not self.growth_factor > 1:
            raise ValueError("growth_factor must exceed 1")
        if not self.initial_bound >= 1:
            raise ValueError("initial_bound must be at least 1")

    def cap(self, space: SearchSpace) -> float:
        return math.sqrt(space.size)


@dataclass
class GroverOutcome:
    found: Any | None
    queries_charged: int
    rounds: int

    @property
    def aborted(self) -> bool:
        return self.found is None


def grover_success_prob(space: SearchSpace, iterations: int) -> float:
    """Probability that measuring after ``iterations`` Grover rounds hits a marked item.

    Parameters
    ----------
    space : SearchSpace
        Search space with at least one marked item.
    iterations : int
        Number of oracle-plus-diffusion rounds applied to the uniform state.
    """
    if space.marked_count == 0:
        raise ValueError("success probability is identically 0 when nothing is marked")
    if iterations < 0:
        raise ValueError("iterations must be non-negative")
    if iterations == 0:
        return space.marked_count / space.size
    theta = math.asin(math.sqrt(space.marked_count / space.size))
    p = math.sin((2 * iterations + 1) * theta) ** 2
    return min(1.0, max(0.0, p))


def statevector_grover(space: SearchSpace, marked_set: Iterable[int], iterations: int) -> float:
    """Simulate Grover on an explicit real amplitude vector; return mass on ``marked_set``."""
    if space.size > STATEVECTOR_MAX_SIZE:
        raise BackendLimitError(
            f"backend limit: size {space.size} exceeds {STATEVECTOR_MAX_SIZE}"
        )
    if iterations < 0:
        raise ValueError("iterations must be non-negative")
    marked = np.zeros(space.size, dtype=bool)
    idx = np.fromiter(marked_set, dtype=np.int64)
    marked[idx] = True
    if int(marked.sum()) != space.marked_count or len(idx) != space.marked_count:
        raise ValueError("marked_set must contain exactly marked_count distinct indices")

    amp = np.full(space.size, 1.0 / math.sqrt(space.size))
    for _ in range(iterations):
        amp[marked] *= -1.0
        amp = 2.0 * amp.mean() - amp
    return float(np.sum(amp[marked] ** 2))


def bbht_search(
    space: SearchSpace,
    sample_marked: Callable[[np.random.Generator], Any] | None,
    ledger: QueryLedger,
    rng: np.random.Generator,
    schedule: BbhtSchedule | None = None,
    queries_per_call: int = 1,
) -> GroverOutcome:
    """Search for a marked item when the number of marked items is unknown.

    Each round draws ``j`` uniformly from ``{0, ..., floor(m) - 1}``, runs
    ``j`` Grover iterations, measures, and tests the measured candidate
    classically.  A round costs ``(j + 1) * queries_per_call`` queries.  On
    failure the window grows as ``m <- min(growth_factor * m, sqrt(n))``.

    Measurement outcomes are Bernoulli draws from :func:`grover_success_prob`;
    a successful measurement returns ``sample_marked(rng)``, which must draw
    uniformly from the marked set.  With no marked items the search never
    succeeds and ends only when ``ledger`` is exhausted.

    Parameters
    ----------
    space : SearchSpace
        Size of the search space and the exact number of marked items.
    sample_marked : callable or None
        Uniform sampler over the marked set; ignored when nothing is marked.
    ledger : QueryLedger
        Query budget shared with the caller.  Exhaustion aborts the search.
    rng : numpy.random.Generator
        Source of all randomness in the run.
    schedule : BbhtSchedule, optional
        Window growth parameters; defaults to ``BbhtSchedule()``.
    queries_per_call : int
        Oracle queries charged per evaluation of the search predicate.
    """
    schedule = schedule or BbhtSchedule()
    if space.marked_count and space.fraction >= BBHT_MAX_FRACTION:
        log.debug(
            "marked fraction %.4f is outside the regime of the BBHT bound", space.fraction
        )
    start = ledger.count
    cap = schedule.cap(space)
    m = min(schedule.initial_bound, cap)
    rounds = 0
    while not ledger.aborted:
        j = int(rng.integers(0, max(1, math.floor(m))))
        rounds += 1
        if ledger.charge((j + 1) * queries_per_call):
            break
        if space.marked_count and rng.random() < grover_success_prob(space, j):
            return GroverOutcome(sample_marked(rng), ledger.count - start, rounds)
        m = min(schedule.growth_factor * m, cap)
    return GroverOutcome(None, ledger.count - start, rounds)


def bbht_search_indices(
    n: int,
    marked: Iterable[int],
    ledger: QueryLedger,
    rng: np.random.Generator,
    schedule: BbhtSchedule | None = None,
) -> GroverOutcome:
    """Convenience wrapper: search ``range(n)`` for an element of an explicit marked set."""
    marked_arr = np.unique(np.fromiter(marked, dtype=np.int64))
    space = SearchSpace(n, len(marked_arr))
    return bbht_search(
        space,
        lambda g: int(marked_arr[g.integers(len(marked_arr))]),
        ledger,
        rng,
        schedule,
    )


def bbht_expected_bound(space: SearchSpace) -> float:
    """Upper bound ``4n / sqrt((n - t) t)`` on the expected number of queries."""
    n, t = space.size, space.marked_count
    return 4 * n / math.sqrt((n - t) * t)
