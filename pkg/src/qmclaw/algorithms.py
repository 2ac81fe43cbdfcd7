"""Quantum claw and multicollision finders in the query model.

Three algorithms are simulated on explicit random function tables:

* :func:`bht_claw` finds a 2-claw from a classical list plus one
  target-preimage search.
* :func:`hsx_collision` finds an l-collision by recursively collecting
  (l-1)-collisions and extending one of them.
* :func:`mclaw` finds an l-claw by growing a chain of lists
  ``L_1, ..., L_l`` level by level, each level extending records of the
  previous one, under a hard query budget.

All three charge queries to a caller-supplied :class:`QueryLedger` and draw
randomness only from the caller's generator, so a fixed seed reproduces a
run exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .grover import SearchSpace, bbht_search
from .ledger import QueryLedger
from .oracle import INFLATION, PREDICATE_COST, FunctionTable, ImageList, mtps, partition_domain

#: Constant in the query budget ``k * 169 * l * c_N^1.5 * N^e``.
QLIMIT_CONSTANT = 169
#: Factor applied to every list-size parameter to obtain level capacities.
CAPACITY_FACTOR = 4


class ParameterError(ValueError):
    """Parameters outside the regime in which the algorithm is defined."""


def mclaw_exponent(l: int) -> Fraction:
    """Query exponent ``(2^(l-1) - 1) / (2^l - 1)`` of the list-chaining finder."""
    if l < 2:
        raise ValueError("l must be at least 2")
    return Fraction(2 ** (l - 1) - 1, 2**l - 1)


def hsx_exponent(l: int) -> Fraction:
    """Query exponent ``(3^(l-1) - 1) / (2 * 3^(l-1))`` of the recursive finder."""
    if l < 2:
        raise ValueError("l must be at least 2")
    return Fraction(3 ** (l - 1) - 1, 2 * 3 ** (l - 1))


def _log2(n: int | float) -> float:
    if isinstance(n, int) and n > 0 and n & (n - 1) == 0:
        return float(n.bit_length() - 1)
    return math.log2(n)


def _power(n: int, e: Fraction) -> float:
    """``n ** e``, exact whenever ``n`` is a power of two and the result is too."""
    if isinstance(n, int) and n > 0 and n & (n - 1) == 0:
        return 2.0 ** float((n.bit_length() - 1) * e)
    return float(n) ** float(e)


def list_sizes(l: int, N: int, c_N: float = 1.0) -> list[float]:
    """List-size parameters ``N_0, ..., N_l``.

    ``N_0 = N / (4 c_N)`` and ``N_i = N^((2^(l-i) - 1) / (2^l - 1))`` for
    ``i >= 1`` (so ``N_l = 1``).
    """
    sizes = [N / (CAPACITY_FACTOR * c_N)]
    sizes += [_power(N, Fraction(2 ** (l - i) - 1, 2**l - 1)) for i in range(1, l + 1)]
    return sizes


@dataclass(frozen=True)
class MclawParams:
    l: int
    N: int
    c_N: float
    k: int
    schedule: tuple[float, ...]
    capacities: tuple[int, ...]
    qlimit: float
    log2_qlimit: float

    @property
    def exponent(self) -> Fraction:
        return mclaw_exponent(self.l)

    @property
    def ledger_limit(self) -> int:
        """Integer budget: the largest query count not exceeding ``qlimit``."""
        return max(1, math.floor(self.qlimit))

    def ledger(self) -> QueryLedger:
        return QueryLedger(self.ledger_limit)


def log2_qlimit(l: int, N: int, c_N: float = 1.0, k: int = 2) -> float:
    """``log2`` of the query budget, evaluated in log space."""
    return (
        math.log2(k * QLIMIT_CONSTANT * l)
        + 1.5 * math.log2(c_N)
        + _log2(N) * float(mclaw_exponent(l))
    )


def build_params(l: int, N: int, c_N: float = 1.0, k: int = 2) -> MclawParams:
    if l < 2:
        raise ParameterError("l must be at least 2")
    if N < 2:
        raise ParameterError("N must be at least 2")
    if c_N < 1:
        raise ParameterError("c_N must be at least 1")
    if k < 2:
        raise ParameterError("k must be at least 2")
    sizes = list_sizes(l, N, c_N)
    capacities = tuple(math.ceil(CAPACITY_FACTOR * c_N * s) for s in sizes[1:])
    if capacities[0] > N:
        raise ParameterError(
            f"level-1 capacity {capacities[0]} exceeds N={N}; c_N={c_N} is too large"
        )
    lg = log2_qlimit(l, N, c_N, k)
    qlimit = k * QLIMIT_CONSTANT * l * c_N**1.5 * _power(N, mclaw_exponent(l))
    return MclawParams(l, N, float(c_N), k, tuple(sizes[:l]), capacities, qlimit, lg)


def sha3_bound_table(
    l_range: Sequence[int] = (2, 3, 4, 5), k: int = 2, N: int = 2**512, c_N: float = 1.0
) -> list[int]:
    """``ceil(log2(Qlimit_k))`` for each ``l``; defaults give a 512-bit hash."""
    return [math.ceil(log2_qlimit(l, N, c_N, k)) for l in l_range]


def default_c_n(domain_sizes: Sequence[int], N: int) -> float:
    return max(1.0, max(N / d for d in domain_sizes))


# -- solutions ---------------------------------------------------------------


@dataclass(frozen=True)
class ClawTuple:
    xs: tuple[int, ...]
    y: int


@dataclass(frozen=True)
class CollisionTuple:
    xs: tuple[int, ...]
    y: int


@dataclass
class AlgoResult:
    solution: ClawTuple | CollisionTuple | None
    total_queries: int
    per_level_queries: list[int]
    trial_seed: int | None = None
    level_overlaps: list[int] = field(default_factory=list)

    @property
    def aborted(self) -> bool:
        return self.solution is None


def verify_claw(claw: ClawTuple, functions: Sequence[FunctionTable]) -> bool:
    if len(claw.xs) != len(functions):
        return False
    for x, f in zip(claw.xs, functions):
        if not 0 <= x < f.domain_size or f(x) != claw.y:
            return False
    return True


def verify_collision(col: CollisionTuple, f: FunctionTable | np.ndarray) -> bool:
    values = f.values if isinstance(f, FunctionTable) else np.asarray(f)
    xs = col.xs
    if len(xs) < 2 or len(set(xs)) != len(xs):
        return False
    return all(0 <= x < values.size and int(values[x]) == col.y for x in xs)


# -- algorithms ----------------------------------------------------------------


def _range_size(functions: Sequence[FunctionTable]) -> int:
    sizes = {f.range_size for f in functions}
    if len(sizes) != 1:
        raise ParameterError("all functions must share one range")
    return sizes.pop()


def _search_empty(domain_size: int, ledger: QueryLedger, rng: np.random.Generator) -> None:
    # the predicate has no solutions: the search only ends when the budget does
    bbht_search(SearchSpace(INFLATION * domain_size, 0), None, ledger, rng, None, PREDICATE_COST)


def bht_claw(
    f1: FunctionTable,
    f2: FunctionTable,
    ledger: QueryLedger,
    rng: np.random.Generator,
    t1: int | None = None,
    start: int = 0,
) -> AlgoResult:
    """Find a 2-claw with a list of ``t1`` images of ``f1`` and one search in ``f2``.

    ``t1`` defaults to ``ceil(N^(1/3))``.  The list uses the points
    ``start, ..., start + t1 - 1`` of ``f1``.
    """
    N = _range_size([f1, f2])
    if t1 is None:
        t1 = math.ceil(_power(N, Fraction(1, 3)))
    if start + t1 > f1.domain_size:
        raise ParameterError(f"list of {t1} points does not fit in |X_1|={f1.domain_size}")
    begin = ledger.count
    if ledger.charge(t1):
        return AlgoResult(None, ledger.count - begin, [ledger.count - begin, 0])
    images = ImageList()
    for x in range(start, start + t1):
        images.add((x,), int(f1.values[x]))
    listed = ledger.count - begin
    x2, _ = mtps(f2, images.y_array(), ledger, rng)
    per_level = [listed, ledger.count - begin - listed]
    if x2 is None:
        return AlgoResult(None, ledger.count - begin, per_level)
    y = f2(x2)
    return AlgoResult(ClawTuple(images.entries[y] + (x2,), y), ledger.count - begin, per_level)


def hsx_collision(
    f: FunctionTable | np.ndarray,
    l: int,
    ledger: QueryLedger,
    rng: np.random.Generator,
    range_size: int | None = None,
) -> AlgoResult:
    """Find an l-collision by recursive list building and extension.

    The domain (at least ``l * N`` points) is split into ``l`` disjoint
    cells.  Level-1 list entries are drawn from cell 1 without reuse, and
    the extension at recursion depth ``m`` searches cell ``m``, so every
    returned tuple has pairwise-distinct inputs.  ``HSX(m)`` calls
    ``HSX(m-1)`` ``ceil(N^(1/3^(m-1)))`` times and extends one of the
    collected (m-1)-collisions; ``HSX(2)`` is :func:`bht_claw`.
    """
    if l < 2:
        raise ParameterError("l must be at least 2")
    if range_size is None:
        if not isinstance(f, FunctionTable):
            raise ParameterError("range_size is required for bare value arrays")
        range_size = f.range_size
    N = range_size
    n_points = f.domain_size if isinstance(f, FunctionTable) else np.asarray(f).size
    if n_points < l * N:
        raise ParameterError(f"need |X| >= l*|Y| = {l * N}, got {n_points}")
    cells = partition_domain(f, l, N)
    offsets = [off for off, _ in cells]
    tables = [tab for _, tab in cells]

    t1 = math.ceil(_power(N, Fraction(1, 3)))
    reps = {m: math.ceil(_power(N, Fraction(1, 3 ** (m - 1)))) for m in range(3, l + 1)}
    needed = t1 * math.prod(reps.values())
    if needed > N:
        raise ParameterError(f"level-1 lists need {needed} fresh points, only {N} available")

    begin = ledger.count
    per_level = [0] * l
    cursor = 0

    def collect(m: int) -> tuple[tuple[int, ...], int] | None:
        nonlocal cursor
        if m == 2:
            res = bht_claw(tables[0], tables[1], ledger, rng, t1=t1, start=cursor)
            cursor += t1
            per_level[0] += res.per_level_queries[0]
            per_level[1] += res.per_level_queries[1]
            return None if res.solution is None else (res.solution.xs, res.solution.y)
        lower = ImageList()
        for _ in range(reps[m]):
            rec = collect(m - 1)
            if rec is None:
                return None
            lower.add(*rec)
        before = ledger.count
        x, _ = mtps(tables[m - 1], lower.y_array(), ledger, rng)
        per_level[m - 1] += ledger.count - before
        if x is None:
            return None
        y = tables[m - 1](x)
        return lower.entries[y] + (x,), y

    rec = collect(l)
    total = ledger.count - begin
    if rec is None:
        return AlgoResult(None, total, per_level)
    xs = tuple(off + x for off, x in zip(offsets, rec[0]))
    return AlgoResult(CollisionTuple(xs, rec[1]), total, per_level)


def mclaw(
    functions: Sequence[FunctionTable],
    params: MclawParams,
    ledger: QueryLedger,
    rng: np.random.Generator,
    trial_seed: int | None = None,
    on_step: Callable[[int, ImageList | None, ImageList], None] | None = None,
) -> AlgoResult:
    """Find an l-claw by chaining lists ``L_1, ..., L_l``.

    Level 1 queries ``f_1`` on ``capacities[0]`` fresh points.  Level
    ``i >= 2`` runs ``capacities[i-1]`` target-preimage searches of ``f_i``
    against the images still held in ``L_{i-1}``; each hit moves one record
    from ``L_{i-1}`` to ``L_i``, extended by the new input.  The run aborts
    as soon as ``ledger`` is exhausted.

    ``level_overlaps[i-1]`` records ``|Im(f_i) & L'_{i-1}|`` at the moment
    level ``i`` starts, with ``L'_0`` the whole range.  ``on_step(i, L_{i-1},
    L_i)`` is called after every list update.
    """
    l = params.l
    if len(functions) != l:
        raise ParameterError(f"expected {l} functions, got {len(functions)}")
    if _range_size(functions) != params.N:
        raise ParameterError("function range does not match params.N")
    for i, f in enumerate(functions, 1):
        if f.domain_size * params.c_N < params.N:
            raise ParameterError(f"|X_{i}|={f.domain_size} is below N/c_N")
    if params.capacities[0] > functions[0].domain_size:
        raise ParameterError("level-1 capacity exceeds |X_1|")

    begin = ledger.count
    per_level: list[int] = []
    overlaps: list[int] = []
    prev: ImageList | None = None

    def result(solution):
        return AlgoResult(solution, ledger.count - begin, per_level, trial_seed, overlaps)

    for i, (f, cap) in enumerate(zip(functions, params.capacities), 1):
        level_begin = ledger.count
        cur = ImageList()
        if prev is None:
            overlaps.append(f.image_size())
            aborted = ledger.charge(cap)
            per_level.append(ledger.count - level_begin)
            if aborted:
                return result(None)
            for x, y in enumerate(f.values[:cap].tolist()):
                cur.add((x,), y)
                if on_step:
                    on_step(i, None, cur)
        else:
            ys = prev.y_array()
            overlaps.append(int(np.count_nonzero(f.counts[ys])) if ys.size else 0)
            for _ in range(cap):
                if not len(prev):
                    _search_empty(f.domain_size, ledger, rng)
                    per_level.append(ledger.count - level_begin)
                    return result(None)
                x, _ = mtps(f, prev.y_array(), ledger, rng)
                if x is None:
                    per_level.append(ledger.count - level_begin)
                    return result(None)
                y = f(x)
                cur.add(prev.pop(y) + (x,), y)
                if on_step:
                    on_step(i, prev, cur)
            per_level.append(ledger.count - level_begin)
        prev = cur

    y, xs = next(iter(prev.entries.items()))
    return result(ClawTuple(xs, y))


def collision_from_claw(
    f: FunctionTable | np.ndarray,
    l: int,
    params: MclawParams,
    ledger: QueryLedger,
    rng: np.random.Generator,
    range_size: int | None = None,
    trial_seed: int | None = None,
) -> AlgoResult:
    """Find an l-collision of ``f`` as an l-claw of its restrictions to ``l`` disjoint cells."""
    if range_size is None:
        range_size = f.range_size if isinstance(f, FunctionTable) else params.N
    if range_size != params.N:
        raise ParameterError("range size does not match params.N")
    cells = partition_domain(f, l, range_size)
    res = mclaw([tab for _, tab in cells], params, ledger, rng, trial_seed)
    if res.solution is not None:
        xs = tuple(off + x for (off, _), x in zip(cells, res.solution.xs))
        res.solution = CollisionTuple(xs, res.solution.y)
    return res
