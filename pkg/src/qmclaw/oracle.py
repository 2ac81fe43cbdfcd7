"""Random function oracles, image lists and the target-preimage search.

Functions are materialized as full value tables over ``range(domain_size)``
with values in ``range(range_size)``.  Labels are zero-based throughout.
"""
from __future__ import annotations

import struct
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator

import numpy as np

from .grover import BbhtSchedule, GroverOutcome, SearchSpace, bbht_search
from .ledger import QueryLedger

__all__ = [
    "FunctionTable",
    "ImageList",
    "QueryLedger",
    "charge",
    "make_rng",
    "mix_seed",
    "mtps",
    "partition_domain",
    "restrict_domain",
    "sample_random_function",
    "sample_values",
]

#: Inflation factor of the target-preimage predicate's domain.
INFLATION = 5
#: Oracle calls to ``f`` per evaluation of the inflated predicate.
PREDICATE_COST = 2

_MAGIC = b"QMFT"
_HEADER = struct.Struct("<4sIQQQ")


def mix_seed(base_seed: int, *keys: int) -> int:
    """Derive an independent 64-bit seed from ``base_seed`` and integer keys."""
    ss = np.random.SeedSequence(entropy=base_seed, spawn_key=tuple(int(k) for k in keys))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    return np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=tuple(keys)))
    )


def sample_values(domain_size: int, range_size: int, seed: int) -> np.ndarray:
    """Uniform i.i.d. values for any domain size (no ``|X| <= |Y|`` restriction)."""
    if domain_size < 1 or range_size < 1:
        raise ValueError("domain_size and range_size must be positive")
    dtype = np.uint32 if range_size <= 2**32 else np.uint64
    return make_rng(seed).integers(0, range_size, size=domain_size, dtype=dtype)


@dataclass(frozen=True, eq=False)
class FunctionTable:
    """An explicit function ``f: range(domain_size) -> range(range_size)``.

    Immutable after construction; the preimage index is built on first use.
    """

    values: np.ndarray
    range_size: int
    seed: int | None = None

    def __post_init__(self) -> None:
        values = np.asarray(self.values).view()
        if values.ndim != 1 or values.size == 0:
            raise ValueError("values must be a non-empty 1-D array")
        if values.size > self.range_size:
            raise ValueError(
                f"domain size {values.size} exceeds range size {self.range_size}; "
                "restrict the domain first"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def domain_size(self) -> int:
        return int(self.values.size)

    def __call__(self, x: int) -> int:
        return int(self.values[x])

    def __len__(self) -> int:
        return self.domain_size

    @cached_property
    def counts(self) -> np.ndarray:
        """Number of preimages of every ``y``."""
        return np.bincount(self.values, minlength=self.range_size)

    @cached_property
    def _index(self) -> tuple[np.ndarray, np.ndarray]:
        order = np.argsort(self.values, kind="stable")
        offsets = np.zeros(self.range_size + 1, dtype=np.int64)
        np.cumsum(self.counts, out=offsets[1:])
        return order, offsets

    def preimages(self, y: int) -> np.ndarray:
        """Sorted array of all ``x`` with ``f(x) == y``."""
        if "_index" in self.__dict__:
            order, offsets = self._index
            return order[offsets[y] : offsets[y + 1]]
        # a linear scan beats building the full index for a handful of lookups
        return np.flatnonzero(self.values == y)

    @property
    def inverse_index(self) -> dict[int, np.ndarray]:
        """Map from every attained ``y`` to its preimage list (materialized on demand)."""
        order, offsets = self._index
        ys = np.flatnonzero(self.counts)
        return {int(y): order[offsets[y] : offsets[y + 1]] for y in ys}

    def image_size(self) -> int:
        return int(np.count_nonzero(self.counts))

    def preimage_count(self, ys: Iterable[int] | np.ndarray) -> int:
        ys = np.fromiter(ys, dtype=np.int64) if not isinstance(ys, np.ndarray) else ys
        return int(self.counts[ys].sum()) if ys.size else 0

    # -- flat binary layout --------------------------------------------------

    def to_bytes(self) -> bytes:
        width = self.values.dtype.itemsize
        seed = 0 if self.seed is None else self.seed
        header = _HEADER.pack(_MAGIC, width, self.domain_size, self.range_size, seed)
        return header + self.values.astype(f"<u{width}", copy=False).tobytes()

    @classmethod
    def from_bytes(cls, data: bytes) -> FunctionTable:
        magic, width, domain, rng_size, seed = _HEADER.unpack_from(data)
        if magic != _MAGIC or width not in (4, 8):
            raise ValueError("not a serialized function table")
        body = np.frombuffer(data, dtype=f"<u{width}", offset=_HEADER.size)
        if body.size != domain:
            raise ValueError(f"expected {domain} values, found {body.size}")
        return cls(body.astype(np.uint32 if width == 4 else np.uint64), rng_size, seed)

    def save(self, path: str | Path) -> None:
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def load(cls, path: str | Path) -> FunctionTable:
        return cls.from_bytes(Path(path).read_bytes())


def sample_random_function(domain_size: int, range_size: int, seed: int) -> FunctionTable:
    """Draw a uniformly random function with ``domain_size <= range_size``."""
    if domain_size > range_size:
        raise ValueError(
            f"domain_size {domain_size} > range_size {range_size}; use sample_values "
            "and restrict_domain"
        )
    return FunctionTable(sample_values(domain_size, range_size, seed), range_size, seed)


def _raw_values(f: FunctionTable | np.ndarray) -> np.ndarray:
    return f.values if isinstance(f, FunctionTable) else np.asarray(f)


def restrict_domain(
    f: FunctionTable | np.ndarray, subset_size: int, range_size: int | None = None
) -> FunctionTable:
    """Restrict ``f`` to its first ``subset_size`` domain points.

    ``f`` may be a table or a bare value array over an arbitrarily large
    domain, in which case ``range_size`` is required.
    """
    values = _raw_values(f)
    if range_size is None:
        if not isinstance(f, FunctionTable):
            raise ValueError("range_size is required for bare value arrays")
        range_size = f.range_size
    if not 1 <= subset_size <= values.size:
        raise ValueError(f"subset_size must lie in [1, {values.size}]")
    seed = f.seed if isinstance(f, FunctionTable) else None
    return FunctionTable(values[:subset_size], range_size, seed)


def partition_domain(
    f: FunctionTable | np.ndarray, cells: int, range_size: int | None = None
) -> list[tuple[int, FunctionTable]]:
    """Split the domain into ``cells`` disjoint equal-size blocks.

    Returns ``(offset, table)`` pairs; local point ``x`` of a block is global
    point ``offset + x``.  Blocks larger than the range are truncated to
    ``range_size`` points.
    """
    values = _raw_values(f)
    if range_size is None:
        if not isinstance(f, FunctionTable):
            raise ValueError("range_size is required for bare value arrays")
        range_size = f.range_size
    width = values.size // cells
    if width < 1:
        raise ValueError(f"cannot split {values.size} points into {cells} cells")
    size = min(width, range_size)
    return [
        (c * width, FunctionTable(values[c * width : c * width + size], range_size))
        for c in range(cells)
    ]


def charge(ledger: QueryLedger, amount: int = 1) -> bool:
    """Charge ``amount`` queries to ``ledger``; True iff it is aborted."""
    return ledger.charge(amount)


@dataclass
class ImageList:
    """Records ``(x_1, ..., x_i, y)`` keyed by their distinct common image ``y``."""

    entries: dict[int, tuple[int, ...]] = field(default_factory=dict)

    def add(self, xs: tuple[int, ...], y: int) -> bool:
        """Insert a record unless ``y`` is already present; return whether it was inserted."""
        if y in self.entries:
            return False
        self.entries[y] = xs
        return True

    def pop(self, y: int) -> tuple[int, ...]:
        return self.entries.pop(y)

    @property
    def y_set(self):
        return self.entries.keys()

    def y_array(self) -> np.ndarray:
        return np.fromiter(self.entries, dtype=np.int64, count=len(self.entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, y: int) -> bool:
        return y in self.entries

    def __iter__(self) -> Iterator[tuple[tuple[int, ...], int]]:
        return ((xs, y) for y, xs in self.entries.items())


def mtps(
    f: FunctionTable,
    target_ys: Iterable[int] | np.ndarray,
    ledger: QueryLedger,
    rng: np.random.Generator,
    schedule: BbhtSchedule | None = None,
) -> tuple[int | None, GroverOutcome]:
    """Find ``x`` with ``f(x)`` in ``target_ys``.

    Runs the unknown-count search over the inflated space
    ``{1..5} x X`` whose predicate is true exactly on ``(1, x)`` with
    ``f(x)`` in the targets.  Every predicate evaluation costs two queries
    to ``f``.  The inflation keeps the marked fraction at most 1/5.

    Returns ``(x, outcome)``; ``x`` is None when the ledger ran out.
    """
    ys = target_ys if isinstance(target_ys, np.ndarray) else np.fromiter(target_ys, np.int64)
    if ys.size == 0:
        raise ValueError("target_ys must be non-empty")
    weights = f.counts[ys]
    marked = int(weights.sum())
    space = SearchSpace(INFLATION * f.domain_size, marked)

    def sample_marked(g: np.random.Generator) -> int:
        # uniform over f^{-1}(targets): pick y by preimage weight, then a preimage
        k = int(g.integers(marked))
        y = int(ys[np.searchsorted(np.cumsum(weights), k, side="right")])
        pre = f.preimages(y)
        return int(pre[g.integers(pre.size)])

    outcome = bbht_search(space, sample_marked, ledger, rng, schedule, PREDICATE_COST)
    return outcome.found, outcome
