import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmclaw.grover import SearchSpace
from qmclaw.oracle import (
    INFLATION,
    FunctionTable,
    ImageList,
    QueryLedger,
    charge,
    mix_seed,
    mtps,
    partition_domain,
    restrict_domain,
    sample_random_function,
    sample_values,
)


def test_charge_examples():
    led = QueryLedger(10)
    assert charge(led, 3) is False and led.count == 3
    led = QueryLedger(10, count=9)
    assert charge(led, 3) is True and led.count == 10
    assert charge(led, 4) is True and led.count == 10


def test_charge_rejects_zero():
    with pytest.raises(ValueError):
        QueryLedger(5).charge(0)


@given(st.integers(1, 500), st.lists(st.integers(1, 60), max_size=40))
def test_ledger_monotone_and_abort_exact(limit, amounts):
    led = QueryLedger(limit)
    last = 0
    for a in amounts:
        was_aborted = led.aborted
        before = led.count
        led.charge(a)
        assert led.count >= last
        if was_aborted:
            assert led.count == before
        assert led.aborted == (led.count >= limit)
        assert led.count <= limit
        last = led.count


def test_single_point_function():
    f = sample_random_function(1, 5, seed=3)
    assert f.domain_size == 1 and 0 <= f(0) < 5


def test_sampling_is_deterministic():
    a = sample_random_function(2**16, 2**16, seed=1234)
    b = sample_random_function(2**16, 2**16, seed=1234)
    assert np.array_equal(a.values, b.values)
    c = sample_random_function(2**16, 2**16, seed=1235)
    assert not np.array_equal(a.values, c.values)


def test_domain_larger_than_range_rejected():
    with pytest.raises(ValueError):
        sample_random_function(10, 5, seed=0)
    with pytest.raises(ValueError):
        FunctionTable(np.zeros(10, dtype=np.uint32), 5)


def test_values_are_roughly_uniform():
    v = sample_values(200_000, 8, seed=9)
    counts = np.bincount(v, minlength=8)
    assert counts.min() > 24_000 and counts.max() < 26_000


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 400), st.integers(0, 2**63 - 1), st.data())
def test_inverse_index_round_trip(domain, seed, data):
    range_size = data.draw(st.integers(domain, 2 * domain + 3))
    f = sample_random_function(domain, range_size, seed)
    index = f.inverse_index
    seen = np.concatenate(list(index.values()))
    assert sorted(seen.tolist()) == list(range(domain))
    for y, xs in index.items():
        assert all(f(x) == y for x in xs)
        assert np.array_equal(xs, f.preimages(y))
    assert f.image_size() == len(index)


def test_preimages_before_and_after_index():
    f = sample_random_function(500, 600, seed=2)
    y = f(7)
    scan = f.preimages(y)
    _ = f.inverse_index
    assert np.array_equal(scan, f.preimages(y))


def test_table_is_read_only_and_caller_array_untouched():
    raw = np.arange(6, dtype=np.uint32)
    f = FunctionTable(raw, 6)
    with pytest.raises(ValueError):
        f.values[0] = 3
    raw[0] = 5
    assert raw[0] == 5


def test_restrict_domain():
    values = sample_values(2 * 64, 64, seed=4)
    g = restrict_domain(values, 64, range_size=64)
    assert g.domain_size == 64 and np.array_equal(g.values, values[:64])
    f = sample_random_function(40, 64, seed=5)
    assert np.array_equal(restrict_domain(f, 40).values, f.values)


def test_partition_cells_are_disjoint():
    values = sample_values(3 * 50, 50, seed=6)
    cells = partition_domain(values, 3, 50)
    points = [set(range(off, off + t.domain_size)) for off, t in cells]
    assert all(not (points[a] & points[b]) for a in range(3) for b in range(a + 1, 3))
    for off, t in cells:
        assert np.array_equal(t.values, values[off : off + t.domain_size])


def test_partition_truncates_oversized_cells():
    values = sample_values(5 * 10, 10, seed=6)
    cells = partition_domain(values, 2, 10)
    assert [off for off, _ in cells] == [0, 25]
    assert all(t.domain_size == 10 for _, t in cells)


def test_image_list_keeps_y_unique():
    L = ImageList()
    assert L.add((1,), 7)
    assert not L.add((2,), 7)
    assert list(L.y_set) == [7] and L.pop(7) == (1,)


def test_mtps_identity_hits_target():
    f = FunctionTable(np.arange(100, dtype=np.uint32), 100)
    targets = np.arange(20)
    rng = np.random.default_rng(0)
    charged = []
    for _ in range(10_000):
        led = QueryLedger(10**9)
        x, out = mtps(f, targets, led, rng)
        assert x is not None and f(x) < 20
        charged.append(out.queries_charged)
    assert np.mean(charged) <= 9 * np.sqrt(5 * 100 / 20)


def test_mtps_inflation_caps_marked_fraction():
    f = FunctionTable(np.full(64, 3, dtype=np.uint32), 64)
    led = QueryLedger(10**6)
    x, out = mtps(f, [3], led, np.random.default_rng(1))
    assert 0 <= x < 64
    assert SearchSpace(INFLATION * 64, f.preimage_count([3])).fraction == pytest.approx(1 / 5)


def test_mtps_empty_preimage_aborts_at_limit():
    f = FunctionTable(np.zeros(32, dtype=np.uint32), 32)
    led = QueryLedger(50)
    x, out = mtps(f, [5, 6], led, np.random.default_rng(2))
    assert x is None and led.count == 50 and out.queries_charged == 50


def test_mtps_requires_targets():
    f = FunctionTable(np.zeros(4, dtype=np.uint32), 4)
    with pytest.raises(ValueError):
        mtps(f, [], QueryLedger(10), np.random.default_rng(0))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 30))
def test_mtps_never_returns_unmarked(seed, n_targets):
    f = sample_random_function(200, 200, seed)
    targets = np.unique(f.values[:n_targets]).astype(np.int64)
    x, _ = mtps(f, targets, QueryLedger(10**7), np.random.default_rng(seed))
    assert f(x) in set(targets.tolist())


def test_binary_round_trip(tmp_path):
    f = sample_random_function(1000, 4096, seed=77)
    g = FunctionTable.from_bytes(f.to_bytes())
    assert np.array_equal(f.values, g.values) and g.range_size == 4096 and g.seed == 77
    path = tmp_path / "f.bin"
    f.save(path)
    assert len(path.read_bytes()) == 32 + 4 * 1000
    assert np.array_equal(FunctionTable.load(path).values, f.values)


def test_binary_rejects_garbage():
    with pytest.raises(ValueError):
        FunctionTable.from_bytes(b"XXXX" + bytes(40))


def test_mix_seed_separates_streams():
    assert mix_seed(1, 0) != mix_seed(1, 1)
    assert mix_seed(1, 2, 3) == mix_seed(1, 2, 3)
