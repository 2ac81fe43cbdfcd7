"""End-to-end acceptance checks.  Run with ``pytest tests/test_acceptance.py``.

Each test carries a ``criterion`` label; a PASS/FAIL line per label is
printed in the terminal summary.
"""
from fractions import Fraction
from statistics import mean

import pytest

from qmclaw import harness
from qmclaw.cli import main
from qmclaw.harness import SweepConfig, fit_exponent, run_sweep

pytestmark = pytest.mark.slow


def criterion(label):
    def mark(fn):
        fn.criterion = label
        return fn
    return mark


def pow2(lo, hi):
    return [2**e for e in range(lo, hi + 1, 2)]


@pytest.fixture(scope="module")
def sweeps():
    """Every sweep run by this module, shared so the validity check sees all of them."""
    return {}


def sweep(store, name, cfg):
    if name not in store:
        store[name] = run_sweep(cfg)
    return store[name]


@criterion("1. exponent table, exact rationals")
def test_exponent_table(capsys):
    assert main(["bound-table", "--l-max", "8"]) == 0
    out = capsys.readouterr().out
    rows = {r["l"]: r for r in harness.bound_table(8)}
    assert [rows[l]["ours"] for l in range(2, 9)] == [
        Fraction(2 ** (l - 1) - 1, 2**l - 1) for l in range(2, 9)
    ]
    ours = ["1/3", "3/7", "7/15", "15/31", "31/63", "63/127", "127/255"]
    hsx = ["1/3", "4/9", "13/27", "40/81", "121/243", "364/729", "1093/2187"]
    assert [str(rows[l]["ours"]) for l in range(2, 9)] == ours
    assert [str(rows[l]["hsx"]) for l in range(2, 9)] == hsx
    for line, a, b in zip(out.splitlines()[1:], ours, hsx):
        assert a in line.split() and b in line.split()


@criterion("2. SHA3 budget table 181/230/250/259")
def test_sha3_table(capsys):
    assert main(["sha3-table"]) == 0
    out = capsys.readouterr().out.splitlines()[1:]
    assert [tuple(map(int, r.split())) for r in out] == [(2, 181), (3, 230), (4, 250), (5, 259)]


@criterion("3. analytic and state-vector Grover agree")
def test_backend_equivalence():
    assert len(harness.grover_grid()) >= 200
    check, = harness.suite_grover()
    print(check.detail)
    assert check.passed


@criterion("4. BBHT mean queries within 1.05x bound")
def test_bbht_bound():
    checks = harness.suite_bbht()
    assert len(checks) >= 10
    for c in checks:
        print(c.name, c.detail)
    assert all(c.passed for c in checks)


@criterion("5. mclaw exponent l=2 within 1/3 +- 0.05")
def test_exponent_l2(sweeps):
    recs = sweep(sweeps, "mclaw2", SweepConfig("mclaw", 2, pow2(10, 20), trials=100, seed=42))
    fit = fit_exponent(recs)
    print(f"slope {fit.slope:.4f}")
    assert fit.within_tolerance


@criterion("6. mclaw exponent l=3 within 3/7 +- 0.07")
def test_exponent_l3(sweeps):
    recs = sweep(sweeps, "mclaw3", SweepConfig("mclaw", 3, pow2(12, 22), trials=50, seed=43))
    fit = fit_exponent(recs)
    print(f"slope {fit.slope:.4f}")
    assert fit.within_tolerance


@criterion("7. mclaw success rate >= 0.70 at k=4")
@pytest.mark.parametrize("l", [2, 3])
def test_success_rate(sweeps, l):
    rec, = sweep(sweeps, f"success{l}", SweepConfig("mclaw", l, [2**14], k=4, trials=200, seed=7))
    print(f"l={l}: {rec.successes}/{rec.trials}")
    assert rec.successes / rec.trials >= 0.70


@criterion("8. every solution verifies and every run stays within Qlimit")
def test_validity(sweeps):
    sweep(sweeps, "bht", SweepConfig("bht", 2, pow2(10, 18), trials=50, seed=1))
    sweep(sweeps, "hsx", SweepConfig("hsx", 3, pow2(12, 18), trials=50, seed=2))
    sweep(sweeps, "collision2", SweepConfig("collision", 2, pow2(10, 16), trials=50, seed=3))
    sweep(sweeps, "collision3", SweepConfig("collision", 3, pow2(12, 16), trials=50, seed=4))
    total = 0
    for name, recs in sweeps.items():
        for r in recs:
            assert r.verified == r.trials, f"{name} N={r.N}: {r.verified}/{r.trials} verified"
            assert r.within_limit == r.trials, f"{name} N={r.N}: budget exceeded"
            total += r.trials
    print(f"{total} runs over {len(sweeps)} sweeps")
    assert len(sweeps) >= 6


@criterion("9. mclaw beats hsx on paired runs at l=3, N=2^18")
def test_improvement():
    ours, theirs = harness.paired_comparison(3, 2**18, 100, seed=9)
    print(f"{len(ours)} pairs: mclaw {mean(ours):.0f} vs hsx {mean(theirs):.0f}")
    assert mean(ours) < mean(theirs)


@criterion("10. image-size, hypergeometric and good-event checks")
def test_probabilistic_suite():
    reports = harness.suite_lemmas()
    for r in reports:
        print(r.name, r.empirical_rate, r.theoretical_bound)
    assert reports[0].trials == 1000
    assert all(r.passed for r in reports)
