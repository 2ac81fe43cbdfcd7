"""Experiment orchestration: sweeps over N, exponent fits, bound tables, validation suites."""
from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import binomtest

from . import config
from .algorithms import (
    AlgoResult,
    bht_claw,
    build_params,
    collision_from_claw,
    hsx_collision,
    hsx_exponent,
    mclaw,
    mclaw_exponent,
    sha3_bound_table,
    verify_claw,
    verify_collision,
)
from .grover import (
    SearchSpace,
    bbht_expected_bound,
    bbht_search_indices,
    grover_success_prob,
    statevector_grover,
)
from .ledger import QueryLedger
from .oracle import make_rng, mix_seed, sample_random_function, sample_values
from .stats import (
    HypergeomParams,
    LemmaReport,
    good_event_rate,
    hypergeom_tail_check,
    image_size_check,
)

log = logging.getLogger(__name__)

ALGORITHMS = ("bht", "hsx", "mclaw", "collision")
CSV_COLUMNS = (
    "algorithm",
    "l",
    "N",
    "c_N",
    "k",
    "trials",
    "successes",
    "mean_queries",
    "stddev_queries",
    "per_level_queries",
    "seed",
)


class CapacityError(RuntimeError):
    """A sweep would need more table memory than the configured budget."""


@dataclass
class SweepConfig:
    algorithm: str
    l: int
    N: list[int]
    c_N: float = 1.0
    k: int = 2
    trials: int = 100
    seed: int = 0
    out: str | None = None

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; pick from {ALGORITHMS}")
        if self.algorithm == "bht" and self.l != 2:
            raise ValueError("bht finds 2-claws only; use l=2")
        if not self.N or any(b <= a for a, b in zip(self.N, self.N[1:])):
            raise ValueError("N list must be non-empty and strictly increasing")
        if any(n < 2 or n & (n - 1) for n in self.N):
            raise ValueError("every N must be a power of two")
        if self.trials < 30:
            raise ValueError("sweeps need at least 30 trials per N")

    @classmethod
    def from_json(cls, path: str | Path) -> SweepConfig:
        return cls(**json.loads(Path(path).read_text()))


@dataclass
class SweepRecord:
    algorithm: str
    l: int
    N: int
    c_N: float
    k: int
    trials: int
    successes: int
    mean_queries: float
    stddev_queries: float
    per_level_queries: list[float]
    seed: int
    # not written to CSV
    verified: int = 0
    within_limit: int = 0
    qlimit: float = math.inf
    queries: list[int] = field(default_factory=list, repr=False)

    def csv_row(self) -> list[str]:
        return [
            self.algorithm,
            str(self.l),
            str(self.N),
            repr(float(self.c_N)),
            str(self.k),
            str(self.trials),
            str(self.successes),
            repr(float(self.mean_queries)),
            repr(float(self.stddev_queries)),
            ";".join(repr(float(q)) for q in self.per_level_queries),
            str(self.seed),
        ]

    def success_interval(self) -> tuple[float, float]:
        ci = binomtest(self.successes, self.trials).proportion_ci(0.95, method="wilson")
        return ci.low, ci.high


@dataclass
class FitResult:
    slope: float
    intercept: float
    residual: float
    theory_exponent: Fraction
    tolerance: float

    @property
    def within_tolerance(self) -> bool:
        return abs(self.slope - float(self.theory_exponent)) <= self.tolerance


# -- single trials -------------------------------------------------------------


def _domain(N: int, c_N: float) -> int:
    return min(N, math.ceil(N / c_N))


def run_trial(
    algorithm: str, l: int, N: int, c_N: float, k: int, seed: int, trial: int
) -> tuple[AlgoResult, bool]:
    """Run one seeded trial; return the result and whether its solution verifies."""
    params = build_params(l, N, c_N, k)
    ledger = params.ledger()
    trial_seed = mix_seed(seed, N, trial)
    rng = make_rng(trial_seed, 0)
    if algorithm == "mclaw":
        fs = [sample_random_function(_domain(N, c_N), N, mix_seed(trial_seed, 1, i)) for i in range(l)]
        res = mclaw(fs, params, ledger, rng, trial_seed)
        ok = res.solution is None or verify_claw(res.solution, fs)
    elif algorithm == "bht":
        fs = [sample_random_function(_domain(N, c_N), N, mix_seed(trial_seed, 1, i)) for i in range(2)]
        res = bht_claw(fs[0], fs[1], ledger, rng)
        ok = res.solution is None or verify_claw(res.solution, fs)
    elif algorithm == "collision":
        values = sample_values(l * _domain(N, c_N), N, mix_seed(trial_seed, 2))
        res = collision_from_claw(values, l, params, ledger, rng, N, trial_seed)
        ok = res.solution is None or verify_collision(res.solution, values)
    elif algorithm == "hsx":
        values = sample_values(l * N, N, mix_seed(trial_seed, 2))
        res = hsx_collision(values, l, ledger, rng, N)
        ok = res.solution is None or verify_collision(res.solution, values)
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    res.trial_seed = trial_seed
    return res, ok


def _trial_job(args):
    res, ok = run_trial(*args)
    return res.solution is not None, ok, res.total_queries, res.per_level_queries


def _workers() -> int:
    try:
        return max(1, int(os.environ.get(config.WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _table_bytes(algorithm: str, l: int, N: int) -> int:
    # values (<= 8 bytes each) plus the int64 preimage-count array per table
    points = 2 * N if algorithm == "bht" else l * N
    return points * 8 + points * 8


def summarize(
    algorithm: str, l: int, N: int, c_N: float, k: int, seed: int, outcomes: Sequence
) -> SweepRecord:
    qlimit = build_params(l, N, c_N, k).qlimit
    succ = [o for o in outcomes if o[0]]
    q = np.array([o[2] for o in succ], dtype=float)
    per_level = np.array([o[3] for o in succ], dtype=float) if succ else np.zeros((0, l))
    return SweepRecord(
        algorithm=algorithm,
        l=l,
        N=N,
        c_N=float(c_N),
        k=k,
        trials=len(outcomes),
        successes=len(succ),
        mean_queries=float(q.mean()) if q.size else math.nan,
        stddev_queries=float(q.std(ddof=1)) if q.size > 1 else 0.0,
        per_level_queries=per_level.mean(axis=0).tolist() if succ else [],
        seed=seed,
        verified=sum(1 for o in outcomes if o[1]),
        within_limit=sum(1 for o in outcomes if o[2] <= qlimit),
        qlimit=qlimit,
        queries=[o[2] for o in outcomes],
    )


def run_sweep(cfg: SweepConfig, workers: int | None = None) -> list[SweepRecord]:
    """Run ``cfg.trials`` seeded trials at every N; write CSV to ``cfg.out`` if set.

    Per-trial seeds depend only on ``(cfg.seed, N, trial)``, so the records
    are identical for any worker count.
    """
    workers = workers or _workers()
    for N in cfg.N:
        build_params(cfg.l, N, cfg.c_N, cfg.k)
        need = _table_bytes(cfg.algorithm, cfg.l, N) * workers
        if need > config.MEMORY_BUDGET:
            raise CapacityError(
                f"N={N} needs ~{need / 2**20:.0f} MiB of tables, budget is "
                f"{config.MEMORY_BUDGET / 2**20:.0f} MiB"
            )
    records = []
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        for N in cfg.N:
            jobs = [(cfg.algorithm, cfg.l, N, cfg.c_N, cfg.k, cfg.seed, t) for t in range(cfg.trials)]
            outcomes = list(pool.map(_trial_job, jobs, chunksize=4) if pool else map(_trial_job, jobs))
            rec = summarize(cfg.algorithm, cfg.l, N, cfg.c_N, cfg.k, cfg.seed, outcomes)
            log.info("%s l=%d N=2^%d: %d/%d ok, mean %.1f", cfg.algorithm, cfg.l,
                     N.bit_length() - 1, rec.successes, rec.trials, rec.mean_queries)
            records.append(rec)
    finally:
        if pool:
            pool.shutdown()
    if cfg.out:
        write_csv(records, cfg.out)
    return records


def records_to_csv(records: Iterable[SweepRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow(r.csv_row())
    return buf.getvalue()


def write_csv(records: Iterable[SweepRecord], path: str | Path) -> None:
    Path(path).write_text(records_to_csv(records))


def read_csv(path: str | Path) -> list[SweepRecord]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        return [
            SweepRecord(
                algorithm=row["algorithm"],
                l=int(row["l"]),
                N=int(row["N"]),
                c_N=float(row["c_N"]),
                k=int(row["k"]),
                trials=int(row["trials"]),
                successes=int(row["successes"]),
                mean_queries=float(row["mean_queries"]),
                stddev_queries=float(row["stddev_queries"]),
                per_level_queries=[float(v) for v in row["per_level_queries"].split(";") if v],
                seed=int(row["seed"]),
            )
            for row in reader
        ]


def format_records(records: Iterable[SweepRecord]) -> str:
    lines = [f"{'algo':<10}{'l':>3}{'log2 N':>8}{'success':>10}{'95% Wilson':>18}{'mean q':>12}{'sd':>10}"]
    for r in records:
        lo, hi = r.success_interval()
        lines.append(
            f"{r.algorithm:<10}{r.l:>3}{r.N.bit_length() - 1:>8}"
            f"{r.successes / r.trials:>10.3f}{f'[{lo:.3f}, {hi:.3f}]':>18}"
            f"{r.mean_queries:>12.1f}{r.stddev_queries:>10.1f}"
        )
    return "\n".join(lines)


# -- fitting and tables ----------------------------------------------------------


def theory_exponent(algorithm: str, l: int) -> Fraction:
    if algorithm == "hsx":
        return hsx_exponent(l)
    if algorithm == "bht":
        return Fraction(1, 3)
    return mclaw_exponent(l)


def fit_exponent(records: Sequence[SweepRecord]) -> FitResult:
    """Least-squares slope of ``ln(mean_queries)`` against ``ln N``."""
    if len(records) < 5:
        raise ValueError(f"need at least 5 records to fit, got {len(records)}")
    keys = {(r.algorithm, r.l) for r in records}
    if len(keys) != 1:
        raise ValueError(f"records mix algorithms/levels: {sorted(keys)}")
    algorithm, l = keys.pop()
    x = np.log([float(r.N) for r in records])
    y = np.log([r.mean_queries for r in records])
    (slope, intercept), res, *_ = np.polyfit(x, y, 1, full=True)
    residual = float(math.sqrt(res[0] / len(x))) if len(res) else 0.0
    tol = config.FIT_TOLERANCE.get(l, 0.10)
    return FitResult(float(slope), float(intercept), residual, theory_exponent(algorithm, l), tol)


def truncate(value: Fraction, digits: int = 4) -> str:
    scale = 10**digits
    return f"{math.floor(value * scale) / scale:.{digits}f}"


def bound_table(l_max: int) -> list[dict]:
    """Query exponents of both finders for ``l = 2..l_max``."""
    if l_max < 2:
        raise ValueError("l_max must be at least 2")
    return [
        {
            "l": l,
            "ours": mclaw_exponent(l),
            "hsx": hsx_exponent(l),
            "ours_decimal": truncate(mclaw_exponent(l)),
            "hsx_decimal": truncate(hsx_exponent(l)),
        }
        for l in range(2, l_max + 1)
    ]


def sha3_table() -> dict[int, int]:
    """``ceil(log2 Qlimit_2)`` for a 512-bit range, ``l = 2..5``."""
    ls = (2, 3, 4, 5)
    return dict(zip(ls, sha3_bound_table(ls)))


# -- validation suites -------------------------------------------------------------


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    report: LemmaReport | None = None


def grover_grid(seed: int | None = None) -> list[tuple[int, int, int]]:
    """Sampled ``(n, t, j)`` triples with ``j`` up to ``3 sqrt(n)``."""
    g = config.GROVER_GRID
    rng = np.random.default_rng(g["seed"] if seed is None else seed)
    triples = []
    for n in g["sizes"]:
        ts = sorted({max(1, min(n, round(fr * n))) for fr in g["fractions"]})
        for t in ts:
            jmax = math.floor(3 * math.sqrt(n))
            js = {0, 1, jmax, int(rng.integers(0, jmax + 1))}
            triples += [(n, t, j) for j in sorted(js)]
    return triples


def suite_grover() -> list[Check]:
    rng = np.random.default_rng(config.GROVER_GRID["seed"])
    worst = 0.0
    triples = grover_grid()
    for n, t, j in triples:
        marked = rng.choice(n, size=t, replace=False)
        space = SearchSpace(n, t)
        worst = max(worst, abs(grover_success_prob(space, j) - statevector_grover(space, marked, j)))
    return [Check("grover analytic vs state-vector", worst < 1e-9,
                  f"{len(triples)} triples, max |delta| = {worst:.2e}")]


def bbht_mean_queries(n: int, t: int, trials: int, seed: int) -> tuple[float, bool]:
    """Mean charged queries over seeded trials and whether every hit was marked."""
    rng = make_rng(seed, n, t)
    marked = rng.choice(n, size=t, replace=False)
    marked_set = set(marked.tolist())
    total, all_marked = 0, True
    for _ in range(trials):
        out = bbht_search_indices(n, marked, QueryLedger(10**12), rng)
        total += out.queries_charged
        all_marked &= out.found in marked_set
    return total / trials, all_marked


def suite_bbht(trials: int = config.BBHT_TRIALS, seed: int = 7) -> list[Check]:
    checks = []
    for n, t in config.BBHT_GRID:
        mean, all_marked = bbht_mean_queries(n, t, trials, seed)
        bound = bbht_expected_bound(SearchSpace(n, t))
        checks.append(Check(f"bbht n={n} t={t}", mean <= 1.05 * bound and all_marked,
                            f"mean {mean:.2f} vs 1.05 x {bound:.2f}"))
    return checks


def _lemma_check(rep: LemmaReport) -> Check:
    extra = f", {rep.excluded} excluded" if rep.excluded else ""
    return Check(rep.name, rep.passed,
                 f"rate {rep.empirical_rate:.4g} <= {rep.theoretical_bound:.4g} + {rep.allowance:.2g}{extra}",
                 rep)


def hypergeom_grid_params() -> list[HypergeomParams]:
    out = []
    for n, n1, m in config.HYPERGEOM_GRID:
        mean = n1 * m / n
        lams = {2.0, 5.0, max(2.0, mean / 4), max(2.0, 2 * math.sqrt(mean) / 4)}
        out += [HypergeomParams(n1, n, m, lam) for lam in sorted(lams)]
    return out


def suite_lemmas() -> list[LemmaReport]:
    cfg = config.LEMMA_IMAGE
    reports = [image_size_check(cfg["domain"], cfg["range"], cfg["seeds"], cfg["seed"])]
    rng = np.random.default_rng(4)
    reports += [hypergeom_tail_check(p, config.HYPERGEOM_TRIALS, rng) for p in hypergeom_grid_params()]
    reports += [good_event_rate(*g, seed=3) for g in config.GOOD_EVENT_GRID]
    return reports


CLAW_SUITE_RUNS = (
    ("bht", 2, 2**12),
    ("hsx", 2, 2**12),
    ("hsx", 3, 2**14),
    ("mclaw", 2, 2**12),
    ("mclaw", 3, 2**14),
    ("mclaw", 4, 2**14),
    ("collision", 2, 2**12),
    ("collision", 3, 2**14),
)


def suite_claws(trials: int = 30, seed: int = 11) -> list[Check]:
    checks = []
    for algo, l, N in CLAW_SUITE_RUNS:
        cfg = SweepConfig(algo, l, [N], k=4, trials=trials, seed=seed)
        rec = run_sweep(cfg, workers=1)[0]
        ok = rec.verified == rec.trials and rec.within_limit == rec.trials
        checks.append(Check(f"{algo} l={l} N=2^{N.bit_length() - 1}", ok,
                            f"{rec.successes}/{rec.trials} found, {rec.verified} verified, "
                            f"{rec.within_limit} within Qlimit"))
    return checks


SUITES = {
    "grover": suite_grover,
    "bbht": suite_bbht,
    "lemmas": lambda: [_lemma_check(r) for r in suite_lemmas()],
    "claws": suite_claws,
}


VALIDATION_COLUMNS = (
    "grid_version", "check", "passed", "trials", "violations", "excluded",
    "empirical_rate", "theoretical_bound", "allowance", "detail",
)


def checks_to_csv(checks: Iterable[Check]) -> str:
    """Validation results as CSV; probabilistic checks fill the rate columns."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(VALIDATION_COLUMNS)
    for c in checks:
        r = c.report
        stats = ["", "", "", "", "", ""] if r is None else [
            r.trials, r.violations, r.excluded,
            repr(float(r.empirical_rate)), repr(float(r.theoretical_bound)), repr(float(r.allowance)),
        ]
        w.writerow([config.GRID_VERSION, c.name, int(c.passed), *stats, c.detail])
    return buf.getvalue()


def validate(suite: str) -> list[Check]:
    if suite == "all":
        return [c for name in SUITES for c in SUITES[name]()]
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; pick from {sorted(SUITES)} or 'all'")
    return SUITES[suite]()


def paired_comparison(
    l: int, N: int, pairs: int, seed: int = 0, k: int = 2
) -> tuple[list[int], list[int]]:
    """Query counts of the claw-based and recursive collision finders on the same functions.

    Pair ``p`` runs both finders on one random ``f`` with ``l * N`` inputs;
    only runs that found a collision contribute.
    """
    params = build_params(l, N, 1.0, k)
    ours, theirs = [], []
    for p in range(pairs):
        s = mix_seed(seed, N, p)
        values = sample_values(l * N, N, mix_seed(s, 2))
        a = collision_from_claw(values, l, params, params.ledger(), make_rng(s, 0), N)
        b = hsx_collision(values, l, params.ledger(), make_rng(s, 0), N)
        if a.solution is not None and b.solution is not None:
            ours.append(a.total_queries)
            theirs.append(b.total_queries)
    return ours, theirs
