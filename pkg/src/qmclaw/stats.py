"""Monte-Carlo checks of the probabilistic facts behind the success bound.

Each check counts violations of an event whose probability the analysis
bounds from above, and passes when the empirical violation rate stays below
that bound plus a two-standard-error allowance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as sps

from .algorithms import build_params, list_sizes, mclaw
from .config import MC_SIGMAS
from .oracle import make_rng, mix_seed, sample_random_function


@dataclass
class LemmaReport:
    name: str
    trials: int
    violations: int
    theoretical_bound: float
    excluded: int = 0
    reference_rate: float | None = None

    @property
    def empirical_rate(self) -> float:
        return self.violations / self.trials if self.trials else 0.0

    @property
    def allowance(self) -> float:
        return mc_allowance(self.empirical_rate, self.trials)

    @property
    def passed(self) -> bool:
        return self.empirical_rate <= self.theoretical_bound + self.allowance


def mc_allowance(rate: float, trials: int, sigmas: float = MC_SIGMAS) -> float:
    """``sigmas`` binomial standard errors of an estimated rate."""
    if trials <= 0:
        return 0.0
    return sigmas * math.sqrt(rate * (1.0 - rate) / trials)


def image_bound(domain_size: int, range_size: int) -> float:
    """Lower bound ``|X|/2 - sqrt(|X| ln|Y| / 2)`` on the image size of a random function."""
    return domain_size / 2 - math.sqrt(domain_size * math.log(range_size) / 2)


def image_size_check(
    domain_size: int, range_size: int, seeds: int, base_seed: int = 0
) -> LemmaReport:
    """Fraction of random tables whose image falls below :func:`image_bound`."""
    bound = image_bound(domain_size, range_size)
    small = 0
    for s in range(seeds):
        f = sample_random_function(domain_size, range_size, mix_seed(base_seed, s))
        small += f.image_size() < bound
    return LemmaReport(
        f"image-size |X|={domain_size} |Y|={range_size}", seeds, small, 2 / range_size
    )


@dataclass(frozen=True)
class HypergeomParams:
    """Draw ``n1`` of ``n`` items without replacement; ``m`` are defective."""

    n1: int
    n: int
    m: int
    lam: float

    def __post_init__(self) -> None:
        if not (0 <= self.m <= self.n and 0 <= self.n1 <= self.n):
            raise ValueError("need 0 <= m, n1 <= n")
        if self.lam < 2:
            raise ValueError("tail offset lam must be at least 2")

    @property
    def alpha(self) -> float:
        return max(
            1 / (self.n1 + 1) + 1 / (self.n - self.n1 + 1),
            1 / (self.m + 1) + 1 / (self.n - self.m + 1),
        )

    @property
    def mean(self) -> float:
        return self.n1 * self.m / self.n

    @property
    def tail_bound(self) -> float:
        """Upper bound ``exp(-2 alpha (lam^2 - 1))`` on ``Pr[K - E[K] < -lam]``."""
        return math.exp(-2 * self.alpha * (self.lam**2 - 1))

    def exact_tail(self) -> float:
        # K < E[K] - lam  <=>  K <= ceil(E[K] - lam) - 1
        cut = math.ceil(self.mean - self.lam) - 1
        if cut < 0:
            return 0.0
        return float(sps.hypergeom(self.n, self.m, self.n1).cdf(cut))


def hypergeom_tail_check(
    params: HypergeomParams, trials: int, rng: np.random.Generator
) -> LemmaReport:
    name = f"hypergeom n={params.n} n1={params.n1} m={params.m} lam={params.lam:.3f}"
    if params.m in (0, params.n):
        return LemmaReport(name, trials, 0, params.tail_bound, reference_rate=0.0)
    k = rng.hypergeometric(params.m, params.n - params.m, params.n1, size=trials)
    low = int(np.count_nonzero(k - params.mean < -params.lam))
    return LemmaReport(name, trials, low, params.tail_bound, reference_rate=params.exact_tail())


def good_event_bound(N: int, c_N: float, size_before: float) -> float:
    """Lower bound ``1 - 2/N - exp(-N_{i-1} / (15 c_N))`` on the good-event probability."""
    return 1 - 2 / N - math.exp(-size_before / (15 * c_N))


def good_event_rate(
    l: int, N: int, c_N: float, k: int, level: int, trials: int, seed: int = 0
) -> LemmaReport:
    """Rate at which ``|Im(f_i) & L'_{i-1}| < N_{i-1}`` when level ``i`` begins.

    Trials that abort before reaching ``level`` are excluded and counted in
    ``excluded``.
    """
    if not 1 <= level <= l:
        raise ValueError(f"level must lie in [1, {l}]")
    params = build_params(l, N, c_N, k)
    threshold = list_sizes(l, N, c_N)[level - 1]
    domain = min(N, math.ceil(N / c_N))
    bad = seen = 0
    for t in range(trials):
        fs = [sample_random_function(domain, N, mix_seed(seed, t, i)) for i in range(l)]
        res = mclaw(fs, params, params.ledger(), make_rng(seed, t, l))
        if len(res.level_overlaps) < level:
            continue
        seen += 1
        bad += res.level_overlaps[level - 1] < threshold
    bound = 1 - good_event_bound(N, c_N, threshold)
    return LemmaReport(
        f"good-event l={l} N={N} level={level}", seen, bad, bound, excluded=trials - seen
    )
