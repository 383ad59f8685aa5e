"""Sampling-based approximation schemes.

All three share one idea: the consensus of a small sample of retained strings
is, for the right sample, a center whose closest n* strings are nearly
optimal. The PTAS tries every multiset sample, the EPTAS draws random ones,
and the max-non-outliers scheme reuses the PTAS candidates for each guessed
retained count.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

import numpy as np

from . import kernels
from .core import Instance, Solution, closest_subset, evaluate_rows, evaluate_subset
from .errors import CapExceededError

DEFAULT_PTAS_CAP = 10**6
DEFAULT_MAX_REPETITIONS = 10_000
TRIAL_CHUNK = 512
GUARANTEE_EPSILON = Fraction(1, 16)


def as_fraction(value) -> Fraction:
    """Exact rational from an int, Fraction, float or text like ``"1/4"``."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def _positive_epsilon(epsilon) -> Fraction:
    eps = as_fraction(epsilon)
    if eps <= 0:
        raise ValueError(f"epsilon must be positive, got {eps}")
    return eps


def sample_size(epsilon, sigma: int) -> int:
    """max(ceil(2 ln(sigma / eps^2) / eps^4), 8)."""
    eps = _positive_epsilon(epsilon)
    if sigma < 1:
        raise ValueError("alphabet size must be positive")
    raw = 2 * math.log(sigma / float(eps) ** 2) / float(eps) ** 4
    return max(math.ceil(raw), 8)


def out_of_guarantee(epsilon) -> bool:
    return as_fraction(epsilon) > GUARANTEE_EPSILON


def multiset_count(n: int, r: int) -> int:
    return math.comb(n + r - 1, r)


def capped_sample_size(n: int, epsilon, sigma: int, cap: int = DEFAULT_PTAS_CAP) -> int:
    """Largest r <= sample_size(eps, sigma) whose multiset enumeration fits in ``cap``."""
    r = sample_size(epsilon, sigma)
    if multiset_count(n, r) <= cap:
        return r
    lo, hi = 1, r  # count is increasing in r
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if multiset_count(n, mid) <= cap:
            lo = mid
        else:
            hi = mid - 1
    return lo


def _ptas_candidates(instance: Instance, epsilon, r_override, cap) -> tuple[np.ndarray, int, list[str]]:
    eps = _positive_epsilon(epsilon)
    flags = []
    derived = sample_size(eps, instance.sigma)
    if out_of_guarantee(eps):
        flags.append("out-of-guarantee")
    r = derived if r_override is None else int(r_override)
    if r < 1:
        raise ValueError("sample size must be positive")
    if r < derived:
        flags.append("reduced-sample-size")
    count = multiset_count(instance.n, r)
    if count > cap:
        raise CapExceededError(
            f"multiset sampling with r={r}", count, cap, "use the eptas algorithm or pass a smaller r"
        )
    return kernels.multiset_candidates(instance.codes, r, instance.sigma), r, flags


def ptas_min_distance(
    instance: Instance, epsilon, r_override: int | None = None, cap: int = DEFAULT_PTAS_CAP
) -> Solution:
    """Best closest-subset over the consensus of every size-r multiset sample."""
    X, _, flags = _ptas_candidates(instance, epsilon, r_override, cap)
    cons, _ = kernels.center_costs(instance.codes, X, instance.n_star, instance.sigma)
    best = int(np.argmin(cons))
    rows = closest_subset(instance.codes, X[best], instance.n_star)
    return evaluate_subset(instance, rows).with_flags(*flags)


@dataclass(frozen=True)
class ApproxParams:
    epsilon: Fraction
    r: int | None = None
    repetitions: int | None = None
    c: Fraction | None = None
    seed: int | None = 0
    max_repetitions: int = DEFAULT_MAX_REPETITIONS
    threads: int | None = None


def success_probability_log(epsilon, c, r: int) -> Decimal:
    """ln p for p = (1-c)^r * (eps/3) / (1 + eps/3)."""
    e3 = as_fraction(epsilon) / 3
    c = as_fraction(c)
    with localcontext() as ctx:
        ctx.prec = 60
        log_p = Decimal(r) * (Decimal(1) - Decimal(c.numerator) / Decimal(c.denominator)).ln()
        ratio = e3 / (1 + e3)
        log_p += (Decimal(ratio.numerator) / Decimal(ratio.denominator)).ln()
        return +log_p


def derived_repetitions(epsilon, c, r: int) -> int:
    """ceil(ln 2 / p): enough independent trials to succeed with probability 1/2."""
    c = as_fraction(c)
    if not 0 <= c < 1:
        raise ValueError("outlier fraction c must lie in [0, 1)")
    with localcontext() as ctx:
        ctx.prec = 60
        reps = Decimal(2).ln() * (-success_probability_log(epsilon, c, r)).exp()
        return int(reps.to_integral_value(rounding="ROUND_CEILING"))


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("CSOUTLIERS_THREADS", "1")))
    except ValueError:
        return 1


def _run_chunk(S, sigma, n_star, r, seed, j, count):
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(j,)))
    n = S.shape[0]
    W = rng.multinomial(r, np.full(n, 1.0 / n), size=count).astype(np.int64)
    X = kernels.weighted_consensus(S, W, sigma)
    cons, _ = kernels.center_costs(S, X, n_star, sigma)
    best = int(np.argmin(cons))
    return int(cons[best]), j * TRIAL_CHUNK + best, X[best].copy()


def eptas_min_distance(instance: Instance, params: ApproxParams) -> Solution:
    """Best closest-subset over random samples of r strings drawn with replacement.

    Trials are grouped in fixed chunks with one RNG stream per chunk, so the
    result depends on the seed only, never on the thread count.
    """
    eps = _positive_epsilon(params.epsilon)
    flags = []
    r = params.r if params.r is not None else sample_size(eps / 3, instance.sigma)
    if out_of_guarantee(eps / 3):
        flags.append("out-of-guarantee")
    c = Fraction(instance.k, instance.n) if params.c is None else as_fraction(params.c)
    if instance.k > c * instance.n:
        flags.append("outlier-fraction-exceeded")
    if params.repetitions is not None:
        reps = int(params.repetitions)
        if reps < 1:
            raise ValueError("repetitions must be positive")
    else:
        reps = derived_repetitions(eps, c, r)
        if reps > params.max_repetitions:
            flags.append("repetitions-capped")
            reps = params.max_repetitions
    seed = params.seed if params.seed is not None else np.random.SeedSequence().entropy
    S = instance.codes
    jobs = [(j, min(TRIAL_CHUNK, reps - j * TRIAL_CHUNK)) for j in range(math.ceil(reps / TRIAL_CHUNK))]
    threads = params.threads or default_threads()

    def work(job):
        return _run_chunk(S, instance.sigma, instance.n_star, r, seed, *job)

    if threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, jobs))
    else:
        results = [work(job) for job in jobs]
    _, _, x = min(results, key=lambda res: (res[0], res[1]))
    rows = closest_subset(S, x, instance.n_star)
    return evaluate_subset(instance, rows).with_flags(*flags)


def ptas_max_nonoutliers(
    instance: Instance,
    d: int | None = None,
    epsilon=Fraction(1, 4),
    r_override: int | None = None,
    cap: int = DEFAULT_PTAS_CAP,
) -> Solution:
    """Largest retained set whose consensus cost stays within ``d``.

    ``instance.k`` is ignored; ``d`` defaults to ``instance.d``.
    """
    eps = _positive_epsilon(epsilon)
    budget = instance.d if d is None else int(d)
    if budget < 0:
        raise ValueError("budget d must be non-negative")
    S, sigma, n = instance.codes, instance.sigma, instance.n

    # phase 1: every subset of size at most ceil(1/eps)
    small = min(math.ceil(1 / eps), n)
    count = sum(math.comb(n, size) for size in range(1, small + 1))
    if count > cap:
        raise CapExceededError("small-subset enumeration", count, cap)
    best_rows: list[int] = [0]
    for size in range(small, 0, -1):
        rows, cost = kernels.best_subset(S, size, sigma)
        if cost <= budget:
            best_rows = rows.tolist()
            break

    # phase 2: guess the optimum size, trim the farthest strings of the PTAS set
    X, _, flags = _ptas_candidates(instance.with_params(k=0), eps, r_override, cap)
    for guess in range(n, 0, -1):
        if guess <= len(best_rows):
            break
        cons, dist = kernels.center_costs(S, X, guess, sigma)
        top = int(np.argmin(cons))
        if cons[top] <= budget:
            best_rows = list(closest_subset(S, X[top], guess))
            break
        x = X[int(np.argmin(dist))]
        rows = closest_subset(S, x, guess)
        keep = guess - math.ceil(eps * guess)
        if keep <= len(best_rows):
            continue
        d_rows = kernels.row_distances(S[list(rows)], x)
        # farthest first, highest index first among equals
        order = sorted(range(len(rows)), key=lambda p: (d_rows[p], rows[p]))
        trimmed = sorted(rows[p] for p in order[:keep])
        if evaluate_rows(instance, trimmed).value <= budget:
            best_rows = trimmed
    return evaluate_rows(instance, best_rows).with_flags(*flags)
