"""Brute-force solvers used as ground truth for everything else.

Two structurally different searches: over retained subsets, and over all
candidate centers. Each validates the other.
"""
from __future__ import annotations

from math import comb

from . import kernels
from .core import Instance, Solution, closest_subset, evaluate_subset
from .errors import CapExceededError

DEFAULT_CAP = 10**7


def subset_count(instance: Instance) -> int:
    return comb(instance.n, instance.n_star)


def center_count(instance: Instance) -> int:
    return instance.sigma**instance.length


def solve_exact_subsets(instance: Instance, cap: int = DEFAULT_CAP) -> Solution:
    """Optimum over every size-n* subset, lexicographic order, first winner kept."""
    count = subset_count(instance)
    if count > cap:
        raise CapExceededError("subset enumeration", count, cap, "try exact-centers or an approximation")
    rows, _ = kernels.best_subset(instance.codes, instance.n_star, instance.sigma)
    return evaluate_subset(instance, rows.tolist())


def solve_exact_centers(instance: Instance, cap: int = DEFAULT_CAP) -> Solution:
    """Optimum over every center in Sigma^l; the consensus is recomputed on S_x."""
    count = center_count(instance)
    if count > cap:
        raise CapExceededError("center enumeration", count, cap, "try exact-subsets or an approximation")
    x, _ = kernels.best_center(instance.codes, instance.sigma, instance.n_star)
    return evaluate_subset(instance, closest_subset(instance.codes, x, instance.n_star))


def optimum(instance: Instance, cap: int = DEFAULT_CAP) -> Solution:
    """Exact optimum via whichever enumeration is smaller."""
    if subset_count(instance) <= center_count(instance):
        if subset_count(instance) <= cap:
            return solve_exact_subsets(instance, cap)
    elif center_count(instance) <= cap:
        return solve_exact_centers(instance, cap)
    smaller = min(subset_count(instance), center_count(instance))
    raise CapExceededError("exact search", smaller, cap)


def decide(instance: Instance, cap: int = DEFAULT_CAP) -> bool:
    """True iff some n* strings have a center within total distance d."""
    if instance.d >= instance.n_star * instance.length:
        return True
    return optimum(instance, cap).value <= instance.d
