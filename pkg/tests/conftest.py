import sys
from fractions import Fraction
from itertools import combinations, product
from pathlib import Path

import numpy as np
import pytest

from csoutliers.core import Instance

sys.path.insert(0, str(Path(__file__).parent))


def random_instance(rng, n_range=(2, 8), len_range=(1, 6), sigma=2, k_max=3, d=0):
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    length = int(rng.integers(len_range[0], len_range[1] + 1))
    k = int(rng.integers(0, min(k_max, n - 1) + 1))
    codes = rng.integers(0, sigma, size=(n, length), dtype=np.uint8)
    alphabet = "01" if sigma == 2 else "ACGT"[:sigma]
    return Instance(tuple(alphabet), codes, k, d)


def naive_consensus(strings, alphabet):
    # column majority, first symbol in alphabet order wins ties
    out = []
    for col in zip(*strings):
        out.append(max(alphabet, key=lambda a: (col.count(a), -alphabet.index(a))))
    return "".join(out)


def naive_cost(strings, center):
    return sum(a != b for s in strings for a, b in zip(s, center))


def naive_optimum(strings, k, alphabet):
    """Plain-Python optimum over every center string (independent of the package kernels)."""
    n_star = len(strings) - k
    best = None
    for center in product(alphabet, repeat=len(strings[0])):
        dists = sorted(sum(a != b for a, b in zip(s, center)) for s in strings)
        value = sum(dists[:n_star])
        best = value if best is None or value < best else best
    return best


def naive_subset_optimum(strings, k, alphabet):
    n_star = len(strings) - k
    best = None
    for rows in combinations(range(len(strings)), n_star):
        chosen = [strings[i] for i in rows]
        value = naive_cost(chosen, naive_consensus(chosen, alphabet))
        best = value if best is None or value < best else best
    return best


def sign_pattern_x(i, r, t):
    """E|i + walk| by enumerating all 2^(r-t) sign patterns."""
    steps = [1] * (r - 2 * t) + [2] * t
    total = 0
    for signs in product((1, -1), repeat=len(steps)):
        total += abs(i + sum(s * a for s, a in zip(signs, steps)))
    return Fraction(total, 2 ** len(steps))


@pytest.fixture
def demo():
    return Instance.from_strings(["000", "001", "111"], k=1, d=1)
