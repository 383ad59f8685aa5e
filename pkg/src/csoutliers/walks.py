"""Exact expectations of one-dimensional walks mixing unit and double steps.

``x(i, r, t)`` is E|i + W| where W sums ``r - 2t`` independent +-1 steps and
``t`` independent +-2 steps; ``w(i, r, t)`` counts the sign patterns ending at
``i`` when starting from 0. Everything is kept as :class:`fractions.Fraction`
so that sign tests on tiny differences are exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .errors import RefusalError


def _check(r: int, t: int) -> None:
    if t < 0 or r < 2 * t:
        raise ValueError(f"walk needs r >= 2t >= 0, got r={r}, t={t}")


class WalkTable:
    """Memo for x and w. One writer; read-only sharing afterwards is safe."""

    def __init__(self):
        self._x: dict[tuple[int, int, int], Fraction] = {}
        self._w: dict[tuple[int, int, int], int] = {}

    def x(self, i: int, r: int, t: int) -> Fraction:
        _check(r, t)
        return self._xr(abs(i), r, t)

    def _xr(self, i: int, r: int, t: int) -> Fraction:
        # symmetric in i, so the memo only stores i >= 0
        key = (i, r, t)
        hit = self._x.get(key)
        if hit is not None:
            return hit
        if r == 0:
            val = Fraction(i)
        elif r > 2 * t:
            val = (self._xr(abs(i + 1), r - 1, t) + self._xr(abs(i - 1), r - 1, t)) / 2
        else:
            val = (self._xr(abs(i + 2), r - 2, t - 1) + self._xr(abs(i - 2), r - 2, t - 1)) / 2
        self._x[key] = val
        return val

    def w(self, i: int, r: int, t: int) -> int:
        _check(r, t)
        return self._wr(abs(i), r, t)

    def _wr(self, i: int, r: int, t: int) -> int:
        if i > r:
            return 0
        key = (i, r, t)
        hit = self._w.get(key)
        if hit is not None:
            return hit
        if r == 0:
            val = int(i == 0)
        elif r > 2 * t:
            val = self._wr(abs(i - 1), r - 1, t) + self._wr(i + 1, r - 1, t)
        else:
            val = self._wr(abs(i - 2), r - 2, t - 1) + self._wr(i + 2, r - 2, t - 1)
        self._w[key] = val
        return val

    def dx(self, i: int, r: int, t: int) -> Fraction:
        """First difference in the double-step count, t >= 1."""
        if t < 1:
            raise ValueError("first difference needs t >= 1")
        return self.x(i, r, t) - self.x(i, r, t - 1)

    def d2x(self, i: int, r: int, t: int) -> Fraction:
        """Second difference in the double-step count, t >= 2."""
        if t < 2:
            raise ValueError("second difference needs t >= 2")
        return self.dx(i, r, t) - self.dx(i, r, t - 1)


_DEFAULT = WalkTable()


def walk_count(i: int, r: int, t: int, table: WalkTable | None = None) -> int:
    return (table or _DEFAULT).w(i, r, t)


def expected_abs_offset(i: int, r: int, t: int, table: WalkTable | None = None) -> Fraction:
    return (table or _DEFAULT).x(i, r, t)


def expected_abs_offset_vector(v: Sequence[int], table: WalkTable | None = None) -> Fraction:
    """E|sum_j W_j v_j| for independent uniform signs W_j.

    Heavy entries (> 1) are enumerated explicitly; the unit entries are folded
    into the walk recurrence started at each reachable offset.
    """
    v = [int(a) for a in v]
    if not v:
        raise ValueError("vector must be non-empty")
    if any(a < 1 for a in v):
        raise ValueError("entries must be positive integers")
    table = table or _DEFAULT
    heavy = [a for a in v if a > 1]
    units = len(v) - len(heavy)
    total = Fraction(0)
    for signs in product((1, -1), repeat=len(heavy)):
        total += table.x(sum(s * a for s, a in zip(signs, heavy)), units, 0)
    return total / 2 ** len(heavy)


def delta_gap(n_star: int, table: WalkTable | None = None) -> Fraction:
    """min over t in 2..n*/2 of dx(0, n*, 1) - dx(0, n*, t)."""
    if n_star < 4:
        raise ValueError("delta_gap needs n* >= 4")
    table = table or _DEFAULT
    first = table.dx(0, n_star, 1)
    return min(first - table.dx(0, n_star, t) for t in range(2, n_star // 2 + 1))


def _partitions(total: int, smallest: int) -> Iterator[tuple[int, ...]]:
    # partitions of `total` into parts >= smallest, non-decreasing
    if total == 0:
        yield ()
        return
    for part in range(smallest, total + 1):
        for rest in _partitions(total - part, part):
            yield (part,) + rest


def heavy_part_patterns(k: int) -> list[tuple[int, ...]]:
    """Multisets of entries >= 2 with sum <= k-1, minus the single entry k-1."""
    out = []
    for h in range(0, k):
        out.extend(p for p in _partitions(h, 2) if p != (k - 1,))
    return out


def delta2_gap(k: int, table: WalkTable | None = None) -> Fraction:
    if k < 3:
        raise ValueError("delta2_gap needs k >= 3")
    table = table or _DEFAULT
    n_star = k * (k - 1)
    top = table.x(k - 1, n_star - k + 1, 0)
    worst = None
    for heavy in heavy_part_patterns(k):
        v = list(heavy) + [1] * (n_star - sum(heavy))
        gap = top - expected_abs_offset_vector(v, table)
        worst = gap if worst is None or gap < worst else worst
    return worst


def monte_carlo_abs_offset(
    v: Sequence[int], trials: int, seed: int | None = None, chunk: int = 65536
) -> tuple[float, float]:
    """Sample mean of |X_v| and its standard error."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    weights = np.asarray(v, dtype=np.int64)
    rng = np.random.default_rng(seed)
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < trials:
        size = min(chunk, trials - done)
        signs = rng.integers(0, 2, size=(size, len(weights)), dtype=np.int8) * 2 - 1
        vals = np.abs(signs @ weights).astype(np.float64)
        total += vals.sum()
        total_sq += (vals * vals).sum()
        done += size
    mean = total / trials
    if trials < 2:
        return mean, 0.0
    var = max(total_sq / trials - mean * mean, 0.0) * trials / (trials - 1)
    return mean, math.sqrt(var / trials)


# --- gap constants of the clique construction -----------------------------
#
# A binary column of n* strings costs min(#0, #1) = (n* - |X|)/2, where X is
# the signed walk. ``literal=True`` instead uses n*/2 - |X|, which doubles every
# walk-derived term; it is kept for comparison with that written form only.


def _scale(literal: bool) -> Fraction:
    return Fraction(1) if literal else Fraction(1, 2)


def _vertex_term(k: int, table: WalkTable, literal: bool = False) -> Fraction:
    n_star = k * (k - 1)
    return Fraction(n_star, 2) - _scale(literal) * table.x(k - 1, n_star - k + 1, 0)


def _edge_term(k: int, table: WalkTable, literal: bool = False) -> Fraction:
    n_star = k * (k - 1)
    return Fraction(n_star, 2) - _scale(literal) * table.x(0, n_star, 1)


def e_yes(k: int, l1: int, l2: int, table: WalkTable | None = None, literal: bool = False) -> Fraction:
    """Expected clique-subset cost for block lengths l1, l2 (no divisibility check)."""
    table = table or _DEFAULT
    return k * l1 * _vertex_term(k, table, literal) + math.comb(k, 2) * l2 * _edge_term(k, table, literal)


def e_no1(k: int, l1: int, l2: int, table: WalkTable | None = None, literal: bool = False) -> Fraction:
    table = table or _DEFAULT
    return math.comb(k, 2) * l2 * _edge_term(k, table, literal) + l2 * _scale(literal) * delta_gap(
        k * (k - 1), table
    )


def e_no2(k: int, l1: int, l2: int, table: WalkTable | None = None, literal: bool = False) -> Fraction:
    table = table or _DEFAULT
    return (
        math.comb(k, 2) * l2 * _edge_term(k, table, literal)
        + k * l1 * _vertex_term(k, table, literal)
        + l1 * _scale(literal) * delta2_gap(k, table)
    )


@dataclass(frozen=True)
class GapConstants:
    k: int
    m: int
    n_star: int
    delta: Fraction
    delta2: Fraction
    ratio: int  # l2 / l1
    kappa_yes: Fraction
    kappa_no1: Fraction
    kappa_no2: Fraction
    kappa_no: Fraction
    kappa_l: Fraction
    kappa_yes_p: Fraction
    kappa_no_p: Fraction
    l1_required: int
    l1: int
    l2: int
    length: int
    e_yes: Fraction
    e_no1: Fraction
    e_no2: Fraction
    e_no: Fraction
    d_yes: Fraction
    d_no: Fraction

    def items(self) -> list[tuple[str, object]]:
        return [(f.name, getattr(self, f.name)) for f in fields(self)]

    def report(self) -> str:
        return "".join(f"{name} = {value}\n" for name, value in self.items())


def gap_constants(
    k: int, m: int, l1: int | None = None, table: WalkTable | None = None, literal: bool = False
) -> GapConstants:
    """All derived quantities of the random clique construction.

    ``l1`` overrides the vertex-block length used for the absolute values
    (E's, D's, L); the length the concentration bound asks for is kept in
    ``l1_required``.
    """
    if k < 3:
        raise RefusalError(f"the construction needs k >= 3, got {k}")
    if k % 4 not in (0, 1):
        raise RefusalError(
            f"k={k} gives n*={k * (k - 1)}, which is not divisible by 4; "
            "the double-step gap is only positive in that case"
        )
    if m < 1:
        raise RefusalError("the graph needs at least one edge")
    table = table or _DEFAULT
    n_star = k * (k - 1)
    pairs = math.comb(k, 2)
    delta = delta_gap(n_star, table)
    delta2 = delta2_gap(k, table)
    ratio = math.ceil(Fraction(k * n_star) / delta)
    half = _scale(literal)
    vertex = k * _vertex_term(k, table, literal)
    edge = pairs * ratio * _edge_term(k, table, literal)
    kappa_yes = vertex + edge
    kappa_no1 = edge + ratio * half * delta
    kappa_no2 = edge + vertex + half * delta2
    kappa_no = min(kappa_no1, kappa_no2)
    kappa_l = Fraction(k + pairs * ratio)
    kappa_yes_p = (2 * kappa_yes + kappa_no) / 3
    kappa_no_p = (kappa_yes + 2 * kappa_no) / 3
    log_term = math.log(20) + n_star * math.log(2 * m)
    required = math.ceil(n_star**2 * float(kappa_l) / (2 * float(kappa_yes_p - kappa_yes)) * log_term)
    used = required if l1 is None else int(l1)
    if used < 1:
        raise RefusalError("l1 must be positive")
    return GapConstants(
        k=k,
        m=m,
        n_star=n_star,
        delta=delta,
        delta2=delta2,
        ratio=ratio,
        kappa_yes=kappa_yes,
        kappa_no1=kappa_no1,
        kappa_no2=kappa_no2,
        kappa_no=kappa_no,
        kappa_l=kappa_l,
        kappa_yes_p=kappa_yes_p,
        kappa_no_p=kappa_no_p,
        l1_required=required,
        l1=used,
        l2=used * ratio,
        length=k * used + pairs * used * ratio,
        e_yes=kappa_yes * used,
        e_no1=kappa_no1 * used,
        e_no2=kappa_no2 * used,
        e_no=kappa_no * used,
        d_yes=kappa_yes_p * used,
        d_no=kappa_no_p * used,
    )
