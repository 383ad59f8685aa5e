"""Solver parameterized by the average distance budget.

For every input string s0 we look for the set P of positions where an optimal
center differs from s0. P is small (at most floor(d/n*)), and the strings'
difference sets restricted to P form a small, well covered hypergraph, so
P can be found by enumerating those hypergraphs and locating where they occur.
Edges are handled as integer bitmasks over positions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Iterator, Sequence

import numpy as np

from . import kernels
from .core import Instance, Solution, closest_subset, evaluate_subset
from .errors import RefusalError


class CrossCheckError(AssertionError):
    """The parameterized solver and the exact oracle disagree."""


@dataclass(frozen=True)
class Hypergraph:
    vertex_count: int
    edges: tuple[frozenset, ...]
    origin: tuple[int, ...] | None = None  # string index behind each edge

    def __post_init__(self):
        edges = tuple(frozenset(e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        for e in edges:
            if any(not 0 <= v < self.vertex_count for v in e):
                raise ValueError(f"edge {sorted(e)} leaves the vertex range 0..{self.vertex_count - 1}")
        if self.origin is not None and len(self.origin) != len(edges):
            raise ValueError("origin must name one string per edge")

    def masks(self) -> list[int]:
        return [sum(1 << v for v in e) for e in self.edges]

    def degree(self, v: int) -> int:
        return sum(v in e for e in self.edges)

    def edge_lists(self) -> list[list[int]]:
        return [sorted(e) for e in self.edges]


@dataclass(frozen=True)
class FptConfig:
    delta_cap: int = 4
    edge_count_cap: int | None = None  # default: ceil(200 log2 floor(delta)), at least 1
    edge_size_prune: int = 20
    cross_check: bool = True
    cross_check_limit: int = 10**4

    def __post_init__(self):
        if self.delta_cap < 0 or self.edge_size_prune < 0:
            raise ValueError("caps must be non-negative")
        if self.edge_count_cap is not None and self.edge_count_cap < 1:
            raise ValueError("edge_count_cap must be positive")

    def edges_for(self, delta_floor: int) -> int:
        if self.edge_count_cap is not None:
            return self.edge_count_cap
        return default_edge_cap(delta_floor)


def default_edge_cap(delta_floor: int) -> int:
    if delta_floor <= 1:
        return 1
    return max(1, math.ceil(200 * math.log2(delta_floor)))


def build_difference_hypergraph(instance: Instance, s0_index: int) -> Hypergraph:
    """Vertices are positions; edge i holds the positions where string i differs from s0."""
    if not 0 <= s0_index < instance.n:
        raise IndexError(f"string index {s0_index} out of range")
    diff = instance.codes != instance.codes[s0_index]
    edges = tuple(frozenset(np.flatnonzero(row).tolist()) for row in diff)
    return Hypergraph(instance.length, edges, tuple(range(instance.n)))


def prune_large_edges(G: Hypergraph, bound: int) -> Hypergraph:
    keep = [i for i, e in enumerate(G.edges) if len(e) <= bound]
    origin = None if G.origin is None else tuple(G.origin[i] for i in keep)
    return Hypergraph(G.vertex_count, tuple(G.edges[i] for i in keep), origin)


def coverage_check(H: Hypergraph) -> bool:
    """Every vertex lies in at least a fifth of the edges."""
    m = len(H.edges)
    if m == 0:
        return False
    return all(5 * H.degree(v) >= m for v in range(H.vertex_count))


# --- candidate hypergraphs ------------------------------------------------


def canonical_form(vertex_count: int, edges) -> tuple[tuple[int, ...], ...]:
    """Smallest sorted edge-tuple representation over all vertex relabelings."""
    edges = [tuple(e) for e in edges]
    best = None
    for perm in permutations(range(vertex_count)):
        form = tuple(sorted(tuple(sorted(perm[v] for v in e)) for e in edges))
        if best is None or form < best:
            best = form
    return best


@lru_cache(maxsize=None)
def _classes_on(v: int, max_edges: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    # Every edge set is a bitmask over the 2^v - 1 non-empty vertex subsets.
    # Walk the masks once, expanding each unseen one into its orbit under S_v.
    subsets = list(range(1, 1 << v))
    slot = {s: i for i, s in enumerate(subsets)}
    perm_maps = []
    for perm in permutations(range(v)):
        perm_maps.append(
            [slot[sum(1 << perm[b] for b in range(v) if s >> b & 1)] for s in subsets]
        )
    full = (1 << v) - 1
    seen: set[int] = set()
    found = []
    for size in range(1, min(max_edges, len(subsets)) + 1):
        for chosen in combinations(range(len(subsets)), size):
            mask = sum(1 << i for i in chosen)
            if mask in seen:
                continue
            orbit = set()
            for pm in perm_maps:
                orbit.add(sum(1 << pm[i] for i in chosen))
            seen |= orbit
            covered = 0
            for i in chosen:
                covered |= subsets[i]
            if covered != full:
                continue
            edges = [tuple(b for b in range(v) if subsets[i] >> b & 1) for i in chosen]
            if not coverage_check(Hypergraph(v, tuple(edges))):
                continue
            found.append(canonical_form(v, edges))
    found.sort(key=lambda form: (len(form), form))
    return tuple(found)


def candidate_hypergraphs_on(vertex_count: int, max_edges: int) -> list[Hypergraph]:
    """Non-isomorphic hypergraphs with exactly ``vertex_count`` vertices passing the coverage test."""
    if vertex_count < 1 or max_edges < 1:
        return []
    return [Hypergraph(vertex_count, form) for form in _classes_on(vertex_count, max_edges)]


def enumerate_candidate_hypergraphs(
    max_vertices: int, max_edges: int, delta_cap: int = 4
) -> Iterator[Hypergraph]:
    """Candidates with 1..max_vertices vertices, ordered by (vertices, edges, canonical form)."""
    if max_vertices > delta_cap:
        raise RefusalError(f"{max_vertices} vertices exceeds the cap of {delta_cap}")
    for v in range(1, max_vertices + 1):
        yield from candidate_hypergraphs_on(v, max_edges)


# --- occurrence search ----------------------------------------------------


def find_subhypergraph_occurrences(H: Hypergraph, G: Hypergraph) -> Iterator[frozenset]:
    """Every vertex set V' of G where H appears: some bijection maps each H-edge onto e' & V'."""
    h = H.vertex_count
    g_masks = sorted(set(G.masks()))
    if h == 0:
        yield frozenset()
        return
    h_edges = [sorted(e) for e in H.edges]
    universe = 0
    for m in g_masks:
        universe |= m
    if any(H.degree(u) == 0 for u in range(h)):
        universe = (1 << G.vertex_count) - 1  # isolated H-vertices may land anywhere
    images = [v for v in range(G.vertex_count) if universe >> v & 1]
    seen: set[int] = set()
    pi = [0] * h

    def consistent(j: int, assigned: int) -> bool:
        # partial check over vertices 0..j: each H-edge's assigned part must
        # equal some G-edge's trace on the assigned image set
        for e in h_edges:
            want = 0
            for u in e:
                if u <= j:
                    want |= 1 << pi[u]
            if not any(m & assigned == want for m in g_masks):
                return False
        return True

    def extend(j: int, assigned: int):
        if j == h:
            if assigned not in seen:
                seen.add(assigned)
                yield frozenset(v for v in images if assigned >> v & 1)
            return
        for v in images:
            bit = 1 << v
            if assigned & bit:
                continue
            pi[j] = v
            if consistent(j, assigned | bit):
                yield from extend(j + 1, assigned | bit)

    yield from extend(0, 0)


# --- main loop ------------------------------------------------------------


def _centers_around(s0: np.ndarray, positions: Sequence[int], sigma: int) -> Iterator[np.ndarray]:
    options = [[c for c in range(sigma) if c != s0[p]] for p in positions]
    for symbols in product(*options):
        s = s0.copy()
        s[list(positions)] = symbols
        yield s


def solve_fpt(instance: Instance, config: FptConfig | None = None) -> Solution | None:
    """A solution of value <= d if one exists, else None."""
    config = config or FptConfig()
    radius = instance.d // instance.n_star
    if radius > config.delta_cap:
        raise RefusalError(
            f"floor(d/n*) = {radius} exceeds the cap of {config.delta_cap}; use an exact solver"
        )
    result = _search(instance, radius, config)
    if config.cross_check and math.comb(instance.n, instance.n_star) <= config.cross_check_limit:
        from .exact import decide

        expected = decide(instance)
        if expected != (result is not None):
            raise CrossCheckError(
                f"parameterized search says {result is not None}, exact search says {expected}"
            )
    return result


def _search(instance: Instance, radius: int, config: FptConfig) -> Solution | None:
    S, sigma, n_star, d = instance.codes, instance.sigma, instance.n_star, instance.d
    candidates = list(enumerate_candidate_hypergraphs(radius, config.edges_for(radius), config.delta_cap))

    def accept(s: np.ndarray) -> Solution | None:
        rows = closest_subset(S, s, n_star)
        if int(kernels.row_distances(S[list(rows)], s).sum()) <= d:
            return evaluate_subset(instance, rows)
        return None

    for s0_index in range(instance.n):
        s0 = S[s0_index]
        found = accept(s0)
        if found is not None:
            return found
        G = prune_large_edges(build_difference_hypergraph(instance, s0_index), config.edge_size_prune * radius)
        tried: set[frozenset] = set()
        for H in candidates:
            for P in find_subhypergraph_occurrences(H, G):
                if P in tried:
                    continue
                tried.add(P)
                for s in _centers_around(s0, sorted(P), sigma):
                    found = accept(s)
                    if found is not None:
                        return found
    return None
