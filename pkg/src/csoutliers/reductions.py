"""Instance generators from the three hardness reductions, plus graph I/O.

* ``mcc_to_csw_random``: multicolored clique -> binary min-distance instance
  whose clique subsets are cheap and all other subsets expensive (in
  expectation, with gap constants from :mod:`csoutliers.walks`).
* ``k_hardness_reduction``: binary instance -> binary instance whose outlier
  count equals the original retained count.
* ``clique_to_csw_unbounded``: clique -> instance over a large alphabet with
  length t and budget C(t,2)(t-2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .core import Alphabet, Instance, symbol_pool
from .errors import InstanceFormatError, RefusalError
from .walks import GapConstants, gap_constants


# --- graphs ---------------------------------------------------------------


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        names = set(self.vertices)
        if len(names) != len(self.vertices):
            raise ValueError("duplicate vertex names")
        seen = set()
        clean = []
        for u, v in self.edges:
            u, v = str(u), str(v)
            if u not in names or v not in names:
                raise ValueError(f"edge {u}-{v} uses an unknown vertex")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            key = frozenset((u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {u}-{v}")
            seen.add(key)
            clean.append((u, v))
        object.__setattr__(self, "edges", tuple(clean))

    def adjacency(self) -> dict[str, set[str]]:
        adj = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj


@dataclass(frozen=True)
class PartitionedGraph:
    k: int
    parts: tuple[tuple[str, ...], ...]
    edges: tuple[tuple[str, str], ...]
    part_of: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        parts = tuple(tuple(str(v) for v in p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if len(parts) != self.k:
            raise ValueError(f"expected {self.k} parts, got {len(parts)}")
        part_of = {}
        for p, members in enumerate(parts):
            for v in members:
                if v in part_of:
                    raise ValueError(f"vertex {v} is in two parts")
                part_of[v] = p
        object.__setattr__(self, "part_of", part_of)
        graph = Graph(tuple(part_of), self.edges)
        for u, v in graph.edges:
            if part_of[u] == part_of[v]:
                raise ValueError(f"edge {u}-{v} lies inside part {part_of[u] + 1}")
        object.__setattr__(self, "edges", graph.edges)

    @property
    def graph(self) -> Graph:
        return Graph(tuple(self.part_of), self.edges)


def complete_multipartite(k: int, per_part: int = 1) -> PartitionedGraph:
    parts = tuple(tuple(f"v{p}_{i}" for i in range(per_part)) for p in range(k))
    edges = [
        (u, v)
        for p, q in combinations(range(k), 2)
        for u in parts[p]
        for v in parts[q]
    ]
    return PartitionedGraph(k, parts, tuple(edges))


def parse_graph(text: str) -> tuple[Graph, int | None, tuple[tuple[str, ...], ...] | None]:
    """Parse ``k`` / ``part v1 v2 ...`` / ``vertex v ...`` / ``edge u v`` lines.

    Returns the graph plus the declared k and parts when present.
    """
    k = None
    parts: list[tuple[str, ...]] = []
    vertices: dict[str, None] = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        head = tokens[0].lower()
        if head.isdigit() and len(tokens) == 1 and k is None:
            k = int(head)
        elif head == "part":
            if len(tokens) < 2:
                raise InstanceFormatError("part line lists no vertices", lineno)
            parts.append(tuple(tokens[1:]))
            vertices.update(dict.fromkeys(tokens[1:]))
        elif head in ("vertex", "vertices"):
            vertices.update(dict.fromkeys(tokens[1:]))
        elif head == "edge":
            if len(tokens) != 3:
                raise InstanceFormatError("edge line needs exactly two vertices", lineno)
            edges.append((tokens[1], tokens[2]))
            vertices.update(dict.fromkeys(tokens[1:]))
        else:
            raise InstanceFormatError(f"unrecognised line {line!r}", lineno)
    try:
        graph = Graph(tuple(vertices), tuple(edges))
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from None
    return graph, k, (tuple(parts) if parts else None)


def parse_partitioned_graph(text: str) -> PartitionedGraph:
    graph, k, parts = parse_graph(text)
    if parts is None:
        raise InstanceFormatError("no part lines found")
    if k is None:
        k = len(parts)
    try:
        pg = PartitionedGraph(k, parts, graph.edges)
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from None
    missing = set(graph.vertices) - set(pg.part_of)
    if missing:
        raise InstanceFormatError(f"vertices outside every part: {sorted(missing)}")
    return pg


def format_graph(graph: Graph | PartitionedGraph) -> str:
    lines = []
    if isinstance(graph, PartitionedGraph):
        lines.append(str(graph.k))
        lines.extend("part " + " ".join(p) for p in graph.parts)
    else:
        lines.append("vertices " + " ".join(graph.vertices))
    lines.extend(f"edge {u} {v}" for u, v in graph.edges)
    return "\n".join(lines) + "\n"


def has_clique(graph: Graph, t: int) -> bool:
    adj = graph.adjacency()
    return any(
        all(b in adj[a] for a, b in combinations(group, 2))
        for group in combinations(graph.vertices, t)
    )


def random_graph(vertex_count: int, p: float, rng: np.random.Generator) -> Graph:
    names = tuple(f"v{i}" for i in range(vertex_count))
    edges = tuple((names[i], names[j]) for i, j in combinations(range(vertex_count), 2) if rng.random() < p)
    return Graph(names, edges)


def all_graphs(vertex_count: int) -> Iterable[Graph]:
    """Every labeled graph on ``vertex_count`` vertices."""
    names = tuple(f"v{i}" for i in range(vertex_count))
    pairs = list(combinations(names, 2))
    for mask in range(1 << len(pairs)):
        yield Graph(names, tuple(pr for b, pr in enumerate(pairs) if mask >> b & 1))


# --- random multicolored-clique construction ------------------------------


@dataclass(frozen=True)
class MccConstruction:
    matrix: np.ndarray  # (2m, L) binary strings
    endpoints: tuple[tuple[str, str], ...]
    n_star: int
    constants: GapConstants
    graph: PartitionedGraph

    @property
    def l1(self) -> int:
        return self.constants.l1

    def instance(self, d: int | None = None) -> Instance:
        k_out = self.matrix.shape[0] - self.n_star
        budget = math.ceil(self.constants.d_yes) if d is None else d
        return Instance(Alphabet(("0", "1")), self.matrix, k_out, budget)

    def clique_rows(self, clique: Sequence[str]) -> tuple[int, ...]:
        """Strings whose endpoint lies inside ``clique`` (one vertex per part)."""
        members = set(clique)
        return tuple(i for i, (u, v) in enumerate(self.endpoints) if u in members and v in members)


def mcc_to_csw_random(
    graph: PartitionedGraph, seed: int | None = 0, l1: int | None = None
) -> MccConstruction:
    """Random-bit construction. ``l1`` shrinks the vertex blocks below the length
    the concentration argument needs (the default is that full length)."""
    k = graph.k
    if k < 3:
        raise RefusalError(f"the construction needs k >= 3, got {k}")
    if any(len(p) == 0 for p in graph.parts):
        raise RefusalError("every part must contain at least one vertex")
    m = len(graph.edges)
    n_star = k * (k - 1)
    if 2 * m < n_star:
        raise RefusalError(f"only {2 * m} edge endpoints, fewer than n* = {n_star}")
    constants = gap_constants(k, m, l1=l1)
    la, lb = constants.l1, constants.l2
    pair_index = {pq: idx for idx, pq in enumerate(combinations(range(k), 2))}

    def a_slice(p):
        return slice(p * la, (p + 1) * la)

    def b_slice(p, q):
        start = k * la + pair_index[(p, q)] * lb
        return slice(start, start + lb)

    endpoints = []
    for u, v in graph.edges:
        endpoints.extend([(u, v), (v, u)])
    rng = np.random.default_rng(seed)
    Z = rng.integers(0, 2, size=(2 * m, constants.length), dtype=np.uint8)
    S = Z.copy()
    first_from: dict[str, int] = {}
    for i, (u, _) in enumerate(endpoints):
        first_from.setdefault(u, i)
    part = graph.part_of
    for i, (u, v) in enumerate(endpoints):
        p = part[u]
        S[i, a_slice(p)] = Z[first_from[u], a_slice(p)]
        lo, hi = sorted((p, part[v]))
        owner = i - (i % 2)  # first endpoint of the same edge
        S[i, b_slice(lo, hi)] = Z[owner, b_slice(lo, hi)]
    return MccConstruction(S, tuple(endpoints), n_star, constants, graph)


@dataclass(frozen=True)
class GapReport:
    min_found: int
    rows: tuple[int, ...]
    exhaustive: bool
    below_d_yes: bool
    below_d_no: bool


def empirical_gap_check(
    S,
    n_star: int,
    d_yes,
    d_no,
    budget: int = 10**5,
    seed: int | None = 0,
    probes: int = 64,
    starts: Iterable[Sequence[int]] = (),
) -> GapReport:
    """Smallest consensus cost over size-n* subsets found by search.

    Exhaustive when the subset count fits in ``budget``; otherwise the given
    start subsets (e.g. clique rows) and random probes, each improved by
    single swaps until no swap helps.
    """
    S = np.ascontiguousarray(S.codes if isinstance(S, Instance) else S, dtype=np.uint8)
    n = S.shape[0]
    sigma = int(S.max()) + 1 if S.size else 1
    if not 1 <= n_star <= n:
        raise ValueError(f"cannot pick {n_star} of {n} strings")
    if math.comb(n, n_star) <= budget:
        rows, cost = kernels.best_subset(S, n_star, sigma)
        best, exhaustive = (int(cost), tuple(rows.tolist())), True
    else:
        rng = np.random.default_rng(seed)
        start_sets = [sorted(int(i) for i in s) for s in starts]
        start_sets += [sorted(rng.choice(n, n_star, replace=False).tolist()) for _ in range(probes)]
        best = None
        for rows in start_sets:
            cost, rows = _swap_descent(S, rows, sigma)
            if best is None or (cost, rows) < best:
                best = (cost, rows)
        exhaustive = False
    cost, rows = best
    return GapReport(cost, rows, exhaustive, cost <= d_yes, cost < d_no)


def _swap_descent(S: np.ndarray, rows: list[int], sigma: int) -> tuple[int, tuple[int, ...]]:
    n = S.shape[0]
    current = sorted(rows)
    _, cost = kernels.consensus_rows(S, current, sigma)
    improved = True
    while improved:
        improved = False
        outside = [i for i in range(n) if i not in set(current)]
        for pos in range(len(current)):
            for j in outside:
                trial = sorted(current[:pos] + current[pos + 1:] + [j])
                _, c = kernels.consensus_rows(S, trial, sigma)
                if c < cost:
                    current, cost, improved = trial, c, True
                    break
            if improved:
                break
    return int(cost), tuple(current)


# --- k-hardness reduction -------------------------------------------------


def _binary_codes(instance: Instance) -> np.ndarray:
    if set(instance.alphabet.symbols) != {"0", "1"}:
        raise RefusalError(f"the reduction needs the binary alphabet 01, got {str(instance.alphabet)!r}")
    one = instance.alphabet.symbols.index("1")
    return (instance.codes == one).astype(np.uint8)


def k_hardness_reduction(instance: Instance) -> Instance:
    """Triple the strings and pad so the new outlier count is the old retained count."""
    bits = _binary_codes(instance)
    n, length, d = instance.n, instance.length, instance.d
    if length <= 2 or d <= 2:
        raise RefusalError("the reduction assumes l > 2 and d > 2")
    if n % 2:
        raise RefusalError("the reduction needs an even number of strings")
    n_star = instance.n_star
    out = np.zeros((3 * n, 11 * length), dtype=np.uint8)
    out[:n, :length] = bits
    out[:n, length:] = 1
    ones = bits.sum(axis=0)
    for j in range(length):
        out[n:n + 3 * n // 2 - int(ones[j]), j] = 1
    d_new = 3 * n * length // 2 - n_star * length + d + 10 * length * (n - n_star)
    return Instance(Alphabet(("0", "1")), out, n_star, d_new)


# --- clique reduction over an unbounded alphabet ---------------------------


def clique_to_csw_unbounded(graph: Graph, t: int) -> Instance:
    """One string per block pair (i, j) and edge: endpoints at i and j, a fresh filler elsewhere."""
    if t <= 2:
        raise RefusalError("the reduction assumes t > 2")
    if not graph.edges:
        raise RefusalError("the graph needs at least one edge")
    pairs = list(combinations(range(t), 2))
    fillers = len(pairs) * len(graph.edges)
    alphabet = Alphabet(tuple(symbol_pool(len(graph.vertices) + fillers)))
    index = {v: i for i, v in enumerate(graph.vertices)}
    rows = []
    filler = len(graph.vertices)
    for i, j in pairs:
        for u, v in graph.edges:
            r, s = sorted((index[u], index[v]))
            row = [filler] * t
            row[i], row[j] = r, s
            rows.append(row)
            filler += 1
    n_star = len(pairs)
    codes = np.array(rows, dtype=np.uint8)
    return Instance(alphabet, codes, len(rows) - n_star, n_star * (t - 2))
