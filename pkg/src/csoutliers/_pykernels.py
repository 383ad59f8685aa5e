"""Reference kernels in numpy/itertools.

These define the semantics the compiled module must reproduce bit for bit:
enumeration orders, tie-breaking (lowest symbol code, first-found optimum)
and return types.
"""
from itertools import chain, combinations, islice, product

import numpy as np


def _onehot(S, sigma):
    return (S[:, :, None] == np.arange(sigma, dtype=S.dtype)).astype(np.int64)


def row_distances(S, x):
    return (S != x).sum(axis=1).astype(np.int64)


def consensus_rows(S, rows, sigma):
    L = S.shape[1]
    counts = _onehot(S[np.asarray(rows, dtype=np.intp)], sigma).sum(axis=0)
    x = counts.argmax(axis=1).astype(np.uint8)
    return x, int(len(rows) * L - counts.max(axis=1).sum())


def best_subset(S, m, sigma):
    n, L = S.shape
    if not 1 <= m <= n:
        raise ValueError(f"subset size {m} out of range for {n} rows")
    onehot = _onehot(S, sigma)
    step = max(1, 2**22 // (m * L * sigma))
    combos = combinations(range(n), m)
    best_rows, best = None, -1
    while best != 0:
        block = np.fromiter(chain.from_iterable(islice(combos, step)), dtype=np.int64).reshape(-1, m)
        if not block.size:
            break
        costs = m * L - onehot[block].sum(axis=1).max(axis=2).sum(axis=1)
        j = int(np.argmin(costs))  # first minimum keeps enumeration order
        if best < 0 or costs[j] < best:
            best, best_rows = int(costs[j]), block[j]
    return np.array(best_rows, dtype=np.int64), best


def best_center(S, sigma, m):
    n, L = S.shape
    if not 1 <= m <= n:
        raise ValueError(f"subset size {m} out of range for {n} rows")
    best_x, best = None, -1
    for x in product(range(sigma), repeat=L):
        dist = (S != np.array(x, dtype=np.uint8)).sum(axis=1)
        value = int(np.sort(dist)[:m].sum())
        if best < 0 or value < best:
            best, best_x = value, x
            if best == 0:
                break
    return np.array(best_x, dtype=np.uint8), best


def _multiplicities(n, r, memo=None):
    """Multiplicity vectors of all size-r multisets of range(n), in
    combinations_with_replacement order (first coordinate descending)."""
    memo = {} if memo is None else memo
    if (n, r) in memo:
        return memo[n, r]
    if n == 1:
        out = np.array([[r]], dtype=np.int64)
    elif n == 2:
        tail = np.arange(r + 1, dtype=np.int64)
        out = np.stack([r - tail, tail], axis=1)
    else:
        blocks = []
        for head in range(r, -1, -1):
            rest = _multiplicities(n - 1, r - head, memo)
            blocks.append(np.hstack([np.full((rest.shape[0], 1), head, dtype=np.int64), rest]))
        out = np.vstack(blocks)
    memo[n, r] = out
    return out


def multiset_candidates(S, r, sigma, chunk=1 << 15):
    n, L = S.shape
    if r < 1:
        raise ValueError("sample size must be positive")
    flat = _onehot(S, sigma).reshape(n, L * sigma)
    packable = sigma**L < 2**62
    place = sigma ** np.arange(L, dtype=np.int64) if packable else None
    weights = _multiplicities(n, r)
    seen = {}
    for lo in range(0, weights.shape[0], chunk):
        X = (weights[lo:lo + chunk] @ flat).reshape(-1, L, sigma).argmax(axis=2).astype(np.uint8)
        # first occurrence of each distinct consensus, in enumeration order
        keys = X.astype(np.int64) @ place if packable else X
        _, first = np.unique(keys, axis=None if packable else 0, return_index=True)
        for i in np.sort(first):
            seen.setdefault(X[i].tobytes(), X[i])
    return np.array(list(seen.values()), dtype=np.uint8).reshape(-1, L)


def weighted_consensus(S, W, sigma):
    n, L = S.shape
    flat = _onehot(S, sigma).reshape(n, L * sigma)
    counts = (np.asarray(W, dtype=np.int64) @ flat).reshape(-1, L, sigma)
    return counts.argmax(axis=2).astype(np.uint8)


def center_costs(S, X, m, sigma):
    n, L = S.shape
    if not 1 <= m <= n:
        raise ValueError(f"subset size {m} out of range for {n} rows")
    onehot = _onehot(S, sigma)
    T = X.shape[0]
    cons = np.empty(T, dtype=np.int64)
    dist = np.empty(T, dtype=np.int64)
    step = max(1, 2**22 // max(1, m * L * sigma))
    for lo in range(0, T, step):
        D = (X[lo:lo + step, None, :] != S[None, :, :]).sum(axis=2)
        order = np.argsort(D, axis=1, kind="stable")[:, :m]
        dist[lo:lo + step] = np.take_along_axis(D, order, axis=1).sum(axis=1)
        counts = onehot[order].sum(axis=1)
        cons[lo:lo + step] = m * L - counts.max(axis=2).sum(axis=1)
    return cons, dist
