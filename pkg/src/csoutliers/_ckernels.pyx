# Compiled counterparts of _pykernels; keep orders and tie-breaks identical.
import numpy as np

from libc.string cimport memset

ctypedef unsigned char u8
ctypedef long long i64
ctypedef unsigned long long u64

cdef u64 BITMAP_LIMIT = 1ULL << 26


cdef inline void _add_row(i64* counts, const u8* row, Py_ssize_t L, int sigma, i64 w) noexcept nogil:
    cdef Py_ssize_t j
    for j in range(L):
        counts[j * sigma + row[j]] += w


cdef inline i64 _column_max(const i64* counts, Py_ssize_t L, int sigma, u8* x) noexcept nogil:
    # Sum of column maxima; argmax goes to x with the lowest code winning ties.
    cdef Py_ssize_t j
    cdef int c, best_c
    cdef i64 best, total = 0
    for j in range(L):
        best = counts[j * sigma]
        best_c = 0
        for c in range(1, sigma):
            if counts[j * sigma + c] > best:
                best = counts[j * sigma + c]
                best_c = c
        x[j] = <u8>best_c
        total += best
    return total


def row_distances(const u8[:, ::1] S, const u8[::1] x):
    cdef Py_ssize_t n = S.shape[0], L = S.shape[1], i, j
    cdef i64 c
    out = np.empty(n, dtype=np.int64)
    cdef i64[::1] o = out
    with nogil:
        for i in range(n):
            c = 0
            for j in range(L):
                if S[i, j] != x[j]:
                    c += 1
            o[i] = c
    return out


def consensus_rows(const u8[:, ::1] S, const i64[::1] rows, int sigma):
    cdef Py_ssize_t L = S.shape[1], m = rows.shape[0], p
    counts_arr = np.zeros(max(L * sigma, 1), dtype=np.int64)
    x_arr = np.zeros(max(L, 1), dtype=np.uint8)
    cdef i64[::1] counts = counts_arr
    cdef u8[::1] x = x_arr
    cdef i64 total
    with nogil:
        for p in range(m):
            _add_row(&counts[0], &S[rows[p], 0], L, sigma, 1)
        total = _column_max(&counts[0], L, sigma, &x[0])
    return x_arr[:L].copy(), int(m * L - total)


def best_subset(const u8[:, ::1] S, Py_ssize_t m, int sigma):
    cdef Py_ssize_t n = S.shape[0], L = S.shape[1], i, p
    if m < 1 or m > n:
        raise ValueError(f"subset size {m} out of range for {n} rows")
    idx_arr = np.arange(m, dtype=np.int64)
    best_arr = idx_arr.copy()
    counts_arr = np.zeros(L * sigma, dtype=np.int64)
    x_arr = np.zeros(L, dtype=np.uint8)
    cdef i64[::1] idx = idx_arr
    cdef i64[::1] best_idx = best_arr
    cdef i64[::1] counts = counts_arr
    cdef u8[::1] x = x_arr
    cdef i64 cost, best = -1
    with nogil:
        for p in range(m):
            _add_row(&counts[0], &S[idx[p], 0], L, sigma, 1)
        while True:
            cost = m * L - _column_max(&counts[0], L, sigma, &x[0])
            if best < 0 or cost < best:
                best = cost
                for p in range(m):
                    best_idx[p] = idx[p]
                if best == 0:
                    break
            i = m - 1
            while i >= 0 and idx[i] == n - m + i:
                i -= 1
            if i < 0:
                break
            for p in range(i, m):
                _add_row(&counts[0], &S[idx[p], 0], L, sigma, -1)
            idx[i] += 1
            for p in range(i + 1, m):
                idx[p] = idx[p - 1] + 1
            for p in range(i, m):
                _add_row(&counts[0], &S[idx[p], 0], L, sigma, 1)
    return best_arr, int(best)


def best_center(const u8[:, ::1] S, int sigma, Py_ssize_t m):
    cdef Py_ssize_t n = S.shape[0], L = S.shape[1], i, j
    if m < 1 or m > n:
        raise ValueError(f"subset size {m} out of range for {n} rows")
    x_arr = np.zeros(L, dtype=np.uint8)
    best_arr = x_arr.copy()
    hist_arr = np.zeros(L + 1, dtype=np.int64)
    cdef u8[::1] x = x_arr
    cdef u8[::1] best_x = best_arr
    cdef i64[::1] hist = hist_arr
    cdef i64 dist, value, take, remaining, best = -1
    with nogil:
        while True:
            memset(&hist[0], 0, (L + 1) * sizeof(i64))
            for i in range(n):
                dist = 0
                for j in range(L):
                    if S[i, j] != x[j]:
                        dist += 1
                hist[dist] += 1
            value = 0
            remaining = m
            for j in range(L + 1):
                take = hist[j] if hist[j] < remaining else remaining
                value += take * j
                remaining -= take
                if remaining == 0:
                    break
            if best < 0 or value < best:
                best = value
                for j in range(L):
                    best_x[j] = x[j]
                if best == 0:
                    break
            j = L - 1
            while j >= 0:
                x[j] += 1
                if x[j] < sigma:
                    break
                x[j] = 0
                j -= 1
            if j < 0:
                break
    return best_arr, int(best)


cdef class _MultisetWalker:
    # Enumerates size-r multisets in combinations_with_replacement order.
    cdef const u8[:, ::1] S
    cdef Py_ssize_t n, L
    cdef int sigma
    cdef i64[::1] counts
    cdef u8[::1] x
    cdef bytearray bitmap
    cdef bint use_bitmap
    cdef list out
    cdef set seen

    def __init__(self, const u8[:, ::1] S, int sigma):
        self.S = S
        self.n = S.shape[0]
        self.L = S.shape[1]
        self.sigma = sigma
        self.counts = np.zeros(max(self.L * sigma, 1), dtype=np.int64)
        self.x = np.zeros(max(self.L, 1), dtype=np.uint8)
        self.out = []
        self.seen = set()
        cdef u64 space = 1
        cdef Py_ssize_t j
        self.use_bitmap = True
        for j in range(self.L):
            space *= <u64>sigma
            if space > BITMAP_LIMIT:
                self.use_bitmap = False
                break
        if self.use_bitmap:
            self.bitmap = bytearray((space + 7) // 8)

    cdef int leaf(self) except -1:
        cdef Py_ssize_t j
        cdef u64 key = 0
        cdef unsigned char* bits
        _column_max(&self.counts[0], self.L, self.sigma, &self.x[0])
        if self.use_bitmap:
            for j in range(self.L):
                key = key * <u64>self.sigma + self.x[j]
            bits = self.bitmap
            if bits[key >> 3] & (1 << (key & 7)):
                return 0
            bits[key >> 3] |= <unsigned char>(1 << (key & 7))
            self.out.append(bytes(self.x[:self.L]))
        else:
            b = bytes(self.x[:self.L])
            if b not in self.seen:
                self.seen.add(b)
                self.out.append(b)
        return 0

    cdef int rec(self, Py_ssize_t item, i64 remaining) except -1:
        cdef i64 c
        if remaining == 0:
            return self.leaf()
        if item == self.n - 1:
            _add_row(&self.counts[0], &self.S[item, 0], self.L, self.sigma, remaining)
            self.leaf()
            _add_row(&self.counts[0], &self.S[item, 0], self.L, self.sigma, -remaining)
            return 0
        _add_row(&self.counts[0], &self.S[item, 0], self.L, self.sigma, remaining)
        c = remaining
        while True:
            self.rec(item + 1, remaining - c)
            if c == 0:
                break
            _add_row(&self.counts[0], &self.S[item, 0], self.L, self.sigma, -1)
            c -= 1
        return 0

    def run(self, i64 r):
        self.rec(0, r)
        data = b"".join(self.out)
        return np.frombuffer(data, dtype=np.uint8).reshape(len(self.out), self.L).copy()


def multiset_candidates(const u8[:, ::1] S, Py_ssize_t r, int sigma):
    if r < 1:
        raise ValueError("sample size must be positive")
    return _MultisetWalker(S, sigma).run(r)


def weighted_consensus(const u8[:, ::1] S, const i64[:, ::1] W, int sigma):
    cdef Py_ssize_t n = S.shape[0], L = S.shape[1], T = W.shape[0], t, i
    out = np.empty((T, L), dtype=np.uint8)
    counts_arr = np.zeros(max(L * sigma, 1), dtype=np.int64)
    cdef u8[:, ::1] X = out
    cdef i64[::1] counts = counts_arr
    if L == 0:
        return out
    with nogil:
        for t in range(T):
            memset(&counts[0], 0, L * sigma * sizeof(i64))
            for i in range(n):
                if W[t, i] != 0:
                    _add_row(&counts[0], &S[i, 0], L, sigma, W[t, i])
            _column_max(&counts[0], L, sigma, &X[t, 0])
    return out


def center_costs(const u8[:, ::1] S, const u8[:, ::1] X, Py_ssize_t m, int sigma):
    # For each center: the m closest rows (lowest index on ties), their consensus
    # cost and their summed distance to the center.
    cdef Py_ssize_t n = S.shape[0], L = S.shape[1], T = X.shape[0], t, i, j, p
    if m < 1 or m > n:
        raise ValueError(f"subset size {m} out of range for {n} rows")
    cons_arr = np.empty(T, dtype=np.int64)
    dist_arr = np.empty(T, dtype=np.int64)
    d_arr = np.empty(n, dtype=np.int64)
    order_arr = np.empty(n, dtype=np.int64)
    start_arr = np.empty(L + 2, dtype=np.int64)
    counts_arr = np.zeros(max(L * sigma, 1), dtype=np.int64)
    x_arr = np.zeros(max(L, 1), dtype=np.uint8)
    cdef i64[::1] cons = cons_arr
    cdef i64[::1] dsum = dist_arr
    cdef i64[::1] d = d_arr
    cdef i64[::1] order = order_arr
    cdef i64[::1] start = start_arr
    cdef i64[::1] counts = counts_arr
    cdef u8[::1] x = x_arr
    cdef i64 c, s
    with nogil:
        for t in range(T):
            memset(&start[0], 0, (L + 2) * sizeof(i64))
            for i in range(n):
                c = 0
                for j in range(L):
                    if S[i, j] != X[t, j]:
                        c += 1
                d[i] = c
                start[c + 1] += 1
            for j in range(L + 1):
                start[j + 1] += start[j]
            for i in range(n):
                order[start[d[i]]] = i
                start[d[i]] += 1
            memset(&counts[0], 0, L * sigma * sizeof(i64))
            s = 0
            for p in range(m):
                _add_row(&counts[0], &S[order[p], 0], L, sigma, 1)
                s += d[order[p]]
            dsum[t] = s
            cons[t] = m * L - _column_max(&counts[0], L, sigma, &x[0])
    return cons_arr, dist_arr
