"""Instances, solutions and the Hamming/consensus primitives every solver shares.

Strings are held as dense ``uint8`` code matrices; code ``c`` is the ``c``-th
symbol of the instance alphabet, so "lowest code" and "alphabet order" mean
the same thing when breaking ties.
"""
from __future__ import annotations

import string
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .errors import InstanceFormatError

MAX_SYMBOLS = 256

# Printable single-character symbols for generated alphabets; '#' and
# whitespace are excluded because they are significant in the file format.
_ASCII_POOL = "".join(
    ch for ch in string.digits + string.ascii_letters + string.punctuation if ch != "#"
)
SYMBOL_POOL = _ASCII_POOL + "".join(chr(c) for c in range(0x100, 0x100 + MAX_SYMBOLS))


def symbol_pool(count: int) -> str:
    """First ``count`` symbols of the generated-alphabet pool."""
    if count > MAX_SYMBOLS:
        raise ValueError(f"alphabets are limited to {MAX_SYMBOLS} symbols, got {count}")
    return SYMBOL_POOL[:count]


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple[str, ...]

    def __post_init__(self):
        symbols = tuple(self.symbols)
        object.__setattr__(self, "symbols", symbols)
        if not symbols:
            raise ValueError("alphabet must be non-empty")
        if len(symbols) > MAX_SYMBOLS:
            raise ValueError(f"alphabets are limited to {MAX_SYMBOLS} symbols")
        if len(set(symbols)) != len(symbols):
            raise ValueError("alphabet has duplicate symbols")
        for sym in symbols:
            if len(sym) != 1 or sym.isspace() or sym == "#":
                raise ValueError(f"invalid alphabet symbol {sym!r}")

    @classmethod
    def of(cls, symbols: "Alphabet | str | Iterable[str]") -> "Alphabet":
        if isinstance(symbols, Alphabet):
            return symbols
        return cls(tuple(symbols))

    @classmethod
    def from_strings(cls, strings: Iterable[str]) -> "Alphabet":
        """Sorted set of the characters that occur."""
        return cls(tuple(sorted(set("".join(strings)))))

    def __len__(self) -> int:
        return len(self.symbols)

    def __str__(self) -> str:
        return "".join(self.symbols)

    def encode(self, text: str) -> np.ndarray:
        index = self._index
        try:
            return np.fromiter((index[ch] for ch in text), dtype=np.uint8, count=len(text))
        except KeyError as exc:
            raise ValueError(f"symbol {exc.args[0]!r} is not in alphabet {str(self)!r}") from None

    def decode(self, codes) -> str:
        return "".join(self.symbols[c] for c in np.asarray(codes).tolist())

    @property
    def _index(self) -> dict[str, int]:
        cached = self.__dict__.get("_index_cache")
        if cached is None:
            cached = {s: i for i, s in enumerate(self.symbols)}
            object.__setattr__(self, "_index_cache", cached)
        return cached


@dataclass(frozen=True, eq=False)
class Instance:
    """``n`` equal-length strings over ``alphabet`` with outlier count ``k`` and budget ``d``."""

    alphabet: Alphabet
    codes: np.ndarray
    k: int = 0
    d: int = 0

    def __post_init__(self):
        object.__setattr__(self, "alphabet", Alphabet.of(self.alphabet))
        codes = np.array(self.codes, dtype=np.uint8, order="C", copy=True)
        if codes.ndim != 2 or codes.shape[0] < 1 or codes.shape[1] < 1:
            raise ValueError("an instance needs at least one string of length >= 1")
        if codes.size and int(codes.max()) >= len(self.alphabet):
            raise ValueError("string code outside the alphabet")
        if not 0 <= self.k < codes.shape[0]:
            raise ValueError(f"need 0 <= k < n, got k={self.k}, n={codes.shape[0]}")
        if self.d < 0:
            raise ValueError("distance budget d must be non-negative")
        codes.setflags(write=False)
        object.__setattr__(self, "codes", codes)
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "d", int(self.d))

    @classmethod
    def from_strings(
        cls,
        strings: Sequence[str],
        k: int = 0,
        d: int = 0,
        alphabet: Alphabet | str | None = None,
    ) -> "Instance":
        alpha = Alphabet.from_strings(strings) if alphabet is None else Alphabet.of(alphabet)
        lengths = {len(s) for s in strings}
        if len(lengths) > 1:
            raise ValueError(f"strings have differing lengths {sorted(lengths)}")
        return cls(alpha, np.array([alpha.encode(s) for s in strings], dtype=np.uint8), k, d)

    @property
    def n(self) -> int:
        return self.codes.shape[0]

    @property
    def length(self) -> int:
        return self.codes.shape[1]

    @property
    def sigma(self) -> int:
        return len(self.alphabet)

    @property
    def n_star(self) -> int:
        return self.n - self.k

    @property
    def delta(self) -> Fraction:
        return Fraction(self.d, self.n_star)

    @property
    def strings(self) -> tuple[str, ...]:
        return tuple(self.alphabet.decode(row) for row in self.codes)

    def string(self, i: int) -> str:
        return self.alphabet.decode(self.codes[i])

    def with_params(self, *, k: int | None = None, d: int | None = None) -> "Instance":
        return replace(self, k=self.k if k is None else k, d=self.d if d is None else d)

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.alphabet == other.alphabet
            and self.k == other.k
            and self.d == other.d
            and np.array_equal(self.codes, other.codes)
        )

    def __hash__(self):
        return hash((self.alphabet, self.k, self.d, self.codes.tobytes(), self.codes.shape))

    def __repr__(self):
        return (
            f"Instance(n={self.n}, length={self.length}, k={self.k}, d={self.d}, "
            f"alphabet={str(self.alphabet)!r})"
        )


@dataclass(frozen=True)
class Solution:
    """Retained index set, its consensus, and the achieved total distance."""

    retained: tuple[int, ...]
    consensus: str
    value: int
    flags: tuple[str, ...] = field(default=())

    def outliers(self, n: int) -> tuple[int, ...]:
        keep = set(self.retained)
        return tuple(i for i in range(n) if i not in keep)

    def with_flags(self, *flags: str) -> "Solution":
        merged = tuple(dict.fromkeys(self.flags + tuple(f for f in flags if f)))
        return replace(self, flags=merged)


def _as_codes(strings, alphabet: Alphabet | None):
    """Normalise str input to a code matrix; returns (matrix, alphabet or None)."""
    if isinstance(strings, np.ndarray):
        return np.atleast_2d(strings), alphabet
    strings = list(strings)
    if strings and isinstance(strings[0], str):
        alpha = alphabet or Alphabet.from_strings(strings)
        lengths = {len(s) for s in strings}
        if len(lengths) > 1:
            raise ValueError(f"strings have differing lengths {sorted(lengths)}")
        return np.array([alpha.encode(s) for s in strings], dtype=np.uint8), alpha
    return np.atleast_2d(np.asarray(strings, dtype=np.uint8)), alphabet


def hamming(a, b) -> int:
    """Number of positions where ``a`` and ``b`` differ."""
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    if isinstance(a, str) or isinstance(b, str):
        return sum(x != y for x, y in zip(a, b))
    return int(np.count_nonzero(np.asarray(a) != np.asarray(b)))


def consensus(strings, alphabet: Alphabet | str | None = None):
    """Column-wise most frequent symbol, lowest alphabet code winning ties.

    Accepts a sequence of ``str`` (returns ``str``; the alphabet defaults to the
    sorted characters present) or a code matrix (returns a code array).
    """
    alpha = None if alphabet is None else Alphabet.of(alphabet)
    if len(strings) == 0:
        raise ValueError("consensus of an empty multiset is undefined")
    S, alpha = _as_codes(strings, alpha)
    sigma = len(alpha) if alpha is not None else int(S.max()) + 1
    x, _ = kernels.consensus_rows(S, np.arange(S.shape[0]), sigma)
    if isinstance(strings, np.ndarray) or alpha is None:
        return x
    return alpha.decode(x)


def total_distance(strings, s) -> int:
    """Sum of Hamming distances from every string in ``strings`` to ``s``."""
    if isinstance(s, str):
        return sum(hamming(t, s) for t in strings)
    S = np.atleast_2d(np.asarray(strings, dtype=np.uint8))
    if S.size and S.shape[1] != len(s):
        raise ValueError(f"length mismatch: {S.shape[1]} vs {len(s)}")
    return int(kernels.row_distances(S, s).sum()) if S.size else 0


def closest_subset(strings, x, m: int) -> tuple[int, ...]:
    """Sorted indices of the ``m`` strings closest to ``x`` (lowest index wins ties)."""
    if isinstance(x, str):
        if any(len(s) != len(x) for s in strings):
            raise ValueError("length mismatch between strings and x")
        dist = np.array([hamming(s, x) for s in strings], dtype=np.int64)
    else:
        S = np.atleast_2d(np.asarray(strings, dtype=np.uint8))
        if S.shape[1] != len(x):
            raise ValueError(f"length mismatch: {S.shape[1]} vs {len(x)}")
        dist = kernels.row_distances(S, x)
    if not 0 <= m <= len(dist):
        raise ValueError(f"cannot select {m} of {len(dist)} strings")
    return tuple(sorted(np.argsort(dist, kind="stable")[:m].tolist()))


def evaluate_subset(instance: Instance, retained: Iterable[int]) -> Solution:
    """Consensus of the retained strings and their total distance to it."""
    rows = sorted(int(i) for i in retained)
    if len(rows) != instance.n_star:
        raise ValueError(f"expected {instance.n_star} retained strings, got {len(rows)}")
    return evaluate_rows(instance, rows)


def evaluate_rows(instance: Instance, rows: Iterable[int]) -> Solution:
    """Like :func:`evaluate_subset` but for any non-empty retained set size."""
    rows = sorted(int(i) for i in rows)
    if not rows:
        raise ValueError("retained set is empty")
    if len(set(rows)) != len(rows) or rows[0] < 0 or rows[-1] >= instance.n:
        raise ValueError(f"invalid retained indices {rows}")
    x, cost = kernels.consensus_rows(instance.codes, rows, instance.sigma)
    return Solution(tuple(rows), instance.alphabet.decode(x), cost)


# --- instance text format -------------------------------------------------


def format_instance(instance: Instance, comments: Iterable[str] = ()) -> str:
    lines = [f"# {c}" if not c.startswith("#") else c for c in comments]
    lines.append(f"{instance.n} {instance.length} {instance.k} {instance.d}")
    lines.append(str(instance.alphabet))
    lines.extend(instance.strings)
    return "\n".join(lines) + "\n"


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def parse_instance(text: str) -> Instance:
    """Parse the ``n l k d`` / alphabet / strings format. ``#`` lines are ignored."""
    lines = list(_content_lines(text))
    if not lines:
        raise InstanceFormatError("empty instance file", 1)
    lineno, header = lines[0]
    fields = header.split()
    if len(fields) != 4 or not all(f.isdigit() for f in fields):
        raise InstanceFormatError(f"header must be 'n l k d' (4 non-negative integers), got {header!r}", lineno)
    n, length, k, d = map(int, fields)
    if n < 1 or length < 1:
        raise InstanceFormatError("n and l must be positive", lineno)
    if k >= n:
        raise InstanceFormatError(f"k={k} must be smaller than n={n}", lineno)
    if len(lines) < 2:
        raise InstanceFormatError("missing alphabet line", lineno + 1)
    lineno, alpha_line = lines[1]
    try:
        alphabet = Alphabet(tuple(alpha_line))
    except ValueError as exc:
        raise InstanceFormatError(str(exc), lineno) from None
    body = lines[2:]
    if len(body) != n:
        where = body[n][0] if len(body) > n else (body[-1][0] + 1 if body else lineno + 1)
        raise InstanceFormatError(f"expected {n} strings, found {len(body)}", where)
    codes = np.empty((n, length), dtype=np.uint8)
    for row, (lineno, s) in enumerate(body):
        if len(s) != length:
            raise InstanceFormatError(f"string has length {len(s)}, expected {length}", lineno)
        try:
            codes[row] = alphabet.encode(s)
        except ValueError as exc:
            raise InstanceFormatError(str(exc), lineno) from None
    return Instance(alphabet, codes, k, d)


def comment_lines(text: str) -> list[str]:
    """The ``#`` comment lines of a file, without the leading marker."""
    return [ln.strip()[1:].strip() for ln in text.splitlines() if ln.strip().startswith("#")]


def read_instance(path: str | Path) -> Instance:
    return parse_instance(Path(path).read_text(encoding="utf-8"))


def write_instance(instance: Instance, path: str | Path, comments: Iterable[str] = ()) -> None:
    Path(path).write_text(format_instance(instance, comments), encoding="utf-8")
