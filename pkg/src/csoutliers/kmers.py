"""Length-l substrings of sequencing reads, in instance-file layout."""
from __future__ import annotations

from typing import Iterable, Iterator

from .core import Alphabet
from .errors import InstanceFormatError


def parse_reads(text: str) -> list[tuple[str, str]]:
    """FASTA-like reads as (name, sequence).

    ``>`` lines are headers; other lines are concatenated into the current
    read; a blank line or a new header ends it. Reads without a header are
    named by their ordinal.
    """
    reads: list[tuple[str, str]] = []
    name, chunks = None, []

    def flush():
        nonlocal name, chunks
        if chunks:
            reads.append((name or f"read{len(reads) + 1}", "".join(chunks)))
        name, chunks = None, []

    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            flush()
        elif line.startswith(">"):
            flush()
            name = line[1:].strip() or None
        else:
            chunks.append(line)
    flush()
    return reads


def kmers(read: str, length: int) -> Iterator[str]:
    """Every consecutive substring of the given length, left to right."""
    if length < 1:
        raise ValueError("substring length must be positive")
    for start in range(len(read) - length + 1):
        yield read[start:start + length]


def extract(reads: Iterable[tuple[str, str]], length: int, alphabet: Alphabet) -> list[str]:
    allowed = set(alphabet.symbols)
    out = []
    for name, seq in reads:
        bad = sorted(set(seq) - allowed)
        if bad:
            raise InstanceFormatError(f"read {name!r} has symbols {''.join(bad)!r} outside alphabet {alphabet}")
        out.extend(kmers(seq, length))
    return out


def format_kmers(strings: list[str], length: int, alphabet: Alphabet, k: int | None = None, d: int | None = None) -> str:
    """Instance text when k and d are known, else a header left for the user to complete."""
    if k is not None and d is not None:
        head = [f"{len(strings)} {length} {k} {d}"]
    else:
        head = ["# append k and d to the next line to obtain a complete instance", f"{len(strings)} {length}"]
    return "\n".join(head + [str(alphabet)] + strings) + "\n"
