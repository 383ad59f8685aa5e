"""Synthetic instances: noisy copies of a hidden center plus uniform outliers."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Alphabet, Instance, symbol_pool


def default_alphabet(sigma: int) -> Alphabet:
    if sigma == 2:
        return Alphabet(("0", "1"))
    if sigma == 4:
        return Alphabet(tuple("ACGT"))
    return Alphabet(tuple(symbol_pool(sigma)))


@dataclass(frozen=True)
class PlantedInstance:
    instance: Instance
    center: str
    outliers: tuple[int, ...]

    def ground_truth(self) -> str:
        return f"#ground-truth center={self.center} outliers={','.join(map(str, self.outliers))}"


def planted_instance(
    n: int,
    length: int,
    k: int,
    sigma: int = 4,
    p: float = 0.1,
    seed: int | None = 0,
    d: int | None = None,
    alphabet: Alphabet | str | None = None,
) -> PlantedInstance:
    """Center uniform; each non-outlier flips every position with probability p
    to a uniformly chosen other symbol; the k outliers are uniform strings.

    ``d`` defaults to the summed distance of the non-outliers to the center.
    """
    alpha = default_alphabet(sigma) if alphabet is None else Alphabet.of(alphabet)
    if len(alpha) != sigma:
        raise ValueError(f"alphabet has {len(alpha)} symbols, sigma is {sigma}")
    if not 0 <= k < n or length < 1:
        raise ValueError("need 0 <= k < n and length >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError("flip probability must lie in [0, 1]")
    if sigma < 2 and p > 0:
        raise ValueError("flips need at least two symbols")
    rng = np.random.default_rng(seed)
    center = rng.integers(0, sigma, size=length, dtype=np.uint8)
    codes = np.tile(center, (n, 1))
    flips = rng.random((n, length)) < p
    shift = rng.integers(1, max(sigma, 2), size=(n, length), dtype=np.uint8)
    codes = np.where(flips, (codes + shift) % sigma, codes).astype(np.uint8)
    outliers = np.sort(rng.choice(n, size=k, replace=False))
    codes[outliers] = rng.integers(0, sigma, size=(k, length), dtype=np.uint8)
    if d is None:
        keep = np.setdiff1d(np.arange(n), outliers)
        d = int((codes[keep] != center).sum())
    inst = Instance(alpha, codes, k, d)
    return PlantedInstance(inst, alpha.decode(center), tuple(outliers.tolist()))
