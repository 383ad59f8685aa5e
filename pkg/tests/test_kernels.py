import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from csoutliers import kernels
from csoutliers.kernels import available_backends

BACKENDS = available_backends()
compiled = pytest.mark.skipif("cython" not in BACKENDS, reason="compiled kernels not built")


def _same(a, b):
    if isinstance(a, tuple):
        return len(a) == len(b) and all(_same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return a.dtype == np.asarray(b).dtype and np.array_equal(a, b)
    return a == b


matrices = st.integers(2, 4).flatmap(
    lambda sigma: st.tuples(
        st.just(sigma),
        st.integers(1, 7).flatmap(
            lambda n: st.integers(1, 6).flatmap(
                lambda L: st.lists(
                    st.lists(st.integers(0, sigma - 1), min_size=L, max_size=L), min_size=n, max_size=n
                )
            )
        ),
    )
)


@compiled
@settings(max_examples=150, deadline=None)
@given(matrices, st.data())
def test_backends_agree(case, data):
    sigma, rows = case
    S = np.array(rows, dtype=np.uint8)
    n, L = S.shape
    py, cy = BACKENDS["python"], BACKENDS["cython"]
    x = np.array(data.draw(st.lists(st.integers(0, sigma - 1), min_size=L, max_size=L)), dtype=np.uint8)
    m = data.draw(st.integers(1, n))
    sel = np.array(sorted(data.draw(st.sets(st.integers(0, n - 1), min_size=1))), dtype=np.int64)
    r = data.draw(st.integers(1, 4))
    W = np.array(data.draw(st.lists(st.lists(st.integers(0, 5), min_size=n, max_size=n), min_size=1, max_size=4)), dtype=np.int64)
    X = np.array(data.draw(st.lists(st.lists(st.integers(0, sigma - 1), min_size=L, max_size=L), min_size=1, max_size=5)), dtype=np.uint8)
    assert _same(py.row_distances(S, x), cy.row_distances(S, x))
    assert _same(py.consensus_rows(S, sel, sigma), cy.consensus_rows(S, sel, sigma))
    assert _same(py.best_subset(S, m, sigma), cy.best_subset(S, m, sigma))
    if sigma**L <= 4096:
        assert _same(py.best_center(S, sigma, m), cy.best_center(S, sigma, m))
    assert _same(py.multiset_candidates(S, r, sigma), cy.multiset_candidates(S, r, sigma))
    assert _same(py.weighted_consensus(S, W, sigma), cy.weighted_consensus(S, W, sigma))
    assert _same(py.center_costs(S, X, m, sigma), cy.center_costs(S, X, m, sigma))


@compiled
def test_multiset_dedup_beyond_bitmap_range():
    # sigma^L above the bitmap limit switches the compiled walker to a set
    rng = np.random.default_rng(3)
    S = rng.integers(0, 4, size=(5, 16), dtype=np.uint8)
    a = BACKENDS["python"].multiset_candidates(S, 3, 4)
    b = BACKENDS["cython"].multiset_candidates(S, 3, 4)
    assert np.array_equal(a, b)


def test_small_examples():
    S = np.array([[0, 0, 0], [0, 0, 1], [1, 1, 1]], dtype=np.uint8)
    rows, cost = kernels.best_subset(S, 2, 2)
    assert rows.tolist() == [0, 1] and cost == 1
    x, value = kernels.best_center(S, 2, 2)
    assert x.tolist() == [0, 0, 0] and value == 1
    assert kernels.multiset_candidates(S, 3, 2).tolist() == [[0, 0, 0], [0, 0, 1], [1, 1, 1]]
    assert kernels.weighted_consensus(S, [[1, 1, 0], [0, 1, 2]], 2).tolist() == [[0, 0, 0], [1, 1, 1]]
    cons, dist = kernels.center_costs(S, [[0, 0, 0], [1, 1, 1]], 2, 2)
    assert cons.tolist() == [1, 2] and dist.tolist() == [1, 2]


def test_best_subset_rejects_bad_size():
    S = np.zeros((3, 2), dtype=np.uint8)
    with pytest.raises(ValueError):
        kernels.best_subset(S, 4, 2)


def test_backend_is_reported():
    assert kernels.BACKEND in BACKENDS


@pytest.mark.parametrize("choice", ["python", "auto"])
def test_env_override_selects_backend(choice):
    import os
    import subprocess
    import sys

    env = dict(os.environ, CSOUTLIERS_KERNELS=choice)
    out = subprocess.run(
        [sys.executable, "-c", "import csoutliers; print(csoutliers.BACKEND)"],
        capture_output=True, text=True, env=env, check=True,
    ).stdout.strip()
    expected = "python" if choice == "python" else ("cython" if "cython" in BACKENDS else "python")
    assert out == expected


def test_fallback_multiset_order_matches_itertools():
    from itertools import combinations_with_replacement

    from csoutliers._pykernels import _multiplicities

    for n in range(1, 6):
        for r in range(1, 6):
            ref = [np.bincount(c, minlength=n).tolist() for c in combinations_with_replacement(range(n), r)]
            assert _multiplicities(n, r).tolist() == ref


@compiled
def test_fallback_chunking_is_invisible():
    rng = np.random.default_rng(8)
    for _ in range(40):
        S = rng.integers(0, 3, size=(int(rng.integers(1, 6)), int(rng.integers(1, 5))), dtype=np.uint8)
        r = int(rng.integers(1, 6))
        a = BACKENDS["python"].multiset_candidates(S, r, 3, chunk=5)
        assert np.array_equal(a, BACKENDS["cython"].multiset_candidates(S, r, 3))
