"""End-to-end acceptance criteria, one test each, with their time limits.

Each test prints a single PASS/FAIL line (shown even without ``-s``).
"""
import itertools
import json
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from csoutliers.approx import ApproxParams, capped_sample_size, eptas_min_distance, ptas_max_nonoutliers, ptas_min_distance
from csoutliers.cli import main
from csoutliers.core import Instance, consensus, evaluate_subset
from csoutliers.exact import decide, solve_exact_centers, solve_exact_subsets
from csoutliers.fpt import FptConfig, solve_fpt
from csoutliers.planted import planted_instance
from csoutliers.reductions import (
    Graph,
    all_graphs,
    clique_to_csw_unbounded,
    complete_multipartite,
    has_clique,
    k_hardness_reduction,
    mcc_to_csw_random,
    random_graph,
)
from csoutliers.walks import WalkTable, delta2_gap, delta_gap, gap_constants, walk_count

from conftest import naive_consensus, naive_cost, random_instance, sign_pattern_x


@pytest.fixture
def report(capsys):
    def emit(number, ok, elapsed, limit, detail):
        with capsys.disabled():
            status = "PASS" if ok and elapsed <= limit else "FAIL"
            print(f"\n[acceptance {number:2d}] {status}  {elapsed:7.2f}s / {limit}s  {detail}")
        assert ok, detail
        assert elapsed <= limit, f"took {elapsed:.1f}s, limit {limit}s"

    return emit


def _instances_200():
    rng = np.random.default_rng(20260101)
    return [random_instance(rng, n_range=(2, 8), len_range=(1, 6), sigma=2, k_max=3) for _ in range(200)]


def test_01_oracle_cross_equivalence(report):
    start = time.perf_counter()
    mismatches = []
    for idx, inst in enumerate(_instances_200()):
        a, b = solve_exact_subsets(inst).value, solve_exact_centers(inst).value
        if a != b:
            mismatches.append(idx)
    report(1, not mismatches, time.perf_counter() - start, 60, f"200 instances, mismatches={mismatches}")


def test_02_ptas_guarantee(report):
    start = time.perf_counter()
    failures = []
    checked = 0
    for idx, inst in enumerate(_instances_200()):
        opt = solve_exact_subsets(inst).value
        for eps in (Fraction(1, 4), Fraction(1, 2)):
            r = capped_sample_size(inst.n, eps, inst.sigma, cap=10**6)
            sol = ptas_min_distance(inst, eps, r_override=r)
            checked += 1
            if not sol.value <= (1 + eps) * opt:
                failures.append((idx, eps, sol.value, opt))
    report(2, not failures, time.perf_counter() - start, 300, f"{checked} runs, violations={failures}")


def _best_known(inst, planted, eptas_value):
    values = [eptas_value]
    if math.comb(inst.n, inst.n_star) <= 10**6:
        values.append(solve_exact_subsets(inst).value)
    keep = [i for i in range(inst.n) if i not in planted.outliers]
    values.append(evaluate_subset(inst, keep).value)
    return min(values)


def test_03_eptas_success_rate(report):
    start = time.perf_counter()
    eps = Fraction(1, 2)
    hits = 0
    for seed in range(100):
        planted = planted_instance(30, 40, 5, sigma=4, p=0.1, seed=seed)
        inst = planted.instance
        sol = eptas_min_distance(inst, ApproxParams(eps, seed=seed))
        assert "repetitions-capped" in sol.flags
        if sol.value <= (1 + eps) * _best_known(inst, planted, sol.value):
            hits += 1
    report(3, hits >= 75, time.perf_counter() - start, 300, f"success {hits}/100 (need >= 75)")


def _max_feasible_size(strings, d):
    for size in range(len(strings), 0, -1):
        for rows in itertools.combinations(range(len(strings)), size):
            chosen = [strings[i] for i in rows]
            if naive_cost(chosen, naive_consensus(chosen, "01")) <= d:
                return size
    return 0


def test_04_max_nonoutliers(report):
    start = time.perf_counter()
    rng = np.random.default_rng(404)
    eps = Fraction(1, 4)
    problems = []
    for idx in range(100):
        inst = random_instance(rng, n_range=(2, 8), len_range=(1, 5), k_max=0)
        d = int(rng.integers(0, 2 * inst.n + 1))
        r = capped_sample_size(inst.n, eps, inst.sigma)
        sol = ptas_max_nonoutliers(inst, d, eps, r_override=r)
        chosen = [inst.strings[i] for i in sol.retained]
        cost = naive_cost(chosen, naive_consensus(chosen, "01"))
        best = _max_feasible_size(list(inst.strings), d)
        if cost > d or len(sol.retained) < (1 - 2 * eps) * best:
            problems.append((idx, len(sol.retained), best, cost, d))
    report(4, not problems, time.perf_counter() - start, 120, f"100 instances, problems={problems}")


def test_05_fpt_decision_agreement(report):
    start = time.perf_counter()
    rng = np.random.default_rng(505)
    problems = []
    yes = 0
    for idx in range(200):
        inst = random_instance(rng, n_range=(2, 8), len_range=(1, 8), k_max=3)
        radius = int(rng.integers(0, 4))
        d = radius * inst.n_star + int(rng.integers(0, inst.n_star))
        inst = inst.with_params(d=d)
        sol = solve_fpt(inst, FptConfig(cross_check=False))
        expected = decide(inst)
        yes += expected
        if (sol is not None) != expected or (sol is not None and (sol.value > d or len(sol.retained) != inst.n_star)):
            problems.append(idx)
    report(5, not problems, time.perf_counter() - start, 600, f"200 instances ({yes} yes), problems={problems}")


def test_06_walk_recurrences(report):
    start = time.perf_counter()
    table = WalkTable()
    bad = []
    for r in range(0, 13):
        for t in range(0, r // 2 + 1):
            for i in range(-(r + 2), r + 3):
                if table.x(i, r, t) != sign_pattern_x(i, r, t):
                    bad.append(("x", i, r, t))
    for r in range(0, 17, 2):
        for i in range(-(r // 2), r // 2 + 1):
            if walk_count(2 * i, r, 0) != math.comb(r, r // 2 - i):
                bad.append(("w0", i, r))
    for t in range(0, 9):
        for i in range(-2 * t, 2 * t + 1):
            want = math.comb(t, (2 * t - i) // 4) if (2 * t - i) % 4 == 0 else 0
            if walk_count(i, 2 * t, t) != want:
                bad.append(("wt", i, t))
    if (table.d2x(0, 4, 2), table.d2x(1, 4, 2)) != (Fraction(-1, 2), Fraction(-1, 8)):
        bad.append("d2x base")
    bad += [("double-step", n) for n in range(2, 25) if not table.x(0, n, 0) < table.x(0, n, 1)]
    bad += [("delta", n) for n in (4, 8, 12, 16, 20) if not delta_gap(n, table) > 0]
    if delta_gap(6, table) != Fraction(-1, 8):
        bad.append("delta(6)")
    report(6, not bad, time.perf_counter() - start, 60, f"failures={bad[:5]}")


def test_07_delta2(report):
    start = time.perf_counter()
    values = {k: delta2_gap(k) for k in (3, 4, 5)}
    ok = values[3] == Fraction(3, 8) and all(v > 0 for v in values.values())
    report(7, ok, time.perf_counter() - start, 60, "delta2 = " + ", ".join(f"{k}:{v}" for k, v in values.items()))


def test_08_e_yes_monte_carlo(report):
    start = time.perf_counter()
    graph = complete_multipartite(4)
    target = gap_constants(4, len(graph.edges), l1=1).e_yes
    costs = []
    for seed in range(200):
        built = mcc_to_csw_random(graph, seed=seed, l1=1)
        rows = built.clique_rows([p[0] for p in graph.parts])
        S = built.matrix[list(rows)]
        ones = S.sum(axis=0)
        costs.append(int(np.minimum(ones, len(rows) - ones).sum()))
    mean = float(np.mean(costs))
    rel = abs(mean - float(target)) / float(target)
    report(8, rel <= 0.05, time.perf_counter() - start, 300, f"mean {mean:.1f} vs E_yes {float(target):.2f} ({rel:.2%})")


def _nonisomorphic_graphs(v):
    names = tuple(f"v{i}" for i in range(v))
    pairs = list(itertools.combinations(range(v), 2))
    slot = {pr: b for b, pr in enumerate(pairs)}
    perm_maps = [[slot[tuple(sorted((p[a], p[b])))] for a, b in pairs] for p in itertools.permutations(range(v))]
    seen = set()
    for mask in range(1 << len(pairs)):
        if mask in seen:
            continue
        bits = [b for b in range(len(pairs)) if mask >> b & 1]
        seen.update(sum(1 << pm[b] for b in bits) for pm in perm_maps)
        yield Graph(names, tuple((names[pairs[b][0]], names[pairs[b][1]]) for b in bits))


def test_09_reduction_iff(report):
    start = time.perf_counter()
    family = [g for v in range(1, 7) for g in _nonisomorphic_graphs(v) if g.edges]
    family += [g for v in (3, 4) for g in all_graphs(v) if g.edges]
    rng = np.random.default_rng(909)
    family += [random_graph(v, 0.5, rng) for v in (5, 6) for _ in range(10)]
    k6 = Graph(tuple("abcdef"), tuple(itertools.combinations("abcdef", 2)))
    k33 = Graph(tuple("abcxyz"), tuple((u, w) for u in "abc" for w in "xyz"))
    c5 = Graph(tuple("abcde"), (("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a")))
    family += [k6, k33, c5]
    family = [g for g in family if g.edges]
    clique_bad = [i for i, g in enumerate(family) if decide(clique_to_csw_unbounded(g, 3)) != has_clique(g, 3)]
    hard_bad = []
    for seed in range(50):
        r = np.random.default_rng(seed)
        inst = Instance(("0", "1"), r.integers(0, 2, size=(4, 3)), int(r.integers(0, 4)), int(r.integers(3, 7)))
        if decide(inst) != decide(k_hardness_reduction(inst)):
            hard_bad.append(seed)
    ok = not clique_bad and not hard_bad
    detail = f"{len(family)} graphs (clique mismatches {clique_bad}), 50 k-hardness (mismatches {hard_bad})"
    report(9, ok, time.perf_counter() - start, 600, detail)


def _run_cli(tmp_path, name, *argv):
    target = tmp_path / name
    code = main([str(a) for a in argv] + ["--out", str(target)])
    assert code == 0, (argv, code)
    return target.read_bytes()


def test_10_determinism(report, tmp_path, monkeypatch, capsys):
    start = time.perf_counter()
    planted = planted_instance(30, 40, 5, sigma=4, p=0.1, seed=3)
    from csoutliers.core import write_instance

    inst_path = tmp_path / "planted.txt"
    write_instance(planted.instance, inst_path)
    graph = tmp_path / "k4.txt"
    graph.write_text("4\npart a\npart b\npart c\npart d\n" + "".join(
        f"edge {u} {v}\n" for u, v in itertools.combinations("abcd", 2)))
    commands = {
        "eptas": ["solve", inst_path, "-a", "eptas", "--epsilon", "1/2", "--seed", 17, "--no-timing"],
        "eptas-small-r": ["solve", inst_path, "-a", "eptas", "--r", 6, "--repetitions", 3000, "--seed", 4, "--no-timing"],
        "planted": ["gen", "planted", "--n", 30, "--length", 40, "--k", 5, "--seed", 12],
        "mcc": ["gen", "mcc", graph, "--l1", 1, "--seed", 6],
    }
    differing = []
    for label, argv in commands.items():
        outputs = []
        for threads in ("1", "4", "1", "4"):
            monkeypatch.setenv("CSOUTLIERS_THREADS", threads)
            outputs.append(_run_cli(tmp_path, f"{label}-{len(outputs)}", *argv))
        if label.startswith("eptas"):
            outputs.append(_run_cli(tmp_path, f"{label}-t", *argv, "--threads", 4))
            json.loads(outputs[0])
        if len(set(outputs)) != 1:
            differing.append(label)
    capsys.readouterr()
    report(10, not differing, time.perf_counter() - start, 120, f"{len(commands)} commands x threads 1/4 x 2 runs, differing={differing}")
