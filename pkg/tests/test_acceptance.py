"""Acceptance gate: one test per criterion, each printing a PASS line.

Exact oracles (edge-subset isomorphism, full graph enumeration) sit on one
side of every check; the package's kernels and closed-form bounds sit on the
other. Statistical criteria use 3-sigma gates on fixed seeds.

Run with `pytest tests/test_acceptance.py -v -s` to see the PASS lines.
"""

import math
import time
from itertools import combinations

import pytest

from oracles import subset_copy_count
from regtail import verify
from regtail.bounds import finner_hom_bound
from regtail.cli import main as cli_main
from regtail.counting import tail_probability_table
from regtail.cores import clique_seed_size, degree_product_report
from regtail.graphs import GnpModel, SimpleGraph, named_pattern, threshold_probability
from regtail.spanned import spanned_decompose, spanning_excess_report
from regtail.tails import _mc_counts, clique_lower_bound, mc_tail, poisson_diagnostic

PATTERNS = {name: named_pattern(name) for name in ("k3", "c4", "k4")}


def iter_all_graphs(n):
    slots = list(combinations(range(n), 2))
    m = len(slots)
    for bits in range(1 << m):
        yield [slots[i] for i in range(m) if bits >> i & 1]


@pytest.fixture(scope="module")
def exhaustive_counts():
    """Kernel copy counts for every labeled graph on 3..6 vertices."""
    from regtail.counting import count_copies

    table = {name: {} for name in PATTERNS}
    for n in range(3, 7):
        for edges in iter_all_graphs(n):
            g = SimpleGraph(n, edges)
            for name, P in PATTERNS.items():
                table[name][(n, tuple(edges))] = count_copies(P, g)
    return table


@pytest.fixture(scope="module")
def peel_runs():
    """Peeling outcomes from clique seeds: k in 2..20 for each pattern."""
    from regtail.cores import SeedParams, is_seed, peel_to_core
    from regtail.graphs import complete_graph

    runs = []
    for name, P in PATTERNS.items():
        p = threshold_probability(50, P.delta)
        for k in range(2, 21):
            params = SeedParams(n=50, p=p, k=k, q=P.q, cs=10.0)
            seed_graph = complete_graph(clique_seed_size(P, k))
            ok_seed, _ = is_seed(seed_graph, params, P)
            report = peel_to_core(seed_graph, params, P)
            runs.append((name, P, params, seed_graph, ok_seed, report))
    return runs


def test_criterion_01_counting_oracle_equivalence(exhaustive_counts):
    mismatches = 0
    checked = 0
    for name, P in PATTERNS.items():
        for (n, edges), got in exhaustive_counts[name].items():
            want = subset_copy_count(P.graph.edges, edges)
            mismatches += got != want
            checked += 1
    assert mismatches == 0
    print(f"ACCEPTANCE 1 counting-oracle: PASS ({checked} graph/pattern pairs)")


def test_criterion_02_hom_bound_dominance(exhaustive_counts):
    violations = 0
    checked = 0
    for name, P in PATTERNS.items():
        for (n, edges), copies in exhaustive_counts[name].items():
            homs = copies * P.aut_count
            violations += homs > finner_hom_bound(P, n, len(edges)) + 1e-9
            checked += 1
    random_violations = verify.sweep_finner(tuple(PATTERNS), instances=1000, seed=101)
    assert violations == 0
    assert random_violations == []
    print(
        f"ACCEPTANCE 2 hom-bound: PASS ({checked} exhaustive + 3000 random, 0 violations)"
    )


def test_criterion_03_edge_rooted_dominance():
    v1 = verify.sweep_edge_rooted(tuple(PATTERNS), instances=500, seed=202)
    v2 = verify.sweep_outside_edge(tuple(PATTERNS), instances=200, seed=203)
    assert v1 == []
    assert v2 == []
    print(
        "ACCEPTANCE 3 edge-rooted-bound: PASS (1500 rooted + 600 outside instances,"
        " 0 violations)"
    )


def test_criterion_04_spanning_excess(exhaustive_counts):
    components = 0
    for name, P in PATTERNS.items():
        counts = exhaustive_counts[name]
        for n in range(3, 7):
            for edges in iter_all_graphs(n):
                if counts[(n, tuple(edges))] == 0:
                    continue
                g = SimpleGraph(n, edges)
                for comp in spanned_decompose(P, g).components:
                    rep = spanning_excess_report(P, comp.graph)
                    if rep.l_star >= 2:
                        assert rep.f >= rep.lower - 1e-9, (name, n, edges)
                    else:
                        assert abs(rep.f) < 1e-9, (name, n, edges)
                    components += 1
    glued = verify.sweep_spanning_excess(tuple(PATTERNS), instances=200, seed=303, l_max=6)
    assert glued == []
    print(
        f"ACCEPTANCE 4 spanning-excess: PASS ({components} exhaustive components"
        " + 600 glued instances)"
    )


def test_criterion_05_dyadic_sandwich():
    violations = verify.sweep_dyadic(trials=10_000, seed=404)
    assert violations == []
    print("ACCEPTANCE 5 dyadic-sandwich: PASS (10000 random profiles)")


def test_criterion_06_peeling(peel_runs):
    from regtail.cores import is_core

    for name, P, params, seed_graph, ok_seed, report in peel_runs:
        assert ok_seed, (name, params.k)
        trace = report.expectation_trace
        for a, b in zip(trace, trace[1:]):
            assert a > b, (name, params.k)
            assert a - b < params.t * (1 + 1e-9), (name, params.k)
        assert trace[0] - trace[-1] <= params.w * params.k * (1 + 1e-9)
        if report.result.m > 0:
            ok, _ = is_core(report.result, params, P)
            assert ok, (name, params.k)
    print(f"ACCEPTANCE 6 peeling: PASS ({len(peel_runs)} clique-seed configurations)")


def test_criterion_07_core_edge_bounds(peel_runs):
    edges_checked = 0
    for name, P, params, _, _, report in peel_runs:
        if report.result.m == 0:
            continue
        for _, _, bound in degree_product_report(report.result, params, P):
            assert bound >= params.t, (name, params.k)
            edges_checked += 1
    assert edges_checked > 0
    print(f"ACCEPTANCE 7 core-edge-bounds: PASS ({edges_checked} core edges)")


def test_criterion_08_appendix_suite():
    start = time.time()
    assert verify.sweep_power_sum(trials=10_000, seed=505) == []
    assert verify.sweep_split_cost(k_max=200) == []
    assert verify.sweep_chernoff(n_max=200) == []
    elapsed = time.time() - start
    assert elapsed < 60.0
    print(f"ACCEPTANCE 8 appendix-suite: PASS ({elapsed:.1f}s, 0 violations)")


def test_criterion_09_mc_vs_exact(k3):
    n, p, samples = 6, 1 / 6, 100_000
    tab = tail_probability_table(k3, n, p)
    for seed in (1, 2, 3):
        counts = _mc_counts(k3, GnpModel(n, p, seed), samples)
        for k in (1, 2, 3, 4):
            estimate = float((counts >= k).mean())
            exact = float(tab[k])
            sigma = math.sqrt(exact * (1 - exact) / samples)
            assert abs(estimate - exact) <= 3 * sigma, (seed, k)
    # the shared-batch estimates are exactly what per-k mc_tail calls produce
    row = mc_tail(k3, GnpModel(n, p, 1), 2, 1000)
    check = float((_mc_counts(k3, GnpModel(n, p, 1), 1000) >= 2).mean())
    assert row.estimate == check
    print("ACCEPTANCE 9 mc-vs-exact: PASS (3 seeds x k in 1..4 within 3 sigma)")


def test_criterion_10_clique_lower_bound():
    checked = 0
    for name, P in PATTERNS.items():
        per_set = math.factorial(P.q) // P.aut_count
        for n in range(P.q, 8):
            p_values = (0.05, 0.1, 0.2, threshold_probability(n, P.delta))
            k_max = math.comb(n, P.q) * per_set
            for p in p_values:
                tab = tail_probability_table(P, n, p)
                for k in range(1, k_max + 1):
                    if clique_seed_size(P, k) > n:
                        break
                    assert clique_lower_bound(P, n, p, k) <= tab[k] + 1e-15, (
                        name, n, p, k,
                    )
                    checked += 1
    spot = clique_lower_bound(PATTERNS["k3"], 6, 1 / 6, 4)
    assert spot == pytest.approx(2.1433470507544573e-05, rel=1e-12)
    print(f"ACCEPTANCE 10 clique-lower-bound: PASS ({checked} grid instances)")


def test_criterion_11_bk_inequality():
    violations = verify.sweep_bk("k3", n_values=(6, 7))
    assert violations == []
    print("ACCEPTANCE 11 bk-inequality: PASS (n in {6,7} x 4 edge probabilities)")


def test_criterion_12_poisson_regime(k3):
    n, samples = 400, 100_000
    p = 1 / 400
    lam_expected = math.comb(400, 3) / 400**3
    distances = []
    for seed in (10, 11, 12):
        diag = poisson_diagnostic(k3, GnpModel(n, p, seed), samples)
        assert diag.lam == pytest.approx(lam_expected, rel=1e-12)
        assert diag.lam == pytest.approx(0.16542, abs=5e-6)
        assert diag.tv_distance < 0.05, (seed, diag.tv_distance)
        distances.append(diag.tv_distance)
    print(
        "ACCEPTANCE 12 poisson-regime: PASS (tv = "
        + ", ".join(f"{d:.4f}" for d in distances)
        + " on 3 seeds)"
    )


def test_criterion_13_scan_determinism(tmp_path):
    args = ["scan", "--pattern", "k3", "--n", "6", "--kmax", "6",
            "--samples", "20000", "--seed", "99", "--workers", "2",
            "--format", "csv"]
    out1, out2 = tmp_path / "one.csv", tmp_path / "two.csv"
    assert cli_main(args + ["--out", str(out1)]) == 0
    assert cli_main(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    print("ACCEPTANCE 13 scan-determinism: PASS (byte-identical CSV)")
