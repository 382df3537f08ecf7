"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line."""

import csv
import itertools
import math
import time
from pathlib import Path

import numpy as np
import pytest
from conftest import synth_power_law_pairs

from lexnav.cli import main
from lexnav.corpus import load_corpus, read_links_file, read_pages_file, sample_pairs
from lexnav.graphgen import GraphKind, LatticeConfig, PaMixConfig, generate_lexical_graph, graph_to_corpus
from lexnav.navigate import (
    CostModel,
    ScalingModel,
    Strategy,
    StrategyConfig,
    SweepCell,
    fit_scaling,
    scaling_experiment,
)
from lexnav.textkit import INFINITE, TermVector, cosine_similarity, distance_from_similarity, lexical_distance
from lexnav.topology import (
    BinningConfig,
    alpha_lambda_regression,
    estimate_linkage_probability,
    fit_power_law_tail,
)

FIXTURES = Path(__file__).parent / "fixtures"
SEED = 20240611


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, elapsed: float, limit: float | None, detail: str) -> None:
        in_time = limit is None or elapsed < limit
        status = "PASS" if ok and in_time else "FAIL"
        budget = f" (limit {limit:g}s)" if limit is not None else ""
        with capsys.disabled():
            print(f"\nCRITERION {number}: {status} [{elapsed:.1f}s{budget}] {detail}")
        assert ok, detail
        assert in_time, f"criterion {number} took {elapsed:.1f}s, limit {limit}s"

    return emit


def _sweep(kind: GraphKind, sides, alphas, trials: int, seed: int) -> dict:
    cells = [SweepCell(kind, LatticeConfig(D=2, side=s, alpha=a, q=1)) for a in alphas for s in sides]
    rows = scaling_experiment(cells, StrategyConfig(), trials, seed)
    return {(r.N, r.alpha): r for r in rows}


def _criticality(kind: GraphKind) -> tuple[bool, str]:
    alphas = [0.0, 1.0, 2.0, 3.0, 4.0]
    rows = _sweep(kind, [64], alphas, 500, SEED)
    medians = [rows[(64 * 64, a)].median_lprime for a in alphas]
    best = alphas[int(np.argmin(medians))]
    sides = [16, 32, 64, 128]
    scale = _sweep(kind, sides, [2.0], 500, SEED + 1)
    pts = [(s * s, scale[(s * s, 2.0)].median_lprime) for s in sides]
    fit = fit_scaling(pts, ScalingModel.POLYLOG)
    ok = abs(best - 2.0) <= 1.0 and fit.r_squared >= 0.9
    success = min(r.success_rate for r in [*rows.values(), *scale.values()])
    detail = (
        f"median l' by alpha {dict(zip(alphas, medians))}, argmin {best:g}; "
        f"alpha=2 polylog exponent {fit.exponent:.2f} r2 {fit.r_squared:.3f} over sides {sides} "
        f"(l' {[p[1] for p in pts]}); min success rate {success:.3f}"
    )
    return ok, detail


def test_criterion_1_metric_axioms(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(SEED)
    failures = []

    def rand_vec() -> TermVector:
        k = int(rng.integers(0, 8))
        terms = rng.choice(20, size=k, replace=False)
        return TermVector.from_weights({int(t): float(w) for t, w in zip(terms, rng.exponential(2.0, k))})

    for i in range(1000):
        a, b = rand_vec(), rand_vec()
        s_ab, s_ba = cosine_similarity(a, b), cosine_similarity(b, a)
        r_ab = lexical_distance(a, b)
        if s_ab != s_ba or r_ab != lexical_distance(b, a):
            failures.append(f"asymmetry at pair {i}")
        if not 0.0 <= s_ab <= 1.0:
            failures.append(f"range at pair {i}")
        if not (r_ab >= 0 and (r_ab == INFINITE) == (s_ab == 0)):
            failures.append(f"distance range at pair {i}")
        for v in (a, b):
            if v.norm > 0 and (lexical_distance(v, v) != 0.0 or cosine_similarity(v, v) != 1.0):
                failures.append(f"identity at pair {i}")
        c = float(rng.uniform(1e-3, 1e3))
        if abs(cosine_similarity(a.scaled(c), b) - s_ab) > 1e-9:
            failures.append(f"scale invariance at pair {i}")
        s1, s2 = sorted(rng.uniform(1e-6, 1.0, 2))
        if s1 < s2 and not distance_from_similarity(s1) > distance_from_similarity(s2):
            failures.append(f"monotonicity at pair {i}")
    # clamping: nearly parallel vectors whose raw ratio can round above 1
    for i in range(1000):
        w = rng.uniform(0.1, 10.0, 6)
        a = TermVector.from_weights(dict(enumerate(w)))
        b = TermVector.from_weights(dict(enumerate(w * (1 + 1e-15))))
        if not 0.0 <= cosine_similarity(a, b) <= 1.0:
            failures.append(f"clamp at pair {i}")
    elapsed = time.perf_counter() - t0
    report(1, not failures, elapsed, 1.0, f"2000 vector pairs, {len(failures)} violations {failures[:3]}")


def _brute_force_eq2(pages_path: Path, links_path: Path, corpus, lam: float, edges: np.ndarray):
    """Per-bin (total, linked) from raw url links, without corpus neighborhoods or binning code."""
    urls = [u for u, _, _ in read_pages_file(pages_path)]
    known = set(urls)
    nbr = {u: {u} for u in urls}
    for src, dst in read_links_file(links_path):
        if src in known and dst in known and src != dst:
            nbr[src].add(dst)
            nbr[dst].add(src)
    total = [0] * (len(edges) - 1)
    linked = [0] * (len(edges) - 1)
    for i, j in itertools.combinations(range(len(urls)), 2):
        rho = lexical_distance(corpus.pages[i].vector, corpus.pages[j].vector)
        u1, u2 = nbr[urls[i]], nbr[urls[j]]
        overlap = len(u1 & u2) / len(u1 | u2)
        for b in range(len(edges) - 1):
            if edges[b] <= rho < edges[b + 1]:
                total[b] += 1
                linked[b] += overlap > lam
    return total, linked


def test_criterion_2_estimator_oracle(report, tmp_path):
    t0 = time.perf_counter()
    bins, lo, hi = 12, 1e-3, 1e3
    edges = BinningConfig(bins, lo, hi).edges()
    lambdas = [0.0, 0.1, 0.25, 0.5]
    mismatches, checked = [], 0
    fixtures = sorted(p for p in FIXTURES.iterdir() if (p / "pages.tsv").exists())
    for fx in fixtures:
        pages, links = fx / "pages.tsv", fx / "links.tsv"
        corpus = load_corpus(pages, links)
        assert len(corpus) <= 100
        out = tmp_path / fx.name
        code = main([
            "estimate", "--pages", str(pages), "--links", str(links), "--bins", str(bins),
            "--rho-min", str(lo), "--rho-max", str(hi), "--lambdas", ",".join(map(str, lambdas)),
            "--out", str(out),
        ])
        if code != 0:
            mismatches.append(f"{fx.name}: estimate exited {code}")
            continue
        for lam in lambdas:
            with open(out / f"distribution_{lam!r}.csv", newline="") as fh:
                rows = list(csv.DictReader(fh))
            total, linked = _brute_force_eq2(pages, links, corpus, lam, edges)
            got_t = [int(r["total"]) for r in rows]
            got_k = [int(r["linked"]) for r in rows]
            got_p = [r["probability"] for r in rows]
            want_p = ["" if t == 0 else repr(k / t) for t, k in zip(total, linked)]
            checked += 1
            if (got_t, got_k, got_p) != (total, linked, want_p):
                mismatches.append(f"{fx.name} lambda={lam}")
    elapsed = time.perf_counter() - t0
    ok = not mismatches and checked == len(fixtures) * len(lambdas)
    report(2, ok, elapsed, 10.0,
           f"{len(fixtures)} fixture corpora x {len(lambdas)} thresholds, {checked} distributions checked, "
           f"mismatches {mismatches}")


def test_criterion_3_power_law_recovery(report):
    t0 = time.perf_counter()
    results = {}
    for k, alpha0 in enumerate((1.0, 2.0)):
        pairs = synth_power_law_pairs(alpha0, 100_000, seed=SEED + k)
        dist = estimate_linkage_probability(pairs, 0.0, BinningConfig(20, 1.0, 10.0))
        results[alpha0] = fit_power_law_tail(dist).alpha
    elapsed = time.perf_counter() - t0
    errors = {a: abs(f - a) / a for a, f in results.items()}
    ok = all(e <= 0.10 for e in errors.values())
    detail = ", ".join(f"alpha0={a:g} fitted {results[a]:.4f} (rel err {errors[a]:.3%})" for a in results)
    report(3, ok, elapsed, 30.0, f"10^5 pairs each: {detail}")


def test_criterion_4_alpha_grows_with_lambda(report):
    t0 = time.perf_counter()
    # ring whose long-range links thin out with lexical distance; larger lambda
    # keeps only pairs sharing much of their neighborhood, which decays faster
    graph = generate_lexical_graph(LatticeConfig(D=1, side=1000, alpha=1.5, q=12, seed=0))
    corpus = graph_to_corpus(graph)
    pairs = sample_pairs(corpus, 10**6, seed=SEED)
    config = BinningConfig.covering((p.rho for p in pairs), bins=20)
    lambdas = [0.0, 0.05, 0.1, 0.2]
    fits = [fit_power_law_tail(estimate_linkage_probability(pairs, lam, config)) for lam in lambdas]
    reg = alpha_lambda_regression([(f.lam, f.alpha) for f in fits])
    alphas = [f.alpha for f in fits]
    increasing = all(a < b for a, b in zip(alphas, alphas[1:]))
    ok = increasing and reg.pearson >= 0.9
    elapsed = time.perf_counter() - t0
    detail = ", ".join(f"lambda={f.lam:g}: alpha {f.alpha:.3f} (r2 {f.r_squared:.2f}, {f.points_used} pts)" for f in fits)
    report(4, ok, elapsed, 120.0, f"{len(pairs)} pairs; {detail}; pearson {reg.pearson:.4f}")


@pytest.mark.parametrize("kind,number,limit", [(GraphKind.LATTICE, 5, 300.0), (GraphKind.LEXICAL, 6, 600.0)])
def test_criteria_5_and_6_criticality(report, kind, number, limit):
    t0 = time.perf_counter()
    ok, detail = _criticality(kind)
    report(number, ok, time.perf_counter() - t0, limit, f"{kind.value} graphs: {detail}")


def test_criterion_7_cost_model_separation(report):
    t0 = time.perf_counter()
    sizes = [1000, 2000, 4000, 8000, 16000]
    cells = [SweepCell(GraphKind.PA_MIX, PaMixConfig(N=n, m=2, gamma=0.0, vocab_size=1000)) for n in sizes]
    crawler = StrategyConfig(
        Strategy.DEGREE_GREEDY, CostModel.VISIT_TO_EVALUATE, follow_inlinks=True, budget_per_node=10.0
    )
    rows = scaling_experiment(cells, crawler, trials=100, seed=SEED)
    power = fit_scaling([(r.N, r.median_l) for r in rows], ScalingModel.POWER)

    sides = [16, 32, 64, 128]
    lex = _sweep(GraphKind.LEXICAL, sides, [2.0], 200, SEED + 2)
    polylog = fit_scaling([(s * s, lex[(s * s, 2.0)].median_lprime) for s in sides], ScalingModel.POLYLOG)
    ok = power.exponent >= 0.8 and polylog.r_squared >= 0.9
    elapsed = time.perf_counter() - t0
    detail = (
        f"PA degree/visit median pages {[r.median_l for r in rows]} at N={sizes} "
        f"(success {[r.success_rate for r in rows]}), POWER exponent {power.exponent:.3f}; "
        f"lexical free-cue median links {[lex[(s * s, 2.0)].median_lprime for s in sides]}, "
        f"POLYLOG r2 {polylog.r_squared:.3f}"
    )
    report(7, ok, elapsed, 600.0, detail)


def test_criterion_8_determinism(report, tmp_path):
    t0 = time.perf_counter()
    ring = FIXTURES / "ring100"
    corpus = ["--pages", str(ring / "pages.tsv"), "--links", str(ring / "links.tsv"), "--scheme", "raw"]
    commands = {
        "pairs": ["pairs", *corpus, "--count", "1500", "--seed", "5"],
        "generate-lattice": ["generate", "--kind", "lattice", "--side", "20", "--q", "2", "--seed", "5"],
        "generate-lexical": ["generate", "--kind", "lexical", "--dim", "1", "--side", "50", "--seed", "5", "--as-corpus"],
        "generate-pa": ["generate", "--kind", "pa_mix", "--n", "300", "--gamma", "2", "--seed", "5"],
        "experiment-lattice": ["experiment", "--kind", "lattice", "--sides", "8,16", "--alphas", "1,2",
                               "--trials", "30", "--seed", "5"],
        "experiment-pa": ["experiment", "--kind", "pa_mix", "--sizes", "200,400", "--strategy", "degree",
                          "--cost-model", "visit", "--follow-inlinks", "--trials", "20", "--seed", "5"],
    }
    differing = []
    for name, argv in commands.items():
        outputs = []
        for rep, threads in enumerate(("1", "2")):
            out = tmp_path / f"{name}-{rep}"
            assert main([*argv, "--threads", threads, "--out", str(out)]) == 0
            outputs.append({p.name: p.read_bytes() for p in sorted(out.iterdir()) if p.name != "manifest.json"})
        if outputs[0] != outputs[1] or not outputs[0]:
            differing.append(name)
    # the downstream deterministic commands fed by a seeded pairs file
    pairs = tmp_path / "pairs-0" / "pairs.csv"
    for rep in range(2):
        main(["estimate", "--pairs", str(pairs), "--lambdas", "0,0.1", "--bins", "8", "--out", str(tmp_path / f"e{rep}")])
    if sorted((tmp_path / "e0").glob("*.csv")) and any(
        (tmp_path / "e0" / f.name).read_bytes() != (tmp_path / "e1" / f.name).read_bytes()
        for f in (tmp_path / "e0").glob("*.csv")
    ):
        differing.append("estimate")
    elapsed = time.perf_counter() - t0
    report(8, not differing, elapsed, None,
           f"{len(commands) + 1} seeded runs repeated (serial vs 2 workers), differing outputs: {differing}")
