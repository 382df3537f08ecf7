"""``lexnav`` command line: corpus measurement, graph generation and navigation sweeps.

Every command writes its outputs into ``--out`` together with a
``manifest.json`` recording how they were produced. Files are written to a
temporary name and renamed into place, so readers never see partial output.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import math
import os
import sys
import tempfile
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Sequence

from . import __version__
from .corpus import WebCorpus, all_pairs, load_corpus, read_pairs_csv, sample_pairs, write_pairs_csv
from .errors import LexnavError
from .graphgen import (
    GraphKind,
    LatticeConfig,
    PaMixConfig,
    generate_kleinberg_lattice,
    generate_lexical_graph,
    generate_pa_mixture,
    read_graph,
    write_graph,
    write_graph_corpus,
)
from .navigate import (
    CostModel,
    Revisit,
    Strategy,
    StrategyConfig,
    SweepCell,
    navigate,
    read_experiment_csv,
    scaling_experiment,
    write_experiment_csv,
)
from .svgplot import PALETTE, Panel, Series, render_svg
from .textkit import Weighting, load_stopwords
from .topology import (
    BinningConfig,
    alpha_lambda_regression,
    distribution_filename,
    estimate_linkage_probability,
    fit_power_law_tail,
    read_distribution_csv,
    read_fit_csv,
    write_distribution_csv,
    write_fit_csv,
)

log = logging.getLogger("lexnav")

MANIFEST = "manifest.json"
ALPHA_HEADER = "slope,intercept,pearson,points"
_LOG_LEVELS = {"error": logging.ERROR, "warn": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}


# --- output plumbing ----------------------------------------------------------


class Outputs:
    """Collects files written into one output directory, atomically."""

    def __init__(self, directory: str | Path):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.written: list[str] = []

    def write_text(self, name: str, text: str) -> Path:
        path = self.dir / name
        fd, tmp = tempfile.mkstemp(prefix=f".{name}.", dir=self.dir)
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            os.replace(tmp, path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise
        self.written.append(str(path))
        return path

    def write_with(self, name: str, writer: Callable[[io.StringIO], None]) -> Path:
        buf = io.StringIO()
        writer(buf)
        return self.write_text(name, buf.getvalue())

    def write_files(self, names: Sequence[str], writer: Callable[..., None]) -> None:
        """Let ``writer`` create files by path, then move them into place."""
        with tempfile.TemporaryDirectory(dir=self.dir, prefix=".tmp") as tmp:
            paths = [Path(tmp) / n for n in names]
            writer(*paths)
            for n, p in zip(names, paths):
                os.replace(p, self.dir / n)
                self.written.append(str(self.dir / n))


def _jsonable(value):
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "value") and not isinstance(value, (int, float, str)):
        return value.value
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value


def _write_manifest(out: Outputs, args: argparse.Namespace, inputs: list[str], started: float) -> None:
    params = {k: _jsonable(v) for k, v in sorted(vars(args).items()) if k not in ("func",)}
    manifest = {
        "command": args.command,
        "parameters": params,
        "seed": getattr(args, "seed", None),
        "inputs": [str(p) for p in inputs],
        "outputs": [os.path.relpath(p, out.dir) for p in out.written],
        "version": __version__,
        "duration_seconds": round(time.monotonic() - started, 3),
    }
    out.write_text(MANIFEST, json.dumps(manifest, indent=2) + "\n")


def _threads(value: str) -> int:
    if value == "auto":
        return os.cpu_count() or 1
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer or 'auto', got {value!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("--threads must be >= 1")
    return n


def _seed(value: str) -> int:
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {value!r}")
    if not 0 <= n < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return n


def _float_list(value: str) -> list[float]:
    try:
        return [float(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {value!r}")


def _int_list(value: str) -> list[int]:
    try:
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {value!r}")


def _dat(columns: Sequence[str], rows: Sequence[Sequence[float]], comment: str = "") -> str:
    lines = [f"# {comment}"] if comment else []
    lines.append("# " + " ".join(columns))
    for row in rows:
        lines.append(" ".join("nan" if isinstance(v, float) and math.isnan(v) else f"{v:.10g}" for v in row))
    return "\n".join(lines) + "\n"


# --- corpus pipeline ------------------------------------------------------------


def _load(args: argparse.Namespace) -> WebCorpus:
    stop = load_stopwords(args.stopwords) if args.stopwords else None
    return load_corpus(args.pages, args.links, Weighting(args.scheme), stop)


def _corpus_inputs(args: argparse.Namespace) -> list[str]:
    return [p for p in (args.pages, args.links, args.stopwords) if p]


def cmd_ingest(args: argparse.Namespace, out: Outputs) -> list[str]:
    corpus = _load(args)
    sizes = [len(corpus.neighborhood(i)) for i in range(len(corpus))]
    summary = {
        "pages": len(corpus),
        "links": corpus.link_count,
        "dropped_links": corpus.dropped_links,
        "terms": len(corpus.lexicon.term_ids) if corpus.lexicon else 0,
        "empty_vectors": sum(1 for p in corpus.pages if not p.vector.entries),
        "isolated_pages": sum(1 for s in sizes if s == 1),
        "mean_neighborhood_size": sum(sizes) / len(sizes) if sizes else 0.0,
    }
    out.write_text("corpus_summary.json", json.dumps(summary, indent=2) + "\n")
    print(json.dumps(summary))
    return _corpus_inputs(args)


def cmd_pairs(args: argparse.Namespace, out: Outputs) -> list[str]:
    corpus = _load(args)
    pairs = sample_pairs(corpus, args.count, args.seed)
    out.write_with("pairs.csv", lambda fh: write_pairs_csv(fh, pairs))
    log.info("wrote %d pairs", len(pairs))
    return _corpus_inputs(args)


def _estimate_one(job):
    pairs, lam, config = job
    return estimate_linkage_probability(pairs, lam, config)


def cmd_estimate(args: argparse.Namespace, out: Outputs) -> list[str]:
    if args.pairs:
        pairs = read_pairs_csv(args.pairs)
        inputs = [args.pairs]
    else:
        if not (args.pages and args.links):
            raise LexnavError("estimate needs --pairs, or --pages and --links for all pairs")
        pairs = all_pairs(_load(args))
        inputs = _corpus_inputs(args)
    if not pairs:
        raise LexnavError("no pairs to estimate from")
    if args.rho_min is None or args.rho_max is None:
        cover = BinningConfig.covering((p.rho for p in pairs), args.bins)
        config = BinningConfig(
            args.bins,
            cover.rho_min if args.rho_min is None else args.rho_min,
            cover.rho_max if args.rho_max is None else args.rho_max,
        )
    else:
        config = BinningConfig(args.bins, args.rho_min, args.rho_max)
    jobs = [(pairs, lam, config) for lam in args.lambdas]
    if args.threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            dists = list(pool.map(_estimate_one, jobs))
    else:
        dists = [_estimate_one(j) for j in jobs]
    for dist in dists:
        name = distribution_filename(dist.lam)
        out.write_with(name, lambda fh, d=dist: write_distribution_csv(fh, d))
        if dist.overflow_total:
            log.warning(
                "lambda=%s: %d pairs fell outside [%g, %g) or had infinite distance",
                dist.lam, dist.overflow_total, config.rho_min, config.rho_max,
            )
    return inputs


def _parse_tail_start(value: str) -> float | None:
    if value.lower() == "auto":
        return None
    try:
        return float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tail start must be a number or 'auto', got {value!r}")


def cmd_fit(args: argparse.Namespace, out: Outputs) -> list[str]:
    fits = []
    for path in args.dist:
        dist = read_distribution_csv(path)
        fit = fit_power_law_tail(dist, args.tail_start)
        log.info("lambda=%s alpha=%.4f r2=%.4f", dist.lam, fit.alpha, fit.r_squared)
        fits.append(fit)
    fits.sort(key=lambda f: f.lam)
    out.write_with("fit_summary.csv", lambda fh: write_fit_csv(fh, fits))
    return list(args.dist)


def cmd_alphas(args: argparse.Namespace, out: Outputs) -> list[str]:
    fits = read_fit_csv(args.fits)
    reg = alpha_lambda_regression([(f.lam, f.alpha) for f in fits])
    row = ",".join(str(v) for v in (reg.slope, reg.intercept, reg.pearson, reg.points))
    out.write_text("alpha_lambda.csv", f"{ALPHA_HEADER}\n{row}\n")
    print(f"slope={reg.slope:.6g} intercept={reg.intercept:.6g} pearson={reg.pearson:.6g}")
    return [args.fits]


# --- graphs and navigation ------------------------------------------------------


def _strategy_config(args: argparse.Namespace) -> StrategyConfig:
    return StrategyConfig(
        strategy=Strategy(args.strategy),
        cost_model=CostModel(args.cost_model),
        budget=args.budget,
        revisit=Revisit(args.revisit),
        follow_inlinks=args.follow_inlinks,
        budget_per_node=args.budget_per_node,
    )


def cmd_generate(args: argparse.Namespace, out: Outputs) -> list[str]:
    kind = GraphKind[args.kind.upper()]
    if kind is GraphKind.PA_MIX:
        graph = generate_pa_mixture(
            PaMixConfig(args.n, args.m, args.gamma, args.vocab_size, args.seed, args.terms_per_node)
        )
    else:
        config = LatticeConfig(args.dim, args.side, args.alpha, args.q, args.seed)
        if kind is GraphKind.LEXICAL:
            graph = generate_lexical_graph(config, args.vocab_block, coarse=not args.no_coarse)
        else:
            graph = generate_kleinberg_lattice(config)
    out.write_with("graph.txt", lambda fh: write_graph(fh, graph))
    if args.as_corpus:
        out.write_files(["pages.tsv", "links.tsv"], lambda p, l: write_graph_corpus(graph, p, l))
    log.info("generated %s graph with %d nodes and %d edges", kind.value, graph.N, graph.edge_count())
    return []


def cmd_navigate(args: argparse.Namespace, out: Outputs | None) -> list[str]:
    graph = read_graph(args.graph)
    res = navigate(graph, args.source, args.target, _strategy_config(args), seed=args.seed)
    text = json.dumps(
        {
            "source": res.source,
            "target": res.target,
            "success": res.success,
            "links_traversed": res.links_traversed,
            "pages_visited": res.pages_visited,
            "budget_used": res.budget_used,
            "path": list(res.path),
        }
    )
    print(text)
    if out is not None:
        out.write_text("navigation.json", text + "\n")
    return [args.graph]


def _sweep_cells(args: argparse.Namespace) -> list[SweepCell]:
    kind = GraphKind[args.kind.upper()]
    if kind is GraphKind.PA_MIX:
        return [
            SweepCell(kind, PaMixConfig(n, args.m, g, args.vocab_size, 0, args.terms_per_node))
            for g in args.gammas
            for n in args.sizes
        ]
    return [
        SweepCell(kind, LatticeConfig(args.dim, side, a, args.q, 0), args.vocab_block)
        for a in args.alphas
        for side in args.sides
    ]


def cmd_experiment(args: argparse.Namespace, out: Outputs) -> list[str]:
    cells = _sweep_cells(args)
    rows = scaling_experiment(cells, _strategy_config(args), args.trials, args.seed, workers=args.threads)
    out.write_with("experiment.csv", lambda fh: write_experiment_csv(fh, rows))
    for row in rows:
        log.info(
            "N=%d alpha=%g success=%.3f median_l=%g median_lprime=%g",
            row.N, row.alpha, row.success_rate, row.median_l, row.median_lprime,
        )
    return []


# --- plots ----------------------------------------------------------------------


def _read_alpha_csv(path: str) -> tuple[float, float, float, int]:
    with open(path, encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if len(lines) != 2 or lines[0] != ALPHA_HEADER:
        raise LexnavError(f"{path}: expected header {ALPHA_HEADER} and one data row")
    try:
        slope, icpt, pearson, points = lines[1].split(",")
        return float(slope), float(icpt), float(pearson), int(points)
    except ValueError:
        raise LexnavError(f"{path}:2: malformed alpha regression row") from None


def _plot_distributions(args: argparse.Namespace, out: Outputs) -> None:
    dists = sorted((read_distribution_csv(p) for p in args.dist), key=lambda d: d.lam)
    fits = {f.lam: f for f in read_fit_csv(args.fits)} if args.fits else {}
    main = Panel(0, 0, 620, 460, "Linkage probability vs lexical distance",
                 "lexical distance rho", "Pr(rho | lambda)", logx=True, logy=True)
    for i, d in enumerate(dists):
        color = PALETTE[i % len(PALETTE)]
        p = d.probability
        keep = [(c, v) for c, v in zip(d.centers, p) if v > 0]
        main.series.append(Series([c for c, _ in keep], [v for _, v in keep],
                                  f"lambda={d.lam:g}", color, line=False))
        out.write_text(
            f"distribution_{d.lam!r}.dat",
            _dat(["rho_center", "total", "linked", "probability"],
                 [(float(c), int(t), int(k), float(v)) for c, t, k, v in zip(d.centers, d.total, d.linked, p)],
                 f"lambda={d.lam!r}"),
        )
        fit = fits.get(d.lam)
        if fit is not None:
            xs = [c for c in d.centers if c >= fit.tail_start]
            if len(xs) >= 2:
                main.series.append(Series(xs, [float(fit.predict(x)) for x in xs], "", color, markers=False))
    panels = [main]
    if fits:
        lams = sorted(fits)
        inset = Panel(372, 34, 238, 180, "", "lambda", "alpha", series=[
            Series(lams, [fits[l].alpha for l in lams], "", PALETTE[0], line=False)
        ], legend=False)
        out.write_text("alpha_lambda.dat", _dat(["lambda", "alpha", "r_squared"],
                                                [(l, fits[l].alpha, fits[l].r_squared) for l in lams]))
        if args.alphas:
            slope, icpt, pearson, _ = _read_alpha_csv(args.alphas)
            inset.series.append(Series([lams[0], lams[-1]], [icpt + slope * lams[0], icpt + slope * lams[-1]],
                                       "", PALETTE[1], markers=False, dashed=True))
            inset.title = f"alpha vs lambda (r={pearson:.3f})"
        panels.append(inset)
    out.write_text("distribution.svg", render_svg(panels, 620, 460))


def _plot_experiments(args: argparse.Namespace, out: Outputs) -> None:
    rows = [r for path in args.experiment for r in read_experiment_csv(path)]
    by_n: dict[int, list] = defaultdict(list)
    by_alpha: dict[float, list] = defaultdict(list)
    for r in rows:
        by_n[r.N].append(r)
        by_alpha[r.alpha].append(r)
    left = Panel(0, 0, 460, 360, "Path length vs clustering exponent", "alpha", "median links / pages")
    for i, (n, rs) in enumerate(sorted(by_n.items())):
        rs = sorted(rs, key=lambda r: r.alpha)
        color = PALETTE[i % len(PALETTE)]
        left.series.append(Series([r.alpha for r in rs], [r.median_lprime for r in rs], f"links N={n}", color))
        left.series.append(Series([r.alpha for r in rs], [r.median_l for r in rs], "", color, dashed=True))
    right = Panel(460, 0, 460, 360, "Path length vs network size", "N", "median links / pages",
                  logx=True, logy=True)
    for i, (a, rs) in enumerate(sorted(by_alpha.items())):
        rs = sorted(rs, key=lambda r: r.N)
        color = PALETTE[i % len(PALETTE)]
        right.series.append(Series([r.N for r in rs], [r.median_lprime for r in rs], f"links alpha={a:g}", color))
        right.series.append(Series([r.N for r in rs], [r.median_l for r in rs], "", color, dashed=True))
    out.write_text("experiment.svg", render_svg([left, right], 920, 360))
    cols = ["N", "alpha", "success_rate", "median_l", "median_lprime", "p90_l"]
    out.write_text("experiment.dat", _dat(cols, [
        (r.N, r.alpha, r.success_rate, r.median_l, r.median_lprime, r.p90_l)
        for r in sorted(rows, key=lambda r: (r.alpha, r.N))
    ]))


def cmd_plot(args: argparse.Namespace, out: Outputs) -> list[str]:
    if not (args.dist or args.experiment):
        raise LexnavError("plot needs --dist and/or --experiment CSV files")
    if args.dist:
        _plot_distributions(args, out)
    if args.experiment:
        _plot_experiments(args, out)
    return [p for p in [*args.dist, args.fits, args.alphas, *args.experiment] if p]


# --- argument parsing -----------------------------------------------------------


def _add_corpus_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--pages", required=required, help="pages file: url<TAB>title<TAB>text")
    p.add_argument("--links", required=required, help="links file: src_url<TAB>dst_url")
    p.add_argument("--scheme", choices=[w.value for w in Weighting], default=Weighting.TFIDF.value)
    p.add_argument("--stopwords", help="file with one stopword per line")


def _add_strategy_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--strategy", choices=[s.value for s in Strategy], default=Strategy.LEXICAL_GREEDY.value)
    p.add_argument("--cost-model", choices=[c.value for c in CostModel], default=CostModel.FREE_CUE.value)
    p.add_argument("--revisit", choices=[r.value for r in Revisit], default=Revisit.TABU.value)
    budget = p.add_mutually_exclusive_group()
    budget.add_argument("--budget", type=int, help="page budget per walk (default ceil(50*sqrt(N)))")
    budget.add_argument("--budget-per-node", type=float, help="page budget as a multiple of N")
    p.add_argument("--follow-inlinks", action="store_true", help="allow stepping backwards along links")


def _add_lattice_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dim", type=int, default=2, help="lattice dimensionality D")
    p.add_argument("--q", type=int, default=1, help="long-range links per node")
    p.add_argument("--vocab-block", type=int, default=2, help="terms per lattice site (lexical)")


def _add_pa_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--m", type=int, default=2, help="links per new node (pa)")
    p.add_argument("--vocab-size", type=int, default=1000)
    p.add_argument("--terms-per-node", type=int, default=10)


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--out", help="output directory")
    shared.add_argument("--threads", type=_threads, default=1, metavar="N|auto")

    def seed_arg(p: argparse.ArgumentParser, required: bool) -> None:
        p.add_argument("--seed", type=_seed, required=required, help="random seed (u64)")

    parser = argparse.ArgumentParser(prog="lexnav", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"lexnav {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("ingest", parents=[shared], help="validate a corpus and summarize it")
    _add_corpus_args(p)
    seed_arg(p, False)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("pairs", parents=[shared], help="sample page pairs to CSV")
    _add_corpus_args(p)
    p.add_argument("--count", type=int, required=True, help="number of distinct pairs")
    seed_arg(p, True)
    p.set_defaults(func=cmd_pairs)

    p = sub.add_parser("estimate", parents=[shared], help="binned linkage probability per lambda")
    p.add_argument("--pairs", help="pairs CSV (otherwise every pair of --pages/--links)")
    _add_corpus_args(p, required=False)
    p.add_argument("--lambdas", type=_float_list, default=[0.0], help="comma-separated thresholds")
    p.add_argument("--bins", type=int, default=50)
    p.add_argument("--rho-min", type=float, help="lowest bin edge (default: smallest distance)")
    p.add_argument("--rho-max", type=float, help="highest bin edge (default: just above largest)")
    seed_arg(p, False)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("fit", parents=[shared], help="power-law tail fits of distribution CSVs")
    p.add_argument("--dist", nargs="+", required=True, help="distribution_<lambda>.csv files")
    p.add_argument("--tail-start", type=_parse_tail_start, default=None, help="rho to start the fit, or 'auto'")
    seed_arg(p, False)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("alphas", parents=[shared], help="regress alpha on lambda")
    p.add_argument("--fits", required=True, help="fit_summary.csv")
    seed_arg(p, False)
    p.set_defaults(func=cmd_alphas)

    p = sub.add_parser("generate", parents=[shared], help="generate a synthetic graph file")
    p.add_argument("--kind", choices=["lattice", "lexical", "pa_mix"], required=True)
    p.add_argument("--side", type=int, default=32)
    p.add_argument("--alpha", type=float, default=2.0, help="clustering exponent")
    _add_lattice_args(p)
    p.add_argument("--no-coarse", action="store_true", help="lexical: site blocks only, no window terms")
    p.add_argument("--n", type=int, default=1000, help="node count (pa_mix)")
    p.add_argument("--gamma", type=float, default=0.0, help="lexical bias (pa_mix)")
    _add_pa_args(p)
    p.add_argument("--as-corpus", action="store_true", help="also write pages.tsv and links.tsv")
    seed_arg(p, True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("navigate", parents=[shared], help="run one greedy navigation")
    p.add_argument("--graph", required=True)
    p.add_argument("--source", type=int, required=True)
    p.add_argument("--target", type=int, required=True)
    _add_strategy_args(p)
    seed_arg(p, False)
    p.set_defaults(func=cmd_navigate)

    p = sub.add_parser("experiment", parents=[shared], help="navigation sweep to CSV")
    p.add_argument("--kind", choices=["lattice", "lexical", "pa_mix"], required=True)
    p.add_argument("--sides", type=_int_list, default=[32], help="lattice sides")
    p.add_argument("--alphas", type=_float_list, default=[2.0], help="clustering exponents")
    _add_lattice_args(p)
    p.add_argument("--sizes", type=_int_list, default=[1000], help="node counts (pa_mix)")
    p.add_argument("--gammas", type=_float_list, default=[0.0], help="lexical biases (pa_mix)")
    _add_pa_args(p)
    p.add_argument("--trials", type=int, default=100)
    _add_strategy_args(p)
    seed_arg(p, True)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("plot", parents=[shared], help="SVG and .dat plots from CSV outputs")
    p.add_argument("--dist", nargs="*", default=[], help="distribution CSVs")
    p.add_argument("--fits", help="fit_summary.csv (fit lines and alpha inset)")
    p.add_argument("--alphas", help="alpha_lambda.csv (regression line in the inset)")
    p.add_argument("--experiment", nargs="*", default=[], help="experiment CSVs")
    seed_arg(p, False)
    p.set_defaults(func=cmd_plot)
    return parser


def _configure_logging() -> None:
    name = os.environ.get("LEXNAV_LOG", "warn").lower()
    level = _LOG_LEVELS.get(name, logging.WARNING)
    logging.basicConfig(level=level, format="lexnav: %(levelname)s: %(message)s", stream=sys.stderr)
    if name not in _LOG_LEVELS:
        log.warning("unknown LEXNAV_LOG value %r; using warn", name)


def main(argv: Sequence[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv:
        parser.print_usage(sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    if args.out is None and args.command != "navigate":
        parser.print_usage(sys.stderr)
        print(f"lexnav {args.command}: error: --out is required", file=sys.stderr)
        return 2

    started = time.monotonic()
    try:
        out = Outputs(args.out) if args.out is not None else None
        inputs = args.func(args, out)
        if out is not None:
            _write_manifest(out, args, inputs, started)
    except LexnavError as exc:
        print(f"lexnav {args.command}: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        where = f"{exc.filename}: " if exc.filename else ""
        print(f"lexnav {args.command}: error: {where}{exc.strerror or exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
