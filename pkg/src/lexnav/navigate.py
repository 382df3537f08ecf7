"""Decentralized greedy navigation with two page-cost models.

``links_traversed`` counts hops along the path. ``pages_visited`` counts
pages fetched: under ``FREE_CUE`` only the pages moved to (plus the
source); under ``VISIT_TO_EVALUATE`` every neighbor whose score is needed
must also be fetched once, which is what makes degree-seeking crawlers
expensive.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from typing import Callable, Sequence, Union

import numpy as np

from .corpus import format_float
from .errors import FormatError, LexnavError
from .graphgen import (
    GraphKind,
    LatticeConfig,
    NavGraph,
    PaMixConfig,
    generate_kleinberg_lattice,
    generate_lexical_graph,
    generate_pa_mixture,
    torus_distance,
)
from .textkit import lexical_distance
from .topology import least_squares

EXPERIMENT_HEADER = [
    "N", "alpha", "strategy", "cost_model", "trials",
    "success_rate", "median_l", "median_lprime", "p90_l",
]


class Strategy(str, Enum):
    LEXICAL_GREEDY = "lexical"
    DEGREE_GREEDY = "degree"


class CostModel(str, Enum):
    FREE_CUE = "free"
    VISIT_TO_EVALUATE = "visit"


class Revisit(str, Enum):
    ALLOW = "allow"
    TABU = "tabu"


class ScalingModel(str, Enum):
    POLYLOG = "polylog"
    POWER = "power"


@dataclass(frozen=True)
class StrategyConfig:
    """Navigation settings.

    ``budget=None`` means ``ceil(50 * sqrt(N))`` pages, unless
    ``budget_per_node`` is set, giving ``ceil(budget_per_node * N)``. With
    ``follow_inlinks`` the crawler may also step backwards along links,
    as when in-links are known from a search engine.
    """

    strategy: Strategy = Strategy.LEXICAL_GREEDY
    cost_model: CostModel = CostModel.FREE_CUE
    budget: int | None = None
    revisit: Revisit = Revisit.TABU
    follow_inlinks: bool = False
    budget_per_node: float | None = None

    def __post_init__(self) -> None:
        if self.budget is not None and self.budget < 1:
            raise LexnavError("navigation budget must be >= 1")
        if self.budget_per_node is not None:
            if self.budget is not None:
                raise LexnavError("give either a fixed budget or a per-node budget, not both")
            if not self.budget_per_node > 0:
                raise LexnavError("per-node budget must be positive")

    def budget_for(self, n: int) -> int:
        if self.budget is not None:
            return self.budget
        if self.budget_per_node is not None:
            return max(1, math.ceil(self.budget_per_node * n))
        return math.ceil(50 * math.sqrt(n))


@dataclass(frozen=True)
class NavigationResult:
    source: int
    target: int
    success: bool
    links_traversed: int
    pages_visited: int
    path: tuple[int, ...]
    budget_used: int


@dataclass(frozen=True)
class ScalingFit:
    model: ScalingModel
    exponent: float
    intercept: float
    r_squared: float


@dataclass(frozen=True)
class ExperimentRow:
    N: int
    alpha: float
    strategy: Strategy
    cost_model: CostModel
    trials: int
    success_rate: float
    median_l: float
    median_lprime: float
    p90_l: float


def _scorer(graph: NavGraph, target: int, strategy: Strategy) -> Callable[[int], tuple]:
    """Sort key for candidate next hops; smaller is better, ties go to the lower id."""
    if strategy is Strategy.DEGREE_GREEDY:
        degree = graph.degree()
        return lambda v: (-int(degree[v]), v)
    if graph.kind is GraphKind.LATTICE:
        coords = graph.coords
        assert coords is not None
        goal = coords[target].tolist()
        side = graph.side
        cache: dict[int, tuple] = {}

        def lattice_key(v: int) -> tuple:
            key = cache.get(v)
            if key is None:
                key = cache[v] = (torus_distance(coords[v].tolist(), goal, side), v)
            return key

        return lattice_key
    if graph.vectors is None:
        raise LexnavError(f"{graph.kind.value} graph has no term vectors to navigate by")
    vectors = graph.vectors
    goal_vec = vectors[target]
    cache = {}

    # math.inf sorts after every finite distance
    def lexical_key(v: int) -> tuple:
        key = cache.get(v)
        if key is None:
            key = cache[v] = (lexical_distance(vectors[v], goal_vec), v)
        return key

    return lexical_key


def navigate(
    graph: NavGraph,
    source: int,
    target: int,
    config: StrategyConfig = StrategyConfig(),
    seed: int | None = None,
) -> NavigationResult:
    """Greedy walk from ``source`` towards ``target``.

    Every step moves to the best-scoring neighbor, even one that is worse
    than the current node; the walk ends at the target or when the next
    step would exceed the page budget. A target seen among the neighbors
    is always taken. The walk is deterministic, so ``seed`` is accepted
    only for interface symmetry with randomized strategies.
    """
    n = graph.N
    for node in (source, target):
        if not 0 <= node < n:
            raise LexnavError(f"node id {node} out of range for graph with {n} nodes")
    if source == target:
        raise LexnavError("source and target must differ")

    budget = config.budget_for(n)
    key = _scorer(graph, target, config.strategy)
    visit_cost = config.cost_model is CostModel.VISIT_TO_EVALUATE
    tabu = config.revisit is Revisit.TABU

    path = [source]
    on_path = {source}
    fetched = {source}
    pages = 1
    current = source
    while current != target:
        nbrs = set(graph.out_neighbors(current))
        if config.follow_inlinks:
            nbrs.update(graph.in_neighbors(current))
        if not nbrs:
            break
        if target in nbrs:
            charge, nxt = 1, target
        else:
            candidates = nbrs
            if tabu:
                candidates = {v for v in nbrs if v not in on_path} or nbrs
            nxt = min(candidates, key=key)
            charge = 1
            if visit_cost:
                charge += sum(1 for v in nbrs if v not in fetched)
        if pages + charge > budget:
            break
        pages += charge
        if visit_cost:
            fetched.update(nbrs)
        fetched.add(nxt)
        path.append(nxt)
        on_path.add(nxt)
        current = nxt

    return NavigationResult(
        source=source,
        target=target,
        success=current == target,
        links_traversed=len(path) - 1,
        pages_visited=pages,
        path=tuple(path),
        budget_used=pages,
    )


# --- scaling experiments ----------------------------------------------------

GraphSpec = Union[LatticeConfig, PaMixConfig]


@dataclass(frozen=True)
class SweepCell:
    """One graph to build and navigate. ``kind`` selects the generator."""

    kind: GraphKind
    config: GraphSpec
    vocab_block: int = 2


def build_graph(cell: SweepCell) -> NavGraph:
    if cell.kind is GraphKind.PA_MIX:
        if not isinstance(cell.config, PaMixConfig):
            raise LexnavError("PA_MIX cells need a PaMixConfig")
        return generate_pa_mixture(cell.config)
    if not isinstance(cell.config, LatticeConfig):
        raise LexnavError(f"{cell.kind.value} cells need a LatticeConfig")
    if cell.kind is GraphKind.LEXICAL:
        return generate_lexical_graph(cell.config, cell.vocab_block)
    return generate_kleinberg_lattice(cell.config)


def cell_seed(seed: int, cell_index: int) -> int:
    return int(np.random.SeedSequence([seed, cell_index]).generate_state(1)[0])


def _run_cell(args: tuple[int, SweepCell, StrategyConfig, int, int]) -> ExperimentRow:
    index, cell, config, trials, seed = args
    cell = replace(cell, config=replace(cell.config, seed=cell_seed(seed, index)))
    graph = build_graph(cell)
    n = graph.N
    pages, links, wins = [], [], 0
    for trial in range(trials):
        # one stream per (master seed, cell, trial) keeps results schedule-independent
        rng = np.random.default_rng([seed, index, trial])
        source = int(rng.integers(n))
        target = int(rng.integers(n - 1))
        if target >= source:
            target += 1
        res = navigate(graph, source, target, config)
        pages.append(res.pages_visited)
        links.append(res.links_traversed)
        wins += res.success
    alpha = cell.config.gamma if isinstance(cell.config, PaMixConfig) else cell.config.alpha
    return ExperimentRow(
        N=n,
        alpha=float(alpha),
        strategy=config.strategy,
        cost_model=config.cost_model,
        trials=trials,
        success_rate=wins / trials,
        median_l=float(np.median(pages)),
        median_lprime=float(np.median(links)),
        p90_l=float(np.percentile(pages, 90)),
    )


def scaling_experiment(
    cells: Sequence[SweepCell],
    config: StrategyConfig,
    trials: int,
    seed: int,
    workers: int = 1,
) -> list[ExperimentRow]:
    """Navigate ``trials`` random source/target pairs on each cell's graph.

    Each cell's generator seed is derived from ``(seed, cell index)``,
    overriding the seed in its config.
    """
    if not cells:
        raise LexnavError("scaling experiment needs at least one sweep cell")
    if trials < 1:
        raise LexnavError("trials per cell must be >= 1")
    jobs = [(i, cell, config, trials, seed) for i, cell in enumerate(cells)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_cell, jobs))
    return [_run_cell(job) for job in jobs]


def fit_scaling(points: Sequence[tuple[float, float]], model: ScalingModel) -> ScalingFit:
    """Fit ``value ~ N**beta`` (POWER) or ``value ~ (ln N)**k`` (POLYLOG)."""
    if len(points) < 4:
        raise LexnavError(f"scaling fit needs >= 4 points, got {len(points)}")
    ns = np.array([p[0] for p in points], dtype=float)
    vals = np.array([p[1] for p in points], dtype=float)
    if len(set(ns.tolist())) != len(ns):
        raise LexnavError("scaling fit needs distinct N values")
    if np.any(ns <= 1) or np.any(vals <= 0):
        raise LexnavError("scaling fit needs N > 1 and positive values")
    x = np.log(ns) if model is ScalingModel.POWER else np.log(np.log(ns))
    slope, intercept, r2 = least_squares(x, np.log(vals))
    return ScalingFit(model, slope, intercept, r2)


def write_experiment_csv(fh, rows: Sequence[ExperimentRow]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(EXPERIMENT_HEADER)
    for r in rows:
        writer.writerow([
            r.N, format_float(r.alpha), r.strategy.name, r.cost_model.name, r.trials,
            format_float(r.success_rate), format_float(r.median_l),
            format_float(r.median_lprime), format_float(r.p90_l),
        ])


def read_experiment_csv(path) -> list[ExperimentRow]:
    rows = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        if next(reader, None) != EXPERIMENT_HEADER:
            raise FormatError(f"expected header {','.join(EXPERIMENT_HEADER)}", str(path), 1)
        for lineno, row in enumerate(reader, 2):
            if not row:
                continue
            try:
                rows.append(ExperimentRow(
                    int(row[0]), float(row[1]), Strategy[row[2]], CostModel[row[3]], int(row[4]),
                    float(row[5]), float(row[6]), float(row[7]), float(row[8]),
                ))
            except (ValueError, KeyError, IndexError):
                raise FormatError(f"malformed experiment row {row!r}", str(path), lineno) from None
    return rows
