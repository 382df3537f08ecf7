"""Synthetic navigable graphs.

* Kleinberg torus lattices: ``2D`` unit-step links per node plus ``q``
  long-range links drawn with probability proportional to ``r**-alpha``.
* Lexical lattices: the same linkage, with each node carrying a term
  vector whose lexical distance to other nodes is a strictly increasing
  function of lattice distance. Navigation on these never needs the
  coordinates.
* Preferential-attachment mixtures: growth by ``degree * (1 + r)**-gamma``
  with ``r`` the lexical distance to the new node.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Sequence

import numpy as np

from .corpus import Page, WebCorpus, format_float, write_links_file, write_pages_file
from .errors import FormatError, LexnavError
from .textkit import TermVector

PA_EPSILON = 1e-9


class GraphKind(str, Enum):
    LATTICE = "LATTICE"
    LEXICAL = "LEXICAL"
    PA_MIX = "PA_MIX"


@dataclass(frozen=True)
class LatticeConfig:
    D: int = 2
    side: int = 32
    alpha: float = 2.0
    q: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if self.D < 1:
            raise LexnavError("lattice dimensionality must be >= 1")
        if self.side < 3:
            raise LexnavError(
                f"lattice side must be >= 3 (got {self.side}); "
                "smaller tori make local and long-range links coincide"
            )
        if self.alpha < 0:
            raise LexnavError("clustering exponent alpha must be >= 0")
        if self.q < 0:
            raise LexnavError("long-range link count q must be >= 0")

    @property
    def N(self) -> int:
        return self.side**self.D


@dataclass(frozen=True)
class PaMixConfig:
    N: int = 1000
    m: int = 2
    gamma: float = 0.0
    vocab_size: int = 1000
    seed: int = 0
    terms_per_node: int = 10

    def __post_init__(self) -> None:
        if self.m < 1:
            raise LexnavError("links per new node m must be >= 1")
        if self.N < self.m + 1:
            raise LexnavError(f"N must be >= m + 1 = {self.m + 1}")
        if self.gamma < 0:
            raise LexnavError("lexical bias gamma must be >= 0")
        if not 1 <= self.terms_per_node <= self.vocab_size:
            raise LexnavError("terms_per_node must lie in [1, vocab_size]")


@dataclass(eq=False)
class NavGraph:
    """Directed graph with per-node positions.

    ``coords`` holds integer lattice coordinates (shape ``(N, D)``) for
    lattice and lexical graphs; ``vectors`` holds term vectors for lexical
    and preferential-attachment graphs. ``adjacency[u]`` may repeat a node
    when two long-range draws coincide, so out-degrees stay exact.
    """

    kind: GraphKind
    adjacency: list[tuple[int, ...]]
    coords: np.ndarray | None = None
    vectors: list[TermVector] | None = None
    D: int = 0
    side: int = 0
    alpha: float = 0.0
    q: int = 0
    seed: int = 0
    _in_adj: list[tuple[int, ...]] | None = field(default=None, init=False, repr=False)
    _degree: np.ndarray | None = field(default=None, init=False, repr=False)

    @property
    def N(self) -> int:
        return len(self.adjacency)

    def out_neighbors(self, u: int) -> tuple[int, ...]:
        return self.adjacency[u]

    def in_neighbors(self, u: int) -> tuple[int, ...]:
        if self._in_adj is None:
            incoming: list[list[int]] = [[] for _ in range(self.N)]
            for v, outs in enumerate(self.adjacency):
                for w in outs:
                    incoming[w].append(v)
            self._in_adj = [tuple(x) for x in incoming]
        return self._in_adj[u]

    def degree(self) -> np.ndarray:
        """Out-degree plus in-degree, counting repeated links."""
        if self._degree is None:
            out = np.array([len(a) for a in self.adjacency], dtype=np.int64)
            flat = np.fromiter((w for a in self.adjacency for w in a), dtype=np.int64)
            self._degree = out + np.bincount(flat, minlength=self.N)
        return self._degree

    def edge_count(self) -> int:
        return sum(len(a) for a in self.adjacency)

    def same_as(self, other: "NavGraph") -> bool:
        if (self.kind, self.D, self.side, self.alpha, self.q, self.seed) != (
            other.kind, other.D, other.side, other.alpha, other.q, other.seed
        ):
            return False
        if self.adjacency != other.adjacency:
            return False
        if (self.coords is None) != (other.coords is None):
            return False
        if self.coords is not None and not np.array_equal(self.coords, other.coords):
            return False
        if (self.vectors is None) != (other.vectors is None):
            return False
        return self.vectors is None or all(a == b for a, b in zip(self.vectors, other.vectors))


# --- lattices ---------------------------------------------------------------


def lattice_coords(D: int, side: int) -> np.ndarray:
    """Coordinates of node ids 0..side**D-1; dimension 0 varies fastest."""
    ids = np.arange(side**D, dtype=np.int64)
    return np.stack([(ids // side**k) % side for k in range(D)], axis=1)


def coords_to_ids(coords: np.ndarray, side: int) -> np.ndarray:
    D = coords.shape[1]
    weights = side ** np.arange(D, dtype=np.int64)
    return coords @ weights


def torus_distance(a: Sequence[int], b: Sequence[int], side: int) -> int:
    total = 0
    for x, y in zip(a, b):
        d = abs(x - y)
        total += min(d, side - d)
    return total


class LongRangeSampler:
    """Draws long-range offsets with probability proportional to ``r**-alpha``.

    The torus is vertex-transitive, so one offset table serves every node.
    Offsets are grouped into distance classes; a draw picks a class by
    inverse CDF over ``class_size * r**-alpha`` and then a uniform member.
    """

    def __init__(self, D: int, side: int, alpha: float):
        offsets = lattice_coords(D, side)[1:]
        dist = np.minimum(offsets, side - offsets).sum(axis=1)
        order = np.argsort(dist, kind="stable")
        self.offsets = offsets[order]
        self.distances = dist[order]
        classes, starts, sizes = np.unique(self.distances, return_index=True, return_counts=True)
        self.classes = classes
        self.class_starts = starts
        self.class_sizes = sizes
        weights = sizes * np.power(classes.astype(float), -alpha)
        self.class_probs = weights / weights.sum()
        self._cdf = np.cumsum(self.class_probs)
        self._cdf[-1] = 1.0

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        """Return ``size`` offset rows (shape ``(size, D)``)."""
        cls = np.searchsorted(self._cdf, rng.random(size), side="right")
        cls = np.minimum(cls, len(self.classes) - 1)
        within = rng.integers(0, self.class_sizes[cls])
        return self.offsets[self.class_starts[cls] + within]


def _lattice_adjacency(config: LatticeConfig, coords: np.ndarray) -> list[tuple[int, ...]]:
    D, side, N = config.D, config.side, config.N
    cols = []
    for k in range(D):
        for step in (1, -1):
            shifted = coords.copy()
            shifted[:, k] = (shifted[:, k] + step) % side
            cols.append(coords_to_ids(shifted, side))
    if config.q > 0:
        rng = np.random.default_rng(config.seed)
        sampler = LongRangeSampler(D, side, config.alpha)
        offs = sampler.sample(rng, N * config.q).reshape(N, config.q, D)
        for j in range(config.q):
            cols.append(coords_to_ids((coords + offs[:, j, :]) % side, side))
    table = np.stack(cols, axis=1)
    return [tuple(row) for row in table.tolist()]


def generate_kleinberg_lattice(config: LatticeConfig) -> NavGraph:
    coords = lattice_coords(config.D, config.side)
    return NavGraph(
        GraphKind.LATTICE,
        _lattice_adjacency(config, coords),
        coords=coords,
        D=config.D,
        side=config.side,
        alpha=config.alpha,
        q=config.q,
        seed=config.seed,
    )


def lexical_site_vectors(
    D: int, side: int, vocab_block: int = 2, coarse: bool = True
) -> list[TermVector]:
    """Term vectors whose lexical distance tracks torus distance.

    Every site owns ``vocab_block`` terms. A node weights its own block 1
    and its ``2D`` lattice neighbors' blocks 1/2, which alone gives a
    correlation horizon of two steps. With ``coarse`` each node also
    carries, per dimension, the unit-weight terms of a window of
    ``side // 2`` consecutive positions starting at its own coordinate;
    the window overlap shrinks by exactly one term per step of distance
    along that dimension, so similarity decreases strictly with torus
    Manhattan distance over the whole torus.
    """
    if vocab_block < 2:
        raise LexnavError("vocab_block must be >= 2")
    N = side**D
    coords = lattice_coords(D, side)
    ids = np.arange(N, dtype=np.int64)
    nbr_ids = []
    for k in range(D):
        for step in (1, -1):
            shifted = coords.copy()
            shifted[:, k] = (shifted[:, k] + step) % side
            nbr_ids.append(coords_to_ids(shifted, side))
    nbrs = np.stack(nbr_ids, axis=1).tolist()
    width = side // 2
    coarse_base = N * vocab_block
    block = range(vocab_block)
    vectors = []
    for u in ids.tolist():
        w: dict[int, float] = {}
        for site in nbrs[u]:
            for j in block:
                w[site * vocab_block + j] = 0.5
        for j in block:
            w[u * vocab_block + j] = 1.0
        if coarse:
            c = coords[u]
            for k in range(D):
                base = coarse_base + k * side
                for off in range(width):
                    w[base + (int(c[k]) + off) % side] = 1.0
        vectors.append(TermVector.from_weights(w))
    return vectors


def generate_lexical_graph(
    config: LatticeConfig, vocab_block: int = 2, coarse: bool = True
) -> NavGraph:
    coords = lattice_coords(config.D, config.side)
    return NavGraph(
        GraphKind.LEXICAL,
        _lattice_adjacency(config, coords),
        coords=coords,
        vectors=lexical_site_vectors(config.D, config.side, vocab_block, coarse),
        D=config.D,
        side=config.side,
        alpha=config.alpha,
        q=config.q,
        seed=config.seed,
    )


# --- preferential attachment ------------------------------------------------


def generate_pa_mixture(config: PaMixConfig) -> NavGraph:
    """Grow a graph by degree- and content-biased attachment.

    Nodes ``0..m`` form a complete directed clique. Each later node draws
    ``terms_per_node`` distinct unit-weight terms and links to ``m`` distinct
    earlier nodes, chosen one at a time with probability proportional to
    ``degree * (1 + r)**-gamma``. Pages with no shared terms (infinite
    ``r``) get weight ``degree * PA_EPSILON`` unless ``gamma == 0``.
    """
    N, m, k = config.N, config.m, config.terms_per_node
    rng = np.random.default_rng(config.seed)
    terms = [np.sort(rng.choice(config.vocab_size, size=k, replace=False)) for _ in range(N)]
    # unit weights, so every vector has norm sqrt(k) and s = shared / k
    postings: list[list[int]] = [[] for _ in range(config.vocab_size)]

    adjacency: list[tuple[int, ...]] = []
    degree = np.zeros(N, dtype=np.float64)
    for u in range(m + 1):
        adjacency.append(tuple(v for v in range(m + 1) if v != u))
        degree[u] = 2 * m
        for t in terms[u]:
            postings[t].append(u)

    for u in range(m + 1, N):
        shared = np.zeros(u, dtype=np.float64)
        for t in terms[u]:
            if postings[t]:
                np.add.at(shared, postings[t], 1.0)
        if config.gamma == 0:
            weights = degree[:u].copy()
        else:
            weights = degree[:u] * PA_EPSILON
            hit = shared > 0
            s = np.minimum(shared[hit] / k, 1.0)
            r = 1.0 / s - 1.0
            weights[hit] = degree[:u][hit] * np.power(1.0 + r, -config.gamma)
        chosen = []
        for _ in range(m):
            cdf = np.cumsum(weights)
            v = int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))
            v = min(v, u - 1)
            chosen.append(v)
            weights[v] = 0.0
        chosen.sort()
        adjacency.append(tuple(chosen))
        degree[u] += m
        degree[chosen] += 1
        for t in terms[u]:
            postings[t].append(u)

    vectors = [TermVector.from_weights({int(t): 1.0 for t in ts}) for ts in terms]
    return NavGraph(
        GraphKind.PA_MIX,
        adjacency,
        vectors=vectors,
        D=0,
        side=config.vocab_size,
        alpha=config.gamma,
        q=m,
        seed=config.seed,
    )


# --- corpus views -----------------------------------------------------------


def graph_to_corpus(graph: NavGraph) -> WebCorpus:
    """View a graph with term vectors as a Web corpus (node ``i`` is ``node/i``).

    Repeated long-range links collapse into one link.
    """
    if graph.vectors is None:
        raise LexnavError(f"{graph.kind.value} graph has no term vectors")
    pages = [
        Page(u, f"node/{u}", "", graph.vectors[u], frozenset(graph.adjacency[u]))
        for u in range(graph.N)
    ]
    return WebCorpus(pages)


def write_graph_corpus(graph: NavGraph, pages_path: str | Path, links_path: str | Path) -> None:
    """Write pages and links files whose RAW_TF vectors match the graph's.

    Term ``t`` is spelled ``t<t>`` and repeated ``round(2 * weight)`` times;
    cosine similarity is scale invariant, so lexical distances carry over.
    """
    if graph.vectors is None:
        raise LexnavError(f"{graph.kind.value} graph has no term vectors")
    records = []
    for u, vec in enumerate(graph.vectors):
        words = []
        for t, w in sorted(vec.entries.items()):
            reps = round(2 * w)
            if reps < 1 or abs(reps - 2 * w) > 1e-9:
                raise LexnavError(f"weight {w} of term {t} is not a multiple of 1/2")
            words.extend([f"t{t}"] * reps)
        records.append((f"node/{u}", "", " ".join(words)))
    write_pages_file(pages_path, records)
    write_links_file(
        links_path,
        ((f"node/{u}", f"node/{v}") for u, outs in enumerate(graph.adjacency) for v in dict.fromkeys(outs)),
    )


# --- graph file -------------------------------------------------------------
# Header: ``kind D side alpha q seed N``. PA_MIX graphs store the vocabulary
# size in ``side``, gamma in ``alpha`` and m in ``q``. Node lines carry
# coordinates (``x,y,...``), terms (``id:weight id:weight``) or, for
# LEXICAL graphs, both joined by ``;``.


def write_graph(fh, graph: NavGraph) -> None:
    fh.write(
        f"{graph.kind.value} {graph.D} {graph.side} {format_float(graph.alpha)} "
        f"{graph.q} {graph.seed} {graph.N}\n"
    )
    coords = graph.coords.tolist() if graph.coords is not None else None
    for u, outs in enumerate(graph.adjacency):
        parts = []
        if coords is not None:
            parts.append(",".join(str(x) for x in coords[u]))
        if graph.vectors is not None:
            ent = graph.vectors[u].entries
            parts.append(" ".join(f"{t}:{format_float(w)}" for t, w in sorted(ent.items())))
        fh.write(f"{u}\t{';'.join(parts)}\t{','.join(str(v) for v in outs)}\n")


def _parse_terms(text: str) -> TermVector:
    weights = {}
    for item in text.split():
        t, w = item.split(":")
        weights[int(t)] = float(w)
    return TermVector.from_weights(weights)


def read_graph(path: str | Path) -> NavGraph:
    path = str(path)
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 7:
            raise FormatError("graph header must be 'kind D side alpha q seed N'", path, 1)
        try:
            kind = GraphKind(header[0])
            D, side = int(header[1]), int(header[2])
            alpha = float(header[3])
            q, seed, N = int(header[4]), int(header[5]), int(header[6])
        except ValueError as exc:
            raise FormatError(f"bad graph header: {exc}", path, 1) from None
        adjacency: list[tuple[int, ...]] = []
        coords: list[list[int]] = []
        vectors: list[TermVector] = []
        for lineno, line in enumerate(fh, 2):
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                sid, pos, outs = line.split("\t")
                if int(sid) != len(adjacency):
                    raise ValueError(f"expected node id {len(adjacency)}, got {sid}")
                out = tuple(int(v) for v in outs.split(",")) if outs else ()
                if any(not 0 <= v < N or v == int(sid) for v in out):
                    raise ValueError("outlink out of range or self-loop")
                if kind is GraphKind.LATTICE:
                    coords.append([int(x) for x in pos.split(",")])
                elif kind is GraphKind.LEXICAL:
                    cpart, tpart = pos.split(";")
                    coords.append([int(x) for x in cpart.split(",")])
                    vectors.append(_parse_terms(tpart))
                else:
                    vectors.append(_parse_terms(pos))
            except ValueError as exc:
                raise FormatError(f"malformed node line: {exc}", path, lineno) from None
            adjacency.append(out)
    if len(adjacency) != N:
        raise FormatError(f"header declares {N} nodes, file has {len(adjacency)}", path)
    return NavGraph(
        kind,
        adjacency,
        coords=np.array(coords, dtype=np.int64) if coords else None,
        vectors=vectors or None,
        D=D,
        side=side,
        alpha=alpha,
        q=q,
        seed=seed,
    )
