"""Web corpus model: pages, links, URL neighborhoods and pair sampling."""

from __future__ import annotations

import csv
import logging
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import FormatError, LexnavError
from .textkit import Lexicon, TermVector, Weighting, lexical_distance, term_vector, tokenize

log = logging.getLogger(__name__)

PAIRS_HEADER = ["id1", "id2", "rho", "overlap"]

_ESCAPE_RE = re.compile(r"\\(.?)", re.DOTALL)
_ESCAPES = {"t": "\t", "n": "\n", "\\": "\\"}


@dataclass(frozen=True)
class Page:
    id: int
    url: str
    title: str
    vector: TermVector
    outlinks: frozenset[int]


@dataclass(frozen=True)
class NeighborhoodSet:
    page: int
    members: frozenset[int]


@dataclass(frozen=True)
class PairRecord:
    id1: int
    id2: int
    rho: float
    overlap: float


@dataclass
class WebCorpus:
    """Immutable-by-convention collection of pages with derived in-links.

    ``pages[i].id == i`` always holds. Construct with :meth:`from_records`
    or :func:`load_corpus` rather than directly.
    """

    pages: list[Page]
    lexicon: Lexicon | None = None
    dropped_links: int = 0
    inlinks: list[frozenset[int]] = field(init=False)
    _neighborhoods: list[frozenset[int]] = field(init=False, repr=False)
    _url_index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        n = len(self.pages)
        incoming: list[set[int]] = [set() for _ in range(n)]
        self._url_index = {}
        for i, page in enumerate(self.pages):
            if page.id != i:
                raise LexnavError(f"page at position {i} has id {page.id}")
            if page.url in self._url_index:
                raise LexnavError(f"duplicate url {page.url!r}")
            self._url_index[page.url] = i
            for j in page.outlinks:
                if j == i or not 0 <= j < n:
                    raise LexnavError(f"page {i} has invalid outlink {j}")
                incoming[j].add(i)
        self.inlinks = [frozenset(s) for s in incoming]
        self._neighborhoods = [
            page.outlinks | self.inlinks[i] | {i} for i, page in enumerate(self.pages)
        ]

    @classmethod
    def from_records(
        cls,
        records: Sequence[tuple[str, str, str]],
        links: Iterable[tuple[str, str]],
        scheme: Weighting = Weighting.TFIDF,
        stopwords: frozenset[str] | None = None,
    ) -> "WebCorpus":
        """Build a corpus from ``(url, title, text)`` records and url links.

        Links whose endpoints are not in ``records`` are dropped and counted;
        self-links are dropped silently.
        """
        index: dict[str, int] = {}
        for url, _, _ in records:
            if url in index:
                raise LexnavError(f"duplicate url {url!r}")
            index[url] = len(index)

        outlinks: list[set[int]] = [set() for _ in records]
        dropped = 0
        for src, dst in links:
            i, j = index.get(src), index.get(dst)
            if i is None or j is None:
                dropped += 1
                continue
            if i != j:
                outlinks[i].add(j)

        docs = [tokenize(f"{title} {text}", stopwords) for _, title, text in records]
        lexicon = Lexicon.build(docs)
        pages = [
            Page(i, url, title, term_vector(docs[i], lexicon, scheme), frozenset(outlinks[i]))
            for i, (url, title, _) in enumerate(records)
        ]
        return cls(pages, lexicon=lexicon, dropped_links=dropped)

    def __len__(self) -> int:
        return len(self.pages)

    @property
    def link_count(self) -> int:
        return sum(len(p.outlinks) for p in self.pages)

    def page_id(self, url: str) -> int:
        return self._url_index[url]

    def _check(self, p: int) -> None:
        if not 0 <= p < len(self.pages):
            raise LexnavError(f"invalid page id {p} (corpus has {len(self.pages)} pages)")

    def neighborhood(self, p: int) -> frozenset[int]:
        self._check(p)
        return self._neighborhoods[p]


def neighborhood_set(corpus: WebCorpus, p: int) -> NeighborhoodSet:
    """In-links, out-links and the page itself."""
    return NeighborhoodSet(p, corpus.neighborhood(p))


def link_overlap(corpus: WebCorpus, p1: int, p2: int) -> float:
    """Jaccard overlap of the two pages' neighborhood sets."""
    u1, u2 = corpus.neighborhood(p1), corpus.neighborhood(p2)
    if p1 == p2:
        return 1.0
    inter = len(u1 & u2)
    return inter / (len(u1) + len(u2) - inter)


def pair_record(corpus: WebCorpus, i: int, j: int) -> PairRecord:
    if j < i:
        i, j = j, i
    rho = lexical_distance(corpus.pages[i].vector, corpus.pages[j].vector)
    return PairRecord(i, j, rho, link_overlap(corpus, i, j))


def _pair_from_index(k: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    # row i of the upper triangle starts at i*n - i*(i+1)/2
    starts = np.arange(n, dtype=np.int64)
    starts = starts * n - starts * (starts + 1) // 2
    i = np.searchsorted(starts, k, side="right") - 1
    j = k - starts[i] + i + 1
    return i, j


def sample_pairs(corpus: WebCorpus, count: int, seed: int) -> list[PairRecord]:
    """Draw ``count`` distinct unordered page pairs uniformly without replacement.

    If ``count`` reaches the number of pairs, every pair is returned once
    in lexicographic order.
    """
    n = len(corpus)
    if n < 2:
        raise LexnavError(f"need at least 2 pages to sample pairs, corpus has {n}")
    if count < 0:
        raise LexnavError("pair count must be non-negative")
    total = n * (n - 1) // 2
    if count >= total:
        ks = np.arange(total, dtype=np.int64)
    else:
        rng = np.random.default_rng(seed)
        ks = rng.choice(total, size=count, replace=False).astype(np.int64)
    ii, jj = _pair_from_index(ks, n)
    return [pair_record(corpus, int(i), int(j)) for i, j in zip(ii, jj)]


def all_pairs(corpus: WebCorpus) -> list[PairRecord]:
    n = len(corpus)
    return [pair_record(corpus, i, j) for i in range(n) for j in range(i + 1, n)]


# --- file formats -----------------------------------------------------------


def unescape_field(raw: str) -> str:
    def sub(m: re.Match) -> str:
        ch = m.group(1)
        if ch not in _ESCAPES:
            raise ValueError(f"bad escape sequence {m.group(0)!r}")
        return _ESCAPES[ch]

    return _ESCAPE_RE.sub(sub, raw)


def escape_field(text: str) -> str:
    return text.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def _data_lines(path: str | Path) -> Iterable[tuple[int, str]]:
    with open(path, encoding="utf-8", newline="\n") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n").rstrip("\r")
            if line.strip():
                yield lineno, line


def read_pages_file(path: str | Path) -> list[tuple[str, str, str]]:
    records = []
    seen: dict[str, int] = {}
    for lineno, line in _data_lines(path):
        fields = line.split("\t")
        if len(fields) != 3:
            raise FormatError(f"expected 3 tab-separated fields, got {len(fields)}", str(path), lineno)
        try:
            url, title, text = (unescape_field(f) for f in fields)
        except ValueError as exc:
            raise FormatError(str(exc), str(path), lineno) from None
        if not url:
            raise FormatError("empty url", str(path), lineno)
        if url in seen:
            raise FormatError(f"duplicate url {url!r} (first on line {seen[url]})", str(path), lineno)
        seen[url] = lineno
        records.append((url, title, text))
    return records


def read_links_file(path: str | Path) -> list[tuple[str, str]]:
    links = []
    for lineno, line in _data_lines(path):
        fields = line.split("\t")
        if len(fields) != 2 or not all(fields):
            raise FormatError("expected src_url<TAB>dst_url", str(path), lineno)
        links.append((fields[0], fields[1]))
    return links


def write_pages_file(path: str | Path, records: Iterable[tuple[str, str, str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            fh.write("\t".join(escape_field(f) for f in rec) + "\n")


def write_links_file(path: str | Path, links: Iterable[tuple[str, str]]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for src, dst in links:
            fh.write(f"{src}\t{dst}\n")


def load_corpus(
    pages_path: str | Path,
    links_path: str | Path,
    scheme: Weighting = Weighting.TFIDF,
    stopwords: frozenset[str] | None = None,
) -> WebCorpus:
    records = read_pages_file(pages_path)
    links = read_links_file(links_path)
    corpus = WebCorpus.from_records(records, links, scheme=scheme, stopwords=stopwords)
    if corpus.dropped_links:
        log.warning("dropped %d dangling links from %s", corpus.dropped_links, links_path)
    return corpus


def format_float(x: float) -> str:
    """Shortest round-tripping text for ``x``; infinity is ``inf``."""
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(float(x))


def write_pairs_csv(fh, pairs: Iterable[PairRecord]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(PAIRS_HEADER)
    for p in pairs:
        writer.writerow([p.id1, p.id2, format_float(p.rho), format_float(p.overlap)])


def read_pairs_csv(path: str | Path) -> list[PairRecord]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != PAIRS_HEADER:
            raise FormatError(f"expected header {','.join(PAIRS_HEADER)}", str(path), 1)
        out = []
        for lineno, row in enumerate(reader, 2):
            if not row:
                continue
            try:
                id1, id2, rho, overlap = row
                rec = PairRecord(int(id1), int(id2), float(rho), float(overlap))
            except ValueError:
                raise FormatError(f"malformed pair row {row!r}", str(path), lineno) from None
            if not (rec.rho >= 0 and 0 <= rec.overlap <= 1):
                raise FormatError("rho must be >= 0 and overlap in [0, 1]", str(path), lineno)
            out.append(rec)
    return out
