"""Sparse term vectors, cosine similarity and lexical distance.

Lexical distance between two pages is ``1/s - 1`` where ``s`` is the
cosine similarity of their term vectors. It is 0 for identical content
and grows without bound as content diverges; ``s == 0`` maps to
:data:`INFINITE`.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

#: Lexical distance of pages with no terms in common.
INFINITE = math.inf

_TOKEN_RE = re.compile(r"[^\W_]+")


class Weighting(str, Enum):
    RAW_TF = "raw"
    TFIDF = "tfidf"


@dataclass(frozen=True, eq=False)
class TermVector:
    """Sparse non-negative term weights keyed by dense term id.

    Build through :meth:`from_weights`, which drops zero weights and
    caches the Euclidean norm.
    """

    entries: Mapping[int, float]
    norm: float

    @classmethod
    def from_weights(cls, weights: Mapping[int, float]) -> "TermVector":
        entries = {}
        for term, w in weights.items():
            w = float(w)
            if w < 0 or math.isnan(w):
                raise ValueError(f"term {term} has invalid weight {w!r}")
            if w > 0:
                entries[int(term)] = w
        norm = math.sqrt(math.fsum(w * w for w in entries.values()))
        return cls(entries, norm)

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TermVector):
            return NotImplemented
        return dict(self.entries) == dict(other.entries)

    def scaled(self, factor: float) -> "TermVector":
        return TermVector.from_weights({t: w * factor for t, w in self.entries.items()})


EMPTY_VECTOR = TermVector({}, 0.0)


@dataclass
class Lexicon:
    """Term-to-id mapping with document frequencies.

    Ids are dense and assigned in order of first appearance.
    """

    term_ids: dict[str, int] = field(default_factory=dict)
    doc_freq: list[int] = field(default_factory=list)
    total_docs: int = 0

    def __post_init__(self) -> None:
        if sorted(self.term_ids.values()) != list(range(len(self.term_ids))):
            raise ValueError("term ids must be dense 0..T-1")
        if len(self.doc_freq) != len(self.term_ids):
            raise ValueError("doc_freq length must match the number of terms")
        for df in self.doc_freq:
            if not 1 <= df <= self.total_docs:
                raise ValueError(f"document frequency {df} outside [1, {self.total_docs}]")

    @classmethod
    def build(cls, documents: Iterable[Sequence[str]]) -> "Lexicon":
        term_ids: dict[str, int] = {}
        doc_freq: list[int] = []
        total = 0
        for tokens in documents:
            total += 1
            for term in dict.fromkeys(tokens):
                tid = term_ids.get(term)
                if tid is None:
                    term_ids[term] = len(doc_freq)
                    doc_freq.append(1)
                else:
                    doc_freq[tid] += 1
        return cls(term_ids, doc_freq, total)

    def __len__(self) -> int:
        return len(self.term_ids)

    def __contains__(self, term: str) -> bool:
        return term in self.term_ids

    def idf(self, term: str) -> float:
        return math.log(self.total_docs / self.doc_freq[self.term_ids[term]])


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Read a stopword file: one lowercase term per line, UTF-8."""
    with open(path, encoding="utf-8") as fh:
        return frozenset(line.strip() for line in fh if line.strip())


def tokenize(text: str, stopwords: frozenset[str] | None = None) -> list[str]:
    """Lowercased maximal alphanumeric runs, in order of occurrence."""
    tokens = _TOKEN_RE.findall(text.lower())
    if stopwords:
        tokens = [t for t in tokens if t not in stopwords]
    return tokens


def term_vector(
    tokens: Sequence[str], lexicon: Lexicon, scheme: Weighting = Weighting.TFIDF
) -> TermVector:
    counts = Counter(t for t in tokens if t in lexicon)
    if scheme is Weighting.RAW_TF:
        weights = {lexicon.term_ids[t]: float(c) for t, c in counts.items()}
    elif scheme is Weighting.TFIDF:
        weights = {lexicon.term_ids[t]: c * lexicon.idf(t) for t, c in counts.items()}
    else:
        raise ValueError(f"unknown weighting scheme {scheme!r}")
    return TermVector.from_weights(weights)


def cosine_similarity(v1: TermVector, v2: TermVector) -> float:
    if v1.norm == 0 or v2.norm == 0:
        return 0.0
    a, b = v1.entries, v2.entries
    if a == b:
        # norm * norm need not equal the sum of squares exactly
        return 1.0
    if len(b) < len(a):
        a, b = b, a
    # fsum is correctly rounded, so the result does not depend on argument order
    dot = math.fsum(w * b[t] for t, w in a.items() if t in b)
    s = dot / (v1.norm * v2.norm)
    return min(1.0, max(0.0, s))


def distance_from_similarity(s: float) -> float:
    if s <= 0:
        return INFINITE
    return 1.0 / s - 1.0


def lexical_distance(v1: TermVector, v2: TermVector) -> float:
    """``1/s - 1`` for cosine similarity ``s``; :data:`INFINITE` when ``s == 0``."""
    return distance_from_similarity(cosine_similarity(v1, v2))
