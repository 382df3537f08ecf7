from pathlib import Path

import numpy as np
import pytest

from lexnav.corpus import PairRecord, write_links_file, write_pages_file


def synth_power_law_pairs(alpha: float, n: int, seed: int, lo: float = 1.0, hi: float = 10.0):
    """Pairs with rho log-uniform on [lo, hi] linked with probability rho**-alpha."""
    rng = np.random.default_rng(seed)
    rho = np.exp(rng.uniform(np.log(lo), np.log(hi), n))
    linked = rng.random(n) < rho**-alpha
    return [
        PairRecord(2 * i, 2 * i + 1, float(r), 1.0 if hit else 0.0)
        for i, (r, hit) in enumerate(zip(rho, linked))
    ]


SMALL_PAGES = [
    ("http://a", "Web crawler", "crawler follows links across the web"),
    ("http://b", "Search engines", "search engines index the web"),
    ("http://c", "Cooking", "pasta recipes with tomato and basil"),
    ("http://d", "Web search", "web crawler and search ranking"),
    ("http://e", "Gardening", "tomato plants need sun"),
]
SMALL_LINKS = [
    ("http://a", "http://b"),
    ("http://b", "http://d"),
    ("http://d", "http://a"),
    ("http://c", "http://e"),
    ("http://a", "http://d"),
]


@pytest.fixture
def small_corpus_files(tmp_path: Path) -> tuple[Path, Path]:
    pages, links = tmp_path / "pages.tsv", tmp_path / "links.tsv"
    write_pages_file(pages, SMALL_PAGES)
    write_links_file(links, SMALL_LINKS)
    return pages, links
