"""Linkage probability as a function of lexical distance, and power-law tail fits.

Pairs are binned on logarithmic lexical-distance bins; within each bin the
linkage probability is the fraction of pairs whose neighborhood overlap
strictly exceeds the threshold ``lam``. Tails are fit by ordinary least
squares on log-log axes.
"""

from __future__ import annotations

import csv
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import PairRecord, format_float
from .errors import FormatError, LexnavError

DIST_HEADER = ["rho_center", "total", "linked", "probability"]
FIT_HEADER = ["lambda", "alpha", "intercept", "r_squared", "tail_start", "points_used"]

AUTO_MIN_POINTS = 5


@dataclass(frozen=True)
class BinningConfig:
    bins: int = 50
    rho_min: float = 1e-2
    rho_max: float = 1e3

    def __post_init__(self) -> None:
        if self.bins < 1:
            raise LexnavError("bin count must be >= 1")
        if not (0 < self.rho_min < self.rho_max < math.inf):
            raise LexnavError(
                f"need 0 < rho_min < rho_max < inf, got [{self.rho_min}, {self.rho_max}]"
            )

    def edges(self) -> np.ndarray:
        edges = np.geomspace(self.rho_min, self.rho_max, self.bins + 1)
        if not np.all(np.diff(edges) > 0):
            raise LexnavError("bin edges are not strictly increasing; range too narrow")
        return edges

    @classmethod
    def covering(cls, rhos: Iterable[float], bins: int = 50) -> "BinningConfig":
        """Smallest log range containing every positive finite ``rho``."""
        finite = [r for r in rhos if 0 < r < math.inf]
        if not finite:
            raise LexnavError("no positive finite lexical distances to bin")
        lo, hi = min(finite), max(finite)
        hi = math.nextafter(hi, math.inf)
        if hi / lo < 1 + 1e-9:
            lo, hi = lo / 1.01, hi * 1.01
        return cls(bins, lo, hi)


@dataclass(frozen=True)
class BinnedDistribution:
    lam: float
    edges: np.ndarray
    total: np.ndarray
    linked: np.ndarray
    overflow_total: int = 0
    overflow_linked: int = 0

    @property
    def centers(self) -> np.ndarray:
        return np.sqrt(self.edges[:-1] * self.edges[1:])

    @property
    def probability(self) -> np.ndarray:
        """Per-bin linked/total; ``nan`` marks EMPTY bins."""
        with np.errstate(invalid="ignore", divide="ignore"):
            p = self.linked / self.total
        return np.where(self.total > 0, p, np.nan)

    @property
    def empty(self) -> np.ndarray:
        return self.total == 0

    @property
    def count(self) -> int:
        return int(self.total.sum()) + self.overflow_total


@dataclass(frozen=True)
class PowerLawFit:
    alpha: float
    intercept: float
    r_squared: float
    tail_start: float
    points_used: int
    lam: float = math.nan

    def predict(self, rho: np.ndarray | float) -> np.ndarray | float:
        return np.exp(self.intercept) * np.power(rho, -self.alpha)


@dataclass(frozen=True)
class AlphaLambdaFit:
    slope: float
    intercept: float
    pearson: float
    points: int


def estimate_linkage_probability(
    pairs: Sequence[PairRecord], lam: float, config: BinningConfig
) -> BinnedDistribution:
    if len(pairs) == 0:
        raise LexnavError("cannot estimate linkage probability from zero pairs")
    if not 0 <= lam < 1:
        raise LexnavError(f"linkage threshold must lie in [0, 1), got {lam}")
    edges = config.edges()
    rho = np.fromiter((p.rho for p in pairs), dtype=float, count=len(pairs))
    linked = np.fromiter((p.overlap > lam for p in pairs), dtype=bool, count=len(pairs))
    idx = np.searchsorted(edges, rho, side="right") - 1
    inside = (idx >= 0) & (idx < config.bins)
    total = np.bincount(idx[inside], minlength=config.bins)
    hits = np.bincount(idx[inside & linked], minlength=config.bins)
    return BinnedDistribution(
        lam=lam,
        edges=edges,
        total=total.astype(np.int64),
        linked=hits.astype(np.int64),
        overflow_total=int((~inside).sum()),
        overflow_linked=int((~inside & linked).sum()),
    )


def least_squares(x: np.ndarray, y: np.ndarray) -> tuple[float, float, float]:
    """OLS line through ``(x, y)``; returns ``(slope, intercept, r_squared)``.

    ``r_squared`` is 1 for a perfect fit, including a perfectly flat one.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xm, ym = x.mean(), y.mean()
    dx, dy = x - xm, y - ym
    sxx = float(dx @ dx)
    if sxx == 0:
        raise LexnavError("least squares needs at least two distinct x values")
    slope = float(dx @ dy) / sxx
    intercept = ym - slope * xm
    resid = y - (intercept + slope * x)
    ss_res = float(resid @ resid)
    ss_tot = float(dy @ dy)
    scale = max(1.0, float(np.abs(y).max()))
    if ss_tot <= (1e-12 * scale) ** 2 * len(y):
        r2 = 1.0 if ss_res <= (1e-9 * scale) ** 2 * len(y) else 0.0
    else:
        r2 = 1.0 - ss_res / ss_tot
    return slope, float(intercept), min(1.0, max(0.0, r2))


def fit_power_law_tail(
    dist: BinnedDistribution, tail_start: float | None = None
) -> PowerLawFit:
    """Fit ``probability ~ rho**-alpha`` to the tail of ``dist``.

    With ``tail_start=None`` the window start is chosen among the lower bin
    edges to maximize ``r_squared`` while keeping at least five points (or
    all points when fewer than five qualify).
    """
    p = dist.probability
    centers = dist.centers
    ok = (dist.total > 0) & (p > 0)
    lower = dist.edges[:-1]

    def fit(mask: np.ndarray, start: float) -> PowerLawFit:
        slope, intercept, r2 = least_squares(np.log(centers[mask]), np.log(p[mask]))
        return PowerLawFit(-slope, intercept, r2, float(start), int(mask.sum()), dist.lam)

    if tail_start is not None:
        mask = ok & (centers >= tail_start)
        n = int(mask.sum())
        if n < 3:
            raise LexnavError(
                f"tail fit needs >= 3 non-empty bins with positive probability at "
                f"rho >= {tail_start}; found {n}"
            )
        return fit(mask, tail_start)

    n = int(ok.sum())
    if n < 3:
        raise LexnavError(
            f"tail fit needs >= 3 non-empty bins with positive probability; found {n}"
        )
    if n < AUTO_MIN_POINTS:
        return fit(ok, lower[ok][0])
    best: PowerLawFit | None = None
    for i in np.flatnonzero(ok):
        mask = ok & (np.arange(len(ok)) >= i)
        if mask.sum() < AUTO_MIN_POINTS:
            break
        cand = fit(mask, lower[i])
        if best is None or cand.r_squared > best.r_squared:
            best = cand
    assert best is not None
    return best


def alpha_lambda_regression(points: Sequence[tuple[float, float]]) -> AlphaLambdaFit:
    """Linear fit of the clustering exponent against the linkage threshold."""
    lams = np.array([p[0] for p in points], dtype=float)
    alphas = np.array([p[1] for p in points], dtype=float)
    if len(set(lams.tolist())) < 2:
        raise LexnavError("alpha-lambda regression needs at least 2 distinct lambda values")
    slope, intercept, _ = least_squares(lams, alphas)
    da, dl = alphas - alphas.mean(), lams - lams.mean()
    denom = math.sqrt(float(da @ da) * float(dl @ dl))
    pearson = float(da @ dl) / denom if denom > 0 else math.nan
    return AlphaLambdaFit(slope, intercept, pearson, len(points))


# --- CSV surfaces -----------------------------------------------------------


def write_distribution_csv(fh, dist: BinnedDistribution) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(DIST_HEADER)
    for c, t, k, p in zip(dist.centers, dist.total, dist.linked, dist.probability):
        writer.writerow([format_float(c), int(t), int(k), "" if t == 0 else format_float(p)])


_LAMBDA_IN_NAME = re.compile(r"distribution_(.+)\.csv$")


def distribution_filename(lam: float) -> str:
    return f"distribution_{format_float(lam)}.csv"


def read_distribution_csv(path: str | Path, lam: float | None = None) -> BinnedDistribution:
    """Load a distribution CSV written by :func:`write_distribution_csv`.

    Bin edges are reconstructed from the geometric centers. ``lam`` defaults
    to the value encoded in a ``distribution_<lambda>.csv`` file name.
    """
    path = Path(path)
    if lam is None:
        m = _LAMBDA_IN_NAME.search(path.name)
        if not m:
            raise FormatError("cannot infer lambda from file name; pass it explicitly", str(path))
        lam = float(m.group(1))
    centers, totals, linked = [], [], []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        if next(reader, None) != DIST_HEADER:
            raise FormatError(f"expected header {','.join(DIST_HEADER)}", str(path), 1)
        for lineno, row in enumerate(reader, 2):
            if not row:
                continue
            try:
                c, t, k, _ = row
                centers.append(float(c))
                totals.append(int(t))
                linked.append(int(k))
            except ValueError:
                raise FormatError(f"malformed distribution row {row!r}", str(path), lineno) from None
    if not centers:
        raise FormatError("distribution has no bins", str(path))
    c = np.array(centers)
    if len(c) == 1:
        # a single bin carries no spacing information; assume one decade
        ratio = 10.0
    else:
        ratio = (c[-1] / c[0]) ** (1.0 / (len(c) - 1))
    edges = np.append(c / math.sqrt(ratio), c[-1] * math.sqrt(ratio))
    return BinnedDistribution(lam, edges, np.array(totals, dtype=np.int64), np.array(linked, dtype=np.int64))


def write_fit_csv(fh, fits: Iterable[PowerLawFit]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(FIT_HEADER)
    for f in fits:
        writer.writerow(
            [
                format_float(f.lam),
                format_float(f.alpha),
                format_float(f.intercept),
                format_float(f.r_squared),
                format_float(f.tail_start),
                f.points_used,
            ]
        )


def read_fit_csv(path: str | Path) -> list[PowerLawFit]:
    out = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        if next(reader, None) != FIT_HEADER:
            raise FormatError(f"expected header {','.join(FIT_HEADER)}", str(path), 1)
        for lineno, row in enumerate(reader, 2):
            if not row:
                continue
            try:
                lam, alpha, icpt, r2, start, n = row
                out.append(PowerLawFit(float(alpha), float(icpt), float(r2), float(start), int(n), float(lam)))
            except ValueError:
                raise FormatError(f"malformed fit row {row!r}", str(path), lineno) from None
    return out
