"""Trigonometric sums linking primes and zeros in both directions.

``primes_to_zeros_sum`` is a truncated sum over prime powers whose
extrema sit near zero heights; ``zeros_to_primes_sum`` sums over zero
heights and has extrema near prime powers.  Neither figure source fixes a
sign convention, so peak matching tries both polarities.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import find_peaks

from ._parallel import chunked_map
from .errors import DomainError
from .primes import prime_powers_up_to
from .zeta_core import ZeroList

PRIMES_TO_ZEROS = "primes_to_zeros"
ZEROS_TO_PRIMES = "zeros_to_primes"


def uniform_grid(start: float, end: float, step: float) -> np.ndarray:
    if not step > 0:
        raise DomainError("grid step must be positive")
    if end < start:
        raise DomainError("grid end precedes grid start")
    n = int(math.floor((end - start) / step + 1e-9))
    return start + step * np.arange(n + 1)


@dataclass(frozen=True)
class SampledCurve:
    xs: np.ndarray
    ys: np.ndarray
    direction: str
    cutoff: float

    def __post_init__(self):
        if self.xs.shape != self.ys.shape:
            raise DomainError("xs and ys differ in length")

    def negated(self) -> "SampledCurve":
        return SampledCurve(self.xs, -self.ys, self.direction, self.cutoff)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "y"])
        for x, y in zip(self.xs, self.ys):
            w.writerow([repr(float(x)), repr(float(y))])
        return buf.getvalue()


def _as_grid(grid) -> np.ndarray:
    if isinstance(grid, tuple) and len(grid) == 3:
        grid = uniform_grid(*grid)
    xs = np.asarray(grid, dtype=float)
    if xs.size == 0:
        raise DomainError("empty grid")
    return xs


def primes_to_zeros_sum(theta_grid, C: float, remove_pole_term: bool = False) -> SampledCurve:
    """sum over p^n <= C of (log p / p^(n/2)) cos(n log p * theta).

    The sharp cutoff leaves the term Re C^(1-s)/(1-s), s = 1/2 + i theta,
    of size about sqrt(C)/theta, which drags the dips off the zeros as C
    grows; ``remove_pole_term`` subtracts it.
    """
    if C < 2:
        raise DomainError("cutoff C must be >= 2")
    xs = _as_grid(theta_grid)
    terms = [(math.log(p) / math.sqrt(pk), k * math.log(p))
             for pk, p, k in prime_powers_up_to(int(math.floor(C)))]

    def block(th):
        out = np.zeros_like(th)
        for w, f in terms:
            out += w * np.cos(f * th)
        return out

    ys = chunked_map(block, xs)
    if remove_pole_term:
        s = 0.5 + 1j * xs
        ys = ys - (np.exp((1 - s) * math.log(C)) / (1 - s)).real
    return SampledCurve(xs, ys, PRIMES_TO_ZEROS, float(C))


def zeros_to_primes_sum(s_grid, N: int, zeros: ZeroList) -> SampledCurve:
    """sum over the first N zero heights of cos(gamma_n log s)."""
    if N > len(zeros):
        raise DomainError(f"N={N} exceeds the {len(zeros)} available zeros")
    if N < 0:
        raise DomainError("N must be non-negative")
    xs = _as_grid(s_grid)
    if np.any(xs <= 1):
        raise DomainError("zeros_to_primes_sum needs s > 1")
    gammas = zeros.gammas[:N]

    def block(s):
        ls = np.log(s)
        out = np.zeros_like(s)
        for g in gammas:
            out += np.cos(g * ls)
        return out

    return SampledCurve(xs, chunked_map(block, xs), ZEROS_TO_PRIMES, float(N))


@dataclass(frozen=True)
class Peak:
    x: float
    y: float
    prominence: float


def detect_peaks(curve: SampledCurve, min_prominence: float) -> list[Peak]:
    """Strict local maxima with prominence >= ``min_prominence``.

    Positions and heights are refined by a parabola through the sample
    and its two neighbours.
    """
    if not min_prominence > 0:
        raise DomainError("min_prominence must be positive")
    ys = np.asarray(curve.ys, dtype=float)
    xs = np.asarray(curve.xs, dtype=float)
    idx, props = find_peaks(ys, prominence=min_prominence)
    out = []
    for i, prom in zip(idx, props["prominences"]):
        y0, ym, yp = ys[i], ys[i - 1], ys[i + 1]
        if not (ym < y0 > yp):
            continue
        denom = ym - 2 * y0 + yp
        delta = 0.5 * (ym - yp) / denom
        h = xs[i + 1] - xs[i]
        out.append(Peak(float(xs[i] + delta * h),
                        float(y0 - 0.25 * (ym - yp) * delta), float(prom)))
    return out


@dataclass
class MatchReport:
    matched: int
    total: int
    mean_offset: float
    pairs: list[tuple[float, float]]

    @property
    def fraction(self) -> float:
        return self.matched / self.total if self.total else 0.0


def match_peaks(peaks, targets, tol: float) -> MatchReport:
    """Greedy one-to-one matching of peak positions to targets, nearest first."""
    if not tol > 0:
        raise DomainError("tol must be positive")
    px = [p.x if isinstance(p, Peak) else float(p) for p in peaks]
    tx = [float(t) for t in targets]
    cand = sorted((abs(x - t), j, i) for i, x in enumerate(px)
                  for j, t in enumerate(tx) if abs(x - t) <= tol)
    used_p, used_t, pairs = set(), set(), []
    for _, j, i in cand:
        if i in used_p or j in used_t:
            continue
        used_p.add(i)
        used_t.add(j)
        pairs.append((px[i], tx[j]))
    pairs.sort(key=lambda pt: pt[1])
    offset = float(np.mean([abs(a - b) for a, b in pairs])) if pairs else math.nan
    return MatchReport(len(pairs), len(tx), offset, pairs)


@dataclass
class PolarityMatch:
    polarity: int
    peaks: list[Peak]
    report: MatchReport

    def to_json(self) -> str:
        by_x = {a: b for a, b in self.report.pairs}
        return json.dumps({
            "polarity": self.polarity,
            "matched": self.report.matched,
            "targets": self.report.total,
            "matched_fraction": self.report.fraction,
            "mean_offset": None if math.isnan(self.report.mean_offset) else self.report.mean_offset,
            "peaks": [{"x": p.x, "y": p.y, "prominence": p.prominence,
                       "matched_target": by_x.get(p.x)} for p in self.peaks],
        }, indent=2, sort_keys=True) + "\n"


def best_polarity_match(curve: SampledCurve, targets, tol: float,
                        min_prominence: float) -> PolarityMatch:
    """Match peaks of +curve and of -curve; keep the better-matching sign."""
    best = None
    for sign in (1, -1):
        c = curve if sign == 1 else curve.negated()
        peaks = detect_peaks(c, min_prominence)
        rep = match_peaks(peaks, targets, tol)
        key = (rep.fraction, -rep.mean_offset if rep.matched else -math.inf)
        if best is None or key > best[0]:
            best = (key, PolarityMatch(sign, peaks, rep))
    return best[1]
