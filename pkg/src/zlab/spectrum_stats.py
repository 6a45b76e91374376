"""Distribution of dilated zero heights {alpha * gamma_n} on [0, 1).

Uniform for generic alpha; for alpha = a log p / (2 pi q) there is a
second-order density correction T * g_alpha(x) with minima at k/q.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .primes import is_prime
from .zeta_core import TWO_PI, ZeroList, n_main


@dataclass(frozen=True)
class DilationParams:
    kind: str
    alpha: float
    p: int | None = None
    a: int = 1
    q: int = 1

    def __post_init__(self):
        if self.kind == "structured":
            if self.p is None or not is_prime(self.p):
                raise DomainError(f"structured dilation needs a prime p, got {self.p}")
            if self.a < 1 or self.q < 1:
                raise DomainError("a and q must be positive")
            if math.gcd(self.a, self.q) != 1:
                raise DomainError(f"a/q = {self.a}/{self.q} is not reduced")
        elif self.kind != "free":
            raise DomainError(f"unknown dilation kind {self.kind!r}")
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise DomainError("alpha must be a positive finite real")

    @classmethod
    def structured(cls, p: int, a: int = 1, q: int = 1) -> "DilationParams":
        alpha = a * math.log(p) / (TWO_PI * q) if p and p > 1 else float("nan")
        return cls("structured", alpha, int(p), int(a), int(q))

    @classmethod
    def free(cls, alpha: float) -> "DilationParams":
        return cls("free", float(alpha), None, 1, 1)

    @classmethod
    def composite(cls, n: int, q: int = 1) -> "DilationParams":
        """Free dilation alpha = log n / (2 pi q) for a composite base."""
        if n < 4 or is_prime(n):
            raise DomainError(f"{n} is not composite")
        return cls.free(math.log(n) / (TWO_PI * q))

    def as_dict(self) -> dict:
        d = {"kind": self.kind, "alpha": self.alpha}
        if self.kind == "structured":
            d.update(p=self.p, a=self.a, q=self.q)
        return d


@dataclass(frozen=True)
class Histogram:
    counts: np.ndarray
    n_total: int

    @property
    def bins(self) -> int:
        return int(self.counts.size)

    @property
    def density(self) -> np.ndarray:
        return self.counts * self.bins / self.n_total

    @property
    def edges(self) -> np.ndarray:
        return np.arange(self.bins + 1) / self.bins

    @property
    def centers(self) -> np.ndarray:
        return (np.arange(self.bins) + 0.5) / self.bins


def _heights(zeros) -> np.ndarray:
    return zeros.gammas if isinstance(zeros, ZeroList) else np.asarray(zeros, dtype=float)


def fractional_parts(zeros, params: DilationParams) -> np.ndarray:
    g = _heights(zeros)
    if g.size == 0:
        raise DomainError("no zeros to dilate")
    x = np.mod(params.alpha * g, 1.0)
    x[x >= 1.0] = 0.0
    return x


def histogram(fracs, bins: int) -> Histogram:
    x = np.asarray(fracs, dtype=float)
    if bins < 2:
        raise DomainError("need at least 2 bins")
    if np.any((x < 0) | (x >= 1)):
        raise DomainError("histogram input must lie in [0, 1)")
    idx = np.minimum((x * bins).astype(np.int64), bins - 1)
    return Histogram(np.bincount(idx, minlength=bins), int(x.size))


def g_alpha_series(x, p: int, a: int, q: int, K: int):
    """K-term partial sum of -(log p/pi) Re sum_k exp(-2 pi i q k x) p^(-a k/2)."""
    if K < 1:
        raise DomainError("K must be >= 1")
    x = np.asarray(x, dtype=float)
    r = p ** (-a / 2)
    total = np.zeros_like(x)
    for k in range(1, K + 1):
        total += r**k * np.cos(TWO_PI * q * k * x)
    out = -math.log(p) / math.pi * total
    return float(out) if out.ndim == 0 else out


def g_alpha_closed(x, p: int, a: int, q: int):
    """Limit of ``g_alpha_series`` (real part of the geometric sum)."""
    x = np.asarray(x, dtype=float)
    r = p ** (-a / 2)
    c = np.cos(TWO_PI * q * x)
    out = -math.log(p) / math.pi * (r * c - r * r) / (1 - 2 * r * c + r * r)
    return float(out) if out.ndim == 0 else out


def g_alpha_minimum(p: int, a: int) -> float:
    """Value of g_alpha at every k/q: log p / (pi (1 - p^(a/2)))."""
    return math.log(p) / (math.pi * (1 - p ** (a / 2)))


def predicted_density(x, params: DilationParams, T: float):
    """Relative density 1 + T g_alpha(x) / N_main(T); identically 1 for free alpha."""
    if params.kind != "structured":
        out = np.ones_like(np.asarray(x, dtype=float))
        return float(out) if out.ndim == 0 else out
    return 1 + T * g_alpha_closed(x, params.p, params.a, params.q) / n_main(T)


def expected_density(x, zeros: ZeroList, params: DilationParams):
    if params.kind != "structured":
        raise DomainError("expected_density needs a structured dilation")
    return predicted_density(x, params, zeros.t_max)


def ks_statistic(fracs) -> float:
    """Kolmogorov-Smirnov distance sup |F_n(x) - x| to the uniform law."""
    x = np.sort(np.asarray(fracs, dtype=float))
    n = x.size
    if n < 10:
        raise DomainError("ks_statistic needs at least 10 samples")
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - x), np.max(x - (i - 1) / n)))


def minima_locations(params: DilationParams) -> list[float]:
    if params.kind != "structured":
        return []
    return [k / params.q for k in range(params.q)]


@dataclass
class DilationReport:
    params: DilationParams
    histogram: Histogram
    predicted: np.ndarray
    ks: float
    minima: list[float]
    t_max: float
    n_zeros: int = field(init=False)

    def __post_init__(self):
        self.n_zeros = self.histogram.n_total

    @property
    def ks_threshold(self) -> float:
        return 2.5 / math.sqrt(self.n_zeros)

    def lowest_bins(self, k: int) -> list[float]:
        """Centers of the ``k`` lowest-density bins (ties broken by index)."""
        order = np.argsort(self.histogram.counts, kind="stable")[:k]
        return [float(c) for c in self.histogram.centers[np.sort(order)]]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["bin_center", "count", "density", "predicted_density"])
        h = self.histogram
        for c, n, d, pd in zip(h.centers, h.counts, h.density, self.predicted):
            w.writerow([repr(float(c)), int(n), repr(float(d)), repr(float(pd))])
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "parameters": self.params.as_dict(),
            "bins": self.histogram.bins,
            "n_zeros": self.n_zeros,
            "t_max": self.t_max,
            "ks": self.ks,
            "ks_threshold": self.ks_threshold,
            "minima": self.minima,
            "lowest_bins": self.lowest_bins(max(1, len(self.minima))),
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True) + "\n"


def run_dilation_experiment(zeros: ZeroList, params: DilationParams,
                            bins: int = 50) -> DilationReport:
    fracs = fractional_parts(zeros, params)
    hist = histogram(fracs, bins)
    predicted = predicted_density(hist.centers, params, zeros.t_max)
    return DilationReport(params, hist, np.asarray(predicted), ks_statistic(fracs),
                          minima_locations(params), zeros.t_max)


def descendant_experiments(zeros: ZeroList, p: int, bins: int = 50) -> dict[int, DilationReport]:
    """One structured run per prime q dividing p - 1 (a = 1)."""
    from .prime_poset import descendants_of_dilation
    return {q: run_dilation_experiment(zeros, DilationParams.structured(p, 1, q), bins)
            for q in sorted(descendants_of_dilation(p))}
