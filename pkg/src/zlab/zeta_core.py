"""Imaginary parts of the nontrivial zeta zeros: computation and ingestion.

Zeros on the critical line are located as sign changes of the Hardy
function Z(t), evaluated with the Riemann-Siegel formula (main sum plus
the C0..C4 correction terms).  Heights below ``POLISH_BELOW`` are then
polished with an alternating-series evaluation of zeta, where the
asymptotic expansion is too coarse for 1e-6 location accuracy.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numpy.polynomial import polynomial as P

from ._parallel import chunked_map
from .errors import ComputationError, DomainError, ParseError, PoleError

TWO_PI = 2.0 * math.pi
THETA_FLOOR = 8.0
SCAN_FLOOR = 10.0
DEFAULT_CEILING = 1.0e4
DEFAULT_STEP = 0.05
BISECT_TOL = 1e-9
POLISH_BELOW = 40.0

# Taylor coefficients in u = p - 1/2 (even powers only) of
#   psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p),
# generated once at 120 digits and rounded to double.
_PSI_EVEN = (
    0.3826834323650898, 1.7489618723100817, 2.118025207685496,
    -0.8707216670511481, -3.4733112243465167, -1.6626947308999325,
    1.216731288919232, 1.3014304161007977, 0.03051102182736167,
    -0.3755803051545095, -0.1085784416564066, 0.051832902999549624,
    0.029999480619902277, -0.0022759396706125644, -0.004382647416580339,
    -0.0004064230183729847, 0.0004006097785422114, 8.971057991388841e-05,
    -2.3025650027239108e-05, -9.380006601906792e-06, 6.323514947609108e-07,
    6.551022819231502e-07, 2.210523745552697e-08, -3.322316176445629e-08,
    -3.734910989933656e-09, 1.2445067060797738e-09, 2.476820537650219e-10,
    -3.284272816891627e-11, -1.1305406852298404e-11, 4.565463979588694e-13,
    3.9598480945249214e-13,
)


def _psi_derivatives(order: int) -> list[np.ndarray]:
    coef = np.zeros(2 * len(_PSI_EVEN))
    coef[::2] = _PSI_EVEN
    out = [coef]
    for _ in range(order):
        out.append(P.polyder(out[-1]))
    return out


_PSI_D = _psi_derivatives(12)


def _rs_corrections(u: np.ndarray, tau: np.ndarray) -> np.ndarray:
    """C0 + C1/tau + ... + C4/tau^4 at offset u = frac(tau) - 1/2."""
    d = [P.polyval(u, c) for c in _PSI_D]
    pi2 = math.pi ** 2
    c0 = d[0]
    c1 = -d[3] / (96 * pi2)
    c2 = d[2] / (64 * pi2) + d[6] / (18432 * pi2**2)
    c3 = -d[1] / (64 * pi2) - d[5] / (3840 * pi2**2) - d[9] / (5308416 * pi2**3)
    c4 = (d[0] / (128 * pi2) + 19 * d[4] / (24576 * pi2**2)
          + 11 * d[8] / (5898240 * pi2**3) + d[12] / (2038431744 * pi2**4))
    r = 1.0 / tau
    return c0 + r * (c1 + r * (c2 + r * (c3 + r * c4)))


def _check_height(t) -> None:
    if np.any(~(np.asarray(t) > THETA_FLOOR)):
        raise DomainError(f"Riemann-Siegel evaluation needs t > {THETA_FLOOR:g}")


def rs_theta(t):
    """Riemann-Siegel theta function via its asymptotic expansion (t > 8)."""
    _check_height(t)
    t = np.asarray(t, dtype=float)
    out = (t / 2 * np.log(t / TWO_PI) - t / 2 - math.pi / 8
           + 1 / (48 * t) + 7 / (5760 * t**3))
    return float(out) if out.ndim == 0 else out


def _rs_z_block(t: np.ndarray) -> np.ndarray:
    tau = np.sqrt(t / TWO_PI)
    n_terms = np.floor(tau).astype(np.int64)
    theta = rs_theta(t)
    total = np.zeros_like(t)
    for n in range(1, int(n_terms.max()) + 1):
        active = n_terms >= n
        term = np.cos(theta - t * math.log(n)) / math.sqrt(n)
        total += np.where(active, term, 0.0)
    u = tau - n_terms - 0.5
    sign = np.where(n_terms % 2 == 1, 1.0, -1.0)
    return 2.0 * total + sign * tau**-0.5 * _rs_corrections(u, tau)


def rs_z(t):
    """Hardy Z function, real-valued with |Z(t)| = |zeta(1/2 + it)|."""
    _check_height(t)
    arr = np.asarray(t, dtype=float)
    out = chunked_map(_rs_z_block, arr.ravel()).reshape(arr.shape)
    return float(out) if out.ndim == 0 else out


_BORWEIN_CACHE: dict[int, np.ndarray] = {}


def _borwein_weights(n: int) -> np.ndarray:
    if n not in _BORWEIN_CACHE:
        acc, d = 0, []
        for i in range(n + 1):
            acc += (math.factorial(n + i - 1) * 4**i
                    // (math.factorial(n - i) * math.factorial(2 * i)))
            d.append(n * acc)
        dn = d[-1]
        signs = [(-1) ** k for k in range(n)]
        _BORWEIN_CACHE[n] = np.array(
            [-s * (dk - dn) / dn for s, dk in zip(signs, d[:-1])])
    return _BORWEIN_CACHE[n]


def zeta_alternating(s: complex, terms: int = 60) -> complex:
    """zeta(s) for Re s > 0 from the accelerated alternating (eta) series.

    eta(s) = sum (-1)^(n-1) n^-s is summed with Borwein's
    Chebyshev-weighted acceleration, then divided by 1 - 2^(1-s).  The
    truncation error is about 3 (3 + sqrt 8)^-terms (1 + 2|t|) exp(pi |t|/2),
    so raise ``terms`` for large imaginary parts.
    """
    s = complex(s)
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    if s.real <= 0:
        raise DomainError("zeta_alternating needs Re s > 0")
    if terms < 8:
        raise DomainError("zeta_alternating needs terms >= 8")
    w = _borwein_weights(terms)
    k = np.arange(1, terms + 1, dtype=float)
    eta = complex(np.sum(w * np.exp(-s * np.log(k))))
    return eta / (1 - 2 ** (1 - s))


def z_reference(t: float, terms: int | None = None) -> float:
    """Z(t) = Re(exp(i theta) zeta(1/2 + it)) via ``zeta_alternating``."""
    if terms is None:
        terms = max(60, int(1.5 * t) + 40)
    value = np.exp(1j * rs_theta(t)) * zeta_alternating(0.5 + 1j * t, terms)
    return float(value.real)


def n_main(T):
    """Main term (T/2pi)(log(T/2pi) - 1) of the zero counting function."""
    T = np.asarray(T, dtype=float)
    x = T / TWO_PI
    out = x * (np.log(x) - 1)
    return float(out) if out.ndim == 0 else out


def count_tolerance(T):
    return 3 + 2 * np.log(T)


class ZeroSource(str, enum.Enum):
    COMPUTED = "computed"
    INGESTED = "ingested"


@dataclass(frozen=True)
class ZeroList:
    """Ascending positive zero heights gamma_n plus where they came from."""

    gammas: np.ndarray
    source: ZeroSource
    t_max: float
    _checked: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        g = np.asarray(self.gammas, dtype=float)
        g.setflags(write=False)
        object.__setattr__(self, "gammas", g)
        object.__setattr__(self, "source", ZeroSource(self.source))
        object.__setattr__(self, "t_max", float(self.t_max))
        if g.size and np.any(~(g > 0)):
            raise DomainError("zero heights must be positive")
        if g.size > 1 and np.any(np.diff(g) <= 0):
            i = int(np.flatnonzero(np.diff(g) <= 0)[0])
            raise DomainError(f"zero heights not strictly increasing at index {i + 1}")
        if g.size and self.t_max < g[-1]:
            raise DomainError("t_max below the largest stored height")

    def __len__(self) -> int:
        return int(self.gammas.size)

    @property
    def lambdas(self) -> np.ndarray:
        """Normalized heights gamma_n / 2pi."""
        return self.gammas / TWO_PI

    def head(self, n: int) -> "ZeroList":
        if n > len(self):
            raise DomainError(f"requested {n} zeros, only {len(self)} available")
        t_max = self.t_max if n == len(self) else float(self.gammas[n - 1]) if n else 0.0
        return ZeroList(self.gammas[:n], self.source, t_max)

    def count_violations(self) -> list[tuple[float, int, float]]:
        """Heights where the count strays from the main term beyond 3 + 2 log T.

        Checked just below and at each height, and at ``t_max``.
        """
        g = self.gammas
        heights = np.concatenate([g, [self.t_max]])
        observed = np.concatenate([np.arange(1, g.size + 1), [g.size]])
        below = np.arange(g.size)
        heights = np.concatenate([heights, g])
        observed = np.concatenate([observed, below])
        keep = heights >= SCAN_FLOOR
        heights, observed = heights[keep], observed[keep]
        predicted = n_main(heights)
        bad = np.abs(observed - predicted) > count_tolerance(heights)
        return [(float(h), int(o), float(p))
                for h, o, p in zip(heights[bad], observed[bad], predicted[bad])]

    def to_text(self) -> str:
        return "".join(f"{g:.9f}\n" for g in self.gammas)


def count_check(zeros: ZeroList, T: float) -> tuple[int, float]:
    """(#{gamma <= T}, main term of N(T))."""
    if T > zeros.t_max:
        raise DomainError(f"T={T} exceeds the covered height {zeros.t_max}")
    observed = int(np.searchsorted(zeros.gammas, T, side="right"))
    return observed, n_main(T)


def _bisect(f, lo: np.ndarray, hi: np.ndarray, tol: float) -> np.ndarray:
    flo = f(lo)
    while np.max(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        left = np.sign(fm) == np.sign(flo)
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(left, hi, mid)
    return 0.5 * (lo + hi)


def _polish(gamma: float, tol: float) -> float:
    lo, hi = gamma - 1e-4, gamma + 1e-4
    flo, fhi = z_reference(lo), z_reference(hi)
    if flo * fhi > 0:
        return gamma
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = z_reference(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _scan(t_max: float, step: float, tol: float) -> np.ndarray:
    n = int(math.ceil((t_max - SCAN_FLOOR) / step))
    grid = SCAN_FLOOR + step * np.arange(n + 1)
    grid[-1] = t_max
    z = rs_z(grid)
    idx = np.flatnonzero(np.sign(z[:-1]) * np.sign(z[1:]) < 0)
    exact = grid[np.flatnonzero(z == 0.0)]
    roots = _bisect(rs_z, grid[idx], grid[idx + 1], tol) if idx.size else np.zeros(0)
    roots = np.unique(np.concatenate([roots, exact]))
    low = roots < POLISH_BELOW
    roots[low] = [_polish(g, tol) for g in roots[low]]
    return roots


def find_zeros(t_max: float, step: float = DEFAULT_STEP,
               ceiling: float = DEFAULT_CEILING, tol: float = BISECT_TOL) -> ZeroList:
    """All sign changes of Z on (10, t_max], located to within ``tol``.

    The grid step is halved once if the resulting count disagrees with
    the main term of N(T); a second failure raises ComputationError.
    """
    if not (SCAN_FLOOR < t_max <= ceiling):
        raise DomainError(f"t_max must lie in ({SCAN_FLOOR:g}, {ceiling:g}], got {t_max}")
    for attempt in range(2):
        zeros = ZeroList(_scan(t_max, step, tol), ZeroSource.COMPUTED, t_max)
        bad = zeros.count_violations()
        if not bad:
            return zeros
        step /= 2
    h, o, p = bad[0]
    raise ComputationError(
        f"zero count {o} at T={h:.3f} deviates from main term {p:.2f}; zeros were missed")


def ingest_zeros(path, limit: int | None = None) -> ZeroList:
    """Read a zero table: one positive decimal per line, ascending."""
    text = Path(path).read_text(encoding="ascii")
    values = []
    lines = text.split("\n")
    for lineno, line in enumerate(lines, start=1):
        s = line.strip()
        if not s:
            if any(rest.strip() for rest in lines[lineno:]):
                raise ParseError("blank line inside table", lineno)
            break
        try:
            v = float(s)
        except ValueError:
            raise ParseError(f"not a decimal: {s!r}", lineno) from None
        if not math.isfinite(v) or v <= 0:
            raise ParseError(f"zero height must be positive: {s!r}", lineno)
        if values and v <= values[-1]:
            raise ParseError("heights not strictly ascending", lineno)
        values.append(v)
        if limit is not None and len(values) >= limit:
            break
    if not values:
        raise ParseError("empty zero table")
    zeros = ZeroList(np.array(values), ZeroSource.INGESTED, values[-1])
    bad = zeros.count_violations()
    if bad:
        h, o, p = bad[0]
        raise ComputationError(
            f"table count {o} at T={h:.3f} deviates from main term {p:.2f}")
    return zeros


def write_zeros(zeros: ZeroList, path) -> None:
    from .io import atomic_write_text
    atomic_write_text(path, zeros.to_text())
