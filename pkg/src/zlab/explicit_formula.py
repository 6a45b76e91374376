"""Chebyshev psi, von Mangoldt Lambda and the explicit formula over zeros."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .primes import factorize, prime_powers_up_to
from .zeta_core import TWO_PI, ZeroList

LOG_2PI = math.log(TWO_PI)


@dataclass(frozen=True)
class PrimePowerTable:
    """Prime powers p^k <= x_max with their von Mangoldt weight log p."""

    powers: tuple[int, ...]
    weights: tuple[float, ...]
    x_max: int

    @classmethod
    def build(cls, x_max: float) -> "PrimePowerTable":
        n = int(math.floor(x_max))
        entries = prime_powers_up_to(n)
        return cls(tuple(e[0] for e in entries),
                   tuple(math.log(e[1]) for e in entries), n)

    def psi(self, x: float) -> float:
        k = int(np.searchsorted(self.powers, math.floor(x), side="right"))
        return math.fsum(self.weights[:k])


def von_mangoldt(n: int) -> float:
    n = int(n)
    if n < 1:
        raise DomainError("von_mangoldt needs n >= 1")
    if n == 1:
        return 0.0
    f = factorize(n)
    return math.log(f[0][0]) if len(f) == 1 else 0.0


def chebyshev_psi(x: float) -> float:
    """sum of Lambda(n) over n <= x, including a jump at x itself."""
    if x < 1:
        raise DomainError("chebyshev_psi needs x >= 1")
    return PrimePowerTable.build(x).psi(x)


def _zero_term(x: float, gammas: np.ndarray) -> float:
    rho = 0.5 + 1j * gammas
    terms = 2.0 * (np.exp(rho * math.log(x)) / rho).real
    return math.fsum(terms.tolist())


def psi_explicit(x: float, zeros: ZeroList, K: int) -> float:
    """x - sum over K conjugate zero pairs of x^rho/rho - log 2pi - log(1 - x^-2)/2.

    The last term is the trivial-zero sum in closed form.  At prime
    powers the series converges to the midpoint of the jump.
    """
    if not x > 1:
        raise DomainError("psi_explicit needs x > 1 (trivial-zero term diverges at 1)")
    if K < 0 or K > len(zeros):
        raise DomainError(f"K={K} outside [0, {len(zeros)}]")
    trivial = -0.5 * math.log1p(-x**-2)
    return x - _zero_term(x, zeros.gammas[:K]) - LOG_2PI + trivial


def psi_sweep_csv(xs, zeros: ZeroList, K: int) -> str:
    table = PrimePowerTable.build(max(xs))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "psi_sieve", "psi_explicit"])
    for x in xs:
        w.writerow([repr(float(x)), repr(table.psi(x)), repr(psi_explicit(x, zeros, K))])
    return buf.getvalue()


@dataclass(frozen=True)
class LandauResult:
    x: float
    T: float
    value: complex
    n_zeros: int

    @property
    def predicted(self) -> float:
        """Main term -(T/2pi) Lambda(x); zero unless x is a prime power."""
        lam = von_mangoldt(int(self.x)) if float(self.x).is_integer() else 0.0
        return -self.T / TWO_PI * lam

    def as_dict(self) -> dict:
        return {"x": self.x, "T": self.T, "re": self.value.real, "im": self.value.imag,
                "predicted": self.predicted, "n_zeros": self.n_zeros}


def landau_sum(x: float, zeros: ZeroList, T: float) -> LandauResult:
    """sum over 0 < gamma <= T of x^(1/2 + i gamma)."""
    if not x > 1:
        raise DomainError("landau_sum needs x > 1")
    if T > zeros.t_max:
        raise DomainError(f"T={T} exceeds the covered height {zeros.t_max}")
    g = zeros.gammas[: int(np.searchsorted(zeros.gammas, T, side="right"))]
    lx = math.log(x)
    re = math.fsum(np.cos(g * lx).tolist())
    im = math.fsum(np.sin(g * lx).tolist())
    return LandauResult(float(x), float(T), math.sqrt(x) * complex(re, im), int(g.size))
