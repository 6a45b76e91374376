"""Principal parts of rationals and the local factor 1/(1 - sqrt(p) e^(2 pi i lambda)).

Rational arithmetic here is exact (``fractions.Fraction``).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DomainError, ParseError
from .primes import factorize, is_prime


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational of the form num/den: {text!r}") from None


def _valuation(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def principal_part(x, p: int) -> Fraction:
    """The unique a/p^k in [0, 1) with x - a/p^k free of p in its denominator."""
    x = Fraction(x)
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    k = _valuation(x.denominator, p)
    if k == 0:
        return Fraction(0)
    pk = p**k
    m = x.denominator // pk
    return Fraction(x.numerator * pow(m, -1, pk) % pk, pk)


@dataclass(frozen=True)
class PrincipalPartDecomposition:
    terms: dict[int, Fraction]
    integer_part: int
    value: Fraction = field(compare=False)

    def reconstruct(self) -> Fraction:
        return self.integer_part + sum(self.terms.values(), Fraction(0))

    def to_text(self) -> str:
        parts = [str(self.integer_part)]
        for p, t in sorted(self.terms.items()):
            k = _valuation(t.denominator, p)
            parts.append(f"{t.numerator}/{p}^{k}")
        return f"{self.value} = " + " + ".join(parts)

    def as_dict(self) -> dict:
        return {
            "value": str(self.value),
            "integer_part": self.integer_part,
            "terms": {str(p): str(t) for p, t in sorted(self.terms.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"


def partial_fractions(x) -> PrincipalPartDecomposition:
    x = Fraction(x)
    terms = {}
    if x.denominator > 1:
        for p, _ in factorize(x.denominator):
            terms[p] = principal_part(x, p)
    rest = x - sum(terms.values(), Fraction(0))
    assert rest.denominator == 1, rest
    return PrincipalPartDecomposition(terms, int(rest), x)


def character_triviality_check(x) -> Fraction:
    """Fractional part of x minus all its principal parts; exactly 0 on Q."""
    x = Fraction(x)
    rest = x - sum(partial_fractions(x).terms.values(), Fraction(0))
    return rest - math.floor(rest)


def local_l_factor(p: int, lam):
    """1 / (1 - sqrt(p) exp(2 pi i lam))."""
    lam = np.asarray(lam, dtype=float)
    out = 1.0 / (1.0 - math.sqrt(p) * np.exp(2j * math.pi * lam))
    return complex(out) if out.ndim == 0 else out


def g_from_l_factor(p: int, t):
    """(log p / pi) Re local_l_factor(p, t); equals g_alpha at a = q = 1."""
    out = math.log(p) / math.pi * np.real(local_l_factor(p, t))
    return float(out) if np.ndim(out) == 0 else out
