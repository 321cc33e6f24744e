"""Sparse integer polynomials and rational integrands over 1 +/- x^P.

The integrands of interest are Q(x) / (1 + d*x^P) with d = +1 or -1 and
Q an integer polynomial, usually a product of factors (1 + s*x^a).  Their
power series are periodic: expanding 1/(1 + d*x^P) as a geometric series
shifts the numerator by P each period and multiplies it by -d.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, Mapping, NamedTuple, Union

from .rough import primorial

TermsLike = Union[Mapping[int, int], Iterable[tuple[int, int]], None]


class InexactDivision(ValueError):
    """Polynomial division left a remainder where none was allowed."""


class NotRoughSupported(ValueError):
    """A series coefficient sits at a position with a small prime factor."""

    def __init__(self, position: int, k: int):
        self.position = position
        self.k = k
        super().__init__(f"series term at position {position} is not {k}-rough")


class IntPolynomial:
    """Immutable sparse polynomial with integer coefficients.

    Stored as exponent -> coefficient with zero coefficients dropped; the
    empty map is the zero polynomial, whose degree is -1.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: TermsLike = None):
        clean: dict[int, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else (terms or ())
        for e, c in items:
            if e < 0:
                raise ValueError(f"negative exponent {e}")
            c = clean.get(e, 0) + c
            if c:
                clean[e] = c
            else:
                clean.pop(e, None)
        self._terms = clean

    # -- inspection ----------------------------------------------------

    def terms(self) -> tuple[tuple[int, int], ...]:
        """(exponent, coefficient) pairs, ascending in exponent."""
        return tuple(sorted(self._terms.items()))

    def coeff(self, exponent: int) -> int:
        return self._terms.get(exponent, 0)

    @property
    def degree(self) -> int:
        return max(self._terms) if self._terms else -1

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        return f"IntPolynomial({dict(sorted(self._terms.items()))!r})"

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        out = dict(self._terms)
        for e, c in other._terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return _wrap(out)

    def __neg__(self) -> "IntPolynomial":
        return _wrap({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        out: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return _wrap(out)

    def scaled(self, c: int) -> "IntPolynomial":
        if c == 0:
            return IntPolynomial()
        return _wrap({e: c * v for e, v in self._terms.items()})

    def shifted(self, a: int) -> "IntPolynomial":
        """Multiply by x^a."""
        if a < 0:
            raise ValueError(f"negative shift {a}")
        return _wrap({e + a: c for e, c in self._terms.items()})

    def compose_power(self, k: int) -> "IntPolynomial":
        """Substitute x -> x^k."""
        if k < 1:
            raise ValueError(f"power must be positive, got {k}")
        return _wrap({e * k: c for e, c in self._terms.items()})

    def evaluate(self, x):
        """Horner evaluation over the sparse support; any numeric type."""
        items = sorted(self._terms.items(), reverse=True)
        if not items:
            return 0
        acc = 0
        last = items[0][0]
        for e, c in items:
            acc = acc * x ** (last - e) + c
            last = e
        return acc * x**last if last else acc

    def is_palindromic(self, span: int) -> bool:
        """True iff coeff(e) == coeff(span - e) for all exponents."""
        if self.degree > span:
            return False
        return all(self.coeff(span - e) == c for e, c in self._terms.items())


def _wrap(terms: dict[int, int]) -> IntPolynomial:
    p = IntPolynomial.__new__(IntPolynomial)
    p._terms = terms
    return p


ONE = IntPolynomial({0: 1})


def poly_add(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    return a + b


def poly_sub(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    return a - b


def poly_mul(a: IntPolynomial, b: IntPolynomial) -> IntPolynomial:
    return a * b


def poly_compose_power(p: IntPolynomial, k: int) -> IntPolynomial:
    return p.compose_power(k)


def poly_exact_div(num: IntPolynomial, den: IntPolynomial) -> IntPolynomial:
    """Quotient num/den when the division is exact over the integers.

    Raises InexactDivision on a nonzero remainder or a non-integer step.
    """
    if den.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    lead_e = den.degree
    lead_c = den.coeff(lead_e)
    rem = dict(num._terms)
    quot: dict[int, int] = {}
    while rem:
        e = max(rem)
        c = rem[e]
        if e < lead_e:
            raise InexactDivision(f"remainder of degree {e} survives")
        qc = c // lead_c
        if qc * lead_c != c:
            raise InexactDivision(f"coefficient {c} not divisible by {lead_c}")
        quot[e - lead_e] = qc
        for de, dc in den._terms.items():
            ne = de + (e - lead_e)
            v = rem.get(ne, 0) - dc * qc
            if v:
                rem[ne] = v
            else:
                rem.pop(ne, None)
    return _wrap(quot)


@dataclass(frozen=True)
class Integrand:
    """Q(x) / (1 + denom_sign * x^period) on [0, 1].

    `factors` records a product form ((sign, exponent), ...) for Q when one
    is known; the combined numerator is always present and authoritative.
    """

    numerator: IntPolynomial
    denom_sign: int
    period: int
    factors: tuple[tuple[int, int], ...] | None = None

    def __post_init__(self):
        if self.denom_sign not in (1, -1):
            raise ValueError(f"denom_sign must be +1 or -1, got {self.denom_sign}")
        if self.period < 1:
            raise ValueError(f"period must be positive, got {self.period}")
        if self.numerator.is_zero:
            raise ValueError("zero numerator")
        if self.factors is not None:
            if numerator_from_factors(self.factors) != self.numerator:
                raise ValueError("factors do not multiply out to the numerator")

    @classmethod
    def from_factors(
        cls, factors: Iterable[tuple[int, int]], denom_sign: int, period: int
    ) -> "Integrand":
        factors = tuple(factors)
        return cls(numerator_from_factors(factors), denom_sign, period, factors)

    def value_at(self, x):
        denom = 1 + self.denom_sign * x**self.period
        return self.numerator.evaluate(x) / denom

    def __str__(self) -> str:
        if self.factors is not None:
            num = "".join(
                f"(1{'+' if s > 0 else '-'}x^{a})" for s, a in self.factors
            ) or "1"
        else:
            num = f"({poly_str(self.numerator)})"
        return f"{num}/(1{'+' if self.denom_sign > 0 else '-'}x^{self.period})"


def numerator_from_factors(factors: Iterable[tuple[int, int]]) -> IntPolynomial:
    """Multiply out a product of (1 + sign * x^exponent) factors."""
    out = ONE
    for sign, exponent in factors:
        if sign not in (1, -1):
            raise ValueError(f"factor sign must be +1 or -1, got {sign}")
        if exponent < 1:
            raise ValueError(f"factor exponent must be positive, got {exponent}")
        out = out * IntPolynomial({0: 1, exponent: sign})
    return out


def poly_pairs(p: IntPolynomial) -> list[list[int]]:
    """JSON-ready [exponent, coefficient] pairs, ascending exponents."""
    return [[e, c] for e, c in p.terms()]


def poly_canonical_str(p: IntPolynomial) -> str:
    """Machine-oriented canonical form, e.g. '1 + -1*x^6 + 2*x^10'."""
    if p.is_zero:
        return "0"
    return " + ".join(
        str(c) if e == 0 else f"{c}*x^{e}" for e, c in p.terms()
    )


def poly_str(p: IntPolynomial) -> str:
    """Human-readable form like '1 - x^6 + 2x^10', ascending exponents."""
    if p.is_zero:
        return "0"
    parts: list[str] = []
    for e, c in p.terms():
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            xpow = "x" if e == 1 else f"x^{e}"
            body = xpow if mag == 1 else f"{mag}{xpow}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"{'+' if c > 0 else '-'} {body}")
    return " ".join(parts)


@dataclass(frozen=True)
class SeriesPrefix:
    """First coefficients c_0 .. c_{n-1} of an integrand's power series."""

    coeffs: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.coeffs)

    def nonzero(self) -> list[tuple[int, int]]:
        """(position, coefficient) with position = exponent + 1.

        Integrating termwise sends c * x^(n-1) to c / n, so positions are
        the denominators of the displayed reciprocal series.
        """
        return [(m + 1, c) for m, c in enumerate(self.coeffs) if c]


class SignPattern(NamedTuple):
    pattern: str
    block_sign: str


def expand_series(g: Integrand, n_terms: int) -> SeriesPrefix:
    """Power-series coefficients of g via the geometric series of 1/(1+d*x^P).

    Each numerator term recurs every `period` exponents, multiplied by
    -denom_sign per period: antiperiodic blocks for d = +1, periodic for
    d = -1.
    """
    if n_terms < 0:
        raise ValueError(f"n_terms must be nonnegative, got {n_terms}")
    coeffs = [0] * n_terms
    step = -g.denom_sign
    for e, c in g.numerator.terms():
        pos, val = e, c
        while pos < n_terms:
            coeffs[pos] += val
            pos += g.period
            val *= step
    return SeriesPrefix(tuple(coeffs))


def sign_pattern(g: Integrand, k: int) -> SignPattern:
    """Signs of one period of nonzero series coefficients, plus block sign.

    Verifies over a two-period window that every nonzero coefficient sits
    at a k-rough position (exponent + 1); raises NotRoughSupported if not.
    The block sign is '-' when consecutive periods alternate (denominator
    1 + x^P) and '+' when they repeat (denominator 1 - x^P).
    """
    window = expand_series(g, 2 * g.period)
    modulus = primorial(k)
    for m, c in enumerate(window.coeffs):
        if c and gcd(m + 1, modulus) != 1:
            raise NotRoughSupported(position=m + 1, k=k)
    in_period = [c for c in window.coeffs[: g.period] if c]
    if not in_period:
        raise ValueError("no nonzero coefficients in the first period")
    pattern = "".join("+" if c > 0 else "-" for c in in_period)
    return SignPattern(pattern, "-" if g.denom_sign == 1 else "+")
