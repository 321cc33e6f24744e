"""Parent-to-child recursion carrying a series over S_k to one over S_k'.

The recursion is child(x) = parent(x) + sign * x^(k-1) * parent(x^k), which
multiplies the integral by 1 + sign/k.  Combining both terms over the
denominator 1 + d*x^(kP) turns the step into exact polynomial algebra on
numerators; the undetermined sign is resolved by demanding that the child
series has exact next-rough support with unit coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .poly import (
    Integrand,
    IntPolynomial,
    expand_series,
    poly_exact_div,
    poly_pairs,
    sign_pattern,
)
from .rough import is_prime, next_prime, primorial, rough_prefix


class FamilyBreak(ValueError):
    """Neither recursion sign produces a valid child series."""

    def __init__(self, parent: Integrand, k: int):
        self.parent = parent
        self.k = k
        super().__init__(
            f"no recursion sign carries {parent} to a valid series over the "
            f"{next_prime(k)}-rough numbers"
        )


class AmbiguousSign(ValueError):
    """Both recursion signs produced valid children (never observed)."""


@dataclass(frozen=True)
class IdentityCheck:
    """Boolean-like verdict; a false verdict names the first bad exponent."""

    ok: bool
    first_mismatch: int | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class FamilyStep:
    parent: Integrand
    k: int
    sign: int
    child: Integrand
    scale: Fraction


class NumeratorStats(NamedTuple):
    degree: int
    term_count: int
    max_abs_coeff: int


def _candidate_numerator(parent: Integrand, k: int, sign: int) -> IntPolynomial:
    d = parent.denom_sign
    p = parent.period
    # (1 + d*x^(kP)) / (1 + d*x^P); exact for odd k (any k when d = -1).
    expander = poly_exact_div(
        IntPolynomial({0: 1, k * p: d}), IntPolynomial({0: 1, p: d})
    )
    shifted = parent.numerator.compose_power(k).shifted(k - 1)
    return parent.numerator * expander + shifted.scaled(sign)


def _has_exact_rough_support(candidate: IntPolynomial, k_next: int, window: int) -> bool:
    target = frozenset(n - 1 for n in rough_prefix(k_next, window))
    return candidate.support == target and all(
        abs(c) == 1 for _, c in candidate.terms()
    )


def derive_child(parent: Integrand, k: int) -> FamilyStep:
    """Resolve the recursion sign and build the series over the next prime.

    The child is returned in combined-numerator form; one period of support
    is checked, which suffices because the child's series support repeats
    with period k*P and k*P is a multiple of the next primorial here.
    """
    if not is_prime(k) or k == 2:
        raise ValueError(f"recursion index must be an odd prime, got {k}")
    if parent.period % primorial(k) != 0:
        raise ValueError(
            f"parent period {parent.period} is not a multiple of primorial({k})"
        )
    sign_pattern(parent, k)  # precondition: parent really is an S_k series
    k_next = next_prime(k)
    child_period = k * parent.period
    accepted: list[tuple[int, IntPolynomial]] = []
    for sign in (1, -1):
        candidate = _candidate_numerator(parent, k, sign)
        if _has_exact_rough_support(candidate, k_next, child_period):
            accepted.append((sign, candidate))
    if not accepted:
        raise FamilyBreak(parent, k)
    if len(accepted) > 1:
        # Unreachable for nonzero parents: the shifted term sits at positions
        # divisible by k, which the target support excludes, so flipping the
        # sign leaves |coeff| = 2 there.  Kept as a guard.
        raise AmbiguousSign(f"both signs valid for {parent} with k={k}")
    sign, numerator = accepted[0]
    child = Integrand(numerator, parent.denom_sign, child_period)
    return FamilyStep(
        parent=parent,
        k=k,
        sign=sign,
        child=child,
        scale=Fraction(k + sign, k),
    )


def verify_identity(step: FamilyStep) -> IdentityCheck:
    """Exact polynomial check of child = parent + sign*x^(k-1)*parent(x^k).

    Cross-multiplies both sides by the two denominators, so it applies to
    externally supplied steps as well; a false verdict reports the lowest
    exponent where the sides differ.
    """
    if not is_prime(step.k):
        raise ValueError(f"recursion index must be prime, got {step.k}")
    if step.sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {step.sign}")
    parent, child = step.parent, step.child
    if child.period != step.k * parent.period:
        raise ValueError("child period must be k times the parent period")
    if child.denom_sign != parent.denom_sign:
        raise ValueError("parent and child must share the denominator sign")
    d = parent.denom_sign
    parent_den = IntPolynomial({0: 1, parent.period: d})
    child_den = IntPolynomial({0: 1, child.period: d})
    shifted = parent.numerator.compose_power(step.k).shifted(step.k - 1)
    lhs = child.numerator * parent_den
    rhs = parent.numerator * child_den + shifted.scaled(step.sign) * parent_den
    diff = lhs - rhs
    if diff.is_zero:
        return IdentityCheck(True)
    return IdentityCheck(False, first_mismatch=min(diff.support))


def excision_check(parent: Integrand, child: Integrand, n: int) -> bool:
    """True iff the child series is the parent's with multiples of k deleted.

    The excised prime is inferred from the period ratio; a non-prime ratio
    means the two integrands cannot be an adjacent parent/child pair.
    """
    if child.period % parent.period != 0:
        return False
    k = child.period // parent.period
    if not is_prime(k):
        return False
    parent_coeffs = expand_series(parent, n).coeffs
    child_coeffs = expand_series(child, n).coeffs
    for pos in range(1, n + 1):
        want = 0 if pos % k == 0 else parent_coeffs[pos - 1]
        if child_coeffs[pos - 1] != want:
            return False
    return True


def child_numerator_stats(step: FamilyStep) -> NumeratorStats:
    numerator = step.child.numerator
    return NumeratorStats(
        degree=numerator.degree,
        term_count=len(numerator),
        max_abs_coeff=max(abs(c) for _, c in numerator.terms()),
    )


def step_to_json(step: FamilyStep, parent_id: str | None = None) -> dict:
    """JSON-ready description of a derivation step."""
    return {
        "parent_id": parent_id,
        "k": step.k,
        "sign": step.sign,
        "scale": [step.scale.numerator, step.scale.denominator],
        "child_numerator": poly_pairs(step.child.numerator),
        "denom_sign": step.child.denom_sign,
        "period": step.child.period,
    }
