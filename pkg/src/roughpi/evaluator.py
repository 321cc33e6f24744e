"""Three independent evaluations of ∫₀¹ for a rational integrand.

Every integrand here is Q(x)/(1 + d*x^P).  The three routes:

  * residue sum over the upper-half-plane poles of 1 + x^P, valid when the
    numerator is palindromic (even number of minus-sign factors);
  * composite Gauss-Legendre quadrature after exact removal of the x = 1
    singularity for 1 - x^P denominators;
  * the series Σ c_{n-1}/n grouped into one-period blocks, accelerated by
    iterated averaging (alternating blocks) or Richardson extrapolation
    (monotone blocks).

All arithmetic runs at the requested decimal precision plus guard digits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from mpmath import mp

from .poly import Integrand, IntPolynomial, expand_series, poly_exact_div, sign_pattern
from .rough import is_prime

DEFAULT_DPS = 30
GUARD_DIGITS = 10
QUAD_ORDER = 20
MAX_PANELS = 4096
MAX_BLOCKS = 10_000
EULER_DEPTH = 20


class NotResidueEligible(ValueError):
    """Denominator shape rules out the pole-sum route."""


class SymmetryError(ValueError):
    """Numerator lacks the reversal symmetry the pole sum requires."""


class PoleOnPath(ArithmeticError):
    """Denominator vanishes on [0, 1] and the zero does not cancel."""


class ToleranceError(ArithmeticError):
    """Refinement stalled above the requested tolerance."""

    def __init__(self, message: str, best_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate


@dataclass(frozen=True)
class PoleSet:
    """Upper-half-plane poles of 1 + x^period, as fractions of pi."""

    period: int

    def __post_init__(self):
        if self.period <= 0 or self.period % 2:
            raise ValueError(f"period must be even and positive, got {self.period}")

    @property
    def count(self) -> int:
        return self.period // 2

    @property
    def fractions(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(2 * r - 1, self.period) for r in range(1, self.count + 1))

    def angles(self) -> tuple:
        return tuple(mp.pi * mp.mpf(f.numerator) / f.denominator for f in self.fractions)

    def points(self) -> tuple:
        return tuple(
            mp.expjpi(mp.mpf(f.numerator) / f.denominator) for f in self.fractions
        )


class ResidueDetail(NamedTuple):
    value: object
    imag_leak: object


class QuadratureDetail(NamedTuple):
    value: object
    error_estimate: object
    panels: int


class SeriesDetail(NamedTuple):
    value: object
    error_estimate: object
    blocks: int
    depth: int


def residue_eval_detail(
    g: Integrand, dps: int = DEFAULT_DPS, reverse: bool = False
) -> ResidueDetail:
    """Pole sum with the discarded imaginary part reported alongside.

    The integral over [0, 1] equals a quarter of the real-line integral by
    the x -> 1/x symmetry, and each pole z_r of 1 + x^P contributes
    -z_r*Q(z_r)/P, giving Re[-(pi*i/(2P)) * Σ z_r*Q(z_r)].  Each product
    z_r*Q(z_r) is expanded into unit-modulus terms evaluated from exact
    rational multiples of pi, so no power accumulation error enters.
    """
    if g.denom_sign != 1:
        raise NotResidueEligible("pole sum requires a 1 + x^P denominator")
    period = g.period
    if period % 2:
        raise NotResidueEligible("pole sum requires an even period")
    if not g.numerator.is_palindromic(period - 2):
        raise SymmetryError(
            f"numerator of {g} is not palindromic to degree {period - 2}"
        )
    with mp.workdps(dps + GUARD_DIGITS):
        terms = []
        for f in PoleSet(period).fractions:
            for e, c in g.numerator.terms():
                t = (f * (e + 1)) % 2
                terms.append(c * mp.expjpi(mp.mpf(t.numerator) / t.denominator))
        if reverse:
            terms.reverse()
        total = mp.fsum(terms)
        integral = -mp.mpc(0, 1) * mp.pi / (2 * period) * total
        return ResidueDetail(value=mp.re(integral), imag_leak=abs(mp.im(integral)))


def residue_eval(g: Integrand, dps: int = DEFAULT_DPS):
    return residue_eval_detail(g, dps).value


def reduce_for_quadrature(g: Integrand) -> tuple[IntPolynomial, IntPolynomial]:
    """Rewrite g so the denominator is strictly positive on [0, 1].

    1 + x^P denominators pass through.  For 1 - x^P the shared root at
    x = 1 is cancelled exactly: against a minus-sign factor 1 - x^a when
    the factored form is known (dividing both by 1 - x^gcd(a, P)), else
    against a single 1 - x factor of the combined numerator.  Either way
    the new denominator is a sum of monomials with +1 coefficients.
    """
    if g.denom_sign == 1:
        return g.numerator, IntPolynomial({0: 1, g.period: 1})
    period = g.period
    if g.numerator.evaluate(1) != 0:
        raise PoleOnPath(f"{g} has a non-removable pole at x = 1")
    from math import gcd

    if g.factors is not None:
        minus = [a for sign, a in g.factors if sign == -1]
        if minus:
            a = max(minus, key=lambda a: gcd(a, period))
            e = gcd(a, period)
            numerator = IntPolynomial({i * e: 1 for i in range(a // e)})
            rest = list(g.factors)
            rest.remove((-1, a))
            for sign, b in rest:
                numerator = numerator * IntPolynomial({0: 1, b: sign})
            denominator = IntPolynomial({j * e: 1 for j in range(period // e)})
            return numerator, denominator
    one_minus_x = IntPolynomial({0: 1, 1: -1})
    numerator = poly_exact_div(g.numerator, one_minus_x)
    denominator = IntPolynomial({j: 1 for j in range(period)})
    return numerator, denominator


_node_cache: dict = {}


def _legendre_pair(n: int, x):
    p_prev, p = mp.mpf(1), x
    for j in range(2, n + 1):
        p_prev, p = p, ((2 * j - 1) * x * p - (j - 1) * p_prev) / j
    dp = n * (x * p - p_prev) / (x * x - 1)
    return p, dp


def _gauss_legendre_nodes(order: int):
    key = (order, mp.prec)
    if key in _node_cache:
        return _node_cache[key]
    eps = mp.mpf(10) ** (-(mp.dps + 5))
    pairs = []
    for i in range(1, order // 2 + 1):
        x = mp.cos(mp.pi * (i - mp.mpf(1) / 4) / (order + mp.mpf(1) / 2))
        for _ in range(100):
            p, dp = _legendre_pair(order, x)
            dx = p / dp
            x -= dx
            if abs(dx) < eps:
                break
        _, dp = _legendre_pair(order, x)
        w = 2 / ((1 - x * x) * dp * dp)
        pairs.append((x, w))
        pairs.append((-x, w))
    if order % 2:
        _, dp = _legendre_pair(order, mp.mpf(0))
        pairs.append((mp.mpf(0), 2 / (dp * dp)))
    pairs.sort(key=lambda t: t[0])
    nodes = tuple(x for x, _ in pairs)
    weights = tuple(w for _, w in pairs)
    _node_cache[key] = (nodes, weights)
    return nodes, weights


def _estimate_floor(value):
    # refinement differences at or below the rounding scale of the working
    # precision cannot certify anything tighter
    scale = abs(value) if value else mp.mpf(1)
    return scale * mp.mpf(10) ** (-(mp.dps - 3))


def _composite(numerator, denominator, nodes, weights, panels: int):
    width = mp.mpf(1) / panels
    samples = []
    for i in range(panels):
        left = i * width
        for t, w in zip(nodes, weights):
            x = left + (t + 1) / 2 * width
            samples.append(w * numerator.evaluate(x) / denominator.evaluate(x))
    return mp.fsum(samples) * width / 2


def quadrature_detail(
    g: Integrand, target_abs_err=mp.mpf("1e-12"), dps: int = DEFAULT_DPS
) -> QuadratureDetail:
    """Composite fixed-order panels, doubled until two refinements agree."""
    with mp.workdps(dps + GUARD_DIGITS):
        target = mp.mpf(target_abs_err)
        numerator, denominator = reduce_for_quadrature(g)
        nodes, weights = _gauss_legendre_nodes(QUAD_ORDER)
        previous = None
        best = None
        panels = 1
        while panels <= MAX_PANELS:
            value = _composite(numerator, denominator, nodes, weights, panels)
            if previous is not None:
                estimate = max(abs(value - previous), _estimate_floor(value))
                best = QuadratureDetail(value, estimate, panels)
                if estimate < target:
                    return best
            previous = value
            panels *= 2
        raise ToleranceError(
            f"quadrature stalled above {mp.nstr(target, 3)} after {MAX_PANELS} panels",
            best_estimate=best.value if best else previous,
        )


def quadrature(g: Integrand, target_abs_err=mp.mpf("1e-12"), dps: int = DEFAULT_DPS):
    return quadrature_detail(g, target_abs_err, dps).value


def _block_support(g: Integrand, k: int) -> list[tuple[int, int]]:
    sign_pattern(g, k)  # validates S_k support over a full window
    return expand_series(g, g.period).nonzero()


def series_sum_detail(
    g: Integrand, k: int, target_abs_err=mp.mpf("1e-8"), dps: int = DEFAULT_DPS
) -> SeriesDetail:
    """Accelerated sum of Σ c_{n-1}/n over the integrand's support.

    Terms are grouped into one-period blocks.  With a 1 + x^P denominator
    the block sums alternate and iterated pairwise averaging of the partial
    sums is used; with 1 - x^P they are monotone ~ C/b^2 and Richardson
    extrapolation over 2^i-block prefixes is used instead (averaging gains
    nothing on one-signed tails).
    """
    if not is_prime(k):
        raise ValueError(f"block grouping needs a prime index, got {k}")
    with mp.workdps(dps + GUARD_DIGITS):
        target = mp.mpf(target_abs_err)
        support = _block_support(g, k)
        period = g.period
        if g.denom_sign == -1 and g.numerator.evaluate(1) != 0:
            raise PoleOnPath(f"series for {g} diverges: pole at x = 1")

        def block(b: int):
            return mp.fsum(mp.mpf(c) / (pos + b * period) for pos, c in support)

        if g.denom_sign == 1:
            return _alternating_sum(block, target)
        return _monotone_sum(block, target)


def _alternating_sum(block, target) -> SeriesDetail:
    blocks: list = []
    partials: list = []
    running = mp.mpf(0)
    count = 64
    best = None
    while count <= MAX_BLOCKS:
        for b in range(len(blocks), count):
            blocks.append(block(b))
            running += blocks[b] if b % 2 == 0 else -blocks[b]
            partials.append(running)
        row = list(partials)
        value = row[-1]
        for depth in range(1, min(EULER_DEPTH, count - 1) + 1):
            row = [(row[i] + row[i + 1]) / 2 for i in range(len(row) - 1)]
            estimate = max(abs(row[-1] - value), _estimate_floor(row[-1]))
            value = row[-1]
            best = SeriesDetail(value, estimate, count, depth)
            if depth >= 3 and estimate < target:
                return best
        count *= 2
    raise ToleranceError(
        f"averaging stalled above {mp.nstr(target, 3)}",
        best_estimate=best.value if best else None,
    )


def _monotone_sum(block, target) -> SeriesDetail:
    tableau: list[list] = []
    partial = mp.mpf(0)
    computed = 0
    best = None
    i = 0
    while 2**i <= MAX_BLOCKS:
        for b in range(computed, 2**i):
            partial += block(b)
        computed = 2**i
        row = [partial]
        for m in range(1, i + 1):
            factor = mp.mpf(2) ** m
            row.append((factor * row[m - 1] - tableau[i - 1][m - 1]) / (factor - 1))
        tableau.append(row)
        if i >= 1:
            estimate = max(abs(row[i] - tableau[i - 1][i - 1]), _estimate_floor(row[i]))
            best = SeriesDetail(row[i], estimate, computed, i)
            if estimate < target:
                return best
        i += 1
    raise ToleranceError(
        f"extrapolation stalled above {mp.nstr(target, 3)}",
        best_estimate=best.value if best else None,
    )


def series_sum(
    g: Integrand, k: int, target_abs_err=mp.mpf("1e-8"), dps: int = DEFAULT_DPS
):
    return series_sum_detail(g, k, target_abs_err, dps).value


_DELTA_PAIRS = (
    ("residue_quadrature", "residue", "quadrature"),
    ("residue_series", "residue", "series"),
    ("series_quadrature", "series", "quadrature"),
    ("quadrature_expected", "quadrature", "expected"),
    ("residue_expected", "residue", "expected"),
    ("series_expected", "series", "expected"),
)


@dataclass(frozen=True)
class EvalReport:
    """Immutable cross-validation record for one formula."""

    formula_id: str
    dps: int
    residue_value: object = None
    quadrature_value: object = None
    series_value: object = None
    expected_value: object = None
    residue_imag_leak: object = None
    deltas: dict = field(default_factory=dict)
    absences: dict = field(default_factory=dict)

    def passes(
        self,
        tol=mp.mpf("1e-10"),
        series_tol=mp.mpf("1e-6"),
        leak_tol=mp.mpf("1e-12"),
    ) -> bool:
        """Cross-method and expected-value agreement at the given bounds.

        A residue value may be legitimately absent (symmetry or denominator
        shape); quadrature and series are always required.
        """
        if self.quadrature_value is None or self.series_value is None:
            return False
        if self.deltas["series_quadrature"] > series_tol:
            return False
        if self.residue_value is not None:
            if self.deltas["residue_quadrature"] > tol:
                return False
            if self.residue_imag_leak > leak_tol:
                return False
        if self.expected_value is not None:
            if self.deltas["quadrature_expected"] > tol:
                return False
        return True

    def to_json(self) -> dict:
        def render(v):
            if v is None:
                return None
            with mp.workdps(self.dps + GUARD_DIGITS):
                return mp.nstr(v, self.dps)

        return {
            "formula_id": self.formula_id,
            "dps": self.dps,
            "residue_value": render(self.residue_value),
            "quadrature_value": render(self.quadrature_value),
            "series_value": render(self.series_value),
            "expected_value": render(self.expected_value),
            "residue_imag_leak": render(self.residue_imag_leak),
            "deltas": {k: render(v) for k, v in sorted(self.deltas.items())},
            "absences": dict(sorted(self.absences.items())),
        }


def evaluate_all(formula, dps: int = DEFAULT_DPS) -> EvalReport:
    """Run every applicable route and compare; failures become absences.

    `formula` supplies .id, .integrand, .k and optionally .expected (an
    object with an evaluate(dps) method).  Component errors never escape:
    each lands in the report's absence map under its route name.
    """
    values: dict = {}
    absences: dict[str, str] = {}
    leak = None
    try:
        detail = residue_eval_detail(formula.integrand, dps)
        values["residue"] = detail.value
        leak = detail.imag_leak
    except (NotResidueEligible, SymmetryError) as exc:
        absences["residue"] = type(exc).__name__
    try:
        values["quadrature"] = quadrature(formula.integrand, dps=dps)
    except (PoleOnPath, ToleranceError) as exc:
        absences["quadrature"] = type(exc).__name__
    try:
        values["series"] = series_sum(formula.integrand, formula.k, dps=dps)
    except (PoleOnPath, ToleranceError, ValueError) as exc:
        absences["series"] = type(exc).__name__
    expected = getattr(formula, "expected", None)
    if expected is not None:
        values["expected"] = expected.evaluate(dps)
    deltas = {}
    with mp.workdps(dps + GUARD_DIGITS):
        for name, a, b in _DELTA_PAIRS:
            if a in values and b in values:
                deltas[name] = abs(values[a] - values[b])
    return EvalReport(
        formula_id=formula.id,
        dps=dps,
        residue_value=values.get("residue"),
        quadrature_value=values.get("quadrature"),
        series_value=values.get("series"),
        expected_value=values.get("expected"),
        residue_imag_leak=leak,
        deltas=deltas,
        absences=absences,
    )
