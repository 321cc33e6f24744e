"""Label a numeric value with a closed form from a finite basis.

The basis covers exactly the shapes these integrals take: q*pi*sqrt(r) for
a short list of radicands r (plain squarefree d or a + b*sqrt(c)),
q*sqrt(s)*pi*trig(p*pi/m), and the single log constant q*sqrt(3)*log(2+sqrt(3)).
A general integer-relation engine would be over-scope and could false-match.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from mpmath import mp

GUARD_DIGITS = 10
DENOMINATOR_BOUND = 10_000
MIN_TOL = mp.mpf("1e-20")


class AmbiguousMatch(ValueError):
    """More than one distinct basis form fits within tolerance."""

    def __init__(self, matches):
        self.matches = tuple(matches)
        super().__init__(
            "value matches several forms: "
            + ", ".join(m.canonical() for m in self.matches)
        )


class Radical(NamedTuple):
    """a + b*sqrt(c); a plain integer d is (d, 0, 0)."""

    a: int
    b: int
    c: int


# search order: the log constant, then plain and nested radicals, then the
# trig kernels; first verified match wins
RADICANDS = (
    Radical(1, 0, 0),
    Radical(2, 0, 0),
    Radical(3, 0, 0),
    Radical(5, 0, 0),
    Radical(6, 0, 0),
    Radical(10, 0, 0),
    Radical(15, 0, 0),
    Radical(30, 0, 0),
    Radical(25, -2, 5),
    Radical(25, 2, 5),
    Radical(1, 1, 2),
)

TRIG_KERNELS = (
    ("cos", 1, 10),
    ("sin", 1, 5),
    ("sin", 1, 10),
    ("cos", 1, 5),
    ("cos", 1, 12),
    ("sin", 1, 12),
)

TRIG_SCALES = (1, 3)


def _radical_value(r: Radical):
    if r.b == 0:
        return mp.sqrt(r.a)
    return mp.sqrt(r.a + r.b * mp.sqrt(r.c))


@dataclass(frozen=True)
class ClosedForm:
    """q times one basis kernel, serialized as a canonical expression."""

    kind: str
    q: Fraction
    radicand: Radical | None = None
    trig: str | None = None
    trig_scale: int = 1
    p: int | None = None
    m: int | None = None

    def __post_init__(self):
        if self.kind not in ("pi_sqrt", "pi_trig", "log_form"):
            raise ValueError(f"unknown kind {self.kind!r}")
        if self.kind == "pi_sqrt":
            if self.radicand is None:
                raise ValueError("pi_sqrt needs a radicand")
        if self.kind == "pi_trig":
            if self.trig not in ("cos", "sin"):
                raise ValueError(f"trig must be cos or sin, got {self.trig!r}")
            if self.trig_scale not in TRIG_SCALES:
                raise ValueError(f"trig scale must be 1 or 3, got {self.trig_scale}")
            if not self.p or not self.m:
                raise ValueError("pi_trig needs an angle p*pi/m")

    def evaluate(self, dps: int = 30):
        with mp.workdps(dps + GUARD_DIGITS):
            q = mp.mpf(self.q.numerator) / self.q.denominator
            if self.kind == "log_form":
                return q * mp.sqrt(3) * mp.log(2 + mp.sqrt(3))
            if self.kind == "pi_sqrt":
                return q * mp.pi * _radical_value(self.radicand)
            angle = mp.mpf(self.p) / self.m
            trig = mp.cospi(angle) if self.trig == "cos" else mp.sinpi(angle)
            return q * mp.sqrt(self.trig_scale) * mp.pi * trig

    def canonical(self) -> str:
        num, den = self.q.numerator, self.q.denominator
        if self.kind == "log_form":
            core = "sqrt(3)" if num == 1 else f"{num}*sqrt(3)"
            if den > 1:
                core = f"{core}/{den}"
            return f"({core})*log(2+sqrt(3))"
        if self.kind == "pi_sqrt":
            a, b, c = self.radicand
            if b == 0:
                head = "pi" if a == 1 else f"sqrt({a})*pi"
                if num != 1:
                    head = f"{num}*{head}"
                return head if den == 1 else f"{head}/{den}"
            inner = f"sqrt({c})" if abs(b) == 1 else f"{abs(b)}*sqrt({c})"
            nested = f"sqrt({a}{'+' if b > 0 else '-'}{inner})"
            head = "pi" if num == 1 else f"{num}*pi"
            if den > 1:
                head = f"{head}/{den}"
            return f"{head}*{nested}"
        angle = f"pi/{self.m}" if self.p == 1 else f"{self.p}*pi/{self.m}"
        head = "pi" if self.trig_scale == 1 else f"sqrt({self.trig_scale})*pi"
        if num != 1:
            head = f"{num}*{head}"
        if den > 1:
            head = f"{head}/{den}"
        return f"{head}*{self.trig}({angle})"

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind, "q": [self.q.numerator, self.q.denominator]}
        if self.kind == "pi_sqrt":
            out["radicand"] = list(self.radicand)
        elif self.kind == "pi_trig":
            out["trig"] = self.trig
            out["trig_scale"] = self.trig_scale
            out["p"] = self.p
            out["m"] = self.m
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ClosedForm":
        q = Fraction(data["q"][0], data["q"][1])
        kind = data["kind"]
        if kind == "pi_sqrt":
            return cls(kind=kind, q=q, radicand=Radical(*data["radicand"]))
        if kind == "pi_trig":
            return cls(
                kind=kind,
                q=q,
                trig=data["trig"],
                trig_scale=data["trig_scale"],
                p=data["p"],
                m=data["m"],
            )
        return cls(kind=kind, q=q)


def pi_sqrt(q, radicand=1) -> ClosedForm:
    if isinstance(radicand, int):
        radicand = Radical(radicand, 0, 0)
    elif not isinstance(radicand, Radical):
        radicand = Radical(*radicand)
    return ClosedForm(kind="pi_sqrt", q=Fraction(q), radicand=radicand)


def pi_trig(q, trig: str, p: int, m: int, scale: int = 1) -> ClosedForm:
    return ClosedForm(
        kind="pi_trig", q=Fraction(q), trig=trig, trig_scale=scale, p=p, m=m
    )


def log_form(q) -> ClosedForm:
    return ClosedForm(kind="log_form", q=Fraction(q))


def _basis():
    yield "log_form", lambda: mp.sqrt(3) * mp.log(2 + mp.sqrt(3)), log_form
    for radicand in RADICANDS:
        yield (
            "pi_sqrt",
            lambda r=radicand: mp.pi * _radical_value(r),
            lambda q, r=radicand: pi_sqrt(q, r),
        )
    for trig, p, m in TRIG_KERNELS:
        for scale in TRIG_SCALES:
            yield (
                "pi_trig",
                lambda t=trig, pp=p, mm=m, s=scale: mp.sqrt(s)
                * mp.pi
                * (mp.cospi if t == "cos" else mp.sinpi)(mp.mpf(pp) / mm),
                lambda q, t=trig, pp=p, mm=m, s=scale: pi_trig(q, t, pp, mm, scale=s),
            )


def recognize(v, tol=mp.mpf("1e-10"), dps: int = 30):
    """First basis form matching v, or None; all matches must agree.

    Each candidate's rational coefficient is recovered by continued-fraction
    rounding of v over the kernel value (denominators up to 10^4), then the
    rebuilt form must match within tol and survive a re-evaluation at 20
    extra digits within tol/10.
    """
    tol = mp.mpf(tol)
    if tol < MIN_TOL:
        raise ValueError(f"tolerance below {mp.nstr(MIN_TOL, 3)} is not supported")
    v = mp.mpf(v)
    if not mp.isfinite(v):
        raise ValueError("value must be finite")
    matches = []
    with mp.workdps(dps + GUARD_DIGITS):
        for _, kernel, make in _basis():
            ratio = v / kernel()
            q = Fraction(float(ratio)).limit_denominator(DENOMINATOR_BOUND)
            if q == 0:
                continue
            form = make(q)
            if abs(form.evaluate(dps) - v) >= tol:
                continue
            if abs(form.evaluate(dps + 20) - v) >= tol / 10:
                continue
            matches.append(form)
    if len(matches) > 1:
        raise AmbiguousMatch(matches)
    return matches[0] if matches else None
