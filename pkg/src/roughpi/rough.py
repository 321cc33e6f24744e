"""k-rough numbers, primorials, and modulo-multiplication groups.

A positive integer is k-rough when it has no prime factor smaller than k,
equivalently when it is coprime to the primorial of k.  The units of the
ring of integers modulo that primorial form the modulo-multiplication
group whose order is the Euler totient of the modulus.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt
from typing import Iterator

# OEIS ids of the k-rough sequences, usable for b-file cross-checks.
OEIS_IDS = {
    3: "A005408",
    5: "A007310",
    7: "A007775",
    11: "A008364",
    13: "A008365",
    17: "A008366",
}


class RoughIntegrityError(ValueError):
    """A RoughSet's elements contradict its claimed rough index."""


def is_prime(n: int) -> bool:
    """Deterministic trial-division primality test."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    m = n + 1
    while not is_prime(m):
        m += 1
    return m


def primes_below(bound: int) -> list[int]:
    """All primes p with p < bound, ascending."""
    if bound <= 2:
        return []
    sieve = bytearray([1]) * bound
    sieve[0:2] = b"\x00\x00"
    for p in range(2, isqrt(bound - 1) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [p for p in range(bound) if sieve[p]]


def primorial(k: int) -> int:
    """Product of all primes smaller than k.  primorial(2) == 1."""
    if not is_prime(k):
        raise ValueError(f"k must be prime, got {k}")
    out = 1
    for p in primes_below(k):
        out *= p
    return out


def totient(n: int) -> int:
    """Euler's totient via trial-division factorization."""
    if n < 1:
        raise ValueError(f"totient requires n >= 1, got {n}")
    out = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out -= out // p
            while m % p == 0:
                m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        out -= out // m
    return out


def is_rough(n: int, k: int) -> bool:
    """True iff n has no prime factor below k."""
    if n < 1:
        return False
    return gcd(n, primorial(k)) == 1


def rough_prefix(k: int, limit: int) -> list[int]:
    """All k-rough numbers n with 1 <= n <= limit, ascending.

    Enumerates by the coprime-residue wheel mod primorial(k), so the cost
    is proportional to the output, not to trial division per candidate.
    """
    if limit < 1:
        raise ValueError(f"limit must be >= 1, got {limit}")
    modulus = primorial(k)
    residues = [r for r in range(1, modulus + 1) if gcd(r, modulus) == 1]
    out: list[int] = []
    for base in range(0, limit + 1, modulus):
        for r in residues:
            n = base + r
            if n > limit:
                return out
            out.append(n)
    return out


def first_rough(k: int, count: int) -> list[int]:
    """The first `count` k-rough numbers, ascending."""
    if count < 0:
        raise ValueError(f"count must be nonnegative, got {count}")
    modulus = primorial(k)
    residues = [r for r in range(1, modulus + 1) if gcd(r, modulus) == 1]
    out: list[int] = []
    base = 0
    while len(out) < count:
        for r in residues:
            out.append(base + r)
            if len(out) == count:
                break
        base += modulus
    return out


@dataclass(frozen=True)
class RoughSet:
    """Prefix of the k-rough numbers: every element in [1, limit]."""

    k: int
    limit: int
    elements: tuple[int, ...]

    def __post_init__(self):
        modulus = primorial(self.k)
        for n in self.elements:
            if n < 1 or n > self.limit or gcd(n, modulus) != 1:
                raise RoughIntegrityError(
                    f"element {n} is not {self.k}-rough within limit {self.limit}"
                )
        if list(self.elements) != sorted(set(self.elements)):
            raise RoughIntegrityError("elements must be strictly ascending")


def rough_set(k: int, limit: int) -> RoughSet:
    return RoughSet(k=k, limit=limit, elements=tuple(rough_prefix(k, limit)))


def refine(s: RoughSet, k: int) -> RoughSet:
    """Remove the multiples of k, carrying S_k to the next rough set.

    The input must be the rough set for the same prime k; the result is
    the rough set of the next prime, over the same limit.
    """
    if k != s.k:
        raise RoughIntegrityError(f"set claims index {s.k}, refine called with {k}")
    kept = tuple(n for n in s.elements if n % k != 0)
    return RoughSet(k=next_prime(k), limit=s.limit, elements=kept)


@dataclass(frozen=True)
class Mmg:
    """Multiplicative group of units modulo a primorial."""

    k: int
    modulus: int
    elements: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def multiply(self, a: int, b: int) -> int:
        if a not in self.elements or b not in self.elements:
            raise ValueError(f"{a} or {b} is not a group element")
        r = (a * b) % self.modulus
        # Representatives live in [1, modulus]; only modulus 1 hits r == 0.
        return r if r else self.modulus

    def __contains__(self, a: int) -> bool:
        return a in set(self.elements)


def mmg(k: int) -> Mmg:
    """Group formed by the first totient(primorial(k)) rough numbers mod P.

    Those representatives already lie in [1, modulus], so reduction is the
    identity; the order equals totient(modulus).
    """
    modulus = primorial(k)
    count = totient(modulus)
    reduced = sorted({((n - 1) % modulus) + 1 for n in first_rough(k, count)})
    return Mmg(k=k, modulus=modulus, elements=tuple(reduced))


def bfile_lines(k: int, limit: int) -> Iterator[str]:
    """OEIS b-file style lines 'index value' for the k-rough numbers <= limit."""
    for i, n in enumerate(rough_prefix(k, limit), start=1):
        yield f"{i} {n}"
