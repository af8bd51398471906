"""Exact number-theoretic primitives for squarefree odd moduli.

Everything here works on plain Python integers, so there is no overflow to
guard against; the fast vectorised character tables live in
:mod:`charseq.seqgen` and are cross-checked against these scalar routines.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from math import gcd, isqrt, prod
from typing import Iterator

__all__ = [
    "NumberTheoryError",
    "NotSquarefree",
    "EvenInput",
    "CompositeCertificationFailure",
    "NotCoprime",
    "FactoredModulus",
    "DivisorSet",
    "is_prime",
    "factorize",
    "legendre_symbol",
    "legendre_euler",
    "jacobi_symbol",
    "euler_phi",
    "divisors",
    "mod_inverse",
    "gcd",
    "omega",
    "root_split_exponents",
    "admissible_moduli",
]


class NumberTheoryError(ValueError):
    pass


class NotSquarefree(NumberTheoryError):
    pass


class EvenInput(NumberTheoryError):
    pass


class CompositeCertificationFailure(NumberTheoryError):
    pass


class NotCoprime(NumberTheoryError):
    pass


# Deterministic for every n < 3.3e24, which covers all 64-bit inputs.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_TRIAL_LIMIT = 10**6


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int, rng: random.Random) -> int:
    """Return a non-trivial factor of the odd composite ``n``."""
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if g != n:
            return g


def _prime_factors(n: int) -> list[int]:
    """Prime factors of n with multiplicity (unsorted)."""
    out: list[int] = []
    f = 3
    limit = min(_TRIAL_LIMIT, isqrt(n))
    while f <= limit:
        while n % f == 0:
            out.append(f)
            n //= f
        f += 2
        limit = min(limit, isqrt(n))
    if n == 1:
        return out
    stack = [n]
    rng = random.Random(n)  # seeded so factorisation is reproducible
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out.append(m)
            continue
        d = _pollard_brent(m, rng)
        stack.extend((d, m // d))
    return out


@dataclass(frozen=True)
class FactoredModulus:
    """A squarefree odd integer together with its ascending prime factors."""

    n: int
    primes: tuple[int, ...]

    def __post_init__(self) -> None:
        ps = tuple(int(p) for p in self.primes)
        object.__setattr__(self, "primes", ps)
        if not ps:
            raise NumberTheoryError("a modulus needs at least one prime factor")
        if list(ps) != sorted(set(ps)):
            raise NotSquarefree(f"primes must be distinct and ascending: {ps}")
        if any(p % 2 == 0 for p in ps):
            raise EvenInput(f"even prime factor in {ps}")
        if prod(ps) != self.n:
            raise NumberTheoryError(f"product of {ps} is not {self.n}")
        bad = [p for p in ps if not is_prime(p)]
        if bad:
            raise CompositeCertificationFailure(f"not prime: {bad}")

    @classmethod
    def from_primes(cls, primes) -> "FactoredModulus":
        ps = [int(p) for p in primes]
        if len(set(ps)) != len(ps):
            raise NotSquarefree(f"repeated prime in {ps}")
        ps.sort()
        return cls(prod(ps), tuple(ps))

    @property
    def r(self) -> int:
        return len(self.primes)

    @property
    def p1(self) -> int:
        return self.primes[0]

    def __int__(self) -> int:
        return self.n

    def __str__(self) -> str:
        return "*".join(map(str, self.primes))


@dataclass(frozen=True)
class DivisorSet:
    divisors: tuple[int, ...]

    def __iter__(self) -> Iterator[int]:
        return iter(self.divisors)

    def __len__(self) -> int:
        return len(self.divisors)

    def __contains__(self, d: object) -> bool:
        return d in self.divisors


def factorize(n: int) -> FactoredModulus:
    """Factor a squarefree odd ``n >= 3``.

    Raises EvenInput, NotSquarefree, or CompositeCertificationFailure.
    """
    n = int(n)
    if n % 2 == 0:
        raise EvenInput(f"{n} is even")
    if n < 3:
        raise NumberTheoryError(f"modulus must be >= 3, got {n}")
    ps = _prime_factors(n)
    if len(set(ps)) != len(ps):
        raise NotSquarefree(f"{n} is not squarefree")
    if prod(ps) != n or not all(is_prime(p) for p in ps):
        raise CompositeCertificationFailure(f"could not certify factors {ps} of {n}")
    return FactoredModulus(n, tuple(sorted(ps)))


def legendre_symbol(a: int, p: int) -> int:
    """Legendre symbol (a/p) by quadratic reciprocity; p an odd prime."""
    a %= p
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if p % 8 in (3, 5):
                result = -result
        a, p = p, a
        if a % 4 == 3 and p % 4 == 3:
            result = -result
        a %= p
    return result if p == 1 else 0


def legendre_euler(a: int, p: int) -> int:
    """Euler's criterion; kept as an independent oracle for legendre_symbol."""
    t = pow(a % p, (p - 1) // 2, p)
    return -1 if t == p - 1 else t


def _as_modulus(m) -> FactoredModulus:
    return m if isinstance(m, FactoredModulus) else factorize(m)


def jacobi_symbol(a: int, m) -> int:
    """chi_N(a): product of the Legendre symbols over the prime factors of m."""
    m = _as_modulus(m)
    out = 1
    for p in m.primes:
        out *= legendre_symbol(a, p)
        if out == 0:
            break
    return out


def euler_phi(m) -> int:
    return prod(p - 1 for p in _as_modulus(m).primes)


def divisors(m) -> DivisorSet:
    ps = _as_modulus(m).primes
    ds = {prod(c) for k in range(len(ps) + 1) for c in combinations(ps, k)}
    return DivisorSet(tuple(sorted(ds)))


def mod_inverse(a: int, m: int) -> int:
    if m == 1:
        return 0
    try:
        return pow(a, -1, m)
    except ValueError:
        raise NotCoprime(f"gcd({a}, {m}) = {gcd(a, m)}") from None


def omega(n: int) -> int:
    """Number of distinct prime divisors; n may be any positive integer."""
    if n < 1:
        raise ValueError("omega is defined for positive integers")
    if n == 1:
        return 0
    count = 0
    if n % 2 == 0:
        count = 1
        while n % 2 == 0:
            n //= 2
    if n > 1:
        count += len(set(_prime_factors(n)))
    return count


def root_split_exponents(moduli) -> tuple[int, ...]:
    """Exponents k_i with xi_N^k = prod_i xi_{N_i}^{k k_i} for coprime N_i.

    k_i is the inverse of N/N_i modulo N_i, so each is a unit mod N_i.
    """
    moduli = [int(x) for x in moduli]
    n = prod(moduli)
    return tuple(mod_inverse((n // ni) % ni, ni) if ni > 1 else 0 for ni in moduli)


def admissible_moduli(limit: int, min_r: int = 2) -> Iterator[FactoredModulus]:
    """Every squarefree odd N <= limit with at least ``min_r`` prime factors."""
    for n in range(3, limit + 1, 2):
        try:
            m = factorize(n)
        except NotSquarefree:
            continue
        if m.r >= min_r:
            yield m

