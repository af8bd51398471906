"""Character-derived sequence families and their elementary transforms.

Sequences are immutable: the value arrays are read-only int8 numpy arrays and
every transform returns a new object.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np

from .numtheory import FactoredModulus, divisors, is_prime

__all__ = [
    "SequenceError",
    "LengthMismatch",
    "EvenLength",
    "SymmetryClass",
    "RotationFraction",
    "Sequence",
    "TernarySequence",
    "BinarySequence",
    "legendre_table",
    "character_values",
    "character_sequence",
    "primitive_character",
    "legendre_sequence",
    "jacobi_sequence",
    "completion_part",
    "modified_sequence",
    "alternate_signs",
    "rotate",
    "epsilon_sequence",
    "double_and_modulate",
    "classify_symmetry",
]


class SequenceError(ValueError):
    pass


class LengthMismatch(SequenceError):
    pass


class EvenLength(SequenceError):
    pass


class SymmetryClass(enum.Enum):
    SYMMETRIC = "Symmetric"
    ANTISYMMETRIC = "Antisymmetric"
    NEITHER = "Neither"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class RotationFraction:
    """A cyclic shift by ``t`` positions of a length-``n`` sequence.

    ``t`` is always reduced into ``[0, n)``.
    """

    t: int
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise SequenceError("rotation denominator must be positive")
        object.__setattr__(self, "t", int(self.t) % int(self.n))

    @classmethod
    def from_fraction(cls, r, n: int) -> "RotationFraction":
        """Shift of floor(n*r) positions for a rational r."""
        r = Fraction(r)
        return cls(math.floor(n * r), n)

    @classmethod
    def parse(cls, text: str, n: int) -> "RotationFraction":
        """Parse ``t/N`` (exact shift) or a symbolic fraction such as ``1/4``.

        A denominator equal to ``n`` is read as a literal shift; anything else
        is treated as the fraction r. Floats are rejected.
        """
        text = text.strip()
        if "." in text or "e" in text.lower():
            raise SequenceError(f"rotation must be an exact rational, got {text!r}")
        try:
            num, _, den = text.partition("/")
            num_i, den_i = int(num), int(den) if den else 1
        except ValueError:
            raise SequenceError(f"bad rotation {text!r}") from None
        if den_i <= 0:
            raise SequenceError(f"bad rotation denominator in {text!r}")
        if den_i == n:
            return cls(num_i, n)
        return cls.from_fraction(Fraction(num_i, den_i), n)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.t, self.n)

    @property
    def offset(self) -> Fraction:
        """t/n canonicalised into (-1/2, 1/2]."""
        f = Fraction(self.t, self.n)
        return f - 1 if f > Fraction(1, 2) else f

    def __str__(self) -> str:
        return f"{self.t}/{self.n}"


@dataclass(frozen=True, eq=False)
class Sequence:
    """Finite integer sequence plus the provenance needed to serialise it.

    ``kind`` is one of character, legendre, jacobi, modified, doubled or
    custom; ``modulus`` is the odd modulus the construction started from.
    """

    values: np.ndarray
    kind: str = "custom"
    modulus: Optional[FactoredModulus] = None
    rotation: int = 0
    delta: Optional[int] = None
    sign: int = 1

    def __post_init__(self) -> None:
        v = np.array(self.values, dtype=np.int8)
        if v.ndim != 1:
            raise SequenceError("sequence values must be one-dimensional")
        if v.size and (np.abs(v) > 1).any():
            raise SequenceError("sequence entries must lie in {-1, 0, +1}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        self._validate()

    def _validate(self) -> None:
        pass

    def __len__(self) -> int:
        return int(self.values.size)

    def __getitem__(self, j):
        return int(self.values[j]) if isinstance(j, (int, np.integer)) else self.values[j]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Sequence):
            return NotImplemented
        return (
            np.array_equal(self.values, other.values)
            and self.kind == other.kind
            and self.modulus == other.modulus
            and self.rotation == other.rotation
            and self.delta == other.delta
            and self.sign == other.sign
        )

    __hash__ = None  # type: ignore[assignment]

    @property
    def is_binary(self) -> bool:
        return bool(self.values.size) and not (self.values == 0).any()

    def as_int64(self) -> np.ndarray:
        return self.values.astype(np.int64)

    def tolist(self) -> list[int]:
        return [int(x) for x in self.values]


class TernarySequence(Sequence):
    pass


class BinarySequence(Sequence):
    def _validate(self) -> None:
        if (self.values == 0).any():
            raise SequenceError("binary sequence contains a zero entry")


def _wrap(values, like: Sequence, **changes) -> Sequence:
    values = np.asarray(values)
    cls = BinarySequence if values.size and not (values == 0).any() else TernarySequence
    base = dict(
        kind=like.kind,
        modulus=like.modulus,
        rotation=like.rotation,
        delta=like.delta,
        sign=like.sign,
    )
    base.update(changes)
    return cls(values, **base)


@lru_cache(maxsize=256)
def _legendre_table_cached(p: int) -> np.ndarray:
    t = np.full(p, -1, dtype=np.int8)
    k = np.arange(1, p, dtype=np.int64)
    t[(k * k) % p] = 1
    t[0] = 0
    t.setflags(write=False)
    return t


def legendre_table(p: int) -> np.ndarray:
    """chi_p(j) for j in [0, p), built from the set of squares mod p."""
    if p < 3 or p % 2 == 0 or not is_prime(p):
        raise SequenceError(f"{p} is not an odd prime")
    return _legendre_table_cached(int(p))


def character_values(primes, length: int) -> np.ndarray:
    """chi_N(j) for j in [0, length) with N the product of ``primes``."""
    out = np.ones(length, dtype=np.int8)
    idx = np.arange(length, dtype=np.int64)
    for p in primes:
        out *= legendre_table(p)[idx % p]
    return out


def primitive_character(m: FactoredModulus) -> TernarySequence:
    """The bare character chi_N over one period, with value 0 at j = 0."""
    return TernarySequence(character_values(m.primes, m.n), kind="character", modulus=m)


def character_sequence(m: FactoredModulus) -> TernarySequence:
    """U: chi_N with the j = 0 entry set to +1."""
    v = character_values(m.primes, m.n)
    v[0] = 1
    return TernarySequence(v, kind="character", modulus=m)


def legendre_sequence(p) -> BinarySequence:
    m = p if isinstance(p, FactoredModulus) else FactoredModulus(int(p), (int(p),))
    if m.r != 1:
        raise SequenceError("a Legendre sequence needs a prime length")
    v = legendre_table(m.n).copy()
    v[0] = 1
    return BinarySequence(v, kind="legendre", modulus=m)


def jacobi_sequence(m: FactoredModulus, convention: str = "restricted") -> BinarySequence:
    """Binary completion of chi_N that agrees with it on units mod N.

    ``restricted``: J_j = chi_{N/d}(j/d) where gcd(j, N) = d > 1, i.e. each
    gcd class carries the character of the cofactor read at j/d.
    ``product``: the product of Legendre sequences, each factor read as +1
    where p | j, which gives chi_{N/d}(j) instead. Both set J_0 = +1.
    """
    if m.r < 2:
        raise SequenceError("a Jacobi sequence needs at least two prime factors")
    if convention == "restricted":
        out = character_sequence(m).values + _gcd_class_fill(m, twist=False)
    elif convention == "product":
        out = np.ones(m.n, dtype=np.int8)
        idx = np.arange(m.n, dtype=np.int64)
        for p in m.primes:
            t = legendre_table(p).copy()
            t[0] = 1
            out *= t[idx % p]
    else:
        raise ValueError(f"unknown convention {convention!r}")
    return BinarySequence(out, kind="jacobi", modulus=m)


def _gcd_class_fill(m: FactoredModulus, twist: bool) -> np.ndarray:
    """chi_{N/d}(j/d) on each class gcd(j, N) = d, 1 < d < N; zero elsewhere.

    With ``twist`` the class is multiplied by (-1)^(j/d) whenever
    N and N/d differ mod 4.
    """
    n = m.n
    v = np.zeros(n, dtype=np.int8)
    for d in divisors(m):
        if d in (1, n):
            continue
        cofactor = n // d
        sub = FactoredModulus.from_primes([p for p in m.primes if cofactor % p == 0])
        k = np.arange(1, cofactor, dtype=np.int64)
        chi = character_values(sub.primes, cofactor)[1:]
        keep = chi != 0  # exactly the k with gcd(k, N/d) = 1, i.e. gcd(kd, N) = d
        vals = chi[keep]
        if twist and n % 4 != cofactor % 4:
            vals = np.where(k[keep] % 2 == 0, vals, -vals).astype(np.int8)
        v[d * k[keep]] = vals
    return v


def completion_part(m: FactoredModulus) -> TernarySequence:
    """v: the values written at the positions where gcd(j, N) > 1.

    Zero where gcd(j, N) = 1 and at j = 0.
    """
    if m.r < 2:
        raise SequenceError("the modified construction needs at least two prime factors")
    return TernarySequence(_gcd_class_fill(m, twist=True), kind="modified", modulus=m)


def modified_sequence(m: FactoredModulus) -> BinarySequence:
    """z = U + v, a +-1 completion of the character with U's symmetry."""
    z = character_sequence(m).values + completion_part(m).values
    return BinarySequence(z, kind="modified", modulus=m)


def alternate_signs(x: Sequence) -> Sequence:
    """beta_j = (-1)^j x_j."""
    signs = np.where(np.arange(len(x)) % 2 == 0, 1, -1).astype(np.int8)
    return _wrap(x.values * signs, x)


def rotate(x: Sequence, rot: RotationFraction) -> Sequence:
    """y_j = x_{(j + t) mod N}."""
    if rot.n != len(x):
        raise LengthMismatch(f"rotation is for length {rot.n}, sequence has {len(x)}")
    return _wrap(np.roll(x.values, -rot.t), x, rotation=(x.rotation + rot.t) % len(x))


def epsilon_sequence(delta: int, length: int) -> BinarySequence:
    """e_j = (-1)^binom(j + delta, 2)."""
    if delta not in (0, 1):
        raise SequenceError("delta must be 0 or 1")
    if length % 2:
        raise SequenceError("the modulating sequence has even length")
    j = np.arange(length, dtype=np.int64) + delta
    parity = (j * (j - 1) // 2) % 2
    return BinarySequence(np.where(parity == 0, 1, -1), delta=delta)


def double_and_modulate(x: Sequence, delta: int, sign: int = 1) -> BinarySequence:
    """b = {x, x} * (sign * e^(delta)), of length 2N."""
    if sign not in (1, -1):
        raise SequenceError("sign must be +1 or -1")
    if not x.is_binary:
        raise SequenceError("doubling needs a +-1 sequence")
    if len(x) % 2 == 0:
        raise EvenLength("doubling is defined for odd lengths")
    e = epsilon_sequence(delta, 2 * len(x)).values
    b = sign * np.tile(x.values, 2) * e
    return BinarySequence(
        b, kind="doubled", modulus=x.modulus, rotation=x.rotation, delta=delta, sign=sign
    )


def classify_symmetry(x: Sequence) -> SymmetryClass:
    n = len(x)
    if n % 2 == 0:
        raise EvenLength("symmetry classes are defined for odd lengths")
    head = x.values[1:]
    mirror = head[::-1]
    if np.array_equal(head, mirror):
        return SymmetryClass.SYMMETRIC
    if np.array_equal(head, -mirror):
        return SymmetryClass.ANTISYMMETRIC
    return SymmetryClass.NEITHER
