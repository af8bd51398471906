import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from charseq.numtheory import FactoredModulus, admissible_moduli, factorize, jacobi_symbol, legendre_symbol
from charseq.seqgen import (
    BinarySequence,
    EvenLength,
    LengthMismatch,
    RotationFraction,
    Sequence,
    SequenceError,
    SymmetryClass,
    alternate_signs,
    character_sequence,
    classify_symmetry,
    completion_part,
    double_and_modulate,
    epsilon_sequence,
    jacobi_sequence,
    legendre_sequence,
    legendre_table,
    modified_sequence,
    primitive_character,
    rotate,
)

MODULI = list(admissible_moduli(400))


def test_legendre_table_against_symbol():
    for p in (3, 5, 7, 11, 101):
        assert legendre_table(p).tolist() == [legendre_symbol(a, p) for a in range(p)]


def test_legendre_sequence_p7():
    x = legendre_sequence(7)
    assert x.tolist() == [1, 1, 1, -1, 1, -1, -1]
    assert isinstance(x, BinarySequence) and x.kind == "legendre"


def test_values_are_read_only():
    x = legendre_sequence(7)
    with pytest.raises(ValueError):
        x.values[0] = -1


def test_binary_rejects_zero():
    with pytest.raises(SequenceError):
        BinarySequence([1, 0, -1])
    with pytest.raises(SequenceError):
        Sequence([1, 2])


def test_character_sequence_definition():
    m = factorize(105)
    u = character_sequence(m)
    chi = primitive_character(m)
    assert u[0] == 1 and chi[0] == 0
    assert all(u[j] == jacobi_symbol(j, m) for j in range(1, 105))
    assert np.array_equal(u.values[1:], chi.values[1:])


@pytest.mark.parametrize("m", MODULI[:20], ids=str)
def test_jacobi_product_convention(m):
    j = jacobi_sequence(m, convention="product")
    for k in range(m.n):
        expected = math.prod(1 if k % p == 0 else legendre_symbol(k, p) for p in m.primes)
        assert j[k] == expected


@pytest.mark.parametrize("m", MODULI[:20], ids=str)
def test_jacobi_restricted_convention(m):
    j = jacobi_sequence(m)
    assert j[0] == 1
    for k in range(1, m.n):
        d = math.gcd(k, m.n)
        assert j[k] == jacobi_symbol(k // d, m.n // d)


def test_jacobi_conventions_differ_at_105():
    m = factorize(105)
    a, b = jacobi_sequence(m), jacobi_sequence(m, convention="product")
    # they disagree exactly where chi_{N/d}(d) = -1
    diff = {k for k in range(105) if a[k] != b[k]}
    assert 7 in diff and 6 not in diff
    with pytest.raises(ValueError):
        jacobi_sequence(m, convention="nope")


def test_jacobi_needs_two_primes():
    with pytest.raises(SequenceError):
        jacobi_sequence(FactoredModulus(7, (7,)))


def _v_reference(m: FactoredModulus, j: int) -> int:
    d = math.gcd(j, m.n)
    if j == 0 or d == 1:
        return 0
    cof = m.n // d
    val = jacobi_symbol(j // d, cof) if cof > 1 else 1
    if m.n % 4 != cof % 4:
        val *= (-1) ** (j // d)
    return val


@pytest.mark.parametrize("m", MODULI[::5], ids=str)
def test_completion_part_pointwise(m):
    v = completion_part(m)
    assert v.tolist() == [_v_reference(m, j) for j in range(m.n)]


@pytest.mark.parametrize("m", MODULI, ids=str)
def test_modified_is_binary_and_restricts_to_character(m):
    z = modified_sequence(m)
    u = character_sequence(m)
    assert z.is_binary and z[0] == 1
    coprime = np.gcd(np.arange(m.n), m.n) == 1
    assert np.array_equal(z.values[coprime], u.values[coprime])


def test_modified_subsequences_at_105():
    # along positions k*d the completion reads (-1)^k chi_D(k), D = N/d, because 105 = 1 and D = 3 mod 4
    m = factorize(105)
    z = modified_sequence(m)
    for big_d in (3, 7, 15, 35):
        d = 105 // big_d
        for k in range(1, big_d):
            if math.gcd(k, big_d) == 1:
                assert z[k * d] == (-1) ** k * jacobi_symbol(k, big_d)


@pytest.mark.parametrize("m", MODULI, ids=str)
def test_symmetry_class_follows_n_mod_4(m):
    expected = SymmetryClass.SYMMETRIC if m.n % 4 == 1 else SymmetryClass.ANTISYMMETRIC
    assert classify_symmetry(modified_sequence(m)) is expected
    assert classify_symmetry(character_sequence(m)) is expected


def test_jacobi_105_is_neither():
    assert classify_symmetry(jacobi_sequence(factorize(105))) is SymmetryClass.NEITHER


def test_classify_examples():
    assert classify_symmetry(BinarySequence([1, 1, -1, 1, 1])) is SymmetryClass.NEITHER
    assert classify_symmetry(BinarySequence([1, 1, -1, -1, 1])) is SymmetryClass.SYMMETRIC
    assert classify_symmetry(BinarySequence([1, 1, 1, -1, -1])) is SymmetryClass.ANTISYMMETRIC
    with pytest.raises(EvenLength):
        classify_symmetry(BinarySequence([1, 1]))


def test_alternate_signs():
    x = BinarySequence([1, 1, 1])
    assert alternate_signs(x).tolist() == [1, -1, 1]


def test_rotation_parse_and_offset():
    r = RotationFraction.parse("1/4", 101)
    assert r.t == 25 and r.fraction == Fraction(25, 101)
    assert RotationFraction.parse("25/101", 101).t == 25
    assert RotationFraction(80, 101).offset == Fraction(80, 101) - 1
    assert RotationFraction(0, 7).offset == 0
    for bad in ("0.25", "1e-1", "abc", "1/0"):
        with pytest.raises(SequenceError):
            RotationFraction.parse(bad, 101)


def test_rotate_examples():
    x = legendre_sequence(7)
    y = rotate(x, RotationFraction(2, 7))
    assert y.tolist() == [1, -1, 1, -1, -1, 1, 1]
    assert y.rotation == 2
    assert rotate(x, RotationFraction(0, 7)).tolist() == x.tolist()
    with pytest.raises(LengthMismatch):
        rotate(x, RotationFraction(1, 5))


@given(st.integers(0, 300), st.integers(0, 300))
def test_rotations_compose(a, b):
    x = modified_sequence(factorize(105))
    once = rotate(x, RotationFraction(a + b, 105))
    twice = rotate(rotate(x, RotationFraction(a, 105)), RotationFraction(b, 105))
    assert once.tolist() == twice.tolist() and once.rotation == twice.rotation


def test_epsilon_period_four():
    assert epsilon_sequence(0, 8).tolist() == [1, 1, -1, -1, 1, 1, -1, -1]
    assert epsilon_sequence(1, 8).tolist() == [1, -1, -1, 1, 1, -1, -1, 1]
    with pytest.raises(SequenceError):
        epsilon_sequence(2, 8)


def test_double_and_modulate_small():
    # {x, x} = (+,-,-,+,-,-) times e^(0) = (+,+,-,-,+,+)
    x = BinarySequence([1, -1, -1])
    b = double_and_modulate(x, 0)
    assert b.tolist() == [1, -1, 1, -1, -1, -1]
    assert double_and_modulate(x, 0, -1).tolist() == [-1, 1, -1, 1, 1, 1]
    assert b.kind == "doubled" and b.delta == 0 and len(b) == 6


def test_double_requires_binary_odd():
    with pytest.raises(SequenceError):
        double_and_modulate(character_sequence(factorize(15)), 0)
    with pytest.raises(EvenLength):
        double_and_modulate(BinarySequence([1, -1]), 0)
