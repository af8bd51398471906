"""Acceptance criteria, one test (or group) per criterion.

Run directly (``python3 tests/test_acceptance.py``) or through pytest; either
way a PASS/FAIL line per criterion is printed at the end of the session.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from charseq.correlation import (
    CorrelationKind,
    autocorrelation,
    dft_at_nodes,
    fast_correlation,
    interpolated_minus,
    merit_factor,
    merit_factor_via_dft,
)
from charseq.experiments import (
    BOUND,
    character_bound_check,
    character_sum_check,
    closed_form_pq_check,
    convergence_study,
    doubling_identity_check,
    gauss_magnitude_check,
    product_lemma_check,
    rotation_sweep,
    weil_bound_audit,
)
from charseq.numtheory import admissible_moduli, factorize
from charseq.seqgen import (
    SymmetryClass,
    classify_symmetry,
    jacobi_sequence,
    legendre_sequence,
    modified_sequence,
)

ODD_PRIMES_BELOW_200 = [m.n for m in admissible_moduli(199, min_r=1) if m.r == 1]
Z_FAMILY = [factorize(11 * 13), factorize(101 * 103), factorize(311 * 313)]


def test_criterion_01_character_sum():
    start = time.perf_counter()
    findings = [character_sum_check(p) for p in ODD_PRIMES_BELOW_200]
    elapsed = time.perf_counter() - start
    assert len(findings) == 45
    assert all(f.passed for f in findings)
    assert elapsed < 1.0


def test_criterion_02_product_lemma():
    start = time.perf_counter()
    for n in (15, 21, 35, 105, 1155):
        for factors in ("character", "legendre"):
            f = product_lemma_check(factorize(n), factors)
            assert f.passed, f
    assert time.perf_counter() - start < 5.0


def test_criterion_03_closed_form_pq():
    for n in (15, 21, 35, 77):
        assert closed_form_pq_check(factorize(n)).passed


JACOBI_105 = {
    3: 1, 5: 1, 6: -1, 7: 1, 9: 1, 10: -1, 12: 1, 14: 1, 15: 1,
    90: -1, 91: -1, 93: -1, 95: -1, 96: -1, 98: -1, 99: 1, 100: 1, 102: -1,
}


def test_criterion_04_jacobi_values_105():
    j = jacobi_sequence(factorize(105))
    assert {k: j[k] for k in JACOBI_105} == JACOBI_105


@pytest.mark.parametrize("big_d", [3, 7, 15, 35])
def test_criterion_04_modified_rows_105(big_d):
    # row for D: positions 0, d, 2d, ... with d = 105 / D read (1, (-1)^k chi_D(k), ...)
    from charseq.numtheory import jacobi_symbol

    z = modified_sequence(factorize(105))
    d = 105 // big_d
    row = [z[k * d] for k in range(big_d)]
    expected = [1] + [(-1) ** k * jacobi_symbol(k, big_d) for k in range(1, big_d)]
    mask = [k == 0 or math.gcd(k, big_d) == 1 for k in range(big_d)]
    assert [r for r, keep in zip(row, mask) if keep] == [e for e, keep in zip(expected, mask) if keep]


def test_criterion_05_symmetry(small_moduli):
    residues = set()
    for m in small_moduli:
        expected = SymmetryClass.SYMMETRIC if m.n % 4 == 1 else SymmetryClass.ANTISYMMETRIC
        assert classify_symmetry(modified_sequence(m)) is expected, m
        residues.add(m.n % 4)
    assert residues == {1, 3}


def test_criterion_06_character_bound():
    moduli = list(admissible_moduli(1155, min_r=1))
    assert len(moduli) > 400
    bad = [str(m) for m in moduli if not character_bound_check(m).passed]
    assert bad == []


def test_criterion_07_doubling_identity(small_moduli):
    seqs = [modified_sequence(m) for m in small_moduli]
    seqs += [legendre_sequence(p) for p in ODD_PRIMES_BELOW_200]
    for x in seqs:
        for delta in (0, 1):
            for sign in (1, -1):
                f = doubling_identity_check(x, delta, sign)
                assert f.passed, f


def test_criterion_08_gauss_magnitudes():
    for n in (15, 105, 1155):
        assert gauss_magnitude_check(factorize(n), rtol=1e-9).passed


def test_criterion_08_merit_via_dft():
    rng = np.random.default_rng(20240611)
    seqs = [rng.choice([-1, 1], size=int(rng.integers(2, 513))) for _ in range(100)]
    seqs.append(modified_sequence(factorize(105)).as_int64())
    for x in seqs:
        exact = float(merit_factor(x).merit_factor)
        assert merit_factor_via_dft(x).merit_factor == pytest.approx(exact, rel=1e-9)


def test_criterion_08_interpolation():
    rng = np.random.default_rng(7)
    seqs = [rng.choice([-1, 1], size=2 * int(rng.integers(1, 256)) + 1) for _ in range(20)]
    seqs.append(modified_sequence(factorize(105)).as_int64())
    for x in seqs:
        direct = dft_at_nodes(x).minus
        interp = interpolated_minus(x)
        scale = max(1.0, float(np.max(np.abs(direct))))
        assert np.max(np.abs(direct - interp)) / scale < 1e-9


def test_criterion_09_fast_equals_naive():
    rng = np.random.default_rng(4096)
    start = time.perf_counter()
    for _ in range(1000):
        n = int(rng.integers(1, 4097))
        x = rng.choice([-1, 1], size=n)
        for kind in CorrelationKind:
            assert fast_correlation(x, x, kind) == autocorrelation(x, kind, "naive")
    assert time.perf_counter() - start < 30.0


@pytest.fixture(scope="module")
def asymptotic_timer():
    start = time.perf_counter()
    yield
    assert time.perf_counter() - start < 120.0


@pytest.fixture(scope="module")
def z_family_report():
    return convergence_study(Z_FAMILY, Fraction(1, 4))


def test_criterion_10a_legendre_quarter_rotation(asymptotic_timer):
    rep = convergence_study([factorize(p) for p in (101, 1009, 10007)], Fraction(1, 4))
    gap = {n: abs(v - 1 / 6) for n, v in rep.series("inv_F")}
    assert gap[10007] <= 0.02
    assert gap[10007] < gap[101]


def test_criterion_10b_sweep_residual(asymptotic_timer):
    rows = rotation_sweep(factorize(10007), 64, family="legendre")
    assert len(rows) == 64
    assert max(abs(r.residual) for r in rows) <= 0.05


def test_criterion_10c_doubled_merit_factor(asymptotic_timer, z_family_report):
    fb = dict(z_family_report.series("F_b"))
    gaps = [abs(fb[m.n] - 6) for m in Z_FAMILY]
    assert gaps[0] > gaps[1] > gaps[2]
    assert 5.4 <= fb[101 * 103] <= 6.6


def test_criterion_10d_periodic_energy_bounded(asymptotic_timer, z_family_report):
    # sum P_z^2 / (N^2 / p1) must not blow up along the family
    consts = [z_family_report.value(m.n, "sum_Pz2_over_N2") * m.p1 for m in Z_FAMILY]
    assert all(math.isfinite(c) for c in consts)
    assert all(b <= 1.5 * a for a, b in zip(consts, consts[1:]))


@pytest.mark.parametrize("n", [15, 21, 35, 105])
def test_criterion_11_weil_windows(n):
    findings = weil_bound_audit(factorize(n), n - 1, exhaustive=True)
    gating = [f for f in findings if f.kind == BOUND]
    assert gating
    assert all(f.passed for f in gating)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
