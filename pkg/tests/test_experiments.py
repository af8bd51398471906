import json
import math
from fractions import Fraction

import pytest

from charseq.correlation import merit_factor
from charseq.experiments import (
    BOUND,
    IDENTITY,
    MEASURED,
    AuditFinding,
    ConvergenceReport,
    NotSymmetricOrAntisymmetric,
    SweepRow,
    character_bound_check,
    character_sum_check,
    closed_form_pq_check,
    common_factor_check,
    convergence_study,
    correlation_energy_audit,
    doubled_merit_report,
    doubling_identity_check,
    emit_csv,
    identity_suite,
    per_shift_pv_audit,
    predicted_inverse_merit,
    rotation_sweep,
    weil_bound_audit,
    write_manifest,
)
from charseq.numtheory import factorize
from charseq.seqgen import jacobi_sequence, modified_sequence


def test_predicted_curve():
    assert predicted_inverse_merit(Fraction(1, 4)) == Fraction(1, 6)
    assert predicted_inverse_merit(0) == Fraction(2, 3)
    assert predicted_inverse_merit(Fraction(-1, 4)) == Fraction(1, 6)
    assert predicted_inverse_merit(0.5) == pytest.approx(2 / 3)
    with pytest.raises(ValueError):
        predicted_inverse_merit(Fraction(3, 4))


def test_rotation_sweep_rows():
    rows = rotation_sweep(factorize(101), 8, family="legendre")
    assert [r.t for r in rows] == [0, 13, 25, 38, 51, 63, 76, 88]
    assert all(-Fraction(1, 2) < r.f <= Fraction(1, 2) for r in rows)
    for r in rows:
        assert r.residual == pytest.approx(r.inv_F - r.F_r)


def test_rotation_sweep_threads_deterministic():
    m = factorize(15 * 7)
    assert rotation_sweep(m, 16, threads=1) == rotation_sweep(m, 16, threads=4)


def test_doubled_sign_flip_invariant():
    m = factorize(143)
    assert doubled_merit_report(m, 0, 1).value == doubled_merit_report(m, 0, -1).value


@pytest.mark.parametrize("n", [15, 105])
def test_doubling_identity_on_z(n):
    z = modified_sequence(factorize(n))
    for delta in (0, 1):
        f = doubling_identity_check(z, delta, 1)
        assert f.kind == IDENTITY and f.passed and f.lhs == f.rhs


def test_doubling_identity_rejects_jacobi():
    with pytest.raises(NotSymmetricOrAntisymmetric):
        doubling_identity_check(jacobi_sequence(factorize(105)), 0)


def test_character_sum_identity():
    assert character_sum_check(7).passed


def test_closed_form_pq():
    assert closed_form_pq_check(factorize(15)).passed
    with pytest.raises(ValueError):
        closed_form_pq_check(factorize(105))


def test_energy_at_15():
    findings = {f.lemma: f for f in correlation_energy_audit(factorize(15))}
    # 4 shifts at -2, 2 at -4 and 8 at +1
    assert findings["sum-PU2"].lhs == 56
    assert findings["sum-PU2"].constant == pytest.approx(56 / (225 / 3))
    assert all(f.passed for f in findings.values())


def test_character_bound_on_u_shifts_by_chi():
    # U differs from the bare character only at j = 0, adding chi(i) + chi(-i) to P(i)
    assert character_bound_check(factorize(15)).passed
    assert character_bound_check(factorize(15), "U").passed
    assert not character_bound_check(factorize(21), "U").passed
    assert character_bound_check(factorize(21)).passed


def test_per_shift_partition_and_classes():
    findings = per_shift_pv_audit(factorize(105))
    part = findings[0]
    assert part.lemma == "pv-class-partition" and part.passed and part.rhs == 104
    coprime = next(f for f in findings if f.lemma == "pv-coprime")
    assert "shifts=48" in coprime.instance


def test_weil_small():
    findings = weil_bound_audit(factorize(15), 1)
    weil = next(f for f in findings if f.lemma == "weil")
    assert weil.kind == BOUND and weil.passed
    assert weil.rhs == pytest.approx(2 * 4 * math.sqrt(15) * math.log(15))
    assert weil.lhs >= 1


def test_weil_degree_uses_gcd():
    findings = weil_bound_audit(factorize(105), 35)
    inst = [f.instance for f in findings if f.lemma == "degree2-plain" and "k=35" in f.instance]
    assert inst == ["N=105 k=35 d=35"]
    assert next(f for f in findings if f.instance == "N=105 k=35").kind == MEASURED


def test_common_factor():
    assert common_factor_check(105).passed


@pytest.mark.parametrize("n", [15, 7, 105, 1155])
def test_identity_suite_clean(n):
    bad = [f for f in identity_suite(factorize(n)) if f.gating and not f.passed]
    assert bad == []


def test_finding_gating():
    assert AuditFinding("a", "x", IDENTITY, 0, 0, True).gating
    assert AuditFinding("a", "x", BOUND, 0, 0, True).gating
    assert not AuditFinding("a", "x", MEASURED, 0, 0, True).gating


def test_convergence_rows_sorted():
    rep = convergence_study([factorize(143), factorize(15)])
    ns = [r.N for r in rep.rows]
    assert ns == sorted(ns)
    # floor(15/4) = 3, so f = 1/5 and F_r = 2/3 - 4/5 + 8/25
    assert rep.value(15, "F_r") == pytest.approx(14 / 75)
    z = modified_sequence(factorize(143))
    assert rep.value(143, "F_b") == doubled_merit_report(factorize(143)).value
    assert rep.value(143, "inv_F") != float(merit_factor(z).inverse)


def test_emit_csv_deterministic(tmp_path):
    rows = rotation_sweep(factorize(21), 4)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    emit_csv(rows, a)
    emit_csv(rows, b)
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_bytes().split(b"\r\n")
    assert lines[0] == b"N,primes,t,f,inv_F,F_r,residual"
    assert lines[1].startswith(b"21,3*7,0,0,")
    assert len(lines) == 6 and lines[-1] == b""


def test_emit_csv_empty(tmp_path):
    path = tmp_path / "e.csv"
    emit_csv([], path, SweepRow)
    assert path.read_bytes() == b"N,primes,t,f,inv_F,F_r,residual\r\n"
    with pytest.raises(ValueError):
        emit_csv([], path)
    emit_csv(ConvergenceReport(()), path)
    assert path.read_bytes().startswith(b"N,p1,quantity")


def test_float_precision(tmp_path):
    rows = [AuditFinding("x", "i", MEASURED, 1 / 3, 2.0, True, math.pi)]
    path = tmp_path / "f.csv"
    emit_csv(rows, path)
    assert path.read_text().splitlines()[1] == "x,i,measured,0.333333333333,2,true,3.14159265359"


def test_manifest(tmp_path):
    path = tmp_path / "s.csv"
    emit_csv([], path, SweepRow)
    written = write_manifest(path, {"grid": 4, "command": "sweep"})
    assert json.loads(open(written).read()) == {"command": "sweep", "grid": 4}


def test_doubled_merit_factor_at_larger_n():
    # not an acceptance gate: the doubled z reaches the 6.0 neighbourhood only around N ~ 10^6
    row = doubled_merit_report(factorize(1009 * 1013))
    assert 5.4 <= row.value <= 6.6
