"""Desk-scale reproduction of the asymptotic merit-factor behaviour, plus audits.

Audit findings come in three kinds:

* ``identity`` -- an exact equality that must hold,
* ``bound`` -- a proven inequality with an explicit right-hand side,
* ``measured`` -- an asymptotic "<<" statement whose implicit constant is only
  reported (lhs / envelope), never judged against an assumed value.

Only the first two can fail an audit.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence as Seq, TypeVar

import numpy as np

from .correlation import (
    CorrelationKind,
    autocorrelation,
    dft_at_nodes,
    merit_factor,
)
from .numtheory import (
    FactoredModulus,
    divisors,
    euler_phi,
    root_split_exponents,
)
from .seqgen import (
    BinarySequence,
    RotationFraction,
    SymmetryClass,
    character_sequence,
    character_values,
    classify_symmetry,
    completion_part,
    double_and_modulate,
    legendre_sequence,
    legendre_table,
    modified_sequence,
    primitive_character,
    rotate,
)

__all__ = [
    "IDENTITY",
    "BOUND",
    "MEASURED",
    "NotSymmetricOrAntisymmetric",
    "IoFailure",
    "SweepRow",
    "AuditFinding",
    "ConvergenceRow",
    "ConvergenceReport",
    "predicted_inverse_merit",
    "rotation_sweep",
    "doubled_merit_report",
    "doubling_identity_check",
    "character_sum_check",
    "product_lemma_check",
    "closed_form_pq_check",
    "character_bound_check",
    "gauss_magnitude_check",
    "dft_factorization_check",
    "common_factor_check",
    "correlation_energy_audit",
    "per_shift_pv_audit",
    "weil_bound_audit",
    "identity_suite",
    "convergence_study",
    "emit_csv",
    "write_manifest",
]

IDENTITY = "identity"
BOUND = "bound"
MEASURED = "measured"

SPECTRAL_RTOL = 1e-9
EXHAUSTIVE_WINDOW_LIMIT = 1155


class NotSymmetricOrAntisymmetric(ValueError):
    pass


class IoFailure(OSError):
    pass


@dataclass(frozen=True)
class SweepRow:
    N: int
    primes: tuple[int, ...]
    t: int
    f: Fraction
    inv_F: float
    F_r: float
    residual: float


@dataclass(frozen=True)
class AuditFinding:
    lemma: str
    instance: str
    kind: str
    lhs: float
    rhs: float
    passed: bool
    constant: float = math.nan

    @property
    def gating(self) -> bool:
        return self.kind in (IDENTITY, BOUND)


@dataclass(frozen=True)
class ConvergenceRow:
    N: int
    p1: int
    quantity: str
    value: float
    log_p1_over_log_N: float
    log2_N_over_p1: float


@dataclass(frozen=True)
class ConvergenceReport:
    rows: tuple[ConvergenceRow, ...]

    def series(self, quantity: str) -> list[tuple[int, float]]:
        return [(r.N, r.value) for r in self.rows if r.quantity == quantity]

    def value(self, n: int, quantity: str) -> float:
        for r in self.rows:
            if r.N == n and r.quantity == quantity:
                return r.value
        raise KeyError((n, quantity))


T = TypeVar("T")
R = TypeVar("R")


def _ordered_map(fn: Callable[[T], R], items: Iterable[T], threads: int | None) -> list[R]:
    items = list(items)
    if not threads or threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def predicted_inverse_merit(f) -> Fraction | float:
    """2/3 - 4|f| + 8 f^2 for |f| <= 1/2 (exact for rational input)."""
    if isinstance(f, (int, Fraction)):
        f = Fraction(f)
        if abs(f) > Fraction(1, 2):
            raise ValueError("offset fraction must satisfy |f| <= 1/2")
        return Fraction(2, 3) - 4 * abs(f) + 8 * f * f
    if abs(f) > 0.5:
        raise ValueError("offset fraction must satisfy |f| <= 1/2")
    return 2.0 / 3.0 - 4.0 * abs(f) + 8.0 * f * f


def _family_sequence(m: FactoredModulus, family: str) -> BinarySequence:
    if family == "legendre":
        return legendre_sequence(m)
    if family == "modified":
        return modified_sequence(m)
    raise ValueError(f"unknown family {family!r}; expected 'legendre' or 'modified'")


def _round_half_up(x: Fraction) -> int:
    return math.floor(x + Fraction(1, 2))


def rotation_sweep(
    m: FactoredModulus, grid_size: int, family: str = "modified", threads: int | None = None
) -> list[SweepRow]:
    """Measured 1/F against the target curve at ``grid_size`` rotations.

    Row k uses t = round(k N / grid_size).
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    base = _family_sequence(m, family)
    n = m.n

    def cell(k: int) -> SweepRow:
        rot = RotationFraction(_round_half_up(Fraction(k * n, grid_size)), n)
        inv = float(merit_factor(rotate(base, rot)).inverse)
        f = rot.offset
        pred = float(predicted_inverse_merit(f))
        return SweepRow(n, m.primes, rot.t, f, inv, pred, inv - pred)

    return _ordered_map(cell, range(grid_size), threads)


def _growth(n: int, p1: int) -> tuple[float, float]:
    return math.log(p1) / math.log(n), math.log(n) ** 2 / p1


def doubled_merit_report(m: FactoredModulus, delta: int = 0, sign: int = 1) -> ConvergenceRow:
    """Merit factor of {z, z} * (sign e^(delta)) as a convergence row."""
    z = modified_sequence(m) if m.r >= 2 else legendre_sequence(m)
    fb = float(merit_factor(double_and_modulate(z, delta, sign)).merit_factor)
    return ConvergenceRow(m.n, m.p1, "F_b", fb, *_growth(m.n, m.p1))


def doubling_identity_check(x: BinarySequence, delta: int, sign: int = 1) -> AuditFinding:
    """Sidelobe energy of the doubled sequence against the closed form in A_x, P_x."""
    n = len(x)
    if n % 2 == 0 or classify_symmetry(x) is SymmetryClass.NEITHER:
        raise NotSymmetricOrAntisymmetric("doubling identity needs a symmetric or antisymmetric odd-length input")
    b = double_and_modulate(x, delta, sign)
    ab = autocorrelation(b, CorrelationKind.APERIODIC).values
    lhs = int(np.dot(ab, ab))
    a = autocorrelation(x, CorrelationKind.APERIODIC).values  # a[k-1] = A_x(k)
    p = autocorrelation(x, CorrelationKind.PERIODIC).values  # p[k] = P_x(k)
    even = np.arange(2, n, 2)
    rhs = n + int(np.dot(a, a)) + 2 * int(np.dot(p[even], a[even - 1])) + int(np.dot(p[even], p[even]))
    instance = f"{x.kind} N={n} delta={delta} sign={'+' if sign > 0 else '-'}"
    return AuditFinding("doubling-identity", instance, IDENTITY, lhs, rhs, lhs == rhs)


def character_sum_check(p: int) -> AuditFinding:
    """sum_n chi_p(n) chi_p(n-k) is p-1 for k = 0 and -1 otherwise, for every k."""
    chi = legendre_table(p).astype(np.int64)
    sums = np.array([int(np.dot(chi, np.roll(chi, k))) for k in range(p)])
    expected = np.full(p, -1)
    expected[0] = p - 1
    worst = int(np.max(np.abs(sums - expected)))
    return AuditFinding("character-sum", f"p={p}", IDENTITY, worst, 0, worst == 0)


def _periodic(values) -> np.ndarray:
    return autocorrelation(values, CorrelationKind.PERIODIC).values


def product_lemma_check(m: FactoredModulus, factors: str = "character") -> AuditFinding:
    """P_u(n) = prod_s P_{y^s}(n) for u the pointwise product of per-prime sequences.

    ``factors`` selects the per-prime sequences: the bare characters chi_p or
    the Legendre sequences (value +1 at 0).
    """
    n = m.n
    idx = np.arange(n)
    u = np.ones(n, dtype=np.int64)
    rhs = np.ones(n, dtype=np.int64)
    for p in m.primes:
        y = legendre_table(p).astype(np.int64)
        if factors == "legendre":
            y = y.copy()
            y[0] = 1
        elif factors != "character":
            raise ValueError(f"unknown factor family {factors!r}")
        u *= y[idx % p]
        rhs *= _periodic(y)[idx % p]
    lhs = _periodic(u)
    worst = int(np.max(np.abs(lhs - rhs)))
    return AuditFinding("product-lemma", f"N={n} factors={factors}", IDENTITY, worst, 0, worst == 0)


def closed_form_pq_check(m: FactoredModulus) -> AuditFinding:
    """P_chi(i) at N = pq: 1-p if p|i, 1-q if q|i, +1 otherwise."""
    if m.r != 2:
        raise ValueError("the closed form is stated for two prime factors")
    p, q = m.primes
    i = np.arange(1, m.n)
    expected = np.where(i % p == 0, 1 - p, np.where(i % q == 0, 1 - q, 1))
    got = _periodic(primitive_character(m))[1:]
    worst = int(np.max(np.abs(got - expected)))
    return AuditFinding("closed-form-pq", f"N={m.n}", IDENTITY, worst, 0, worst == 0)


def character_bound_check(m: FactoredModulus, base: str = "character") -> AuditFinding:
    """|P(i)| <= gcd(i, N) for every 1 <= i < N; lhs is the worst ratio.

    ``base="character"`` uses chi_N itself; ``base="U"`` uses U (entry +1 at
    j = 0), whose correlations pick up an extra chi(i) + chi(-i).
    """
    n = m.n
    if base == "character":
        seq = primitive_character(m)
    elif base == "U":
        seq = character_sequence(m)
    else:
        raise ValueError(f"unknown base {base!r}")
    p = np.abs(_periodic(seq)[1:])
    g = np.gcd(np.arange(1, n), n)
    ratio = p / g
    k = int(np.argmax(ratio))
    return AuditFinding(
        "character-bound", f"N={n} base={base} worst i={k + 1}", BOUND, float(ratio[k]), 1.0, bool(ratio[k] <= 1)
    )


def gauss_magnitude_check(m: FactoredModulus, rtol: float = SPECTRAL_RTOL) -> AuditFinding:
    """|chi_N(xi_N^j)| is sqrt(N) for gcd(j, N) = 1 and 0 otherwise."""
    n = m.n
    mag = np.abs(dft_at_nodes(primitive_character(m)).plus)
    coprime = np.gcd(np.arange(n), n) == 1
    target = np.where(coprime, math.sqrt(n), 0.0)
    err = float(np.max(np.abs(mag - target)) / math.sqrt(n))
    return AuditFinding("gauss-magnitude", f"N={n}", IDENTITY, err, rtol, err <= rtol)


def dft_factorization_check(m: FactoredModulus, rtol: float = SPECTRAL_RTOL) -> AuditFinding:
    """u(xi_N^j) = prod_i y^i(xi_{p_i}^{j k_i}) with k_i from root splitting."""
    n = m.n
    ks = root_split_exponents(m.primes)
    lhs = dft_at_nodes(primitive_character(m)).plus
    rhs = np.ones(n, dtype=np.complex128)
    j = np.arange(n)
    for p, k in zip(m.primes, ks):
        yp = dft_at_nodes(legendre_table(p)).plus
        rhs *= yp[(j * k) % p]
    err = float(np.max(np.abs(lhs - rhs)) / math.sqrt(n))
    return AuditFinding("dft-factorization", f"N={n}", IDENTITY, err, rtol, err <= rtol)


def common_factor_check(n: int) -> AuditFinding:
    """d * gcd(i, N/d) >= gcd(i, N) for every i < N and every divisor d of N."""
    i = np.arange(n)
    slack = min(
        int(np.min(d * np.gcd(i, n // d) - np.gcd(i, n)))
        for d in range(1, n + 1)
        if n % d == 0
    )
    return AuditFinding("common-factor", f"N={n}", BOUND, -slack, 0, slack >= 0)


def _energy(values) -> int:
    p = _periodic(values)[1:]
    return int(np.dot(p, p))


def correlation_energy_audit(m: FactoredModulus) -> list[AuditFinding]:
    """Periodic energies of chi_N, v and z normalised by N^2/p1, plus the exact bounds."""
    if m.r < 2:
        raise ValueError("the energy audit needs at least two prime factors")
    n, p1 = m.n, m.p1
    scale = n * n / p1
    chi = primitive_character(m)
    findings = [character_bound_check(m)]

    e_chi = _energy(chi)
    explicit = euler_phi(m) + sum(n * d for d in divisors(m) if 1 < d < n)
    findings.append(AuditFinding("character-energy", f"N={n}", BOUND, e_chi, explicit, e_chi <= explicit))
    phi = euler_phi(m)
    findings.append(
        AuditFinding("euler-gap", f"N={n}", BOUND, n - phi, m.r * n / p1, n - phi < m.r * n / p1)
    )
    for name, seq in (
        ("sum-PU2", chi),
        ("sum-Pv2", completion_part(m)),
        ("sum-Pz2", modified_sequence(m)),
    ):
        e = _energy(seq)
        c = e / scale
        findings.append(AuditFinding(name, f"N={n}", MEASURED, e, scale, math.isfinite(c), c))
    return findings


def _omega_of_divisor(g: int, m: FactoredModulus) -> int:
    return sum(1 for p in m.primes if g % p == 0)


def per_shift_pv_audit(m: FactoredModulus) -> list[AuditFinding]:
    """max |P_v(i)| per gcd class against its envelope; constants are measured.

    Envelopes below 1 (e.g. log 1 = 0 when N = p1 p2) are floored at 1,
    since |P_v| is an integer.
    """
    if m.r < 2:
        raise ValueError("v is defined for at least two prime factors")
    n, r = m.n, m.r
    p1, p2 = m.primes[0], m.primes[1]
    pv = np.abs(_periodic(completion_part(m))[1:]).astype(float)
    shifts = np.arange(1, n)
    g = np.gcd(shifts, n)
    om = np.array([_omega_of_divisor(int(x), m) for x in g])

    small = n / (p1 * p2)
    env = np.empty(n - 1)
    coprime = g == 1
    top = (~coprime) & (om == r - 1)
    other = (~coprime) & ~top
    env[coprime] = math.sqrt(small) * math.log(small) if small > 1 else 0.0
    env[top] = g[top] / p1
    co = n / g[other]
    env[other] = np.maximum(g[other], np.sqrt(co) * np.log(co))
    env = np.maximum(env, 1.0)

    findings = [
        AuditFinding(
            "pv-class-partition",
            f"N={n}",
            IDENTITY,
            int(coprime.sum() + top.sum() + other.sum()),
            n - 1,
            int(coprime.sum() + top.sum() + other.sum()) == n - 1,
        )
    ]
    for label, mask in (("coprime", coprime), ("omega=r-1", top), ("other", other)):
        if not mask.any():
            findings.append(AuditFinding(f"pv-{label}", f"N={n} (empty class)", MEASURED, 0, 0, True, 0.0))
            continue
        ratios = pv[mask] / env[mask]
        k = int(np.argmax(ratios))
        i = int(shifts[mask][k])
        findings.append(
            AuditFinding(
                f"pv-{label}",
                f"N={n} i={i} shifts={int(mask.sum())}",
                MEASURED,
                float(pv[mask][k]),
                float(env[mask][k]),
                bool(np.isfinite(ratios[k])),
                float(ratios[k]),
            )
        )
    return findings


def _window_extremes(terms: np.ndarray, n: int, exhaustive: bool) -> float:
    """max |sum_{u < j <= u+t} terms_j| over windows 0 <= u < n, 1 <= t < n.

    ``terms`` holds the summand for j = 0 .. 2n-1.
    """
    prefix = np.concatenate([[0], np.cumsum(terms[1:])])  # prefix[m] = sum_{j=1}^{m}
    if exhaustive:
        ends = np.lib.stride_tricks.sliding_window_view(prefix[1 : 2 * n - 1], n - 1)[:n]
        return float(np.max(np.abs(ends - prefix[:n, None])))
    ts = sorted({max(1, n // 4), max(1, n // 2), max(1, 3 * n // 4), n - 1})
    return float(max(abs(prefix[t] - prefix[0]) for t in ts))


def weil_bound_audit(
    m: FactoredModulus, max_k: int, exhaustive: bool | None = None
) -> list[AuditFinding]:
    """Incomplete sums of chi_N(n) chi_N(n+k), k = 1..max_k.

    Checks the Weil-type bound 2 * 2^r * sqrt(N) * log N (a ``bound`` finding
    when n(n+k) is not a square modulo any prime factor, i.e. gcd(k, N) = 1)
    and reports the measured constant against max{d, sqrt(N/d) log(N/d)},
    d = gcd(k, N), for the plain and the (-1)^n-twisted sums.
    """
    n, r = m.n, m.r
    if exhaustive is None:
        exhaustive = n <= EXHAUSTIVE_WINDOW_LIMIT
    chi = character_values(m.primes, 2 * n + max_k).astype(np.int64)
    j = np.arange(2 * n)
    alt = np.where(j % 2 == 0, 1, -1)
    weil = 2 * 2**r * math.sqrt(n) * math.log(n)
    findings: list[AuditFinding] = []
    for k in range(1, min(max_k, n - 1) + 1):
        terms = chi[: 2 * n] * chi[k : 2 * n + k]
        plain = _window_extremes(terms, n, exhaustive)
        twisted = _window_extremes(alt * terms, n, exhaustive)
        d = math.gcd(k, n)
        co = n // d
        envelope = max(d, math.sqrt(co) * math.log(co), 1.0)
        kind = BOUND if d == 1 else MEASURED
        findings.append(AuditFinding("weil", f"N={n} k={k}", kind, plain, weil, plain < weil, plain / weil))
        findings.append(
            AuditFinding("degree2-plain", f"N={n} k={k} d={d}", MEASURED, plain, envelope, True, plain / envelope)
        )
        findings.append(
            AuditFinding("degree2-alternating", f"N={n} k={k} d={d}", MEASURED, twisted, envelope, True, twisted / envelope)
        )
    return findings


def identity_suite(m: FactoredModulus, weil_k: int | None = None) -> list[AuditFinding]:
    """Every exact identity and proven bound that applies to modulus m."""
    findings: list[AuditFinding] = [character_sum_check(p) for p in m.primes]
    findings.append(product_lemma_check(m, "character"))
    findings.append(product_lemma_check(m, "legendre"))
    if m.r == 2:
        findings.append(closed_form_pq_check(m))
    findings.append(gauss_magnitude_check(m))
    findings.append(dft_factorization_check(m))
    findings.append(common_factor_check(m.n))
    if m.r >= 2:
        z = modified_sequence(m)
        for delta in (0, 1):
            for sign in (1, -1):
                findings.append(doubling_identity_check(z, delta, sign))
        findings.extend(correlation_energy_audit(m))
        findings.extend(per_shift_pv_audit(m))
    else:
        x = legendre_sequence(m)
        for delta in (0, 1):
            for sign in (1, -1):
                findings.append(doubling_identity_check(x, delta, sign))
        findings.append(character_bound_check(m))
    findings.extend(weil_bound_audit(m, weil_k if weil_k is not None else min(m.n - 1, 16)))
    return findings


QUANTITIES = ("inv_F", "F_r", "F_b", "sum_PU2_over_N2", "sum_Pv2_over_N2", "sum_Pz2_over_N2")


def convergence_study(
    family: Seq[FactoredModulus], rotation=Fraction(1, 4), threads: int | None = None
) -> ConvergenceReport:
    """Per-N merit factors and normalised periodic energies along a family.

    Prime moduli use the Legendre sequence, composite ones the modified
    sequence z. ``rotation`` is the fraction r; each member is shifted by
    floor(N r).
    """
    family = sorted(family, key=lambda m: m.n)

    def member(m: FactoredModulus) -> list[ConvergenceRow]:
        n, p1 = m.n, m.p1
        growth = _growth(n, p1)
        z = modified_sequence(m) if m.r >= 2 else legendre_sequence(m)
        rot = RotationFraction.from_fraction(rotation, n)
        vals = {
            "inv_F": float(merit_factor(rotate(z, rot)).inverse),
            "F_r": float(predicted_inverse_merit(rot.offset)),
            "F_b": float(merit_factor(double_and_modulate(z, 0, 1)).merit_factor),
        }
        if m.r >= 2:
            nn = float(n) * n
            vals["sum_PU2_over_N2"] = _energy(primitive_character(m)) / nn
            vals["sum_Pv2_over_N2"] = _energy(completion_part(m)) / nn
            vals["sum_Pz2_over_N2"] = _energy(z) / nn
        return [ConvergenceRow(n, p1, q, vals[q], *growth) for q in QUANTITIES if q in vals]

    rows = [row for chunk in _ordered_map(member, family, threads) for row in chunk]
    return ConvergenceReport(tuple(rows))


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, tuple):
        return "*".join(_cell(v) for v in value)
    if isinstance(value, (float, Fraction, np.floating)):
        return format(float(value), ".12g")
    return str(value)


def emit_csv(report, destination: str | os.PathLike, row_type: type | None = None) -> None:
    """Write rows of a report as RFC-4180 CSV with a header row.

    ``report`` is a list of dataclass rows or an object with a ``rows``
    attribute. An empty report needs ``row_type`` to know its header.
    """
    rows = list(getattr(report, "rows", report))
    if row_type is None:
        if isinstance(report, ConvergenceReport):
            row_type = ConvergenceRow
        elif rows:
            row_type = type(rows[0])
        else:
            raise ValueError("row_type is required for an empty report")
    names = [f.name for f in dataclasses.fields(row_type)]
    try:
        with open(destination, "w", newline="", encoding="ascii") as fh:
            writer = csv.writer(fh, lineterminator="\r\n")
            writer.writerow(names)
            for row in rows:
                writer.writerow([_cell(getattr(row, name)) for name in names])
    except OSError as exc:
        raise IoFailure(f"cannot write {destination}: {exc}") from exc


def write_manifest(csv_path: str | os.PathLike, spec: dict) -> str:
    """Record the full input spec next to a CSV as ``<csv>.manifest``."""
    path = f"{os.fspath(csv_path)}.manifest"
    try:
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            json.dump(spec, fh, indent=2, sort_keys=True, default=str)
            fh.write("\n")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    return path
