"""Aperiodic and periodic correlations, merit factor, and DFT-side quantities.

Two correlation paths are kept side by side: a direct integer summation
(``aperiodic_crosscorr`` / ``periodic_crosscorr``) and an FFT path
(``fast_correlation``) that rounds back to integers and refuses to return a
value whose pre-rounding residual is suspicious. The direct path is the
oracle; the FFT path is what the experiments use at scale.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union

import numpy as np

__all__ = [
    "CorrelationError",
    "LengthMismatch",
    "RoundingResidualTooLarge",
    "ZeroSidelobeEnergy",
    "CorrelationKind",
    "CorrelationProfile",
    "SpectrumSample",
    "Spectrum",
    "MeritFactorReport",
    "aperiodic_crosscorr",
    "aperiodic_autocorr",
    "periodic_crosscorr",
    "periodic_autocorr",
    "fast_correlation",
    "autocorrelation",
    "sidelobe_energy",
    "merit_factor",
    "dft_at_nodes",
    "interpolated_minus",
    "merit_factor_via_dft",
]

RESIDUAL_TOLERANCE = 1e-6  # times N, absolute, before rounding to integers


class CorrelationError(ValueError):
    pass


class LengthMismatch(CorrelationError):
    pass


class RoundingResidualTooLarge(CorrelationError):
    pass


class ZeroSidelobeEnergy(CorrelationError):
    pass


class CorrelationKind(enum.Enum):
    APERIODIC = "aperiodic"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class CorrelationProfile:
    """Integer correlation values indexed by shift.

    Aperiodic profiles cover shifts 1..N-1, periodic ones 0..N-1.
    """

    kind: CorrelationKind
    values: np.ndarray

    @property
    def first_shift(self) -> int:
        return 1 if self.kind is CorrelationKind.APERIODIC else 0

    @property
    def shifts(self) -> np.ndarray:
        return np.arange(self.first_shift, self.first_shift + len(self.values))

    def at(self, shift: int) -> int:
        k = shift - self.first_shift
        if not 0 <= k < len(self.values):
            raise IndexError(f"shift {shift} outside profile")
        return int(self.values[k])

    def __len__(self) -> int:
        return len(self.values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CorrelationProfile):
            return NotImplemented
        return self.kind is other.kind and np.array_equal(self.values, other.values)

    __hash__ = None  # type: ignore[assignment]


def _as_array(x) -> np.ndarray:
    values = getattr(x, "values", x)
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise CorrelationError("sequences must be one-dimensional")
    if np.issubdtype(arr.dtype, np.integer):
        return arr.astype(np.int64)
    return arr


def _pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    a, b = _as_array(x), _as_array(y)
    if a.size != b.size:
        raise LengthMismatch(f"lengths differ: {a.size} vs {b.size}")
    return a, b


def _profile(kind: CorrelationKind, values: np.ndarray) -> CorrelationProfile:
    values = np.ascontiguousarray(values)
    values.setflags(write=False)
    return CorrelationProfile(kind, values)


def aperiodic_crosscorr(x, y) -> CorrelationProfile:
    """A_{x,y}(i) = sum_j x_j y_{j+i} for 1 <= i <= N-1 (direct sums)."""
    a, b = _pair(x, y)
    n = a.size
    if n < 2:
        return _profile(CorrelationKind.APERIODIC, np.zeros(0, dtype=a.dtype))
    full = np.correlate(b, a, mode="full")  # full[n-1+i] = sum_j a_j b_{j+i}
    return _profile(CorrelationKind.APERIODIC, full[n:])


def aperiodic_autocorr(x) -> CorrelationProfile:
    return aperiodic_crosscorr(x, x)


def periodic_crosscorr(x, y) -> CorrelationProfile:
    """P_{x,y}(i) = sum_j x_j y_{(j+i) mod N} for 0 <= i <= N-1 (direct sums)."""
    a, b = _pair(x, y)
    n = a.size
    if n == 0:
        return _profile(CorrelationKind.PERIODIC, np.zeros(0, dtype=a.dtype))
    wrapped = np.concatenate([b, b[:-1]])
    return _profile(CorrelationKind.PERIODIC, np.correlate(wrapped, a, mode="valid"))


def periodic_autocorr(x) -> CorrelationProfile:
    return periodic_crosscorr(x, x)


def fast_correlation(x, y, kind: CorrelationKind | str) -> CorrelationProfile:
    """FFT evaluation of the same sums, rounded back to exact integers.

    Raises RoundingResidualTooLarge if any value sits further than
    1e-6*N from an integer before rounding.
    """
    kind = CorrelationKind(kind)
    a, b = _pair(x, y)
    n = a.size
    if kind is CorrelationKind.APERIODIC:
        if n < 2:
            return _profile(kind, np.zeros(0, dtype=np.int64))
        size = 1 << (2 * n - 1).bit_length()
        raw = np.fft.irfft(np.conj(np.fft.rfft(a, size)) * np.fft.rfft(b, size), size)[1:n]
    else:
        if n == 0:
            return _profile(kind, np.zeros(0, dtype=np.int64))
        raw = np.fft.irfft(np.conj(np.fft.rfft(a)) * np.fft.rfft(b), n)
    rounded = np.rint(raw)
    if raw.size:
        residual = float(np.max(np.abs(raw - rounded)))
        if residual > RESIDUAL_TOLERANCE * n:
            raise RoundingResidualTooLarge(f"residual {residual:.3g} at N={n}")
    return _profile(kind, rounded.astype(np.int64))


def autocorrelation(x, kind: CorrelationKind | str, method: str = "fast") -> CorrelationProfile:
    kind = CorrelationKind(kind)
    if method == "fast":
        return fast_correlation(x, x, kind)
    if method == "naive":
        return aperiodic_autocorr(x) if kind is CorrelationKind.APERIODIC else periodic_autocorr(x)
    raise ValueError(f"unknown method {method!r}")


def sidelobe_energy(x, method: str = "fast") -> int:
    """Sum of A_x(i)^2 over 1 <= i <= N-1, as an exact integer."""
    a = autocorrelation(x, CorrelationKind.APERIODIC, method).values
    return int(np.dot(a, a))


@dataclass(frozen=True)
class MeritFactorReport:
    """Merit factor of a +-1 sequence.

    Exact (``Fraction``) when computed from time-domain correlations, a float
    when computed from the spectrum.
    """

    length: int
    sidelobe_energy: Union[int, float]
    merit_factor: Union[Fraction, float]
    inverse: Union[Fraction, float]

    @property
    def exact(self) -> bool:
        return isinstance(self.merit_factor, Fraction)

    def __float__(self) -> float:
        return float(self.merit_factor)


def _require_binary(arr: np.ndarray) -> None:
    if not np.all(np.abs(arr) == 1):
        raise CorrelationError("merit factor is defined for +-1 sequences")


def merit_factor(x, method: str = "fast") -> MeritFactorReport:
    """F = N^2 / (2 sum A^2), kept as an exact rational."""
    arr = _as_array(x)
    _require_binary(arr)
    n = arr.size
    energy = sidelobe_energy(arr, method)
    if n < 2 or energy == 0:
        raise ZeroSidelobeEnergy(f"no sidelobe energy at N={n}; merit factor is infinite")
    f = Fraction(n * n, 2 * energy)
    return MeritFactorReport(n, energy, f, 1 / f)


@dataclass(frozen=True)
class SpectrumSample:
    index: int
    value_at_plus: complex
    value_at_minus: complex


@dataclass(frozen=True)
class Spectrum:
    """x(xi_N^j) and x(-xi_N^j) for j = 0..N-1."""

    plus: np.ndarray
    minus: np.ndarray

    def __len__(self) -> int:
        return len(self.plus)

    def __iter__(self) -> Iterator[SpectrumSample]:
        for j, (p, m) in enumerate(zip(self.plus, self.minus)):
            yield SpectrumSample(j, complex(p), complex(m))

    def samples(self) -> list[SpectrumSample]:
        return list(self)


def dft_at_nodes(x) -> Spectrum:
    """Evaluate x(w) = sum_k x_k w^k at w = xi_N^j and w = -xi_N^j.

    The minus nodes are read off a zero-padded length-2N transform: -xi_N^j is
    the 2N-th root of unity with index 2j + N.
    """
    arr = _as_array(x).astype(np.complex128)
    n = arr.size
    plus = np.fft.ifft(arr) * n
    doubled = np.fft.ifft(np.concatenate([arr, np.zeros(n)])) * (2 * n)
    minus = doubled[(2 * np.arange(n) + n) % (2 * n)]
    return Spectrum(plus, minus)


def interpolated_minus(x) -> np.ndarray:
    """x(-xi_N^j) from the values at xi_N^k via the interpolation formula.

    Only defined for odd N (for even N some kernel denominators vanish).
    """
    arr = _as_array(x)
    n = arr.size
    if n % 2 == 0:
        raise CorrelationError("the interpolation kernel is singular for even N")
    plus = np.fft.ifft(arr.astype(np.complex128)) * n
    nodes = np.exp(2j * np.pi * np.arange(n) / n)
    kernel = nodes[None, :] / (nodes[None, :] + nodes[:, None])
    return (2.0 / n) * kernel @ plus


def merit_factor_via_dft(x) -> MeritFactorReport:
    """1/F = (1/(2N^3)) sum_j (|x(xi^j)|^4 + |x(-xi^j)|^4) - 1.

    The sum runs over all 2N-th roots of unity. For odd N these are exactly
    the nodes +-xi_N^j; for even N the minus nodes repeat the plus nodes, so
    the 2N-th roots are used directly and the identity stays exact.
    """
    arr = _as_array(x)
    _require_binary(arr)
    n = arr.size
    if n < 2:
        raise ZeroSidelobeEnergy(f"no sidelobe energy at N={n}")
    if n % 2:
        spec = dft_at_nodes(arr)
        total = float(np.sum(np.abs(spec.plus) ** 4) + np.sum(np.abs(spec.minus) ** 4))
    else:
        full = np.fft.fft(arr.astype(np.float64), 2 * n)
        total = float(np.sum(np.abs(full) ** 4))
    inverse = total / (2.0 * n**3) - 1.0
    if inverse <= 0:
        raise ZeroSidelobeEnergy(f"spectral sidelobe energy {inverse} is not positive")
    return MeritFactorReport(n, inverse * n * n / 2.0, 1.0 / inverse, inverse)
