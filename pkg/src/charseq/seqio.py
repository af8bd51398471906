"""SEQV1 text serialisation.

A file is exactly two lines::

    SEQV1 kind=modified n=15 primes=3,5 rot=0/15 delta=- sign=+
    +++-+-...

``n`` is the number of symbols on the data line. The rotation denominator and
``primes`` refer to the odd base modulus, so a doubled sequence of a
length-15 base has ``n=30`` and ``rot=<t>/15``. ``kind=custom`` carries an
arbitrary sequence with an empty ``primes=`` field.
"""

from __future__ import annotations

import os
import re

import numpy as np

from .numtheory import FactoredModulus, NumberTheoryError
from .seqgen import BinarySequence, Sequence, SequenceError, TernarySequence

__all__ = ["SeqFormatError", "KINDS", "dumps", "loads", "write_sequence", "read_sequence"]

KINDS = ("character", "legendre", "jacobi", "modified", "doubled", "custom")
_BINARY_KINDS = {"legendre", "jacobi", "modified", "doubled"}

_HEADER = re.compile(
    r"SEQV1 kind=(?P<kind>[a-z]+) n=(?P<n>\d+) primes=(?P<primes>[0-9,]*) "
    r"rot=(?P<t>\d+)/(?P<den>\d+) delta=(?P<delta>[01-]) sign=(?P<sign>[+-])"
)
_SYMBOL = {1: "+", -1: "-", 0: "0"}
_VALUE = {"+": 1, "-": -1, "0": 0}


class SeqFormatError(ValueError):
    pass


def _base_length(seq: Sequence) -> int:
    if seq.modulus is not None:
        return seq.modulus.n
    return len(seq) // 2 if seq.kind == "doubled" else len(seq)


def dumps(seq: Sequence) -> str:
    if seq.kind not in KINDS:
        raise SeqFormatError(f"unknown sequence kind {seq.kind!r}")
    primes = ",".join(map(str, seq.modulus.primes)) if seq.modulus else ""
    delta = "-" if seq.delta is None else str(seq.delta)
    header = (
        f"SEQV1 kind={seq.kind} n={len(seq)} primes={primes} "
        f"rot={seq.rotation}/{_base_length(seq)} delta={delta} "
        f"sign={'+' if seq.sign > 0 else '-'}"
    )
    body = "".join(_SYMBOL[int(v)] for v in seq.values)
    return f"{header}\n{body}\n"


def loads(text: str) -> Sequence:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if len(lines) != 2:
        raise SeqFormatError(f"expected a header and one data line, found {len(lines)} lines")
    header, body = lines
    match = _HEADER.fullmatch(header)
    if match is None:
        raise SeqFormatError(f"malformed header: {header!r}")
    kind = match["kind"]
    if kind not in KINDS:
        raise SeqFormatError(f"unknown kind {kind!r}")
    n = int(match["n"])
    if len(body) != n:
        raise SeqFormatError(f"header says n={n} but data line has {len(body)} symbols")
    bad = set(body) - set(_VALUE)
    if bad:
        raise SeqFormatError(f"invalid symbols {sorted(bad)!r}")
    values = np.array([_VALUE[c] for c in body], dtype=np.int8)

    modulus = None
    if match["primes"]:
        try:
            modulus = FactoredModulus.from_primes(int(p) for p in match["primes"].split(","))
        except (NumberTheoryError, ValueError) as exc:
            raise SeqFormatError(f"bad primes field: {exc}") from None
        base = modulus.n
        expected = 2 * base if kind == "doubled" else base
        if n != expected:
            raise SeqFormatError(f"length {n} inconsistent with primes product {base}")
    elif kind != "custom":
        raise SeqFormatError(f"kind={kind} requires a primes field")
    else:
        base = n
    if int(match["den"]) != base:
        raise SeqFormatError(f"rotation denominator {match['den']} != base length {base}")
    t = int(match["t"])
    if base and t >= base:
        raise SeqFormatError(f"rotation {t} not reduced mod {base}")
    delta = None if match["delta"] == "-" else int(match["delta"])
    if (kind == "doubled") != (delta is not None):
        raise SeqFormatError("delta is given exactly for doubled sequences")
    sign = 1 if match["sign"] == "+" else -1

    zero_free = bool(values.size) and not (values == 0).any()
    if kind in _BINARY_KINDS and not zero_free:
        raise SeqFormatError(f"kind={kind} must be +-1 valued")
    cls = BinarySequence if zero_free else TernarySequence
    try:
        return cls(values, kind=kind, modulus=modulus, rotation=t, delta=delta, sign=sign)
    except SequenceError as exc:
        raise SeqFormatError(str(exc)) from None


def write_sequence(seq: Sequence, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(dumps(seq))


def read_sequence(path: str | os.PathLike) -> Sequence:
    with open(path, encoding="ascii", newline="") as fh:
        try:
            text = fh.read()
        except UnicodeDecodeError as exc:
            raise SeqFormatError(f"non-ASCII content: {exc}") from None
    return loads(text)

