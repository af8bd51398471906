"""Command-line front end: ``charseq {gen,corr,mf,sweep,audit,converge}``.

Exit codes: 0 ok, 2 invalid arguments, 3 construction failure, 4 unreadable
SEQV1 input, 5 an exact identity or proven bound failed, 6 I/O failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence as Seq

from . import correlation, experiments, seqgen, seqio
from .numtheory import FactoredModulus, NumberTheoryError, factorize

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONSTRUCTION = 3
EXIT_PARSE = 4
EXIT_AUDIT = 5
EXIT_IO = 6

FAMILIES = ("character", "legendre", "jacobi", "modified", "doubled")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    family: Optional[str]
    modulus: Optional[FactoredModulus]
    rotation: Optional[str]
    delta: int
    sign: int
    grid: int
    out: Optional[str]
    seedfile: Optional[str]
    threads: int
    fmt: str
    family_list: tuple[FactoredModulus, ...] = ()
    kind: str = "aperiodic"
    method: str = "fast"
    weil_k: Optional[int] = None


def _usage(msg: str) -> CliError:
    return CliError(EXIT_USAGE, msg)


def _parse_primes(text: str) -> FactoredModulus:
    try:
        ps = [int(p) for p in text.replace(":", ",").split(",") if p.strip()]
    except ValueError:
        raise _usage(f"bad prime list {text!r}") from None
    if not ps:
        raise _usage("empty prime list")
    try:
        return FactoredModulus.from_primes(ps)
    except NumberTheoryError as exc:
        raise _usage(f"invalid modulus {text!r}: {exc}") from None


def _parse_n(text: str) -> FactoredModulus:
    try:
        return factorize(int(text))
    except (ValueError, NumberTheoryError) as exc:
        raise _usage(f"invalid N {text!r}: {exc}") from None


def _modulus_from(args) -> Optional[FactoredModulus]:
    given = [a for a in ("primes", "p", "n") if getattr(args, a, None)]
    if len(given) > 1:
        raise _usage("give only one of --primes, --p, --n")
    if getattr(args, "primes", None):
        return _parse_primes(args.primes)
    if getattr(args, "p", None):
        m = _parse_primes(args.p)
        if m.r != 1:
            raise _usage("--p takes a single prime")
        return m
    if getattr(args, "n", None):
        return _parse_n(args.n)
    return None


def build_config(args: argparse.Namespace) -> RunConfig:
    """Validate parsed arguments into a RunConfig; raises CliError(2)."""
    sub = args.command
    family = getattr(args, "family", None)
    modulus = _modulus_from(args)
    family_list: tuple[FactoredModulus, ...] = ()

    if sub == "converge":
        if args.pairs and args.p_list:
            raise _usage("give either --pairs or --p-list")
        if args.pairs:
            family_list = tuple(_parse_primes(t) for t in args.pairs.split(",") if t)
        elif args.p_list:
            family_list = tuple(_parse_primes(t) for t in args.p_list.split(",") if t)
        else:
            raise _usage("converge needs --pairs or --p-list")
        want_prime = family == "legendre"
        if any((m.r == 1) != want_prime for m in family_list):
            raise _usage(f"family {family} does not match the given moduli")
    elif sub in ("gen", "sweep", "audit") or (sub in ("corr", "mf") and not args.seedfile):
        if modulus is None:
            raise _usage(f"{sub} needs --primes, --p or --n" + ("" if sub in ("gen", "sweep", "audit") else " or --seedfile"))
    if sub in ("gen", "corr", "mf") and not args.seedfile:
        if family is None:
            raise _usage("--family is required without --seedfile")
        if family == "legendre" and modulus.r != 1:
            raise _usage("the legendre family needs a single prime")
        if family in ("jacobi", "modified", "doubled") and modulus.r < 2:
            raise _usage(f"the {family} family needs at least two primes")
    if sub == "sweep":
        if family == "legendre" and modulus.r != 1:
            raise _usage("the legendre family needs a single prime")
        if family == "modified" and modulus.r < 2:
            raise _usage("the modified family needs at least two primes")
        if args.grid < 2:
            raise _usage("--grid must be at least 2")
    rotation = getattr(args, "rot", None) or getattr(args, "f", None)
    if rotation is not None:
        try:
            if modulus is not None:
                seqgen.RotationFraction.parse(rotation, modulus.n)
            elif "." in rotation or "e" in rotation.lower():
                raise seqgen.SequenceError(f"rotation must be an exact rational, got {rotation!r}")
            else:
                Fraction(rotation)
        except (seqgen.SequenceError, ValueError, ZeroDivisionError) as exc:
            raise _usage(f"bad rotation {rotation!r}: {exc}") from None
    if args.threads is not None and args.threads < 1:
        raise _usage("--threads must be positive")
    return RunConfig(
        subcommand=sub,
        family=family,
        modulus=modulus,
        rotation=rotation,
        delta=getattr(args, "delta", 0),
        sign=1 if getattr(args, "sign", "+") == "+" else -1,
        grid=getattr(args, "grid", 0),
        out=args.out,
        seedfile=args.seedfile,
        threads=args.threads or os.cpu_count() or 1,
        fmt=args.format,
        family_list=family_list,
        kind=getattr(args, "kind", "aperiodic"),
        method=getattr(args, "method", "fast"),
        weil_k=getattr(args, "weil_k", None),
    )


def _construct(cfg: RunConfig) -> seqgen.Sequence:
    m = cfg.modulus
    try:
        if cfg.family == "character":
            seq = seqgen.character_sequence(m)
        elif cfg.family == "legendre":
            seq = seqgen.legendre_sequence(m)
        elif cfg.family == "jacobi":
            seq = seqgen.jacobi_sequence(m)
        else:
            seq = seqgen.modified_sequence(m)
        if cfg.rotation is not None:
            seq = seqgen.rotate(seq, seqgen.RotationFraction.parse(cfg.rotation, m.n))
        if cfg.family == "doubled":
            seq = seqgen.double_and_modulate(seq, cfg.delta, cfg.sign)
    except (seqgen.SequenceError, NumberTheoryError) as exc:
        raise CliError(EXIT_CONSTRUCTION, f"construction failed: {exc}") from None
    return seq


def _load(cfg: RunConfig) -> seqgen.Sequence:
    if cfg.seedfile:
        try:
            return seqio.read_sequence(cfg.seedfile)
        except seqio.SeqFormatError as exc:
            raise CliError(EXIT_PARSE, f"{cfg.seedfile}: {exc}") from None
        except OSError as exc:
            raise CliError(EXIT_IO, f"cannot read {cfg.seedfile}: {exc}") from None
    return _construct(cfg)


def _symmetry_label(seq: seqgen.Sequence) -> str:
    if len(seq) % 2 == 0:
        return "n/a"
    return str(seqgen.classify_symmetry(seq))


def cmd_gen(cfg: RunConfig) -> int:
    seq = _construct(cfg)
    summary = f"length={len(seq)} symmetry={_symmetry_label(seq)}"
    if cfg.out:
        try:
            seqio.write_sequence(seq, cfg.out)
        except OSError as exc:
            raise CliError(EXIT_IO, f"cannot write {cfg.out}: {exc}") from None
        print(summary)
    else:
        sys.stdout.write(seqio.dumps(seq))
        print(summary, file=sys.stderr)
    return EXIT_OK


def cmd_corr(cfg: RunConfig) -> int:
    seq = _load(cfg)
    try:
        prof = correlation.autocorrelation(seq, cfg.kind, cfg.method)
    except correlation.CorrelationError as exc:
        raise CliError(EXIT_CONSTRUCTION, str(exc)) from None
    lines = ["shift,value"] + [f"{s},{v}" for s, v in zip(prof.shifts, prof.values)]
    text = "\r\n".join(lines) + "\r\n"
    if cfg.out:
        _write_text(cfg.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_mf(cfg: RunConfig) -> int:
    seq = _load(cfg)
    try:
        rep = correlation.merit_factor(seq)
    except correlation.CorrelationError as exc:
        raise CliError(EXIT_CONSTRUCTION, str(exc)) from None
    f = rep.merit_factor
    text = (
        f"N = {rep.length}\n"
        f"sum A^2 = {rep.sidelobe_energy}\n"
        f"F = {f.numerator}/{f.denominator}\n"
        f"F ~ {float(f):.12g}\n"
        f"1/F ~ {float(rep.inverse):.12g}\n"
    )
    if cfg.out:
        _write_text(cfg.out, text)
    sys.stdout.write(text)
    return EXIT_OK


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot write {path}: {exc}") from None


def _emit(report, cfg: RunConfig, row_type, manifest: dict) -> None:
    if not cfg.out:
        return
    try:
        experiments.emit_csv(report, cfg.out, row_type)
        experiments.write_manifest(cfg.out, manifest)
    except experiments.IoFailure as exc:
        raise CliError(EXIT_IO, str(exc)) from None


def cmd_sweep(cfg: RunConfig) -> int:
    rows = experiments.rotation_sweep(cfg.modulus, cfg.grid, cfg.family, threads=cfg.threads)
    _emit(rows, cfg, experiments.SweepRow, {
        "command": "sweep", "family": cfg.family, "primes": list(cfg.modulus.primes),
        "grid": cfg.grid, "rotation_rule": "t = round(k*N/grid)",
    })
    worst = max(abs(r.residual) for r in rows)
    print(f"sweep N={cfg.modulus.n} family={cfg.family} rows={len(rows)} max|residual|={worst:.6g}")
    return EXIT_OK


def cmd_audit(cfg: RunConfig) -> int:
    findings = experiments.identity_suite(cfg.modulus, cfg.weil_k)
    _emit(findings, cfg, experiments.AuditFinding, {
        "command": "audit", "primes": list(cfg.modulus.primes), "weil_k": cfg.weil_k,
        "spectral_rtol": experiments.SPECTRAL_RTOL,
    })
    failed = [f for f in findings if f.gating and not f.passed]
    gating = sum(f.gating for f in findings)
    print(f"audit N={cfg.modulus.n} findings={len(findings)} gating={gating} failed={len(failed)}")
    for f in failed:
        print(f"FAILED {f.lemma} {f.instance}: lhs={f.lhs} rhs={f.rhs}", file=sys.stderr)
    return EXIT_AUDIT if failed else EXIT_OK


def cmd_converge(cfg: RunConfig) -> int:
    r = Fraction(cfg.rotation or "1/4")
    report = experiments.convergence_study(cfg.family_list, r, threads=cfg.threads)
    _emit(report, cfg, experiments.ConvergenceRow, {
        "command": "converge", "family": cfg.family, "rotation": str(r),
        "moduli": [list(m.primes) for m in cfg.family_list],
    })
    ns = sorted({row.N for row in report.rows})
    print(f"converge family={cfg.family} rows={len(ns)} N={','.join(map(str, ns))}")
    for n, fb in report.series("F_b"):
        print(f"N={n} F_b={fb:.6g} 1/F={report.value(n, 'inv_F'):.6g}")
    return EXIT_OK


COMMANDS = {
    "gen": cmd_gen,
    "corr": cmd_corr,
    "mf": cmd_mf,
    "sweep": cmd_sweep,
    "audit": cmd_audit,
    "converge": cmd_converge,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse's own exit code is already 2
        self.print_usage(sys.stderr)
        raise CliError(EXIT_USAGE, f"{self.prog}: error: {message}")


def make_parser() -> argparse.ArgumentParser:
    def global_flags(suppress: bool) -> argparse.ArgumentParser:
        # Subcommand copies must not overwrite values given before the subcommand.
        kw = {"default": argparse.SUPPRESS} if suppress else {}
        p = argparse.ArgumentParser(add_help=False)
        p.add_argument("--out", help="output file (SEQV1, CSV or text)", **kw)
        p.add_argument("--threads", type=int, help="worker cap (default: all cores)", **kw)
        p.add_argument("--seedfile", help="input SEQV1 file", **kw)
        p.add_argument("--format", choices=("csv",), **(kw or {"default": "csv"}))
        return p

    common = global_flags(suppress=True)
    parser = _Parser(prog="charseq", description=__doc__.splitlines()[0], parents=[global_flags(False)])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def modulus_flags(p):
        p.add_argument("--primes", help="comma-separated distinct odd primes")
        p.add_argument("--p", help="a single odd prime")
        p.add_argument("--n", help="squarefree odd modulus, factored automatically")

    g = sub.add_parser("gen", parents=[common], help="write a sequence as SEQV1")
    g.add_argument("--family", choices=FAMILIES, required=True)
    modulus_flags(g)
    g.add_argument("--rot", help="rotation t/N or a fraction such as 1/4")
    g.add_argument("--delta", type=int, choices=(0, 1), default=0)
    g.add_argument("--sign", choices=("+", "-"), default="+")

    for name, help_ in (("corr", "autocorrelation profile"), ("mf", "merit factor")):
        c = sub.add_parser(name, parents=[common], help=help_)
        c.add_argument("--family", choices=FAMILIES)
        modulus_flags(c)
        c.add_argument("--rot")
        c.add_argument("--delta", type=int, choices=(0, 1), default=0)
        c.add_argument("--sign", choices=("+", "-"), default="+")
        if name == "corr":
            c.add_argument("--kind", choices=("aperiodic", "periodic"), default="aperiodic")
            c.add_argument("--method", choices=("fast", "naive"), default="fast")

    s = sub.add_parser("sweep", parents=[common], help="1/F over a rotation grid")
    s.add_argument("--family", choices=("legendre", "modified"), required=True)
    modulus_flags(s)
    s.add_argument("--grid", type=int, default=64)

    a = sub.add_parser("audit", parents=[common], help="run the identity and bound audits")
    modulus_flags(a)
    a.add_argument("--weil-k", type=int, default=None, help="largest shift k for the Weil audit")

    v = sub.add_parser("converge", parents=[common], help="merit factors along a family")
    v.add_argument("--family", choices=("legendre", "modified"), required=True)
    v.add_argument("--pairs", help="comma-separated colon-joined prime tuples, e.g. 11:13,101:103")
    v.add_argument("--p-list", help="comma-separated primes for the legendre family")
    v.add_argument("--f", help="rotation fraction, e.g. 1/4")
    return parser


def main(argv: Optional[Seq[str]] = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
        cfg = build_config(args)
        return COMMANDS[cfg.subcommand](cfg)
    except CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
