"""Desk-scale convergence of 1/F, F_b and the periodic energies.

Runs the Legendre family at f = 1/4 and the modified family N = p q with
twin-ish prime pairs, writing one long-format CSV per family.

    python3 scripts/convergence_desk.py --outdir results
"""

import argparse
import os
from dataclasses import dataclass
from fractions import Fraction

from charseq.experiments import convergence_study, emit_csv, write_manifest
from charseq.numtheory import FactoredModulus


@dataclass(frozen=True)
class DeskConfig:
    legendre: tuple[int, ...] = (101, 1009, 10007)
    pairs: tuple[tuple[int, int], ...] = ((11, 13), (101, 103), (311, 313), (1009, 1013))
    rotation: Fraction = Fraction(1, 4)
    threads: int | None = None
    outdir: str = "."


def run(cfg: DeskConfig) -> None:
    os.makedirs(cfg.outdir, exist_ok=True)
    families = {
        "legendre": [FactoredModulus.from_primes([p]) for p in cfg.legendre],
        "modified": [FactoredModulus.from_primes(pq) for pq in cfg.pairs],
    }
    for name, family in families.items():
        report = convergence_study(family, cfg.rotation, threads=cfg.threads)
        path = os.path.join(cfg.outdir, f"converge_{name}.csv")
        emit_csv(report, path)
        write_manifest(path, {"family": name, "moduli": [list(m.primes) for m in family],
                              "rotation": str(cfg.rotation)})
        print(f"[{name}]")
        for m in family:
            line = f"  N={m.n:>8} 1/F={report.value(m.n, 'inv_F'):.5f} F_b={report.value(m.n, 'F_b'):.4f}"
            if m.r >= 2:
                line += f" sumPz2*p1/N^2={report.value(m.n, 'sum_Pz2_over_N2') * m.p1:.3f}"
            print(line)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--outdir", default=".")
    ap.add_argument("--threads", type=int)
    ap.add_argument("--quick", action="store_true", help="drop the largest pair")
    args = ap.parse_args()
    cfg = DeskConfig(threads=args.threads, outdir=args.outdir)
    if args.quick:
        cfg = DeskConfig(pairs=cfg.pairs[:-1], threads=args.threads, outdir=args.outdir)
    run(cfg)
