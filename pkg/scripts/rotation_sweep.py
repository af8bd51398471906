"""Measured 1/F against the target curve over a rotation grid.

    python3 scripts/rotation_sweep.py --p 10007 --grid 64 --out results/sweep_10007.csv
"""

import argparse
from dataclasses import asdict, dataclass

from charseq.experiments import emit_csv, rotation_sweep, write_manifest
from charseq.numtheory import FactoredModulus, factorize


@dataclass(frozen=True)
class SweepConfig:
    n: int = 10007
    grid: int = 64
    family: str = "legendre"
    threads: int | None = None
    out: str = "sweep.csv"


def run(cfg: SweepConfig) -> float:
    m: FactoredModulus = factorize(cfg.n)
    rows = rotation_sweep(m, cfg.grid, cfg.family, threads=cfg.threads)
    emit_csv(rows, cfg.out)
    write_manifest(cfg.out, asdict(cfg))
    worst = max(abs(r.residual) for r in rows)
    for r in rows[:: max(1, cfg.grid // 8)]:
        print(f"t={r.t:>6} f={float(r.f):+.4f} 1/F={r.inv_F:.5f} F_r={r.F_r:.5f}")
    print(f"N={cfg.n} max|1/F - F_r| = {worst:.3g}")
    return worst


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", "--n", dest="n", type=int, default=SweepConfig.n)
    ap.add_argument("--grid", type=int, default=SweepConfig.grid)
    ap.add_argument("--family", choices=("legendre", "modified"), default=SweepConfig.family)
    ap.add_argument("--threads", type=int)
    ap.add_argument("--out", default=SweepConfig.out)
    run(SweepConfig(**vars(ap.parse_args())))
