"""Run the identity suite over every squarefree odd N up to a limit and
summarise failures per lemma.

    python3 scripts/audit_all.py --limit 1155 --out results/audit.csv
"""

import argparse
from collections import Counter

from charseq.experiments import AuditFinding, emit_csv, identity_suite
from charseq.numtheory import admissible_moduli


def main(limit: int, out: str | None, weil_k: int) -> int:
    findings: list[AuditFinding] = []
    for m in admissible_moduli(limit, min_r=1):
        findings.extend(identity_suite(m, min(weil_k, m.n - 1)))
    failed = Counter(f.lemma for f in findings if f.gating and not f.passed)
    if out:
        emit_csv(findings, out, AuditFinding)
    print(f"{len(findings)} findings, {sum(f.gating for f in findings)} gating, {sum(failed.values())} failed")
    for lemma, count in sorted(failed.items()):
        print(f"  {lemma}: {count}")
    return 1 if failed else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--limit", type=int, default=1155)
    ap.add_argument("--weil-k", type=int, default=8)
    ap.add_argument("--out")
    a = ap.parse_args()
    raise SystemExit(main(a.limit, a.out, a.weil_k))
