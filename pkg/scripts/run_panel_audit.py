"""Run the identity audit on the preset panel and write JSON plus a summary.

    python scripts/run_panel_audit.py --out audit.json
"""
import argparse
import json
import sys
from collections import Counter

from sigmalab.audit import normative_ok, run_audit
from sigmalab.lattice import TruncationPolicy


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-shell", type=int, default=12)
    ap.add_argument("--quad-order", type=int, default=32)
    ap.add_argument("--rmax", type=int, default=6)
    ap.add_argument("--out", default="audit.json")
    args = ap.parse_args()

    reports = run_audit(policy=TruncationPolicy(max_shell=args.max_shell), quad_order=args.quad_order, r_max=args.rmax)
    with open(args.out, "w") as fh:
        json.dump([r.to_dict() for r in reports], fh, sort_keys=True, indent=2)

    counts = Counter(("normative" if r.normative else "claim", r.verdict) for r in reports)
    for key in sorted(counts):
        print(f"{key[0]:<9} {key[1]:<13} {counts[key]}")
    print("\nprinted claims that do not hold:")
    for r in reports:
        if not r.normative and r.verdict == "fails":
            print(f"  {r.identity_id:<24} {r.lattice_label:<15} {r.note}")
    ok = normative_ok(reports)
    print("\nnormative suite:", "holds" if ok else "FAILS")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
