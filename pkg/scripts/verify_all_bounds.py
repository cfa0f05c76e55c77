#!/usr/bin/env python3
"""Sweep the whole bound catalog over a parameter matrix and print a table.

A compact research loop: every catalog entry at representative parameters
on the standard grid, minimum slack and witness columns, exit status 1 if
anything behaves unexpectedly.

Usage:
    python scripts/verify_all_bounds.py [--points 2000] [--levels 40]
"""

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from spectral_riesz import bounds
from spectral_riesz.report import _valid_entry_matrix


def failure_matrix():
    return [
        ("fail.hemi.polya.d≥3", {"d": d}) for d in (3, 4, 5)
    ] + [
        ("fail.liyau.d≥6", {"d": 6}),
        ("fail.r1p.weyl", {}),
        ("fail.s1.weyl", {}),
        ("fail.sd.r1.lower.bdshift", {"d": 3}),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=2000)
    ap.add_argument("--levels", type=int, default=40)
    args = ap.parse_args()

    ok = True
    rows = _valid_entry_matrix() + failure_matrix()
    width = max(len(r[0]) for r in rows) + 2
    for bound_id, params in rows:
        rep = bounds.verify(bound_id, params, points=args.points,
                            levels=args.levels)
        status = "ok" if rep.passed else "UNEXPECTED"
        ok &= rep.passed
        prm = rep.params or "-"
        min_slack = min(s.min_slack for s in rep.sides)
        witness = next((s.first_witness.z for s in rep.sides
                        if s.first_witness), None)
        print(f"{rep.bound_id:<{width}} {prm:<32} {status:<10} "
              f"min slack {min_slack: .3e}"
              + (f"  witness z={witness:g}" if witness is not None else ""))
    print("overall:", "ok" if ok else "UNEXPECTED RESULTS")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
