#!/usr/bin/env python3
"""Compare the two modulus-tie rules on one nonorientable search.

    python scripts/tie_analysis.py 13

Lists every polynomial kept by the real-only rule but not the strict one,
with the number of roots sharing the maximal modulus (50-digit roots).
"""
import argparse
import sys
from pathlib import Path

import mpmath

from perron_sieve import known
from perron_sieve.roots import TIES_REAL_ONLY, all_roots_mp
from perron_sieve.search import SearchConfig, SearchMode, run_sharded

ROOT = Path(__file__).resolve().parents[1]


def tie_profile(P, dps=50):
    """(max modulus, roots on that circle, closest modulus not counted as tied)."""
    with mpmath.workdps(dps):
        mods = [abs(z) for z, m in all_roots_mp(P, dps) for _ in range(m)]
        top = max(mods)
        eps = mpmath.mpf(10) ** -(dps // 2)
        gaps = [top - x for x in mods if top - x >= eps]
        return float(top), sum(top - x < eps for x in mods), float(min(gaps)) if gaps else None


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("genus", type=int)
    ap.add_argument("--bound")
    args = ap.parse_args(argv)
    g = args.genus
    r = args.bound or known.NONOR_ELIMINATION[g][0]
    runs = ROOT / "runs"
    strict_ck = runs / f"nonor_g{g}.ckpt"
    loose_ck = runs / f"nonor_g{g}_{TIES_REAL_ONLY}.ckpt"
    strict = run_sharded(SearchConfig(SearchMode.nonorientable(g), r,
                                      checkpoint_path=str(strict_ck) if strict_ck.exists() else None))
    loose = run_sharded(SearchConfig(SearchMode.nonorientable(g), r, ties=TIES_REAL_ONLY,
                                     checkpoint_path=str(loose_ck) if loose_ck.exists() else None))
    a, b = set(strict.polynomials), set(loose.polynomials)
    expect = known.NONOR_ELIMINATION[g][1]
    print(f"g={g} r={r}: strict {len(a)}, real-only {len(b)}, published {expect}")
    print(f"strict minus real-only: {len(a - b)}")
    for P in sorted(b - a, key=lambda P: P.canonical()):
        top, n_tied, gap = tie_profile(P)
        print(f"  {P}   max |z| {top:.6f}, {n_tied} roots on that circle, next modulus {gap:.2e} below")
    return 0


if __name__ == "__main__":
    sys.exit(main())
