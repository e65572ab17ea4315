#!/usr/bin/env python3
"""Run elimination searches with checkpoints under runs/ and print a summary.

    python scripts/run_elimination.py nonorientable 13 15 17
    python scripts/run_elimination.py reversing 7 8 --ties real-only

Checkpoints are named runs/{nonor,rev}_g{G}.ckpt (tie policy appended when it
is not the default); the test suite picks up sealed default-policy
checkpoints instead of recomputing.  Interrupted runs resume where they left off.
"""
import argparse
import json
import logging
import sys
import time
from pathlib import Path

from perron_sieve import cli, known
from perron_sieve.roots import TIE_POLICIES, TIES_REJECT
from perron_sieve.search import SearchConfig, SearchMode, run_sharded

ROOT = Path(__file__).resolve().parents[1]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("mode", choices=("nonorientable", "reversing"))
    ap.add_argument("genera", type=int, nargs="+")
    ap.add_argument("--ties", choices=TIE_POLICIES, default=TIES_REJECT)
    ap.add_argument("--out-dir", default=str(ROOT / "runs"))
    ap.add_argument("--bound", help="override the tabulated bound (single genus only)")
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    table = known.NONOR_ELIMINATION if args.mode == "nonorientable" else known.REV_ELIMINATION
    tag = "nonor" if args.mode == "nonorientable" else "rev"
    for g in args.genera:
        r = args.bound or table[g][0]
        stem = f"{tag}_g{g}" + ("" if args.ties == TIES_REJECT else f"_{args.ties}")
        config = SearchConfig(SearchMode(args.mode, g), r, checkpoint_path=str(out / f"{stem}.ckpt"), ties=args.ties)
        t0 = time.perf_counter()
        res = run_sharded(config, progress=True)
        manifest = cli.RunManifest.start("search", {"mode": args.mode, "genus": g, "bound": r, "emit": "json",
                                                    **config.fingerprint()})
        manifest.outputs = [str(out / f"{stem}.json")]
        manifest.timing["wall_clock_s"] = round(time.perf_counter() - t0, 3)
        (out / f"{stem}.json").write_text(cli.search_json(res, manifest))
        expect = table[g][1]
        print(f"{args.mode} g={g} r={r} ties={args.ties}: {len(res.candidates)} candidates "
              f"(published {expect if isinstance(expect, int) else 1}), {res.seconds:.0f}s")
        print("  trace " + json.dumps(res.trace.counts))
        if len(res.candidates) <= 20:
            for c in res.candidates:
                print(f"  {c.largest_root_5dp}  {c.polynomial}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
