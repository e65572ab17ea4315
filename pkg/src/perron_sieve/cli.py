"""Command line: ``perron-sieve search|table|verify``.

Exit codes: 0 success, 1 error (or a failed verification), 2 search finished
but some survivors carry ambiguous verdicts and need a manual look.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import platform
import sys
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path

from . import constructions as C
from .bounds import parse_bound
from .roots import TIE_POLICIES, TIES_REJECT
from .search import CheckpointError, SearchConfig, SearchMode, run_sharded

log = logging.getLogger("perron_sieve")

EXIT_OK, EXIT_ERROR, EXIT_AMBIGUOUS = 0, 1, 2


def _version(pkg: str) -> str | None:
    try:
        return metadata.version(pkg)
    except metadata.PackageNotFoundError:
        return None


@dataclass
class RunManifest:
    subcommand: str
    config: dict
    outputs: list[str] = field(default_factory=list)
    shard_layout: dict = field(default_factory=dict)
    versions: dict = field(default_factory=dict)
    # the only fields that differ between identical invocations
    timing: dict = field(default_factory=dict)

    @classmethod
    def start(cls, subcommand: str, config: dict) -> RunManifest:
        versions = {"python": platform.python_version()}
        for pkg in ("artifact", "numpy", "numba", "mpmath"):
            versions[pkg] = _version(pkg)
        return cls(subcommand, config, versions=versions,
                   timing={"started": datetime.now(timezone.utc).isoformat(timespec="seconds")})

    def finish(self, t0: float) -> None:
        self.timing["wall_clock_s"] = round(time.perf_counter() - t0, 3)

    def to_dict(self) -> dict:
        return asdict(self)


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# search

CSV_COLUMNS = ("g", "r", "polynomial", "largest_root", "stripped_part", "cyclotomic_factors",
               "dominant_real", "simple", "annulus", "below_bound", "unit_circle_clean", "ambiguous")


def search_csv(res, manifest: RunManifest) -> str:
    buf = io.StringIO()
    buf.write("# manifest " + json.dumps(manifest.to_dict(), sort_keys=True) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for c in res.candidates:
        j = c.to_json()
        f = j["flags"]
        bound = manifest.config.get("bound", str(res.config.r))
        cyc = " ".join(map(str, j["cyclotomic_factors"]))
        w.writerow([res.config.mode.genus, bound, j["polynomial"], j["largest_root_5dp"], j["stripped_part"], cyc,
                    f["dominant_real"], f["simple"], f["annulus"], f["below_bound"],
                    f["unit_circle_clean"], f["ambiguous"]])
    return buf.getvalue()


def search_json(res, manifest: RunManifest) -> str:
    doc = {
        "manifest": manifest.to_dict(),
        "complete": res.complete,
        "trace": res.trace.to_dict(),
        "recheck": res.recheck.to_dict() if res.recheck else None,
        "candidates": [c.to_json(res.trace) for c in res.candidates],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def cmd_search(args) -> int:
    t0 = time.perf_counter()
    if args.shard_index is not None and args.shards is None:
        raise ValueError("--shard-index needs --shards")
    config = SearchConfig(SearchMode(args.mode, args.genus), parse_bound(args.bound), shards=args.shards or 1,
                          shard_index=args.shard_index, checkpoint_path=args.checkpoint, trace=args.trace,
                          workers=args.workers, ties=args.ties)
    manifest = RunManifest.start("search", {"mode": args.mode, "genus": args.genus, "bound": args.bound,
                                            "emit": args.emit, **config.fingerprint()})
    res = run_sharded(config, progress=args.verbose)
    manifest.shard_layout = {"shards": config.shards, "shard_index": config.shard_index,
                             "blocks_done": res.blocks_done, "blocks_total": res.blocks_total,
                             "checkpoint": args.checkpoint}
    manifest.outputs = [args.out] if args.out else ["<stdout>"]
    manifest.finish(t0)
    _write(search_json(res, manifest) if args.emit == "json" else search_csv(res, manifest), args.out)
    log.info("%d candidates, trace %s", len(res.candidates), res.trace.counts)
    if not res.complete:
        log.warning("selected blocks incomplete: %d/%d", res.blocks_done, res.blocks_total)
    return EXIT_AMBIGUOUS if res.ambiguous else EXIT_OK


# ---------------------------------------------------------------------------
# table

def cmd_table(args) -> int:
    t0 = time.perf_counter()
    manifest = RunManifest.start("table", {"which": args.which, "genus_max": args.genus_max, "emit": args.emit})
    rows = C.family_table(args.which, args.genus_max)
    manifest.outputs = [args.out] if args.out else ["<stdout>"]
    manifest.finish(t0)
    if args.emit == "json":
        text = json.dumps({"manifest": manifest.to_dict(), "rows": [r.to_dict() for r in rows]}, indent=2) + "\n"
    else:
        text = "# manifest " + json.dumps(manifest.to_dict(), sort_keys=True) + "\n" + C.table_csv(rows)
    _write(text, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify

def cmd_verify(args) -> int:
    from .verify import SUITES
    checks = SUITES[args.suite]()
    for c in checks:
        print(c.line(), flush=True)
    hard = [c for c in checks if c.counts]
    failed = sum(not c.passed for c in hard)
    print(f"{args.suite}: {len(hard) - failed}/{len(hard)} passed" + (f", {len(checks) - len(hard)} soft" if len(hard) < len(checks) else ""))
    return EXIT_OK if failed == 0 else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    from .verify import SUITES
    p = argparse.ArgumentParser(prog="perron-sieve", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("search", help="enumerate candidate polynomials below a bound")
    s.add_argument("--mode", choices=("nonorientable", "reversing"), required=True)
    s.add_argument("--genus", type=int, required=True)
    s.add_argument("--bound", required=True, help="decimal string, read exactly")
    s.add_argument("--shards", type=int)
    s.add_argument("--shard-index", type=int)
    s.add_argument("--checkpoint")
    s.add_argument("--emit", choices=("json", "csv"), default="json")
    s.add_argument("--out")
    s.add_argument("--trace", choices=("auto", "full", "partial", "fast"), default="auto")
    s.add_argument("--workers", type=int)
    s.add_argument("--ties", choices=TIE_POLICIES, default=TIES_REJECT)
    s.set_defaults(func=cmd_search)

    t = sub.add_parser("table", help="best family member per genus")
    t.add_argument("--which", choices=(C.NONOR_FAMILY, C.REVERSING_FAMILY), required=True)
    t.add_argument("--genus-max", type=int, default=20)
    t.add_argument("--emit", choices=("json", "csv"), default="csv")
    t.add_argument("--out")
    t.set_defaults(func=cmd_table)

    v = sub.add_parser("verify", help="run an acceptance suite")
    v.add_argument("--suite", choices=sorted(SUITES), required=True)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ValueError, CheckpointError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
