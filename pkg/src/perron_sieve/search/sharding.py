"""Sharded execution with append-only JSONL checkpoints.

Prefix blocks are dealt round-robin to shards.  Each finished block is one
checkpoint line carrying a digest of its payload; a ``merged`` line seals a
complete run.  Resuming skips every block already on file, so an interrupted
run and an uninterrupted one produce the same merged output.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path

from ..poly import IntPolynomial
from .engine import (BlockResult, CandidateReport, FilterTrace, RecheckReport, SearchConfig, SearchContext,
                     build_report, plan_blocks, recheck_discards, run_block, shard_of)

log = logging.getLogger(__name__)

THREADS_ENV = "PERRON_SIEVE_THREADS"
FORMAT_VERSION = 1


class CheckpointError(RuntimeError):
    """Raised when a checkpoint file cannot be trusted for resuming."""


@dataclass
class SearchResult:
    config: SearchConfig
    candidates: list[CandidateReport]
    trace: FilterTrace
    recheck: RecheckReport | None
    blocks_done: int
    blocks_total: int
    complete: bool
    seconds: float = 0.0
    notes: list[str] = field(default_factory=list)

    @property
    def polynomials(self) -> list[IntPolynomial]:
        return [c.polynomial for c in self.candidates]

    @property
    def ambiguous(self) -> int:
        return sum(c.ambiguous for c in self.candidates)


def _payload_digest(rec: dict) -> str:
    body = {k: v for k, v in rec.items() if k != "digest"}
    return hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()[:16]


def _seal(rec: dict) -> str:
    rec = dict(rec)
    rec["digest"] = _payload_digest(rec)
    return json.dumps(rec, sort_keys=True)


def read_checkpoint(path: str | Path, config: SearchConfig) -> tuple[dict[tuple[int, ...], BlockResult], dict | None]:
    """Completed blocks on file, plus the ``merged`` record if the run is sealed.

    A truncated final line (the writer was killed mid-line) is ignored; any
    other malformed or mismatching record raises CheckpointError naming it.
    """
    path = Path(path)
    done: dict[tuple[int, ...], BlockResult] = {}
    merged = None
    if not path.exists():
        return done, merged
    text = path.read_text()
    lines = text.split("\n")
    truncated_tail = not text.endswith("\n") and lines[-1] != ""
    valid = {tuple(b): i for i, b in enumerate(plan_blocks(config))}
    want = config.fingerprint()
    for n, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            if truncated_tail and n == len(lines):
                log.warning("ignoring truncated final checkpoint line %d", n)
                continue
            raise CheckpointError(f"{path}:{n}: unparseable record ({exc.msg})") from exc
        if not isinstance(rec, dict) or rec.get("digest") != _payload_digest(rec):
            raise CheckpointError(f"{path}:{n}: digest mismatch")
        kind = rec.get("status")
        if kind == "header":
            if rec.get("config") != want or rec.get("version") != FORMAT_VERSION:
                raise CheckpointError(f"{path}:{n}: checkpoint belongs to a different run {rec.get('config')}")
            continue
        if kind == "merged":
            merged = rec
            continue
        if kind != "done":
            raise CheckpointError(f"{path}:{n}: unknown status {kind!r}")
        try:
            res = BlockResult.from_record(rec)
        except (KeyError, TypeError, ValueError) as exc:
            raise CheckpointError(f"{path}:{n}: malformed block record ({exc})") from exc
        if res.prefix not in valid:
            raise CheckpointError(f"{path}:{n}: prefix {list(res.prefix)} is not a block of this search")
        if rec.get("shard_index") != shard_of(valid[res.prefix], config.shards):
            raise CheckpointError(f"{path}:{n}: prefix {list(res.prefix)} filed under the wrong shard")
        done[res.prefix] = res
    return done, merged


def _worker_count(config: SearchConfig, tasks: int) -> int:
    cap = config.workers
    env = os.environ.get(THREADS_ENV)
    if cap is None and env:
        try:
            cap = int(env)
        except ValueError:
            log.warning("ignoring non-integer %s=%r", THREADS_ENV, env)
    if cap is None:
        cap = os.cpu_count() or 1
    return max(1, min(cap, config.shards, tasks))


_CTX: SearchContext | None = None


def _init_worker(config: SearchConfig) -> None:
    global _CTX
    _CTX = SearchContext.build(config)


def _work(prefix: tuple[int, ...]) -> BlockResult:
    return run_block(_CTX, prefix)


def run_sharded(config: SearchConfig, progress: bool = False) -> SearchResult:
    """Run (or resume) the shards selected by ``config`` and merge what is done."""
    t0 = time.perf_counter()
    ctx = SearchContext.build(config)
    blocks = plan_blocks(config)
    mine = [(i, b) for i, b in enumerate(blocks)
            if config.shard_index is None or shard_of(i, config.shards) == config.shard_index]

    done: dict[tuple[int, ...], BlockResult] = {}
    sink = None
    if config.checkpoint_path:
        done, _ = read_checkpoint(config.checkpoint_path, config)
        path = Path(config.checkpoint_path)
        fresh = not path.exists() or path.stat().st_size == 0
        if path.exists() and not path.read_text().endswith("\n") and path.stat().st_size:
            # drop the torn tail so the file stays line-aligned
            keep = path.read_text().rsplit("\n", 1)[0] + "\n"
            path.write_text(keep)
        sink = open(path, "a")
        if fresh:
            sink.write(_seal({"status": "header", "version": FORMAT_VERSION, "config": config.fingerprint()}) + "\n")
            sink.flush()

    todo = [(i, b) for i, b in mine if b not in done]
    log.info("%d blocks in plan, %d selected, %d to run", len(blocks), len(mine), len(todo))

    def record(i: int, res: BlockResult) -> None:
        done[res.prefix] = res
        if sink is not None:
            rec = {"status": "done", "shard_index": shard_of(i, config.shards), **res.to_record()}
            sink.write(_seal(rec) + "\n")
            sink.flush()
            os.fsync(sink.fileno())

    try:
        workers = _worker_count(config, len(todo))
        if workers <= 1:
            for n, (i, b) in enumerate(todo, 1):
                record(i, run_block(ctx, b))
                if progress and n % 50 == 0:
                    log.info("block %d/%d", n, len(todo))
        else:
            index = {b: i for i, b in todo}
            with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(config,)) as pool:
                futs = [pool.submit(_work, b) for _, b in todo]
                for fut in as_completed(futs):
                    res = fut.result()
                    record(index[res.prefix], res)
        result = merge(config, ctx, blocks, done)
        if sink is not None and result.complete:
            sink.write(_seal({"status": "merged", "trace": result.trace.to_dict(),
                              "survivors": [list(p.coeffs) for p in result.polynomials]}) + "\n")
            sink.flush()
    finally:
        if sink is not None:
            sink.close()
    result.seconds = time.perf_counter() - t0
    return result


def merge(config: SearchConfig, ctx: SearchContext, blocks, done: dict) -> SearchResult:
    """Deterministic merge: counters add, survivors sorted by canonical encoding."""
    trace = FilterTrace.empty(config.mode, config.trace_level)
    selected = [b for i, b in enumerate(blocks)
                if config.shard_index is None or shard_of(i, config.shards) == config.shard_index]
    survivors = set()
    ambiguous = 0
    sample = []
    for b in selected:
        res = done.get(b)
        if res is None:
            continue
        trace.add({"counts": res.counts, "nodes": res.nodes, "ambiguous_retained": len(res.ambiguous)})
        survivors.update(res.survivors)
        ambiguous += len(res.ambiguous)
        sample.extend(res.sample)
    complete = all(b in done for b in blocks)
    full_selection = all(b in done for b in selected)
    trace.counts["box"] = ctx.box if config.shard_index is None else None
    polys = sorted((IntPolynomial(tuple(c)) for c in survivors), key=lambda P: P.canonical())
    reports = [build_report(P, config) for P in polys]
    sample = sorted(sample)[: config.recheck_samples]
    recheck = recheck_discards(sample, config) if sample and full_selection else None
    return SearchResult(config, reports, trace, recheck, sum(b in done for b in selected), len(selected),
                        complete if config.shard_index is None else full_selection)
