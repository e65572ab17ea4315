"""Exhaustive search for characteristic-polynomial candidates below a bound."""
from __future__ import annotations

from .engine import (CandidateReport, FilterTrace, Rejection, SearchConfig, SearchContext, SearchMode,
                     filter_pipeline, plan_blocks, run_block)
from .sharding import CheckpointError, SearchResult, read_checkpoint, run_sharded


def enumerate_nonorientable(config: SearchConfig) -> tuple[list[CandidateReport], FilterTrace]:
    if config.mode.variant != "nonorientable":
        raise ValueError("config is not a nonorientable search")
    res = run_sharded(config)
    return res.candidates, res.trace


def enumerate_reversing(config: SearchConfig) -> tuple[list[CandidateReport], FilterTrace]:
    if config.mode.variant != "reversing":
        raise ValueError("config is not an orientation-reversing search")
    res = run_sharded(config)
    return res.candidates, res.trace


def search(variant: str, genus: int, r, **kw) -> SearchResult:
    """Convenience front door: ``search("nonorientable", 12, "1.1743")``."""
    return run_sharded(SearchConfig(SearchMode(variant, genus), r, **kw))
