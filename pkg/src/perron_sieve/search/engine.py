"""Elimination pipeline: bounded DFS over power sums, then root filters.

The enumeration runs in the compiled kernels one top-level prefix block at a
time; every row that survives the integer tests is turned into a polynomial
and pushed through the root filters here.  ``run_block`` is the unit of work
used by the sharded runner.
"""
from __future__ import annotations

import hashlib
import heapq
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .. import roots as R
from ..bounds import parse_bound, power_sum_table
from ..poly import (IntPolynomial, classify_symmetry, is_mod2_reciprocal, polynomial_from_search_coefficients,
                    power_sums_from_coefficients, reciprocal_transform, strip_cyclotomic, strip_unit_roots)
from . import kernel, reference

log = logging.getLogger(__name__)

NONORIENTABLE = R.NONORIENTABLE
REVERSING = R.REVERSING

NONOR_STEPS = ("box", "integral", "mod2", "constant", "reciprocal_bounds", "newton",
               "dominant_real", "simple", "annulus", "below_bound", "min_degree")
REV_STEPS = ("box", "integral", "skew_bounds", "newton",
             "dominant_real", "simple", "annulus", "below_bound")
ROOT_STEPS = ("newton", "dominant_real", "simple", "annulus", "below_bound", "min_degree")
TRACE_LEVELS = ("full", "partial", "fast")

INT64_SAFE = 2**62
MIN_DEGREE = 3


@dataclass(frozen=True)
class SearchMode:
    variant: str
    genus: int

    def __post_init__(self):
        if self.variant == NONORIENTABLE:
            if self.genus < 4:
                raise ValueError("nonorientable search needs g >= 4")
        elif self.variant == REVERSING:
            if self.genus < 1:
                raise ValueError("reversing search needs g >= 1")
        else:
            raise ValueError(f"unknown variant {self.variant!r}")

    @classmethod
    def nonorientable(cls, g: int) -> SearchMode:
        return cls(NONORIENTABLE, g)

    @classmethod
    def reversing(cls, g: int) -> SearchMode:
        return cls(REVERSING, g)

    @property
    def degree(self) -> int:
        return self.genus - 1 if self.variant == NONORIENTABLE else 2 * self.genus

    @property
    def steps(self) -> tuple[str, ...]:
        return NONOR_STEPS if self.variant == NONORIENTABLE else REV_STEPS


@dataclass
class SearchConfig:
    mode: SearchMode
    r: Fraction
    shards: int = 1
    shard_index: int | None = None
    checkpoint_path: str | None = None
    margin: float = R.DEFAULT_MARGIN
    trace: str = "auto"
    recheck_samples: int = 100
    recheck_dps: int = 34
    workers: int | None = None
    ties: str = R.TIES_REJECT

    def __post_init__(self):
        self.r = parse_bound(self.r)
        if self.r <= 1:
            raise ValueError("r must exceed 1")
        if self.shards < 1:
            raise ValueError("shards must be >= 1")
        if self.shard_index is not None and not 0 <= self.shard_index < self.shards:
            raise ValueError("shard_index out of range")
        if self.trace not in TRACE_LEVELS + ("auto",):
            raise ValueError(f"trace must be one of {TRACE_LEVELS} or 'auto'")
        if self.ties not in R.TIE_POLICIES:
            raise ValueError(f"ties must be one of {R.TIE_POLICIES}")

    @property
    def trace_level(self) -> str:
        if self.trace != "auto":
            return self.trace
        if self.mode.variant == REVERSING:
            return "full"
        # exact step-2 counts are cheap up to degree 11; beyond that prune hard
        return "full" if self.mode.degree <= 11 else "fast"

    def fingerprint(self) -> dict:
        return {"variant": self.mode.variant, "genus": self.mode.genus, "r": str(self.r),
                "trace": self.trace_level, "shards": self.shards, "margin": self.margin, "ties": self.ties}


# ---------------------------------------------------------------------------
# traces and reports

@dataclass
class FilterTrace:
    """Per-step survivor counts, in cascade order.  ``None`` = not tracked at this trace level."""
    variant: str
    counts: dict[str, int | None]
    nodes: int = 0
    ambiguous_retained: int = 0
    level: str = "full"

    @classmethod
    def empty(cls, mode: SearchMode, level: str) -> FilterTrace:
        return cls(mode.variant, {s: 0 for s in mode.steps}, level=level)

    def add(self, other: FilterTrace | dict) -> None:
        counts = other.counts if isinstance(other, FilterTrace) else other["counts"]
        for k, v in counts.items():
            if v is None or self.counts.get(k) is None:
                self.counts[k] = None
            else:
                self.counts[k] += v
        if isinstance(other, FilterTrace):
            self.nodes += other.nodes
            self.ambiguous_retained += other.ambiguous_retained
        else:
            self.nodes += other.get("nodes", 0)
            self.ambiguous_retained += other.get("ambiguous_retained", 0)

    def to_dict(self) -> dict:
        return {"variant": self.variant, "level": self.level, "counts": dict(self.counts),
                "nodes": self.nodes, "ambiguous_retained": self.ambiguous_retained}

    def tail(self) -> list[int | None]:
        return [self.counts[s] for s in ROOT_STEPS if s in self.counts]

    def monotonicity_violations(self) -> list[str]:
        bad = []
        prev = None
        for step, v in self.counts.items():
            if v is None:
                continue
            limit = None if prev is None else (2 * prev if step == "constant" else prev)
            if limit is not None and v > limit:
                bad.append(f"{step}: {v} > {limit}")
            prev = v
        return bad


@dataclass(frozen=True)
class Rejection:
    step: str
    reason: str = ""


@dataclass
class CandidateReport:
    polynomial: IntPolynomial
    perron_value: float | None
    largest_root_5dp: str | None
    profile: R.RootProfile
    stripped: IntPolynomial
    cyclotomic_factors: list[int]
    unit_circle_clean: bool
    ambiguous: bool
    notes: list[str] = field(default_factory=list)

    def to_json(self, trace: FilterTrace | None = None) -> dict:
        P = self.polynomial
        return {
            "degree": P.degree,
            "coefficients_ascending": list(P.coeffs),
            "polynomial": str(P),
            "constant_sign": 1 if P.coeffs[0] > 0 else -1,
            "largest_root_5dp": self.largest_root_5dp,
            "stripped_part_coefficients": list(self.stripped.coeffs),
            "stripped_part": str(self.stripped),
            "cyclotomic_factors": self.cyclotomic_factors,
            "flags": {**self.profile.verdicts(), "unit_circle_clean": self.unit_circle_clean,
                      "ambiguous": self.ambiguous},
            "trace": {"precision": self.profile.precision, "notes": self.notes + self.profile.notes,
                      **({"run": trace.to_dict()} if trace is not None else {})},
        }


def build_report(P: IntPolynomial, config: SearchConfig) -> CandidateReport:
    """Full report for a polynomial that survived the cascade."""
    mode = config.mode.variant
    newton = _newton(P, config.r)
    prof = R.perron_profile(P, config.r, mode, config.margin, newton=newton, ties=config.ties)
    stripped, cyc = strip_cyclotomic(P)
    stripped, _ = strip_unit_roots(stripped)
    notes = []
    largest = None
    if prof.perron_value is not None:
        try:
            lam = R.perron_root_mp(P, prof.perron_value * prof.dominant_sign, dps=40)
            largest = R.format_5dp(abs(lam))
        except Exception as exc:  # mpmath findroot may refuse near multiple roots
            notes.append(f"high-precision polish failed: {exc}")
            largest = f"{prof.perron_value:.5f}"
    try:
        clean = R.unit_circle_diagnostic(stripped).clean
    except R.RootFindingError as exc:
        notes.append(str(exc))
        clean = False
    amb = prof.ambiguous or newton.status == "ambiguous"
    return CandidateReport(P, prof.perron_value, largest, prof, stripped, cyc, clean, amb, notes)


# ---------------------------------------------------------------------------
# root filters on one polynomial

def _newton(P: IntPolynomial, r: Fraction) -> R.NewtonResult:
    """Newton descent started at the search bound r.

    Factors x - 1 and x + 1 are divided out first: they do not change the
    roots above 1, and a repeated root at 1 otherwise stalls the iteration at
    a spurious value slightly above 1.
    """
    Q, _ = strip_unit_roots(P)
    if Q.degree < 1:
        return R.NewtonResult("rejected", None, 0, "no roots off the unit circle")
    if Q.degree == 1:
        a = -Q.coeffs[0]
        return R.NewtonResult("converged", float(a), 0) if a > 1 else R.NewtonResult("rejected", None, 0, "linear")
    return R.newton_descent(Q, start=float(r))


def root_filters(P: IntPolynomial, config: SearchConfig) -> tuple[str | None, bool]:
    """Run the root-based steps; returns (failing step or None, ambiguous flag)."""
    nr = _newton(P, config.r)
    if nr.rejected:
        return "newton", False
    prof = R.perron_profile(P, config.r, config.mode.variant, config.margin, newton=nr, ties=config.ties)
    for step, name in (("dominant_real", "dominant_real"), ("simple", "simple"),
                       ("annulus", "annulus"), ("below_bound", "below_bound")):
        if prof.verdicts()[name] == R.NO:
            return step, False
    if config.mode.variant == NONORIENTABLE:
        if strip_unit_roots(P)[0].degree < MIN_DEGREE:
            return "min_degree", False
    return None, prof.ambiguous or nr.status == "ambiguous"


def _legal_constant(P: IntPolynomial, mode: SearchMode) -> bool:
    if mode.variant == NONORIENTABLE:
        return P.coeffs[0] in (1, -1)
    return P.coeffs[0] == (-1) ** mode.genus


def _bounds_ok(P: IntPolynomial, lo: Sequence[int], hi: Sequence[int], kmax: int) -> bool:
    ps = power_sums_from_coefficients(P, kmax).values
    return all(lo[k] <= ps[k - 1] <= hi[k] for k in range(1, kmax + 1))


def filter_pipeline(P: IntPolynomial, config: SearchConfig) -> CandidateReport | Rejection:
    """Post-enumeration filters on a single polynomial.

    Nonorientable: mod-2 reciprocity, the reciprocal-polynomial bound test,
    then the root filters.  Reversing: the skew-symmetry relation, the bound
    test on p_{g+1}..p_{2g-1}, then the root filters.
    """
    mode = config.mode
    d = mode.degree
    if not P.is_monic() or P.degree != d:
        raise ValueError(f"expected a monic polynomial of degree {d}")
    if not _legal_constant(P, mode):
        raise ValueError("constant term not allowed for this mode")
    ctx = SearchContext.build(config)
    if mode.variant == NONORIENTABLE:
        if not _bounds_ok(P, ctx.lo, ctx.hi, d - 1):
            return Rejection("box", "forward power sums out of range")
        if not is_mod2_reciprocal(P):
            return Rejection("mod2")
        if not _bounds_ok(reciprocal_transform(P), ctx.blo, ctx.bhi, d - 1):
            return Rejection("reciprocal_bounds")
    else:
        if not _bounds_ok(P, ctx.lo, ctx.hi, d - 1):
            return Rejection("skew_bounds", "power sums out of range")
        sym = classify_symmetry(P)
        if not sym.skew_reciprocal:
            return Rejection("skew_bounds", "coefficients are not skew-symmetric")
    step, _ = root_filters(P, config)
    if step is not None:
        return Rejection(step)
    return build_report(P, config)


# ---------------------------------------------------------------------------
# kernel plumbing

def coefficient_caps(B: Sequence[int], n: int) -> list[int]:
    """C_k >= |c_k| for any monic polynomial whose |p_k| <= B_k, k=1..n."""
    C = [0] * (n + 1)
    for k in range(1, n + 1):
        C[k] = (B[k] + sum(C[i] * B[k - i] for i in range(1, k))) // k
    return C


def int64_certificate(B: Sequence[int], C: Sequence[int], n: int) -> int:
    """Bound on every intermediate value the kernels form (Newton sums)."""
    worst = 0
    for k in range(1, n + 1):
        worst = max(worst, k * C[k] + sum(C[i] * B[k - i] for i in range(1, k)) + k * max(C) + B[k])
    return worst


@dataclass
class SearchContext:
    config: SearchConfig
    lo: np.ndarray
    hi: np.ndarray
    blo: np.ndarray
    bhi: np.ndarray
    cback: np.ndarray
    box: int
    exact: bool
    certificate: int

    @classmethod
    def build(cls, config: SearchConfig) -> SearchContext:
        mode = config.mode
        d = mode.degree
        strict = mode.variant == NONORIENTABLE
        table = power_sum_table(d, config.r, strict_lower=strict)
        lo = np.zeros(d + 1, np.int64)
        hi = np.zeros(d + 1, np.int64)
        for row in table:
            lo[row.k], hi[row.k] = row.lo, row.hi
        # the reciprocal polynomial is held to |p*_k| <= upper bound
        blo, bhi = -hi.copy(), hi.copy()
        B = [0] + [int(max(abs(lo[k]), abs(hi[k]))) for k in range(1, d)]
        C = coefficient_caps(B, d - 1)
        cback = np.zeros(d + 1, np.int64)
        cback[1:d] = C[1:d]
        free = d - 1 if strict else mode.genus
        box = math.prod(len(row) for row in table[:free])
        cert = int64_certificate(B, C, d - 1)
        return cls(config, lo, hi, blo, bhi, cback, box, cert >= INT64_SAFE, cert)

    @property
    def prefix_len(self) -> int:
        mode = self.config.mode
        free = mode.degree - 1 if mode.variant == NONORIENTABLE else mode.genus
        return min(2, free)


def plan_blocks(config: SearchConfig) -> list[tuple[int, ...]]:
    """Top-level prefix blocks (p_1, p_2) in DFS order; p_2 must make c_2 integral."""
    ctx = SearchContext.build(config)
    p1s = range(int(ctx.lo[1]), int(ctx.hi[1]) + 1)
    if ctx.prefix_len == 1:
        return [(p1,) for p1 in p1s]
    return [(p1, p2) for p1 in p1s for p2 in range(int(ctx.lo[2]), int(ctx.hi[2]) + 1)
            if (p2 - p1 * p1) % 2 == 0]


def shard_of(block_index: int, shards: int) -> int:
    return block_index % shards


def _digest(P: IntPolynomial) -> str:
    return hashlib.blake2b(P.canonical().encode(), digest_size=8).hexdigest()


@dataclass
class BlockResult:
    prefix: tuple[int, ...]
    counts: dict[str, int | None]
    nodes: int
    survivors: list[tuple[int, ...]]
    ambiguous: list[tuple[int, ...]]
    sample: list[tuple[str, tuple[int, ...], str]]  # (digest, coeffs, step)

    def to_record(self) -> dict:
        return {"prefix": list(self.prefix), "step_counters": self.counts, "nodes": self.nodes,
                "survivors": [list(s) for s in self.survivors],
                "ambiguous": [list(s) for s in self.ambiguous],
                "discard_sample": [[h, list(c), s] for h, c, s in self.sample]}

    @classmethod
    def from_record(cls, rec: dict) -> BlockResult:
        return cls(tuple(rec["prefix"]), dict(rec["step_counters"]), int(rec["nodes"]),
                   [tuple(s) for s in rec["survivors"]], [tuple(s) for s in rec["ambiguous"]],
                   [(h, tuple(c), s) for h, c, s in rec["discard_sample"]])


def _kernel_rows(ctx: SearchContext, prefix: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    mode = ctx.config.mode
    d = mode.degree
    level = ctx.config.trace_level
    pre = np.zeros(d + 1, np.int64)
    pre[1:len(prefix) + 1] = prefix
    counters = np.zeros(kernel.N_COUNTERS, np.int64)
    if ctx.exact:
        log.warning("int64 certificate %d exceeds %d; using exact enumeration", ctx.certificate, INT64_SAFE)
        if mode.variant == NONORIENTABLE:
            rows, cnt = reference.nonorientable_block(
                d, [int(x) for x in ctx.lo], [int(x) for x in ctx.hi], [int(x) for x in ctx.blo],
                [int(x) for x in ctx.bhi], [int(x) for x in ctx.cback], list(prefix),
                level == "fast", level != "full")
        else:
            rows, cnt = reference.reversing_block(mode.genus, [int(x) for x in ctx.lo],
                                                  [int(x) for x in ctx.hi], list(prefix))
        return np.array(rows, dtype=object).reshape(-1, d), np.array(cnt, dtype=object)
    cap = 1 << 14
    while True:
        out = np.zeros((cap, d), np.int64)
        counters[:] = 0
        if mode.variant == NONORIENTABLE:
            n = kernel.nonorientable_block(d, ctx.lo, ctx.hi, ctx.blo, ctx.bhi, ctx.cback,
                                           len(prefix), pre, level == "fast", level != "full",
                                           out, counters)
        else:
            n = kernel.reversing_block(mode.genus, ctx.lo, ctx.hi, len(prefix), pre, out, counters)
        if counters[5] == 0:
            return out[:n], counters
        cap *= 4


def run_block(ctx: SearchContext, prefix: tuple[int, ...]) -> BlockResult:
    config = ctx.config
    mode = config.mode
    level = config.trace_level
    rows, cnt = _kernel_rows(ctx, prefix)
    counts: dict[str, int | None] = {s: 0 for s in mode.steps}
    counts["box"] = None  # filled in once for the whole run
    if mode.variant == NONORIENTABLE:
        counts["integral"] = int(cnt[0]) if level == "full" else None
        counts["mod2"] = int(cnt[1]) if level != "fast" else None
        counts["constant"] = int(cnt[2]) if level != "fast" else None
        counts["reciprocal_bounds"] = int(cnt[3])
    else:
        counts["integral"] = int(cnt[0])
        counts["skew_bounds"] = int(cnt[1])
    root_steps = [s for s in ROOT_STEPS if s in counts]
    alive = {s: 0 for s in root_steps}
    survivors, ambiguous, sample = [], [], []
    for row in rows:
        c = [int(v) for v in row[:-1]]
        P = polynomial_from_search_coefficients(c, int(row[-1]))
        failed, amb = root_filters(P, config)
        for s in root_steps:
            if s == failed:
                break
            alive[s] += 1
        if failed is None:
            survivors.append(P.coeffs)
            if amb:
                ambiguous.append(P.coeffs)
        elif config.recheck_samples:
            item = (_digest(P), P.coeffs, failed)
            if len(sample) < config.recheck_samples:
                heapq.heappush(sample, _neg(item))
            elif item[0] < _neg(sample[0])[0]:
                heapq.heapreplace(sample, _neg(item))
    counts.update(alive)
    sample = sorted(_neg(x) for x in sample)
    return BlockResult(prefix, counts, int(cnt[4]), survivors, ambiguous, sample)


def _neg(item):
    # max-heap on the digest via its bitwise complement
    h, c, s = item
    return (format(~int(h, 16) & (2**64 - 1), "016x"), c, s)


# ---------------------------------------------------------------------------
# soundness re-check of discarded polynomials

@dataclass
class RecheckReport:
    checked: int
    confirmed: int
    unconfirmed: list[tuple[str, str]]  # (polynomial, step)
    errors: list[str]

    def to_dict(self) -> dict:
        return {"checked": self.checked, "confirmed": self.confirmed,
                "unconfirmed": [list(u) for u in self.unconfirmed], "errors": self.errors}


def recheck_discards(sample: Iterable[tuple[str, Sequence[int], str]], config: SearchConfig) -> RecheckReport:
    """Re-derive every sampled discard at ``recheck_dps`` digits.

    A discard is confirmed when the high-precision root data shows that P has
    no admissible Perron root below r, or (nonorientable) that its part off
    the unit circle has degree below three.
    """
    import mpmath

    checked = confirmed = 0
    bad, errors = [], []
    for _, coeffs, step in sample:
        P = IntPolynomial(tuple(coeffs))
        checked += 1
        if step == "min_degree":
            ok = strip_unit_roots(P)[0].degree < MIN_DEGREE
        else:
            try:
                distinct = R.all_roots_mp(P, config.recheck_dps)
            except R.RootFindingError as exc:
                errors.append(str(exc))
                continue
            with mpmath.workdps(config.recheck_dps):
                tiny = float(mpmath.mpf(10) ** (-(config.recheck_dps * 2) // 3))
                v, lead, sign = R._judge(P, distinct, config.r, config.mode.variant, tiny, tiny, final=True,
                                        ties=config.ties)
            ok = R.NO in v.values() or sign < 0 and _no_positive_root_in(P, config.r)
        if ok:
            confirmed += 1
        else:
            bad.append((str(P), step))
    return RecheckReport(checked, confirmed, bad, errors)


def _no_positive_root_in(P: IntPolynomial, r: Fraction) -> bool:
    # a negative dominant root with every verdict yes: the polynomial is only
    # discardable when it has no root in (1, r) at all
    Q, _ = strip_unit_roots(P)
    distinct = R.all_roots(Q, residual_bound=1e-6).with_multiplicity() if Q.degree > 0 else []
    return not any(abs(z.imag) < 1e-9 and 1 < z.real < float(r) for z, _ in distinct)
