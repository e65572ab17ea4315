import itertools
import json
import math
import shutil
from fractions import Fraction

import numpy as np
import pytest

from perron_sieve.poly import IntPolynomial, is_mod2_reciprocal, strip_unit_roots
from perron_sieve.search import (CheckpointError, Rejection, SearchConfig, SearchContext, SearchMode,
                                 enumerate_nonorientable, enumerate_reversing, filter_pipeline, plan_blocks,
                                 run_block, run_sharded)
from perron_sieve.search.engine import CandidateReport

P = IntPolynomial.parse


# ---------------------------------------------------------------------------
# brute force over a coefficient box, judged by eigenvalues of companion matrices

def _brute_force(d, r, constants, keep, tol=1e-9):
    """Every monic degree-d polynomial whose roots could lie in |z| < r."""
    caps = [math.floor(math.comb(d, k) * r**k) for k in range(1, d)]
    out = []
    for const in constants:
        for mid in itertools.product(*[range(-c, c + 1) for c in caps]):
            out.append((const,) + tuple(reversed(mid)) + (1,))
    polys = np.array(out, dtype=np.int64)
    comp = np.zeros((len(polys), d, d))
    comp[:, np.arange(d - 1), np.arange(1, d)] = 1
    comp[:, d - 1, :] = -polys[:, :d]
    eig = np.linalg.eigvals(comp)
    survivors = set()
    for coeffs, zs in zip(polys, eig):
        if keep(IntPolynomial(tuple(int(a) for a in coeffs)), zs, float(r), tol):
            survivors.add(tuple(int(a) for a in coeffs))
    return survivors


def _perron_ok(zs, r, tol, exempt_negative_inverse=False):
    mods = np.abs(zs)
    i = int(np.argmax(mods))
    lam = zs[i]
    if abs(lam.imag) > tol or lam.real <= 1 or lam.real >= r:
        return False
    rest = np.delete(zs, i)
    if np.any(np.abs(rest) >= lam.real - tol):
        return False
    if exempt_negative_inverse:
        j = int(np.argmin(np.abs(rest + 1 / lam.real)))
        if abs(rest[j] + 1 / lam.real) > 1e-6:
            return False
        rest = np.delete(rest, j)
    return bool(np.all(np.abs(rest) > 1 / lam.real + tol))


def _nonor_keep(Q, zs, r, tol):
    return is_mod2_reciprocal(Q) and strip_unit_roots(Q)[0].degree >= 3 and _perron_ok(zs, r, tol)


def _rev_keep(g):
    def keep(Q, zs, r, tol):
        c, n = Q.coeffs, Q.degree
        skew = all(c[i] == (-1) ** (g + i) * c[n - i] for i in range(n + 1))
        return skew and _perron_ok(zs, r, tol, exempt_negative_inverse=True)
    return keep


@pytest.mark.parametrize("g, r", [(4, "3"), (5, "1.52"), (5, "2.3")])
def test_nonorientable_matches_brute_force(g, r):
    res = run_sharded(SearchConfig(SearchMode.nonorientable(g), r))
    want = _brute_force(g - 1, Fraction(r), (1, -1), _nonor_keep)
    assert {p.coeffs for p in res.polynomials} == want


@pytest.mark.parametrize("g, r", [(1, "4.5"), (2, "1.62"), (2, "2.6")])
def test_reversing_matches_brute_force(g, r):
    res = run_sharded(SearchConfig(SearchMode.reversing(g), r))
    want = _brute_force(2 * g, Fraction(r), ((-1) ** g,), _rev_keep(g))
    assert {p.coeffs for p in res.polynomials} == want


# ---------------------------------------------------------------------------
# compiled kernel against the big-integer reference

@pytest.mark.parametrize("variant, g, r", [("nonorientable", 8, "1.2885"), ("nonorientable", 9, "1.3568"),
                                           ("reversing", 3, "1.253"), ("reversing", 4, "1.3")])
@pytest.mark.parametrize("trace", ["full", "partial", "fast"])
def test_kernel_matches_reference(variant, g, r, trace):
    config = SearchConfig(SearchMode(variant, g), r, trace=trace, recheck_samples=0)
    ctx = SearchContext.build(config)
    assert not ctx.exact
    slow = SearchContext.build(config)
    slow.exact = True
    for prefix in plan_blocks(config)[::3]:
        a, b = run_block(ctx, prefix), run_block(slow, prefix)
        assert (a.counts, a.nodes, a.survivors) == (b.counts, b.nodes, b.survivors)


def test_plan_blocks_need_integral_c2():
    config = SearchConfig(SearchMode.nonorientable(12), "1.1743")
    for p1, p2 in plan_blocks(config):
        assert (p2 - p1 * p1) % 2 == 0


# ---------------------------------------------------------------------------
# single-polynomial pipeline

def test_pipeline_large_root_rejected():
    out = filter_pipeline(P("x^3 - 2*x^2 - 1"), SearchConfig(SearchMode.nonorientable(4), "1.84"))
    assert isinstance(out, Rejection)


def test_pipeline_table_product_survives():
    out = filter_pipeline(P("x^9 - x^5 - x^4 - 1") * P("x - 1"), SearchConfig(SearchMode.nonorientable(11), "1.22262"))
    assert isinstance(out, CandidateReport) and out.largest_root_5dp == "1.21728"


def test_pipeline_cyclotomic_rejected():
    out = filter_pipeline(P("x^3 + x^2 + x + 1"), SearchConfig(SearchMode.nonorientable(4), "1.84"))
    assert isinstance(out, Rejection)


def test_pipeline_rejects_wrong_degree():
    with pytest.raises(ValueError):
        filter_pipeline(P("x^4 - x - 1"), SearchConfig(SearchMode.nonorientable(4), "1.84"))


def test_pipeline_quadratic_unit_times_cyclotomic():
    # the conjugate -1/lambda of a quadratic unit sits on the inner circle, so
    # such products fall to the annulus test before the degree rule
    out = filter_pipeline(P("x^2 - x - 1") * P("x - 1"), SearchConfig(SearchMode.nonorientable(4), "1.7"))
    assert isinstance(out, Rejection) and out.step == "annulus"


# ---------------------------------------------------------------------------
# full runs

def test_config_validation():
    with pytest.raises(ValueError):
        SearchMode.nonorientable(3)
    with pytest.raises(ValueError):
        SearchConfig(SearchMode.reversing(2), "1.0")
    with pytest.raises(ValueError):
        SearchConfig(SearchMode.reversing(2), "1.62", shards=2, shard_index=2)
    with pytest.raises(TypeError):
        SearchConfig(SearchMode.reversing(2), 1.62)


def test_enumerate_wrappers_check_variant():
    with pytest.raises(ValueError):
        enumerate_reversing(SearchConfig(SearchMode.nonorientable(4), "1.84"))
    polys, trace = enumerate_nonorientable(SearchConfig(SearchMode.nonorientable(4), "1.84"))
    assert [c.polynomial for c in polys] == [P("x^3 - x^2 - x - 1")]
    assert trace.counts["min_degree"] == 1


@pytest.mark.parametrize("g", [4, 5, 6, 7, 8, 9, 10])
def test_candidate_invariants(runs, g):
    res = runs.get("nonorientable", g)
    assert not res.trace.monotonicity_violations()
    assert res.recheck is not None and res.recheck.confirmed == res.recheck.checked
    for c in res.candidates:
        Q = c.polynomial
        assert Q.is_monic() and Q.degree == g - 1 and Q[0] in (1, -1)
        assert is_mod2_reciprocal(Q)
        assert set(c.profile.verdicts().values()) <= {"yes", "ambiguous"}
        assert c.unit_circle_clean


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_reversing_candidate_invariants(runs, g):
    res = runs.get("reversing", g)
    assert not res.trace.monotonicity_violations()
    for c in res.candidates:
        Q = c.polynomial
        assert Q[0] == (-1) ** g
        assert all(Q[i] == (-1) ** (g + i) * Q[2 * g - i] for i in range(2 * g + 1))


def test_reversing_genus2_reports_stripped_part(runs):
    res = runs.get("reversing", 2)
    assert res.polynomials == [P("x^2 - x - 1") * P("x^2 - 1")]
    assert res.candidates[0].stripped == P("x^2 - x - 1")
    assert res.candidates[0].largest_root_5dp == "1.61803"


# ---------------------------------------------------------------------------
# sharding and checkpoints

def test_shard_invariance_g10():
    outs = []
    for shards in (1, 3, 8):
        res = run_sharded(SearchConfig(SearchMode.nonorientable(10), "1.2173", shards=shards, workers=1))
        outs.append(([p.coeffs for p in res.polynomials], res.trace.to_dict()))
    assert outs[0] == outs[1] == outs[2]


def test_single_shards_merge_to_whole(tmp_path):
    config = dict(mode=SearchMode.nonorientable(9), r="1.3568", shards=3)
    ck = tmp_path / "g9.ckpt"
    parts = [run_sharded(SearchConfig(**config, shard_index=i, checkpoint_path=str(ck))) for i in range(3)]
    assert all(p.complete for p in parts)
    assert sum(p.blocks_total for p in parts) == len(plan_blocks(SearchConfig(**config)))
    merged = run_sharded(SearchConfig(**config, checkpoint_path=str(ck)))
    whole = run_sharded(SearchConfig(SearchMode.nonorientable(9), "1.3568"))
    assert merged.polynomials == whole.polynomials and len(whole.polynomials) == 18
    assert sum(len(p.polynomials) for p in parts) == 18


def _lines(path):
    return path.read_text().splitlines(keepends=True)


@pytest.mark.slow
def test_resume_g12_after_interrupt(tmp_path, runs):
    whole = runs.get("nonorientable", 12)
    ck = tmp_path / "g12.ckpt"
    first = run_sharded(SearchConfig(SearchMode.nonorientable(12), "1.1743", shards=4, checkpoint_path=str(ck)))
    lines = _lines(ck)
    assert json.loads(lines[-1])["status"] == "merged"
    # keep the header and half the blocks, then a torn line as if killed mid-write
    cut = tmp_path / "cut.ckpt"
    blocks = [ln for ln in lines if '"status": "done"' in ln]
    cut.write_text(lines[0] + "".join(blocks[: len(blocks) // 2]) + blocks[len(blocks) // 2][:40])
    resumed = run_sharded(SearchConfig(SearchMode.nonorientable(12), "1.1743", shards=4, checkpoint_path=str(cut)))
    assert resumed.complete
    assert resumed.polynomials == first.polynomials == whole.polynomials == [P("x^11 - x^6 - x^5 - 1")]
    assert resumed.trace.counts == first.trace.counts == whole.trace.counts


def test_corrupt_checkpoint_refused(tmp_path):
    config = SearchConfig(SearchMode.nonorientable(6), "1.43", checkpoint_path=str(tmp_path / "c.ckpt"))
    run_sharded(config)
    lines = _lines(tmp_path / "c.ckpt")
    bad = tmp_path / "bad.ckpt"
    bad.write_text(lines[0] + lines[1].replace('"nodes": ', '"nodes": 1') + "".join(lines[2:]))
    with pytest.raises(CheckpointError, match="bad.ckpt:2"):
        run_sharded(SearchConfig(SearchMode.nonorientable(6), "1.43", checkpoint_path=str(bad)))


def test_checkpoint_of_other_run_refused(tmp_path):
    ck = tmp_path / "c.ckpt"
    run_sharded(SearchConfig(SearchMode.nonorientable(6), "1.43", checkpoint_path=str(ck)))
    with pytest.raises(CheckpointError, match="different run"):
        run_sharded(SearchConfig(SearchMode.nonorientable(6), "1.44", checkpoint_path=str(ck)))


def test_sealed_checkpoint_reused_without_work(tmp_path):
    ck = tmp_path / "c.ckpt"
    a = run_sharded(SearchConfig(SearchMode.nonorientable(8), "1.2885", checkpoint_path=str(ck)))
    copy = tmp_path / "copy.ckpt"
    shutil.copy(ck, copy)
    b = run_sharded(SearchConfig(SearchMode.nonorientable(8), "1.2885", checkpoint_path=str(copy)))
    assert a.polynomials == b.polynomials and a.trace.counts == b.trace.counts


def test_large_genus_plan_supported():
    # not run to completion here; the plan and the int64 certificate must be sound
    for g, r in ((18, "1.10939"), (20, "1.09731")):
        config = SearchConfig(SearchMode.nonorientable(g), r, shards=30)
        ctx = SearchContext.build(config)
        blocks = plan_blocks(config)
        assert len(blocks) > 30 and not ctx.exact
        assert {i % 30 for i in range(len(blocks))} == set(range(30))
