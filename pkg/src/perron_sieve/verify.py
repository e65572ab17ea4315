"""End-to-end checks against the published tables.

Each suite returns a list of ``Check`` records; the CLI prints one line per
record and the acceptance tests assert on them.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

from . import constructions as C
from . import known
from .poly import (IntPolynomial, charpoly, classify_symmetry, coefficients_from_power_sums, matmul,
                   power_sums_from_coefficients, reciprocal_transform, search_coefficients, strip_cyclotomic)
from .roots import format_5dp, largest_positive_root, unit_circle_diagnostic
from .search import SearchConfig, SearchMode, run_sharded


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    soft: bool = False  # reported for comparison, never counted as a failure

    @property
    def counts(self) -> bool:
        return not self.soft

    def line(self) -> str:
        tag = ("pass" if self.passed else "miss") + " (soft)" if self.soft else "PASS" if self.passed else "FAIL"
        return f"{tag}  {self.name}" + (f"  [{self.detail}]" if self.detail else "")


def _P(text: str) -> IntPolynomial:
    return IntPolynomial.parse(text)


def _product(text: str) -> IntPolynomial:
    out = IntPolynomial((1,))
    for part in text.split("*"):
        out = out * _P(part.strip().strip("()"))
    return out


def run_nonor(g: int, **kw):
    r = known.NONOR_ELIMINATION[g][0]
    return run_sharded(SearchConfig(SearchMode.nonorientable(g), r, **kw))


def run_rev(g: int, **kw):
    r = known.REV_ELIMINATION[g][0]
    return run_sharded(SearchConfig(SearchMode.reversing(g), r, **kw))


# ---------------------------------------------------------------------------
# suites

def suite_nonor_elimination(genera=(4, 5, 6, 7, 8, 9, 10, 11, 12), run=run_nonor, **kw) -> list[Check]:
    checks = []
    for g in genera:
        r, expect, root = known.NONOR_ELIMINATION[g]
        t0 = time.perf_counter()
        res = run(g, **kw)
        dt = time.perf_counter() - t0
        polys = res.polynomials
        if isinstance(expect, int):
            checks.append(Check(f"nonorientable g={g} r={r}: {expect} candidates", len(polys) == expect,
                                f"got {len(polys)} in {dt:.1f}s"))
            for prod in known.ODD_GENUS_PRODUCTS.get(g, ()):
                checks.append(Check(f"nonorientable g={g}: contains {prod}", _product(prod) in polys))
        else:
            want = _P(expect)
            got = res.candidates[0].largest_root_5dp if len(polys) == 1 else None
            checks.append(Check(f"nonorientable g={g} r={r}: single candidate {want}",
                                polys == [want] and got == root,
                                f"got {[str(p) for p in polys]} root {got} in {dt:.1f}s"))
        checks.append(Check(f"nonorientable g={g}: no ambiguous survivors", res.ambiguous == 0,
                            f"{res.ambiguous} ambiguous"))
    return checks


def suite_rev_elimination(genera=(1, 2, 3, 4, 5, 6, 7, 8), run=run_rev, **kw) -> list[Check]:
    checks = []
    for g in genera:
        r, table_poly, root = known.REV_ELIMINATION[g]
        t0 = time.perf_counter()
        res = run(g, **kw)
        dt = time.perf_counter() - t0
        polys = res.polynomials
        target, _ = strip_cyclotomic(_P(table_poly))
        ok = len(polys) == 1
        detail = f"got {[str(p) for p in polys]} in {dt:.1f}s"
        if ok:
            cand = res.candidates[0]
            ok = cand.stripped == target and cand.largest_root_5dp == root
            if g % 2 == 0:
                # even genus: the odd-genus factor times x^2 - 1
                prev, _ = strip_cyclotomic(_P(known.REV_ELIMINATION[g - 1][1]))
                ok = ok and polys[0] == prev * _P("x^2 - 1")
            elif g >= 3:
                ok = ok and polys[0] == target
        checks.append(Check(f"reversing g={g} r={r}: single candidate, part off the circle {target}", ok, detail))
    return checks


def suite_degree11_trace(run=run_nonor, **kw) -> list[Check]:
    res = run(12, **kw)
    counts = res.trace.counts
    checks = []
    box = 1
    for f in known.D11_BOX_FACTORS:
        box *= f
    checks.append(Check("d=11 box size equals the published total", counts["box"] == known.D11_BOX_PRINTED,
                        f"ours {counts['box']:,}, published {known.D11_BOX_PRINTED:,}, "
                        f"product of published range sizes {box:,}", soft=True))
    for step, want in known.D11_SOFT.items():
        checks.append(Check(f"d=11 step {step} = {want:,}", counts[step] == want, f"got {counts[step]}", soft=True))
    for step, want in known.D11_TAIL.items():
        checks.append(Check(f"d=11 step {step} = {want}", counts[step] == want, f"got {counts[step]}"))
    return checks


def suite_nonor_family() -> list[Check]:
    """Best f_{n,k} per genus against the minima table."""
    checks = []
    for g, (root, poly, sing) in known.NONOR_MINIMA.items():
        row = C.best_in_family(g, C.NONOR_FAMILY)
        P = _P(poly)
        ok = row.minimal_part == P and row.stretch_5dp == root and row.singularity.label() == sing
        checks.append(Check(f"N_{g}: f_{{{row.params['n']},{row.params['k']}}} realises {poly} ~ {root} {sing}", ok,
                            f"got {row.minimal_part} ~ {row.stretch_5dp} {row.singularity.label()}"))
    return checks


def suite_nonor_minima(run=run_nonor) -> list[Check]:
    checks = suite_nonor_family()
    for g in (4, 5, 6, 7, 8, 10, 12):
        r, expect, root = known.NONOR_ELIMINATION[g]
        res = run(g)
        checks.append(Check(f"N_{g}: elimination below {r} leaves only {expect}", res.polynomials == [_P(expect)],
                            f"got {[str(p) for p in res.polynomials]}"))
    return checks


def suite_rev_family() -> list[Check]:
    """psi_{g+1} against the reversing minima table."""
    checks = []
    for g, (root, poly, sing) in known.REV_MINIMA.items():
        k = g + 1
        P = C.psik_polynomial(k)
        Q, _ = strip_cyclotomic(P)
        lam = format_5dp(largest_positive_root(P))
        _, s = C.psik_info(k)
        ok = P == _P(poly) and lam == root and s.label() == sing and charpoly(C.psik_matrix(k)) == P
        checks.append(Check(f"S_{g}: psi_{k} has {poly} ~ {root} {sing}", ok, f"got {lam} {s.label()}; minimal part {Q}"))
    return checks


def suite_rev_repetition(genera=range(1, 9), run=run_rev) -> list[Check]:
    """Even genus g repeats the stretch factor found for g - 1."""
    checks = []
    prev = None
    for g in genera:
        roots = [c.largest_root_5dp for c in run(g).candidates]
        if g % 2 == 0 and prev is not None:
            checks.append(Check(f"S_{g}: smallest candidate root equals S_{g - 1}'s", roots == prev,
                                f"{roots} vs {prev}"))
        prev = roots
    return checks


def suite_rev_minima(run=run_rev) -> list[Check]:
    return suite_rev_family() + suite_rev_repetition(run=run)


def _random_poly(rng: random.Random, dmax=12, cmax=6) -> IntPolynomial:
    d = rng.randint(1, dmax)
    return IntPolynomial(tuple(rng.randint(-cmax, cmax) for _ in range(d)) + (1,))


def _random_symplectic(rng: random.Random, m: int, steps: int = 6):
    """Product of elementary symplectic transvections-like generators."""
    n = 2 * m
    M = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    for _ in range(steps):
        kind = rng.randrange(3)
        a = rng.choice((-1, 1))
        rows = [[int(i == j) for j in range(n)] for i in range(n)]
        if kind == 0:  # [[I, S], [0, I]] with S symmetric
            i, j = rng.randrange(m), rng.randrange(m)
            rows[i][m + j] += a
            if i != j:
                rows[j][m + i] += a
        elif kind == 1:  # [[I, 0], [S, I]]
            i, j = rng.randrange(m), rng.randrange(m)
            rows[m + i][j] += a
            if i != j:
                rows[m + j][i] += a
        else:  # [[A, 0], [0, A^-T]] with A an elementary matrix
            i, j = rng.sample(range(m), 2) if m > 1 else (0, 0)
            if i != j:
                rows[i][j] += a
                rows[m + j][m + i] -= a
        M = matmul(M, tuple(tuple(r) for r in rows))
    return M


def suite_properties(seed: int = 0, n_newton: int = 10_000, n_symplectic: int = 500) -> list[Check]:
    rng = random.Random(seed)
    checks = []

    bad = 0
    for _ in range(n_newton):
        P = _random_poly(rng)
        d = P.degree
        ps = power_sums_from_coefficients(P, d)
        back = coefficients_from_power_sums(ps)
        if not back.ok or back.c != search_coefficients(P):
            bad += 1
    checks.append(Check(f"Newton identities round trip on {n_newton} random polynomials", bad == 0, f"{bad} failures"))

    bad = 0
    for _ in range(n_newton // 10):
        P = _random_poly(rng)
        P = IntPolynomial((rng.choice((-1, 1)),) + P.coeffs[1:]) if P.degree >= 1 else P
        if P.degree >= 1 and reciprocal_transform(reciprocal_transform(P)) != P:
            bad += 1
    checks.append(Check("reciprocal transform is an involution", bad == 0, f"{bad} failures"))

    bad = []
    for n in range(3, 25):
        for k in range(1, n):
            if (n - k) % 2 == 0:
                continue
            surf = C.sigma_nk_info(n, k)
            s = C.fnk_singularities(n, k).singularity
            if s.euler_poincare_sum() != 2 * surf.genus - 4:
                bad.append((n, k))
    for k in range(4, 26, 2):
        surf, s = C.psik_info(k)
        if s.euler_poincare_sum() != 4 * surf.genus - 4:
            bad.append(("psi", k))
    checks.append(Check("Euler-Poincare identity for every family member in range", not bad, f"violations {bad}"))

    bad = 0
    for _ in range(n_symplectic):
        m = rng.randint(1, 4)
        S = _random_symplectic(rng, m)
        D = tuple(tuple(int(i == j) * (1 if i < m else -1) for j in range(2 * m)) for i in range(2 * m))
        A = matmul(S, D)
        if not C.is_anti_symplectic(A) or not classify_symmetry(charpoly(A)).skew_reciprocal:
            bad += 1
    checks.append(Check(f"charpoly of {n_symplectic} random anti-symplectic matrices is skew-reciprocal", bad == 0,
                        f"{bad} failures"))
    return checks


def suite_unit_circle(results) -> list[Check]:
    """Stripped survivors must have no roots on the unit circle."""
    dirty = []
    for label, res in results:
        for c in res.candidates:
            rep = unit_circle_diagnostic(c.polynomial)
            if not rep.clean:
                dirty.append(f"{label}: {c.polynomial}")
    return [Check("unit-circle diagnostic clean on all stripped survivors", not dirty, "; ".join(dirty[:5]))]


def suite_shard_invariance(g: int = 10, shards=(1, 3, 7), run=run_nonor) -> list[Check]:
    outs = {}
    for s in shards:
        res = run(g, shards=s, workers=1)
        outs[s] = ([p.coeffs for p in res.polynomials], res.trace.to_dict()["counts"])
    base = outs[shards[0]]
    same = all(v == base for v in outs.values())
    return [Check(f"g={g} survivors and trace identical for shard counts {shards}", same)]


def suite_constructions() -> list[Check]:
    checks = []
    bad = [(n, k) for n in range(3, 21) for k in range(1, n)
           if (n - k) % 2 and charpoly(C.fnk_matrix(n, k)) != C.fnk_polynomial(n, k)]
    checks.append(Check("charpoly(f_{n,k} action) == defining polynomial, n <= 20", not bad, f"{bad}"))
    bad = [k for k in range(2, 13, 2) if charpoly(C.psik_matrix(k)) != C.psik_polynomial(k)]
    checks.append(Check("charpoly(psi_k action) == defining polynomial, even k <= 12", not bad, f"{bad}"))
    M = C.fnk_matrix(10, 5)
    want = tuple(tuple(int(j == i + 1) for j in range(10)) for i in range(9)) + known.bits([known.F_10_5_LAST_ROW])
    checks.append(Check("f_{10,5} action matrix entry for entry", M == want))
    checks.append(Check("psi_4 intersection matrix entry for entry",
                        C.psik_intersection(4) == known.bits(known.PSI4_INTERSECTION)))
    want = tuple(tuple(int(j == i + 1) for j in range(8)) for i in range(7)) + known.bits([known.PSI4_ACTION_LAST_ROW])
    checks.append(Check("psi_4 action matrix entry for entry", C.psik_matrix(4) == want))
    for g, (n, k, root, minimal, sing) in known.NONOR_FAMILY_ROWS.items():
        row = C.best_in_family(g, C.NONOR_FAMILY)
        ok = ((row.params["n"], row.params["k"]) == (n, k) and row.stretch_5dp == root
              and row.minimal_part == _P(minimal) and row.singularity.label() == sing)
        checks.append(Check(f"family table g={g}: f_{{{n},{k}}} ~ {root} {sing}", ok,
                            f"got {row.params} {row.stretch_5dp} {row.minimal_part} {row.singularity.label()}"))
    for g, (num, den) in known.NONOR_FAMILY_QUOTIENTS.items():
        q, rem = _P(num).divmod_monic(_P(den))
        n, k = known.NONOR_FAMILY_ROWS[g][:2]
        checks.append(Check(f"family table g={g}: quotient form", rem.is_zero() and _P(num) == C.fnk_polynomial(n, k)
                            and strip_cyclotomic(q)[0] == _P(known.NONOR_FAMILY_ROWS[g][3])))
    return checks


SUITES: dict[str, Callable[[], list[Check]]] = {
    "thm1.1": suite_nonor_minima,
    "thm1.3": suite_rev_minima,
    "prop6.1-fast": suite_nonor_elimination,
    "prop6.2-fast": suite_rev_elimination,
    "alg-trace-d11": suite_degree11_trace,
    "constructions": suite_constructions,
    "properties": lambda: suite_properties() + suite_shard_invariance(),
}
