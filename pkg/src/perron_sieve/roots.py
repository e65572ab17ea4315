"""Perron roots and the root-based filters.

Exact where it is cheap (square-freeness, sign of P at a rational), numerical
with a safety margin elsewhere.  Every verdict is a tri-state; anything that
is not a clear "no" keeps the polynomial alive.
"""
from __future__ import annotations

import math
from decimal import ROUND_HALF_UP, Decimal
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .poly import IntPolynomial, evaluate, strip_cyclotomic

YES = "yes"
NO = "no"
AMBIGUOUS = "ambiguous"

NONORIENTABLE = "nonorientable"
REVERSING = "reversing"

DEFAULT_MARGIN = 1e-9
NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 200
UNIT_CIRCLE_TOL = 1e-8

# what a root other than lambda with |z| == lambda does to the "simple" step
TIES_REJECT = "reject"        # any such root: lambda is not strictly dominant
TIES_REAL_ONLY = "real-only"  # only the real root -lambda counts; non-real ties pass
TIE_POLICIES = (TIES_REJECT, TIES_REAL_ONLY)


class RootFindingError(RuntimeError):
    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


# ---------------------------------------------------------------------------
# Newton descent from above

@dataclass(frozen=True)
class NewtonResult:
    status: str  # "converged" | "rejected" | "ambiguous"
    value: float | None
    iterations: int
    reason: str = ""

    @property
    def rejected(self) -> bool:
        return self.status == "rejected"


def cauchy_bound(P: IntPolynomial) -> float:
    return 1.0 + max(abs(a) for a in P.coeffs[:-1])


def _horner2(coeffs_desc: Sequence[float], x: float) -> tuple[float, float]:
    p = 0.0
    dp = 0.0
    for a in coeffs_desc:
        dp = dp * x + p
        p = p * x + a
    return p, dp


def newton_descent(P: IntPolynomial, start: float | None = None,
                   tol: float = NEWTON_TOL, max_iter: int = NEWTON_MAX_ITER) -> NewtonResult:
    """Newton's method started above every root; must descend monotonically.

    Rejects when an iterate fails to move down, when P' is not positive at an
    iterate, or when the iterates drop to 1 or below.  Hitting the iteration
    cap is ambiguous, which callers treat as "keep".
    """
    if not P.is_monic() or P.degree < 2:
        raise ValueError("newton_descent needs a monic polynomial of degree >= 2")
    desc = [float(a) for a in reversed(P.coeffs)]
    x = cauchy_bound(P) if start is None else start
    for it in range(1, max_iter + 1):
        p, dp = _horner2(desc, x)
        if not dp > 0:
            return NewtonResult("rejected", None, it, "derivative not positive")
        step = p / dp
        x_new = x - step
        if step <= 0:
            if -step < tol * max(1.0, x):
                return NewtonResult("converged", x, it)
            return NewtonResult("rejected", None, it, "iterates not decreasing")
        if x_new <= 1.0:
            return NewtonResult("rejected", None, it, "iterates dropped to 1")
        if step < tol:
            return NewtonResult("converged", x_new, it)
        x = x_new
    return NewtonResult("ambiguous", x, max_iter, "iteration cap")


# ---------------------------------------------------------------------------
# exact gcd and square-free decomposition

def _primitive(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    g = 0
    for a in c:
        g = math.gcd(g, a)
    if g > 1:
        c = [a // g for a in c]
    if c and c[-1] < 0:
        c = [-a for a in c]
    return c


def _pseudo_rem(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    lb = b[-1]
    db = len(b) - 1
    while len(a) - 1 >= db and any(a):
        la = a[-1]
        shift = len(a) - 1 - db
        a = [x * lb for x in a]
        for i, bc in enumerate(b):
            a[shift + i] -= la * bc
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


def poly_gcd(P: IntPolynomial, Q: IntPolynomial) -> IntPolynomial:
    """Primitive gcd over Z by the primitive pseudo-remainder sequence."""
    a = _primitive(list(P.coeffs))
    b = _primitive(list(Q.coeffs))
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _primitive(_pseudo_rem(a, b))
        a, b = b, r
    return IntPolynomial(tuple(a))


def is_squarefree(P: IntPolynomial) -> bool:
    if P.is_zero():
        raise ValueError("zero polynomial")
    return poly_gcd(P, P.derivative()).degree <= 0


def squarefree_factors(P: IntPolynomial) -> list[tuple[IntPolynomial, int]]:
    """Yun's decomposition of a monic P: [(A_i, i)] with P = prod A_i^i.

    Every A_i is monic and square-free; constant factors are omitted.
    """
    if not P.is_monic():
        raise ValueError("squarefree_factors expects a monic polynomial")
    if P.degree <= 0:
        return []
    dP = P.derivative()
    a0 = poly_gcd(P, dP)
    if a0.degree == 0:
        return [(P, 1)]
    b, _ = P.divmod_monic(a0)
    c, _ = dP.divmod_monic(a0)
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d) if not d.is_zero() else b
        if a.degree > 0:
            out.append((a, i))
        b, _ = b.divmod_monic(a)
        c, _ = d.divmod_monic(a)
        d = c - b.derivative()
        i += 1
    return out


def sign_at(P: IntPolynomial, x: Fraction) -> int:
    v = evaluate(P, Fraction(x))
    return (v > 0) - (v < 0)


# ---------------------------------------------------------------------------
# all complex roots

@dataclass(frozen=True)
class RootSet:
    roots: tuple[complex, ...]
    residual: float  # max |P(z)| / sum |a_i||z|^i over the reported roots
    multiplicities: tuple[int, ...] = ()

    def with_multiplicity(self) -> list[tuple[complex, int]]:
        """Distinct roots paired with their exact multiplicities."""
        return list(zip(self.roots, self.multiplicities))


def _polish(desc: np.ndarray, ddesc: np.ndarray, z: complex, steps: int = 3) -> complex:
    for _ in range(steps):
        p = np.polyval(desc, z)
        dp = np.polyval(ddesc, z)
        if dp == 0:
            break
        z_new = z - p / dp
        if abs(np.polyval(desc, z_new)) < abs(p):
            z = z_new
        else:
            break
    return complex(z)


def _relative_residual(desc: np.ndarray, z: complex) -> float:
    mags = np.abs(desc) * np.abs(z) ** np.arange(len(desc) - 1, -1, -1)
    scale = float(mags.sum()) or 1.0
    return float(abs(np.polyval(desc, z))) / scale


def _conjugate_closed(zs: list[complex]) -> list[complex]:
    # pair each upper half-plane root with the nearest lower one and symmetrize
    out = []
    upper, lower = [], []
    for z in zs:
        if abs(z.imag) <= 1e-12 * max(1.0, abs(z)):
            out.append(complex(z.real, 0.0))
        elif z.imag > 0:
            upper.append(z)
        else:
            lower.append(z)
    if len(upper) != len(lower):
        return out + upper + lower
    for u in upper:
        l = _pop_nearest(lower, u.conjugate())
        m = complex((u.real + l.real) / 2, (u.imag - l.imag) / 2)
        out.extend((m, m.conjugate()))
    return out


def _float_roots(F: IntPolynomial) -> list[complex]:
    desc = np.array([float(a) for a in reversed(F.coeffs)])
    if F.degree == 1:
        return [complex(-desc[1] / desc[0], 0.0)]
    ddesc = np.polyder(desc)
    return _conjugate_closed([_polish(desc, ddesc, complex(z)) for z in np.roots(desc)])


def all_roots(P: IntPolynomial, residual_bound: float = 1e-10) -> RootSet:
    """All complex roots with multiplicity, via companion eigenvalues.

    Monic input is split into square-free factors first, so multiplicities are
    exact and each eigen-solve only sees simple roots.  Non-real roots come in
    conjugate pairs.  ``roots`` lists each root once per multiplicity;
    ``multiplicities`` is aligned with the distinct roots at the front of
    ``with_multiplicity``.
    """
    if P.is_zero():
        raise ValueError("zero polynomial has no root set")
    if P.degree == 0:
        return RootSet((), 0.0)
    factors = squarefree_factors(P) if P.is_monic() else [(P, 1)]
    distinct: list[tuple[complex, int]] = []
    res = 0.0
    for F, m in factors:
        desc = np.array([float(a) for a in reversed(F.coeffs)])
        zs = _float_roots(F)
        if len(zs) != F.degree:
            raise RootFindingError(f"lost roots of factor {F}", partial=zs)
        res = max(res, max(_relative_residual(desc, z) for z in zs))
        distinct.extend((z, m) for z in zs)
    if res > residual_bound:
        raise RootFindingError(f"residual {res:.3g} exceeds {residual_bound:.3g} for {P}",
                               partial=[z for z, _ in distinct])
    flat = [z for z, _ in distinct]
    flat += [z for z, m in distinct for _ in range(m - 1)]
    return RootSet(tuple(flat), res, tuple(m for _, m in distinct))


def all_roots_mp(P: IntPolynomial, dps: int = 34) -> list[tuple[object, int]]:
    """Distinct roots as mpmath numbers with exact multiplicities."""
    out = []
    factors = squarefree_factors(P) if P.is_monic() else [(P, 1)]
    with mpmath.workdps(dps):
        for F, m in factors:
            coeffs = [int(a) for a in reversed(F.coeffs)]
            if F.degree == 1:
                zs = [mpmath.mpc(mpmath.mpf(-coeffs[1]) / coeffs[0])]
            else:
                try:
                    zs = mpmath.polyroots(coeffs, maxsteps=200, extraprec=3 * dps)
                except mpmath.libmp.NoConvergence as exc:
                    raise RootFindingError(f"no convergence at {dps} digits for {F}") from exc
            out.extend((mpmath.mpc(z), m) for z in zs)
    return out


# ---------------------------------------------------------------------------
# profile

@dataclass
class RootProfile:
    """Verdicts of the root filters for one polynomial.

    ``perron_value`` is the modulus of the real root of largest modulus;
    ``dominant_sign`` says whether that root is positive or negative.
    """
    perron_value: float | None
    perron_converged: bool
    dominant_is_real: str = AMBIGUOUS
    simple: str = AMBIGUOUS
    annulus_ok: str = AMBIGUOUS
    below_bound: str = AMBIGUOUS
    roots: tuple[complex, ...] = ()
    residual: float = math.inf
    notes: list[str] = field(default_factory=list)
    dominant_sign: int = 1
    newton_value: float | None = None
    precision: str = "double"

    def verdicts(self) -> dict[str, str]:
        return {
            "dominant_real": self.dominant_is_real,
            "simple": self.simple,
            "annulus": self.annulus_ok,
            "below_bound": self.below_bound,
        }

    @property
    def ambiguous(self) -> bool:
        return AMBIGUOUS in self.verdicts().values()

    def first_failure(self) -> str | None:
        for name, v in self.verdicts().items():
            if v == NO:
                return name
        return None


def _compare(value, threshold, margin) -> int:
    """-1 when clearly below, +1 when clearly above, 0 inside the margin."""
    tol = margin * max(1.0, abs(threshold))
    if value < threshold - tol:
        return -1
    if value > threshold + tol:
        return 1
    return 0


def _pop_nearest(roots: list, target) -> object:
    i = min(range(len(roots)), key=lambda j: abs(roots[j] - target))
    return roots.pop(i)


def _is_real(z, tol) -> bool:
    return abs(z.imag) <= tol * max(1.0, abs(z))


def _below_bound_exact(P: IntPolynomial, r: Fraction, margin: float) -> str:
    # lambda within the margin of r: locate it by exact signs around r
    delta = r * Fraction(margin) * 10
    s0 = sign_at(P, r)
    if s0 == 0:
        return YES  # lambda == r is not larger than the bound
    if sign_at(P, r + delta) != s0:
        return NO
    if sign_at(P, r - delta) != s0:
        return YES
    return AMBIGUOUS


def _judge(P: IntPolynomial, distinct: list, r: Fraction, mode: str, margin: float,
           real_tol: float, final: bool, ties: str = TIES_REJECT) -> tuple[dict[str, str], object, int]:
    """Tri-state verdicts from distinct roots with multiplicities.

    With ``final`` set (high-precision pass) a comparison inside the margin is
    read as an exact equality: a tie in modulus with the dominant real root is
    a repeated maximal modulus, and |z| == 1/lambda violates the open annulus.
    """
    tie = lambda yes_or_no: yes_or_no if final else AMBIGUOUS
    reals = [(z, m) for z, m in distinct if _is_real(z, real_tol)]
    if not reals:
        return dict(dominant_real=NO, simple=NO, annulus=NO, below_bound=NO), None, 0
    lead, lead_m = max(reals, key=lambda t: abs(t[0]))
    mu = abs(lead)
    sign = 1 if lead.real > 0 else -1
    v: dict[str, str] = {}

    # largest modulus must be attained by a real root
    nonreal = [abs(z) for z, _ in distinct if not _is_real(z, real_tol)]
    c = _compare(max(nonreal), mu, margin) if nonreal else -1
    v["dominant_real"] = YES if c < 0 else NO if c > 0 else tie(YES)

    # the dominant root is simple and no other root shares its modulus
    rest = [(z, m) for z, m in distinct if z is not lead]
    if lead_m > 1:
        v["simple"] = NO
    else:
        peers = rest if ties == TIES_REJECT else [(z, m) for z, m in rest if _is_real(z, real_tol)]
        cs = [_compare(abs(z), mu, margin) for z, _ in peers]
        v["simple"] = NO if any(x > 0 for x in cs) else tie(NO) if any(x == 0 for x in cs) else YES

    # no other root on or inside the circle of radius 1/mu
    others = [z for z, m in rest for _ in range(m)] + [lead] * (lead_m - 1)
    if mode == REVERSING and others:
        _pop_nearest(others, -1 / lead)
    verdict = YES
    for z in others:
        c = _compare(abs(z), 1 / mu, margin)
        if c < 0:
            verdict = NO
            break
        if c == 0:
            verdict = tie(NO)
            if verdict == NO:
                break
    v["annulus"] = verdict

    # the Perron root is the positive one; a negative dominant root is the
    # mirror image of a candidate that the enumeration visits separately
    bound = mpmath.mpf(r.numerator) / r.denominator if final else float(r)
    c = _compare(mu, bound, margin)
    if sign < 0:
        v["below_bound"] = NO
    elif c != 0:
        v["below_bound"] = YES if c < 0 else NO
    elif sign > 0 and lead_m == 1:
        v["below_bound"] = _below_bound_exact(P, r, margin)
    else:
        v["below_bound"] = AMBIGUOUS
    return v, lead, sign


def perron_profile(P: IntPolynomial, r: Fraction, mode: str = NONORIENTABLE,
                   margin: float = DEFAULT_MARGIN, newton: NewtonResult | None = None,
                   escalate_dps: int = 50, ties: str = TIES_REJECT) -> RootProfile:
    """Root filters for P: dominant root real, simple and strictly dominant,
    other roots outside the closed disc of radius 1/lambda, lambda below r.

    Double precision first; verdicts left ambiguous by the margin are redone
    with ``escalate_dps`` digits where near-equal moduli are treated as exact
    ties.  Whatever is still unresolved stays ambiguous.
    """
    r = Fraction(r)
    newton = newton_descent(P) if newton is None else newton
    if newton.rejected:
        return RootProfile(None, False, NO, NO, NO, NO, notes=[f"newton descent rejected: {newton.reason}"])
    prof = RootProfile(None, newton.status == "converged", newton_value=newton.value)
    try:
        rs = all_roots(P)
    except RootFindingError as exc:
        prof.notes.append(str(exc))
        rs = None
    if rs is not None:
        prof.roots, prof.residual = rs.roots, rs.residual
        v, lead, sign = _judge(P, rs.with_multiplicity(), r, mode, margin, 1e-10, final=False, ties=ties)
        prof.perron_value = None if lead is None else abs(lead)
        prof.dominant_sign = sign
    if rs is None or AMBIGUOUS in v.values():
        try:
            mp = all_roots_mp(P, escalate_dps)
        except RootFindingError as exc:
            prof.notes.append(str(exc))
        else:
            with mpmath.workdps(escalate_dps):
                tiny = float(mpmath.mpf(10) ** (-(escalate_dps * 2) // 3))
                v, lead, sign = _judge(P, mp, r, mode, tiny, tiny, final=True, ties=ties)
                prof.perron_value = None if lead is None else float(abs(lead))
            prof.dominant_sign = sign
            prof.precision = f"{escalate_dps} digits"
            prof.notes.append(f"escalated to {escalate_dps} digits")
    if rs is None and prof.precision == "double":
        return prof
    prof.dominant_is_real = v["dominant_real"]
    prof.simple = v["simple"]
    prof.annulus_ok = v["annulus"]
    prof.below_bound = v["below_bound"]
    if prof.dominant_sign < 0:
        prof.notes.append("real root of largest modulus is negative")
    return prof


def evaluate_float(P: IntPolynomial, x: float) -> float:
    acc = 0.0
    for a in reversed(P.coeffs):
        acc = acc * x + a
    return acc


# ---------------------------------------------------------------------------
# diagnostics

@dataclass(frozen=True)
class UnitCircleReport:
    clean: bool
    unit_roots: tuple[complex, ...]
    stripped: IntPolynomial


def unit_circle_diagnostic(P: IntPolynomial, tol: float = UNIT_CIRCLE_TOL) -> UnitCircleReport:
    Q = P
    if Q.is_monic():
        Q, _ = strip_cyclotomic(Q)
    if Q.degree <= 0:
        return UnitCircleReport(True, (), Q)
    rs = all_roots(Q, residual_bound=1e-6)
    hits = tuple(z for z in rs.roots if abs(abs(z) - 1.0) < tol)
    return UnitCircleReport(not hits, hits, Q)


def perron_root_mp(P: IntPolynomial, guess: float, dps: int = 40) -> mpmath.mpf:
    """Polish a simple real root to ``dps`` digits."""
    with mpmath.workdps(dps):
        coeffs = [int(a) for a in reversed(P.coeffs)]
        f = lambda x: mpmath.polyval(coeffs, x)
        return +mpmath.findroot(f, mpmath.mpf(guess), tol=mpmath.mpf(10) ** (-dps + 5))


def largest_positive_root(P: IntPolynomial, dps: int = 40) -> mpmath.mpf:
    """Largest positive real root, bracketed exactly then polished to ``dps`` digits."""
    rs = [z.real for z in all_roots(P, residual_bound=1e-6).roots if abs(z.imag) < 1e-9 and z.real > 0]
    if not rs:
        raise RootFindingError(f"{P} has no positive real root")
    guess = max(rs)
    lo = Fraction(guess) * (1 - Fraction(1, 10**6))
    hi = Fraction(guess) * (1 + Fraction(1, 10**6))
    if sign_at(P, lo) * sign_at(P, hi) < 0:
        guess = float(perron_by_bisection(P, lo, hi, Fraction(1, 10**15)))
    return perron_root_mp(P, guess, dps)


def format_5dp(x) -> str:
    """Round-half-up to five decimals from a high-precision value."""
    with mpmath.workdps(40):
        d = Decimal(mpmath.nstr(mpmath.mpf(x), 35, strip_zeros=False))
    return str(d.quantize(Decimal("0.00001"), rounding=ROUND_HALF_UP))


def perron_by_bisection(P: IntPolynomial, lo: Fraction, hi: Fraction, tol: Fraction = Fraction(1, 10**12)) -> Fraction:
    """Exact bisection on the sign of P; requires sign(P(lo)) != sign(P(hi))."""
    slo = sign_at(P, lo)
    if slo == 0:
        return lo
    if slo == sign_at(P, hi):
        raise ValueError("no sign change on the bracket")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        s = sign_at(P, mid)
        if s == 0:
            return mid
        if s == slo:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2
