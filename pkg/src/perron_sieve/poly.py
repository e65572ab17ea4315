"""Exact integer polynomials.

A polynomial is a dense tuple of Python ints in ascending degree order, so
``IntPolynomial((-1, -1, -1, 1))`` is x^3 - x^2 - x - 1.  Everything here is
exact; floating point never enters.

Coefficient naming for the search follows the convention

    P(x) = x^d - c_1 x^{d-1} - ... - c_{d-1} x + c_d

and power sums p_k are sums of k-th powers of the complex roots.  Newton's
identities in that convention read

    k c_k = p_k - c_1 p_{k-1} - ... - c_{k-1} p_1,

so c_1 = p_1.  This is the only place the sign convention is fixed.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

Number = Union[int, Fraction]


class NotMonicError(ValueError):
    pass


_TERM = re.compile(r"([+-]?)(\d*)\*?(x)?(?:\^(\d+))?")


@dataclass(frozen=True)
class IntPolynomial:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(a) for a in self.coeffs)
        end = len(c)
        while end > 0 and c[end - 1] == 0:
            end -= 1
        object.__setattr__(self, "coeffs", c[:end])

    # construction helpers

    @classmethod
    def from_descending(cls, coeffs: Sequence[int]) -> IntPolynomial:
        return cls(tuple(reversed(tuple(coeffs))))

    @classmethod
    def parse(cls, text: str) -> IntPolynomial:
        """Parse ``"-1,-1,-1,1"`` (ascending) or ``"x^3 - x^2 - x - 1"``."""
        if "x" in text:
            return cls._parse_expression(text)
        parts = [s.strip() for s in text.strip().strip("[]").split(",") if s.strip()]
        return cls(tuple(int(s) for s in parts))

    @classmethod
    def _parse_expression(cls, text: str) -> IntPolynomial:
        src = text.replace(" ", "").replace("**", "^")
        terms = re.findall(r"[+-]?[^+-]+", src)
        if "".join(terms) != src or not terms:
            raise ValueError(f"cannot parse polynomial {text!r}")
        acc: dict[int, int] = {}
        for t in terms:
            m = _TERM.fullmatch(t)
            if m is None:
                raise ValueError(f"cannot parse term {t!r} in {text!r}")
            sign, coef, x, exp = m.groups()
            a = int(coef) if coef else 1
            if sign == "-":
                a = -a
            n = (int(exp) if exp else 1) if x else 0
            if not x and not coef:
                raise ValueError(f"cannot parse term {t!r} in {text!r}")
            acc[n] = acc.get(n, 0) + a
        top = max(acc)
        return cls(tuple(acc.get(i, 0) for i in range(top + 1)))

    @classmethod
    def monomial(cls, n: int, a: int = 1) -> IntPolynomial:
        return cls((0,) * n + (a,))

    # basic properties

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return self.leading == 1

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def canonical(self) -> str:
        return ",".join(str(a) for a in self.coeffs) if self.coeffs else "0"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            a = self.coeffs[i]
            if a == 0:
                continue
            sign = "-" if a < 0 else "+"
            mag = abs(a)
            if i == 0:
                term = str(mag)
            else:
                xp = "x" if i == 1 else f"x^{i}"
                term = xp if mag == 1 else f"{mag}*{xp}"
            parts.append((sign, term))
        head_sign, head = parts[0]
        out = ("-" if head_sign == "-" else "") + head
        for sign, term in parts[1:]:
            out += f" {sign} {term}"
        return out

    def __repr__(self) -> str:
        return f"IntPolynomial('{self}')"

    # arithmetic

    def __add__(self, other: IntPolynomial) -> IntPolynomial:
        n = max(len(self), len(other))
        return IntPolynomial(tuple(self[i] + other[i] for i in range(n)))

    def __neg__(self) -> IntPolynomial:
        return IntPolynomial(tuple(-a for a in self.coeffs))

    def __sub__(self, other: IntPolynomial) -> IntPolynomial:
        return self + (-other)

    def __mul__(self, other: IntPolynomial | int) -> IntPolynomial:
        if isinstance(other, int):
            return IntPolynomial(tuple(a * other for a in self.coeffs))
        if self.is_zero() or other.is_zero():
            return IntPolynomial(())
        out = [0] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> IntPolynomial:
        out = IntPolynomial((1,))
        for _ in range(n):
            out = out * self
        return out

    def divmod_monic(self, divisor: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial]:
        """Exact long division by a monic divisor; stays in the integers."""
        if not divisor.is_monic():
            raise NotMonicError("divisor must be monic")
        rem = list(self.coeffs)
        dd = divisor.degree
        if len(rem) - 1 < dd:
            return IntPolynomial(()), self
        quot = [0] * (len(rem) - dd)
        for i in range(len(rem) - 1, dd - 1, -1):
            q = rem[i]
            if q:
                quot[i - dd] = q
                for j in range(dd + 1):
                    rem[i - dd + j] -= q * divisor.coeffs[j]
        return IntPolynomial(tuple(quot)), IntPolynomial(tuple(rem[:dd]))

    def derivative(self) -> IntPolynomial:
        return IntPolynomial(tuple(i * a for i, a in enumerate(self.coeffs))[1:])

    def __call__(self, x):
        return evaluate(self, x)


def evaluate(P: IntPolynomial, x):
    """Horner evaluation; exact for int/Fraction arguments."""
    acc = 0
    for a in reversed(P.coeffs):
        acc = acc * x + a
    return acc


def evaluate_derivative(P: IntPolynomial, x):
    return evaluate(P.derivative(), x)


# ---------------------------------------------------------------------------
# Newton's identities

@dataclass(frozen=True)
class PowerSums:
    values: tuple[int, ...]
    source_degree: int


@dataclass(frozen=True)
class NewtonCoefficients:
    """Result of inverting Newton's identities.

    ``c`` holds c_1..c_j when every step divided exactly; otherwise ``c`` holds
    the coefficients before the failure and ``failed_at`` is the first k whose
    numerator is not divisible by k.
    """
    c: tuple[int, ...]
    failed_at: int | None = None

    @property
    def ok(self) -> bool:
        return self.failed_at is None


def search_coefficients(P: IntPolynomial) -> tuple[int, ...]:
    """c_1..c_d of a monic P written as x^d - c_1 x^{d-1} - ... (c_d = -P(0))."""
    if not P.is_monic():
        raise NotMonicError(f"{P} is not monic")
    d = P.degree
    return tuple(-P[d - k] for k in range(1, d + 1))


def power_sums_from_coefficients(P: IntPolynomial, m: int) -> PowerSums:
    c = search_coefficients(P)
    d = P.degree
    p: list[int] = []
    for k in range(1, m + 1):
        ck = c[k - 1] if k <= d else 0
        s = k * ck
        for i in range(1, min(k, d + 1)):
            s += c[i - 1] * p[k - i - 1]
        p.append(s)
    return PowerSums(tuple(p), d)


def coefficients_from_power_sums(p: PowerSums | Sequence[int], d: int | None = None) -> NewtonCoefficients:
    values = p.values if isinstance(p, PowerSums) else tuple(p)
    c: list[int] = []
    for k in range(1, len(values) + 1):
        num = values[k - 1]
        for i in range(1, k):
            num -= c[i - 1] * values[k - i - 1]
        q, rem = divmod(num, k)
        if rem:
            return NewtonCoefficients(tuple(c), failed_at=k)
        c.append(q)
    return NewtonCoefficients(tuple(c))


def polynomial_from_search_coefficients(c: Sequence[int], constant: int) -> IntPolynomial:
    """x^d - c_1 x^{d-1} - ... - c_{d-1} x + constant."""
    d = len(c) + 1
    asc = [0] * (d + 1)
    asc[d] = 1
    for k, ck in enumerate(c, start=1):
        asc[d - k] = -ck
    asc[0] = constant
    return IntPolynomial(tuple(asc))


# ---------------------------------------------------------------------------
# symmetries

RECIPROCAL = "reciprocal"
SKEW_RECIPROCAL = "skew_reciprocal"
NEITHER = "neither"


@dataclass(frozen=True)
class SymmetryClass:
    """``kind`` names the first symmetry found (reciprocal wins for even
    polynomials, which have both); the flags record each one separately."""
    kind: str
    mod2_reciprocal: bool
    reciprocal: bool = False
    skew_reciprocal: bool = False


def _reverse(P: IntPolynomial) -> tuple[int, ...]:
    return tuple(reversed(P.coeffs))


def _skew_reverse(P: IntPolynomial) -> tuple[int, ...]:
    # coefficients of x^n P(-1/x)
    n = P.degree
    return tuple(P[n - j] * (-1) ** (n - j) for j in range(n + 1))


def is_mod2_reciprocal(P: IntPolynomial) -> bool:
    bits = [a & 1 for a in P.coeffs]
    return bits == bits[::-1]


def classify_symmetry(P: IntPolynomial) -> SymmetryClass:
    if P.is_zero():
        raise ValueError("zero polynomial")
    c = P.coeffs
    rev = _reverse(P)
    skew = _skew_reverse(P)
    recip = rev == c or tuple(-a for a in rev) == c
    skewr = skew == c or tuple(-a for a in skew) == c
    kind = RECIPROCAL if recip else SKEW_RECIPROCAL if skewr else NEITHER
    return SymmetryClass(kind, is_mod2_reciprocal(P), recip, skewr)


def _make_monic_sign(coeffs: tuple[int, ...]) -> IntPolynomial:
    P = IntPolynomial(coeffs)
    return -P if P.leading < 0 else P


def reciprocal_transform(P: IntPolynomial) -> IntPolynomial:
    """±x^d P(1/x), sign chosen so the result is monic."""
    if abs(P[0]) != 1:
        raise ValueError(f"constant term of {P} is not ±1")
    return _make_monic_sign(_reverse(P))


def substitute_negate(P: IntPolynomial) -> IntPolynomial:
    """±P(-x), normalized to a positive leading coefficient."""
    return _make_monic_sign(tuple(a * (-1) ** i for i, a in enumerate(P.coeffs)))


# ---------------------------------------------------------------------------
# cyclotomic factors

MAX_TOTIENT = 30


def totient(m: int) -> int:
    out, n, p = m, m, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            out -= out // p
        p += 1
    if n > 1:
        out -= out // n
    return out


@lru_cache(maxsize=None)
def cyclotomic(m: int) -> IntPolynomial:
    """Phi_m by dividing x^m - 1 by Phi_e for the proper divisors e of m."""
    P = IntPolynomial((-1,) + (0,) * (m - 1) + (1,))
    for e in range(1, m):
        if m % e == 0:
            P, rem = P.divmod_monic(cyclotomic(e))
            assert rem.is_zero()
    return P


@lru_cache(maxsize=None)
def cyclotomic_indices(max_totient: int = MAX_TOTIENT) -> tuple[int, ...]:
    # phi(m) >= sqrt(m/2), so m <= 2*t^2 covers every m with phi(m) <= t
    return tuple(m for m in range(1, 2 * max_totient * max_totient + 1) if totient(m) <= max_totient)


def strip_cyclotomic(P: IntPolynomial) -> tuple[IntPolynomial, list[int]]:
    if not P.is_monic():
        raise NotMonicError(f"{P} is not monic")
    removed: list[int] = []
    changed = True
    while changed and P.degree > 0:
        changed = False
        for m in cyclotomic_indices(max(MAX_TOTIENT, P.degree)):
            if totient(m) > P.degree:
                continue
            q, rem = P.divmod_monic(cyclotomic(m))
            if rem.is_zero():
                P = q
                removed.append(m)
                changed = True
                break
    return P, sorted(removed)


def strip_unit_roots(P: IntPolynomial) -> tuple[IntPolynomial, tuple[int, int]]:
    """Divide out every factor x - 1 and x + 1; returns (quotient, (mult_at_1, mult_at_-1))."""
    counts = [0, 0]
    for idx, f in enumerate((IntPolynomial((-1, 1)), IntPolynomial((1, 1)))):
        while P.degree >= 1:
            q, rem = P.divmod_monic(f) if P.is_monic() else _divmod_linear(P, f)
            if not rem.is_zero():
                break
            P = q
            counts[idx] += 1
    return P, (counts[0], counts[1])


def _divmod_linear(P: IntPolynomial, f: IntPolynomial) -> tuple[IntPolynomial, IntPolynomial]:
    # synthetic division by x - root for a non-monic dividend
    root = -f[0]
    acc = 0
    out = []
    for a in reversed(P.coeffs):
        acc = acc * root + a
        out.append(acc)
    rem = out.pop()
    return IntPolynomial(tuple(reversed(out))), IntPolynomial((rem,))


# ---------------------------------------------------------------------------
# integer matrices

IntMatrix = tuple[tuple[int, ...], ...]


def as_matrix(rows) -> IntMatrix:
    M = tuple(tuple(int(a) for a in row) for row in rows)
    if any(len(row) != len(M) for row in M):
        raise ValueError("matrix must be square")
    return M


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(A: IntMatrix, B: IntMatrix) -> IntMatrix:
    Bt = list(zip(*B))
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def transpose(A: IntMatrix) -> IntMatrix:
    return tuple(zip(*A))


def companion(P: IntPolynomial) -> IntMatrix:
    """Companion matrix with ones on the superdiagonal and -a_0..-a_{d-1} on the last row."""
    if not P.is_monic():
        raise NotMonicError(f"{P} is not monic")
    d = P.degree
    rows = [[0] * d for _ in range(d)]
    for i in range(d - 1):
        rows[i][i + 1] = 1
    for j in range(d):
        rows[d - 1][j] = -P[j]
    return as_matrix(rows)


def charpoly(M) -> IntPolynomial:
    """det(xI - M) by Berkowitz's division-free algorithm."""
    A = as_matrix(M)
    n = len(A)
    if n == 0:
        return IntPolynomial((1,))
    # descending coefficient vectors
    poly = [1, -A[0][0]]
    for r in range(1, n):
        R = A[r][:r]
        S = [A[i][r] for i in range(r)]
        col = [1, -A[r][r]]
        v = S
        for _ in range(r):
            col.append(-sum(a * b for a, b in zip(R, v)))
            v = [sum(A[i][j] * v[j] for j in range(r)) for i in range(r)]
        poly = [sum(col[i - j] * poly[j] for j in range(min(i, r) + 1)) for i in range(r + 2)]
    return IntPolynomial.from_descending(poly)


def gcd_content(P: IntPolynomial) -> int:
    g = 0
    for a in P.coeffs:
        g = math.gcd(g, a)
    return g
