"""Explicit examples: the nonorientable family f_{n,k} and the reversing family psi_k.

For both families the stretch factor is the Perron root of M = R (I + E),
where R is the one-click rotation (ones on the superdiagonal and in the
bottom-left corner) and E is the intersection matrix of the curve system with
every row but the first zeroed out.  The matrices here are built from the
curve combinatorics, not written down from the polynomial, so the identity
charpoly(M) == defining polynomial is a real check.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Sequence

from .poly import IntMatrix, IntPolynomial, as_matrix, identity, matmul, strip_cyclotomic, transpose
from .roots import format_5dp, largest_positive_root

NONOR_FAMILY = "nonor-family"
REVERSING_FAMILY = "reversing-family"


# ---------------------------------------------------------------------------
# parameter records

@dataclass(frozen=True)
class NonorFamily:
    n: int
    k: int

    def __post_init__(self):
        if self.n < 3:
            raise ValueError(f"f_{{n,k}} needs n >= 3, got n={self.n}")
        if not 1 <= self.k <= self.n - 1:
            raise ValueError(f"f_{{n,k}} needs 1 <= k <= n-1, got k={self.k}")
        if (self.n - self.k) % 2 == 0:
            raise ValueError(f"n and k must have different parity, got ({self.n},{self.k})")

    @property
    def r_half(self) -> int:
        return (self.n - self.k + 1) // 2

    @property
    def s(self) -> int:
        return (self.n + self.k + 3) // 2

    @property
    def gcd(self) -> int:
        return math.gcd(self.n, self.k)


@dataclass(frozen=True)
class ReversingFamily:
    k: int

    def __post_init__(self):
        if self.k < 2 or self.k % 2:
            raise ValueError(f"psi_k is defined here for even k >= 2, got k={self.k}")


@dataclass(frozen=True)
class SurfaceInfo:
    euler_characteristic: int
    boundary_components: int
    genus: int
    orientable: bool

    def __post_init__(self):
        if self.orientable:
            expect = 2 - 2 * self.genus - self.boundary_components
        else:
            expect = 2 - self.genus - self.boundary_components
        if expect != self.euler_characteristic:
            raise ValueError(f"inconsistent surface data {self}")


@dataclass(frozen=True)
class SingularityType:
    prongs: tuple[int, ...]

    def euler_poincare_sum(self) -> int:
        """Sum of (prongs - 2); equals -2 chi of the closed surface."""
        return sum(p - 2 for p in self.prongs)

    def label(self) -> str:
        if not self.prongs:
            return "no singularities"
        ps = sorted(self.prongs, reverse=True)
        if len(ps) > 5 and len(set(ps)) == 1:
            return f"({ps[0]}^{len(ps)})"
        return "(" + ",".join(str(p) for p in ps) + ")"


# ---------------------------------------------------------------------------
# f_{n,k}

def gnk_graph(n: int, k: int) -> dict[int, frozenset[int]]:
    """Circulant graph on 0..n-1, each vertex joined to its k cyclically farthest vertices."""
    NonorFamily(n, k)
    adj = {}
    for v in range(n):
        others = sorted((u for u in range(n) if u != v),
                        key=lambda u: (-min((u - v) % n, (v - u) % n), (u - v) % n))
        adj[v] = frozenset(others[:k])
    return adj


def is_connected(adj: dict[int, frozenset[int]]) -> bool:
    seen, todo = {0}, [0]
    while todo:
        v = todo.pop()
        for u in adj[v] - seen:
            seen.add(u)
            todo.append(u)
    return len(seen) == len(adj)


def label_sequence(n: int, k: int) -> list[int]:
    """Cyclic order of the 2n strip ends: 1, s, 2, s+1, ..., n, s+n-1 (labels mod n, 1-based)."""
    s = NonorFamily(n, k).s
    seq = []
    for j in range(n):
        seq.append(j + 1)
        seq.append((s - 1 + j) % n + 1)
    return seq


def _links(pos_i: tuple[int, int], pos_j: tuple[int, int]) -> bool:
    a, b = sorted(pos_i)
    return (a < pos_j[0] < b) != (a < pos_j[1] < b)


def fnk_intersection(n: int, k: int) -> IntMatrix:
    """i(C,C): curves c_i, c_j meet (once) iff their labels do not link."""
    seq = label_sequence(n, k)
    where: dict[int, list[int]] = {}
    for p, lab in enumerate(seq):
        where.setdefault(lab, []).append(p)
    rows = [[0] * n for _ in range(n)]
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j and not _links(tuple(where[i]), tuple(where[j])):
                rows[i - 1][j - 1] = 1
    return as_matrix(rows)


def rotation(n: int) -> IntMatrix:
    return as_matrix([[int(j == (i + 1) % n) for j in range(n)] for i in range(n)])


def twist_action(intersection: IntMatrix) -> IntMatrix:
    """I + (first row of i(C,C)), the action of the twist about c_1 on the measure cone."""
    n = len(intersection)
    rows = [list(r) for r in identity(n)]
    rows[0] = [a + b for a, b in zip(rows[0], intersection[0])]
    return as_matrix(rows)


def fnk_matrix(n: int, k: int) -> IntMatrix:
    return matmul(rotation(n), twist_action(fnk_intersection(n, k)))


def fnk_polynomial(n: int, k: int) -> IntPolynomial:
    """x^n - (x^{n-r} + ... + x^r) - 1 with r = (n-k+1)/2."""
    r = NonorFamily(n, k).r_half
    c = [0] * (n + 1)
    c[n] = 1
    c[0] = -1
    for i in range(r, n - r + 1):
        c[i] -= 1
    return IntPolynomial(tuple(c))


def sigma_nk_info(n: int, k: int) -> SurfaceInfo:
    b = NonorFamily(n, k).gcd
    return SurfaceInfo(-n, b, n - b + 2, False)


@dataclass(frozen=True)
class NonorSingularities:
    singularity: SingularityType
    path_length: int


def fnk_singularities(n: int, k: int) -> NonorSingularities:
    b = NonorFamily(n, k).gcd
    return NonorSingularities(SingularityType((2 * n // b,) * b), 4 * n // b)


# ---------------------------------------------------------------------------
# psi_k

def psik_intersection(k: int) -> IntMatrix:
    """Cycle of length 2k in the unusual numbering: c_i meets c_{i+k-1} and c_{i+k+1}."""
    ReversingFamily(k)
    m = 2 * k
    rows = [[0] * m for _ in range(m)]
    for i in range(m):
        rows[i][(i + k - 1) % m] = 1
        rows[i][(i + k + 1) % m] = 1
    return as_matrix(rows)


def psik_matrix(k: int) -> IntMatrix:
    return matmul(rotation(2 * k), twist_action(psik_intersection(k)))


def psik_polynomial(k: int) -> IntPolynomial:
    ReversingFamily(k)
    c = [0] * (2 * k + 1)
    c[2 * k] = 1
    c[k + 1] -= 1
    c[k - 1] -= 1
    c[0] -= 1
    return IntPolynomial(tuple(c))


def psik_info(k: int) -> tuple[SurfaceInfo, SingularityType | None]:
    """Surface data for Sigma_k; singularities only for even k (none reported for k=2)."""
    if k < 2:
        raise ValueError("psi_k needs k >= 2")
    b = 4 if k % 2 == 0 else 2
    surf = SurfaceInfo(-2 * k, b, k + 1 - b // 2, True)
    if k % 2:
        return surf, None
    return surf, SingularityType(() if k == 2 else (k,) * 4)


# ---------------------------------------------------------------------------
# symplectic check

def standard_j(m: int) -> IntMatrix:
    rows = [[0] * (2 * m) for _ in range(2 * m)]
    for i in range(m):
        rows[i][m + i] = 1
        rows[m + i][i] = -1
    return as_matrix(rows)


def is_anti_symplectic(A) -> bool:
    A = as_matrix(A)
    if len(A) % 2:
        raise ValueError("anti-symplectic test needs even dimension")
    J = standard_j(len(A) // 2)
    neg = tuple(tuple(-a for a in row) for row in J)
    return matmul(matmul(A, J), transpose(A)) == neg


def is_symplectic(A) -> bool:
    A = as_matrix(A)
    if len(A) % 2:
        raise ValueError("symplectic test needs even dimension")
    J = standard_j(len(A) // 2)
    return matmul(matmul(A, J), transpose(A)) == J


# ---------------------------------------------------------------------------
# tables

@dataclass
class FamilyRow:
    genus: int
    family: str
    params: dict
    polynomial: IntPolynomial
    stretch: object  # mpf
    minimal_part: IntPolynomial
    cyclotomic_factors: list[int]
    singularity: SingularityType | None

    @property
    def stretch_5dp(self) -> str:
        return format_5dp(self.stretch)

    def to_dict(self) -> dict:
        return {
            "genus": self.genus,
            "family": self.family,
            **self.params,
            "largest_root_5dp": self.stretch_5dp,
            "polynomial": str(self.polynomial),
            "minimal_part": str(self.minimal_part),
            "cyclotomic_factors": self.cyclotomic_factors,
            "singularity_type": self.singularity.label() if self.singularity else None,
        }


def nonor_members(g: int) -> list[NonorFamily]:
    """All (n,k) with n - gcd(n,k) + 2 == g whose curves fill (G_{n,k} connected).

    k = 1 gives a perfect matching, which is not a filling system, and its
    polynomial x^n - x^{n/2} - 1 has no strictly dominant root.

    gcd(n,k) divides n and is at most n/2 unless k = n-1 is coprime anyway,
    so g - 2 = n - gcd >= n/2, i.e. n <= 2g - 4; and n >= g - 1 since gcd >= 1.
    """
    out = []
    for n in range(max(3, g - 1), max(3, 2 * g - 4) + 1):
        for k in range(1, n):
            if (n - k) % 2 and n - math.gcd(n, k) + 2 == g and is_connected(gnk_graph(n, k)):
                out.append(NonorFamily(n, k))
    return out


def _row(g: int, family: str, params: dict, P: IntPolynomial, sing) -> FamilyRow:
    Q, cyc = strip_cyclotomic(P)
    return FamilyRow(g, family, params, P, largest_positive_root(P), Q, cyc, sing)


def best_in_family(g: int, mode: str = NONOR_FAMILY) -> FamilyRow:
    if mode in (NONOR_FAMILY, "nonorientable"):
        members = nonor_members(g)
        if not members:
            raise ValueError(f"no f_{{n,k}} realises nonorientable genus {g}")
        rows = [_row(g, NONOR_FAMILY, {"n": m.n, "k": m.k}, fnk_polynomial(m.n, m.k),
                     fnk_singularities(m.n, m.k).singularity) for m in members]
        return min(rows, key=lambda r: (r.stretch, r.params["n"], r.params["k"]))
    if mode in (REVERSING_FAMILY, "reversing"):
        if g < 1 or g % 2 == 0:
            raise ValueError(f"psi_k only realises odd genus, got {g}")
        k = g + 1
        return _row(g, REVERSING_FAMILY, {"k": k}, psik_polynomial(k), psik_info(k)[1])
    raise ValueError(f"unknown family {mode!r}")


def family_table(which: str, genus_max: int, genus_min: int | None = None) -> list[FamilyRow]:
    if which == NONOR_FAMILY:
        return [best_in_family(g, which) for g in range(genus_min or 4, genus_max + 1)]
    if which == REVERSING_FAMILY:
        return [best_in_family(g, which) for g in range(genus_min or 1, genus_max + 1) if g % 2]
    raise ValueError(f"unknown table {which!r}")


TABLE_COLUMNS = ("genus", "n", "k", "largest_root_5dp", "polynomial", "minimal_part", "singularity_type")


def table_csv(rows: Sequence[FamilyRow]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=TABLE_COLUMNS, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow(r.to_dict())
    return buf.getvalue()


def table_json(rows: Sequence[FamilyRow]) -> str:
    return json.dumps([r.to_dict() for r in rows], indent=2)
