"""Weighted compositions, their growth coefficients, and the kernel lattice.

For a positive integer weight vector ``a = (a_1, ..., a_r)`` and a level
``m``, the composition set is

    H_m = { l in N^r : sum_i a_i l_i = m },

non-empty exactly when gcd(a) divides m.  This module enumerates H_m
exactly, computes the power sums

    S_p(m) = sum_{l in H_m} prod_i l_i^{p_i} / p_i!

and their leading growth coefficients: S_p(m) is asymptotic to

    gcd(a) / prod_i a_i^{p_i + 1}  *  m^{|p|+r-1} / (|p|+r-1)!

as m grows through multiples of gcd(a).  It also produces an integer basis
of the kernel lattice H = { z in Z^r : sum a_i z_i = 0 } by unimodular
column reduction, and counts composition points inside the half-open cone
cells spanned by that basis, which is the discrete skeleton of the
Riemann-sum argument for simplex integrals.

All arithmetic is exact; enumeration is output-sensitive recursive descent
with remaining-budget pruning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .ring import GradedPoly, GradedRing
from .simplex import SimplexSpec


class DegenerateLatticeError(ValueError):
    """The kernel lattice is trivial (r = 1)."""


class InvalidCellError(ValueError):
    """A cone-cell base point does not lie in the required composition set."""


def enumerate_compositions(spec: SimplexSpec, m: int) -> Iterator[tuple[int, ...]]:
    """Yield every l in N^r with sum a_i l_i = m, in ascending lexicographic order.

    Empty iff gcd(a) does not divide m.
    """
    if m < 0:
        return
    a = spec.weights
    r = spec.arity
    # gcd of the tail suffixes, for pruning
    suffix_gcd = [0] * (r + 1)
    for i in range(r - 1, -1, -1):
        suffix_gcd[i] = math.gcd(a[i], suffix_gcd[i + 1])

    prefix: list[int] = []

    def descend(i: int, rest: int) -> Iterator[tuple[int, ...]]:
        if i == r - 1:
            if rest % a[i] == 0:
                yield tuple(prefix) + (rest // a[i],)
            return
        if rest % suffix_gcd[i] != 0:
            return
        for li in range(rest // a[i] + 1):
            prefix.append(li)
            yield from descend(i + 1, rest - a[i] * li)
            prefix.pop()

    yield from descend(0, m)


def exponent_tuples(total: int, arity: int) -> Iterator[tuple[int, ...]]:
    """All p in N^arity with sum p_i = total, ascending lexicographic."""
    if arity == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in exponent_tuples(total - first, arity - 1):
            yield (first,) + rest


def power_sum(spec: SimplexSpec, powers: Sequence[int], m: int) -> Fraction:
    """S_p(m) = sum over H_m of prod l_i^{p_i} / p_i!, exactly."""
    p = tuple(int(q) for q in powers)
    if len(p) != spec.arity:
        raise ValueError(f"exponent vector arity {len(p)} != {spec.arity}")
    if any(q < 0 for q in p):
        raise ValueError("exponents must be non-negative")
    total = 0
    for l in enumerate_compositions(spec, m):
        total += math.prod(li**pi for li, pi in zip(l, p))
    return Fraction(total, math.prod(math.factorial(q) for q in p))


def power_sum_table(
    spec: SimplexSpec, degree: int, m: int
) -> dict[tuple[int, ...], Fraction]:
    """All S_p(m) with |p| = degree, sharing a single enumeration of H_m."""
    points = list(enumerate_compositions(spec, m))
    table: dict[tuple[int, ...], Fraction] = {}
    for p in exponent_tuples(degree, spec.arity):
        total = 0
        for l in points:
            total += math.prod(li**pi for li, pi in zip(l, p))
        table[p] = Fraction(total, math.prod(math.factorial(q) for q in p))
    return table


def power_sum_asymptotic(spec: SimplexSpec, powers: Sequence[int]) -> Fraction:
    """Leading coefficient of S_p: gcd(a) / prod a_i^{p_i + 1}.

    S_p(m) * (|p|+r-1)! / m^{|p|+r-1} converges to this value as m grows
    through multiples of gcd(a).
    """
    p = tuple(int(q) for q in powers)
    if len(p) != spec.arity:
        raise ValueError(f"exponent vector arity {len(p)} != {spec.arity}")
    den = math.prod(w ** (q + 1) for w, q in zip(spec.weights, p))
    return Fraction(spec.gcd(), den)


def weighted_power_poly_sum(
    ring: GradedRing, spec: SimplexSpec, n: int, m: int
) -> GradedPoly:
    """sum over H_m of (l_1 x_1 + ... + l_r x_r)^n / n! as an exact polynomial.

    The ring must carry exactly r weight-1 variables and have bound >= n.
    Only the degree-n part is nonzero; its coefficient at x^p is S_p(m).
    """
    r = spec.arity
    if len(ring.variables) != r or any(w != 1 for w in ring.weights):
        raise ValueError(f"ring must have exactly {r} weight-1 variables")
    if ring.bound < n:
        raise ValueError(f"ring bound {ring.bound} is below degree {n}")
    return ring.from_terms(power_sum_table(spec, n, m))


# -- kernel lattice ---------------------------------------------------------


def _xgcd(x: int, y: int) -> tuple[int, int, int]:
    """Extended Euclid: returns (g, s, t) with s*x + t*y = g = gcd(x, y) >= 0."""
    old_r, r = x, y
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _det_fraction(rows: list[list[Fraction]]) -> Fraction:
    """Exact determinant by fraction-free-ish Gaussian elimination."""
    n = len(rows)
    mat = [row[:] for row in rows]
    det = Fraction(1)
    for col in range(n):
        pivot = next((i for i in range(col, n) if mat[i][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            mat[col], mat[pivot] = mat[pivot], mat[col]
            det = -det
        det *= mat[col][col]
        inv = 1 / mat[col][col]
        for i in range(col + 1, n):
            factor = mat[i][col] * inv
            if factor:
                for j in range(col, n):
                    mat[i][j] -= factor * mat[col][j]
    return det


def _solve_fraction(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Solve a square exact linear system by Gaussian elimination."""
    n = len(rows)
    mat = [row[:] + [rhs[i]] for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if mat[i][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular system")
        mat[col], mat[pivot] = mat[pivot], mat[col]
        inv = 1 / mat[col][col]
        mat[col] = [x * inv for x in mat[col]]
        for i in range(n):
            if i != col and mat[i][col]:
                factor = mat[i][col]
                mat[i] = [x - factor * y for x, y in zip(mat[i], mat[col])]
    return [mat[i][n] for i in range(n)]


@dataclass(frozen=True)
class LatticeBasis:
    """An integer basis of H = { z in Z^r : sum a_i z_i = 0 }.

    Each vector is checked to lie in H, and the family is checked to
    generate H as a group (primitivity): the Gram determinant of the basis
    must equal the squared cell covolume sum(a_i^2)/gcd(a)^2.
    """

    weights: tuple[int, ...]
    vectors: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        a = self.weights
        r = len(a)
        if len(self.vectors) != r - 1:
            raise ValueError(f"expected {r - 1} basis vectors, got {len(self.vectors)}")
        for v in self.vectors:
            if len(v) != r:
                raise ValueError(f"vector {v} has wrong arity")
            if sum(w * x for w, x in zip(a, v)) != 0:
                raise ValueError(f"vector {v} is not in the kernel of {a}")
        gram = [
            [Fraction(sum(x * y for x, y in zip(u, v))) for v in self.vectors]
            for u in self.vectors
        ]
        g = math.gcd(*a)
        if _det_fraction(gram) * g * g != sum(w * w for w in a):
            raise ValueError("basis does not generate the full kernel lattice")


def lattice_basis(spec: SimplexSpec) -> LatticeBasis:
    """A generating set of the kernel lattice, by unimodular column reduction.

    Columns of the identity are combined by the extended Euclid steps that
    reduce the row vector a to (gcd, 0, ..., 0); the columns mapped to 0
    then form a basis of the kernel.
    """
    a = spec.weights
    r = spec.arity
    if r < 2:
        raise DegenerateLatticeError("the kernel lattice is trivial for r = 1")
    cols = [[1 if i == j else 0 for i in range(r)] for j in range(r)]
    vals = list(a)
    for j in range(1, r):
        g, s, t = _xgcd(vals[0], vals[j])
        u0, uj = vals[0] // g, vals[j] // g
        new0 = [s * x + t * y for x, y in zip(cols[0], cols[j])]
        newj = [-uj * x + u0 * y for x, y in zip(cols[0], cols[j])]
        cols[0], cols[j] = new0, newj
        vals[0], vals[j] = g, 0
    return LatticeBasis(a, tuple(tuple(col) for col in cols[1:]))


def count_cone_points(
    spec: SimplexSpec,
    m0: int,
    u: Sequence[int],
    m: int,
    basis: LatticeBasis | None = None,
) -> int:
    """Count H_m points in the cone over the half-open cell based at u.

    The cell is C_u = (u + sum_j [0,1) v_j) intersected with the m0-dilated
    simplex, where (v_j) is the kernel-lattice basis; the cone is its set of
    non-negative multiples.  Membership of a point l in H_m is decided
    exactly: rescale to level m0 and solve for the basis coordinates of
    (m0/m) l - u, which must all lie in [0, 1).

    For fixed m0, the cells over all u in H_{m0} partition the positive
    orthant, so these counts sum to |H_m|.
    """
    base = tuple(int(x) for x in u)
    if len(base) != spec.arity or any(x < 0 for x in base):
        raise InvalidCellError(f"base point {base} is not in N^{spec.arity}")
    if sum(w * x for w, x in zip(spec.weights, base)) != m0:
        raise InvalidCellError(f"base point {base} is not at level {m0}")
    if m < m0:
        raise ValueError(f"level m={m} must be >= m0={m0}")
    if basis is None:
        basis = lattice_basis(spec)
    vecs = basis.vectors
    gram = [
        [Fraction(sum(x * y for x, y in zip(v1, v2))) for v2 in vecs] for v1 in vecs
    ]
    scale = Fraction(m0, m)
    count = 0
    for l in enumerate_compositions(spec, m):
        delta = [scale * li - ui for li, ui in zip(l, base)]
        rhs = [sum((Fraction(x) * d for x, d in zip(v, delta)), Fraction(0)) for v in vecs]
        coords = _solve_fraction(gram, rhs)
        if all(0 <= c < 1 for c in coords):
            count += 1
    return count
