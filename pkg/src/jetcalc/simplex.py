"""Exact measure data of weighted simplexes.

For a weight vector ``a = (a_1, ..., a_r)`` of positive integers, the
weighted simplex is

    D_a = { t in R_+^r : sum_i a_i t_i = 1 },

an (r-1)-dimensional simplex with vertices e_i / a_i.  Everything here is
computed in closed form over exact rationals:

* volumes, which carry the single surd sqrt(sum a_i^2) (kept in a dedicated
  :class:`QuadraticSurd` type so the rest of the pipeline stays rational);
* volumes of fundamental cells of the integer lattice of the hyperplane
  ``sum a_i t_i = 0``, and the fully rational ratio of the two;
* moments of monomials under the uniform probability measure of D_a:

      E[t^p] = (r-1)! p_1! ... p_r! / (p_1+...+p_r+r-1)!  *  prod a_i^(-p_i)

* exact expectations of products of affine forms, by expanding the product
  and summing monomial moments.

Pure functions on immutable values; safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Scalar = int | Fraction


class DegenerateLatticeError(ValueError):
    """The hyperplane lattice is trivial (r = 1), so there is no cell volume."""


class SingularInputError(ValueError):
    """An input vector contains a zero entry where a nonzero one is required."""


@dataclass(frozen=True)
class SimplexSpec:
    """The weight vector a defining D_a; all entries are positive integers."""

    weights: tuple[int, ...]

    def __init__(self, weights: Iterable[int]):
        ws = tuple(int(w) for w in weights)
        if len(ws) < 1:
            raise ValueError("weight vector must be non-empty")
        if any(w < 1 for w in ws):
            raise ValueError(f"weights must be positive integers, got {ws}")
        object.__setattr__(self, "weights", ws)

    @property
    def arity(self) -> int:
        return len(self.weights)

    def gcd(self) -> int:
        return math.gcd(*self.weights)

    def vertex(self, i: int) -> tuple[Fraction, ...]:
        """The i-th vertex e_i / a_i of D_a."""
        return tuple(
            Fraction(1, self.weights[i]) if j == i else Fraction(0)
            for j in range(self.arity)
        )


def _squarefree_split(n: int) -> tuple[int, int]:
    """Return (s, m) with n = s^2 * m and m squarefree."""
    s, m = 1, 1
    d = 2
    rest = n
    while d * d <= rest:
        count = 0
        while rest % d == 0:
            rest //= d
            count += 1
        s *= d ** (count // 2)
        if count % 2:
            m *= d
        d += 1
    return s, m * rest


@dataclass(frozen=True)
class QuadraticSurd:
    """A value coeff * sqrt(radicand), normalized so radicand is squarefree."""

    coeff: Fraction
    radicand: int

    def __init__(self, coeff: Scalar, radicand: int):
        c = Fraction(coeff)
        n = int(radicand)
        if n < 0:
            raise ValueError("radicand must be non-negative")
        if c == 0 or n == 0:
            c, n = Fraction(0), 1
        else:
            s, m = _squarefree_split(n)
            c, n = c * s, m
        object.__setattr__(self, "coeff", c)
        object.__setattr__(self, "radicand", n)

    def __float__(self) -> float:
        return float(self.coeff) * math.sqrt(self.radicand)

    def __mul__(self, other: Scalar) -> QuadraticSurd:
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return QuadraticSurd(self.coeff * other, self.radicand)

    __rmul__ = __mul__

    def ratio(self, other: QuadraticSurd) -> Fraction:
        """Exact quotient self/other; defined only when the surd parts match."""
        if other.coeff == 0:
            raise ZeroDivisionError("division by zero surd")
        if self.coeff == 0:
            return Fraction(0)
        if self.radicand != other.radicand:
            raise ValueError(
                f"quotient of sqrt({self.radicand}) by sqrt({other.radicand}) "
                "is not rational"
            )
        return self.coeff / other.coeff

    def render(self) -> str:
        if self.radicand == 1:
            return str(self.coeff)
        if self.coeff == 1:
            return f"sqrt({self.radicand})"
        return f"{self.coeff}*sqrt({self.radicand})"

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class AffineForm:
    """An affine function t -> constant + sum_i coeffs[i] * t_i."""

    constant: Fraction
    coeffs: tuple[Fraction, ...]

    def __init__(self, constant: Scalar, coeffs: Iterable[Scalar]):
        object.__setattr__(self, "constant", Fraction(constant))
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in coeffs))

    @property
    def arity(self) -> int:
        return len(self.coeffs)

    def __call__(self, t: Sequence[Scalar]) -> Fraction:
        if len(t) != self.arity:
            raise ValueError(f"point has arity {len(t)}, form has {self.arity}")
        return self.constant + sum(
            (c * Fraction(x) for c, x in zip(self.coeffs, t)), Fraction(0)
        )


def standard_volume(r: int) -> Fraction:
    """r-volume of the corner simplex {t in R_+^r : sum t_i <= 1}: 1/r!."""
    if r < 1:
        raise ValueError("r must be >= 1")
    return Fraction(1, math.factorial(r))


def volume(spec: SimplexSpec) -> QuadraticSurd:
    """(r-1)-volume of D_a: sqrt(sum a_i^2) / ((r-1)! * prod a_i).

    For r = 1 the simplex is a single point and the 0-volume convention is 1.
    """
    a = spec.weights
    r = spec.arity
    radicand = sum(w * w for w in a)
    denom = math.factorial(r - 1) * math.prod(a)
    return QuadraticSurd(Fraction(1, denom), radicand)


def fundamental_domain_volume(spec: SimplexSpec) -> QuadraticSurd:
    """(r-1)-volume of any fundamental cell of {z in Z^r : sum a_i z_i = 0}.

    Equal to sqrt(sum a_i^2) / gcd(a); independent of the chosen cell since
    any two bases differ by a determinant-one transformation.
    """
    if spec.arity < 2:
        raise DegenerateLatticeError("the kernel lattice is trivial for r = 1")
    radicand = sum(w * w for w in spec.weights)
    return QuadraticSurd(Fraction(1, spec.gcd()), radicand)


def cell_ratio(spec: SimplexSpec) -> Fraction:
    """vol(D_a) / vol(lattice cell) = gcd(a) / ((r-1)! * prod a_i).

    The surd parts cancel, so the ratio is exactly rational.
    """
    if spec.arity < 2:
        raise DegenerateLatticeError("the kernel lattice is trivial for r = 1")
    a = spec.weights
    return Fraction(spec.gcd(), math.factorial(spec.arity - 1) * math.prod(a))


def beta_integral(u: int, v: int) -> Fraction:
    """int_0^1 t^u (1-t)^v dt = u! v! / (u+v+1)! for non-negative integers."""
    if u < 0 or v < 0:
        raise ValueError("exponents must be non-negative")
    return Fraction(
        math.factorial(u) * math.factorial(v), math.factorial(u + v + 1)
    )


def monomial_moment(spec: SimplexSpec, powers: Sequence[int]) -> Fraction:
    """E[t_1^p_1 ... t_r^p_r] for t uniform on D_a.

    Closed form: (r-1)! * prod p_i! / (sum p_i + r - 1)! * prod a_i^(-p_i).
    """
    a = spec.weights
    r = spec.arity
    p = tuple(int(q) for q in powers)
    if len(p) != r:
        raise ValueError(f"exponent vector has arity {len(p)}, simplex has {r}")
    if any(q < 0 for q in p):
        raise ValueError("exponents must be non-negative")
    num = math.factorial(r - 1) * math.prod(math.factorial(q) for q in p)
    den = math.factorial(sum(p) + r - 1)
    scale = math.prod(w**q for w, q in zip(a, p))
    return Fraction(num, den * scale)


def gram_det(alpha: Sequence[Scalar]) -> Fraction:
    """Determinant of the Gram matrix of the (r x (r-1)) corner matrix.

    The matrix has alpha_1..alpha_{r-1} on its diagonal and a final row of
    alpha_r entries; the determinant of its Gram matrix is

        prod_i alpha_i^2 * sum_i 1/alpha_i^2.

    This is the square of the volume distortion of the standard chart of
    the simplex with vertices e_i / (1/alpha_i).
    """
    vals = [Fraction(x) for x in alpha]
    if len(vals) < 2:
        raise ValueError("need at least two entries")
    if any(v == 0 for v in vals):
        raise SingularInputError("zero entry makes the chart matrix singular")
    prod_sq = math.prod((v * v for v in vals), start=Fraction(1))
    inv_sum = sum((1 / (v * v) for v in vals), Fraction(0))
    return prod_sq * inv_sum


def affine_product_expectation(
    spec: SimplexSpec, forms: Sequence[AffineForm]
) -> Fraction:
    """E[prod_j f_j(T)] for T uniform on D_a, exactly.

    The product is expanded into monomials and each monomial is integrated
    with :func:`monomial_moment`.  For a single affine form this equals the
    average of the form over the r vertices e_i / a_i.
    """
    r = spec.arity
    for f in forms:
        if f.arity != r:
            raise ValueError(f"form arity {f.arity} does not match simplex arity {r}")
    # polynomial as {exponent tuple: coefficient}
    poly: dict[tuple[int, ...], Fraction] = {(0,) * r: Fraction(1)}
    for f in forms:
        nxt: dict[tuple[int, ...], Fraction] = {}
        for exps, coeff in poly.items():
            if f.constant:
                c = nxt.get(exps, Fraction(0)) + coeff * f.constant
                if c:
                    nxt[exps] = c
                else:
                    nxt.pop(exps, None)
            for i, ci in enumerate(f.coeffs):
                if not ci:
                    continue
                bumped = exps[:i] + (exps[i] + 1,) + exps[i + 1 :]
                c = nxt.get(bumped, Fraction(0)) + coeff * ci
                if c:
                    nxt[bumped] = c
                else:
                    nxt.pop(bumped, None)
        poly = nxt
    return sum(
        (coeff * monomial_moment(spec, exps) for exps, coeff in poly.items()),
        Fraction(0),
    )
