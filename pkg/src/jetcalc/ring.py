"""Truncated, weighted-graded polynomial arithmetic over exact rationals.

Scalars are ``fractions.Fraction`` throughout: arbitrary precision, always in
lowest terms with positive denominator, no rounding anywhere.

A ring is fixed by an ordered tuple of named variables, each carrying a
positive integer weight, together with a truncation bound ``n``: every
monomial of weighted degree above ``n`` is identically zero.  Multiplication
therefore computes in the quotient by the ideal of high-degree terms, which
is how intersection-theoretic computations on an ``n``-dimensional ambient
space discard classes falling below dimension zero.  Chern roots live in
weight 1; a k-th Chern class variable lives in weight k.

Polynomials are immutable and every operation is a pure function, so values
can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping

Scalar = int | Fraction
Exponents = tuple[int, ...]


class IncompatibleRingError(ValueError):
    """Two polynomials from different rings were combined."""


class ComponentRangeError(ValueError):
    """A graded component above the truncation bound was requested."""


class IncompleteSubstitutionError(ValueError):
    """A variable rescaling is missing a factor for one of the variables."""


@dataclass(frozen=True)
class GradedRing:
    """A truncated polynomial ring: variables with weights, and a degree cap.

    ``variables`` is an ordered tuple of ``(name, weight)`` pairs; exponent
    vectors are dense tuples indexed by this order.
    """

    bound: int
    variables: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        if self.bound < 0:
            raise ValueError(f"truncation bound must be >= 0, got {self.bound}")
        names = [name for name, _ in self.variables]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        for name, weight in self.variables:
            if weight < 1:
                raise ValueError(f"variable {name!r} has non-positive weight {weight}")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.variables)

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(weight for _, weight in self.variables)

    def weighted_degree(self, exponents: Exponents) -> int:
        return sum(e * w for e, w in zip(exponents, self.weights))

    def zero(self) -> GradedPoly:
        return GradedPoly(self, {})

    def one(self) -> GradedPoly:
        return self.const(1)

    def const(self, value: Scalar) -> GradedPoly:
        return GradedPoly(self, {(0,) * len(self.variables): Fraction(value)})

    def gen(self, name: str) -> GradedPoly:
        """The variable ``name`` as a polynomial."""
        try:
            index = self.names.index(name)
        except ValueError:
            raise KeyError(f"no variable named {name!r} in ring {self.names}") from None
        exps = tuple(1 if i == index else 0 for i in range(len(self.variables)))
        return GradedPoly(self, {exps: Fraction(1)})

    def gens(self) -> tuple[GradedPoly, ...]:
        return tuple(self.gen(name) for name in self.names)

    def from_terms(self, terms: Mapping[Exponents, Scalar]) -> GradedPoly:
        """Build a polynomial; zero coefficients and over-bound terms are dropped."""
        return GradedPoly(self, {exps: Fraction(c) for exps, c in terms.items()})


class GradedPoly:
    """An element of a :class:`GradedRing`.

    Stored as a map from dense exponent tuples to nonzero ``Fraction``
    coefficients; terms of weighted degree above the ring bound are never
    stored.  Instances are immutable by convention: no method mutates
    ``self`` and the term map must not be modified by callers.
    """

    __slots__ = ("ring", "_terms")

    def __init__(self, ring: GradedRing, terms: Mapping[Exponents, Fraction]):
        nvars = len(ring.variables)
        clean: dict[Exponents, Fraction] = {}
        for exps, coeff in terms.items():
            if len(exps) != nvars:
                raise ValueError(f"exponent tuple {exps} has wrong arity for {ring.names}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            if coeff == 0 or ring.weighted_degree(exps) > ring.bound:
                continue
            clean[exps] = Fraction(coeff)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("GradedPoly is immutable")

    # -- inspection ------------------------------------------------------

    def items(self) -> Iterator[tuple[Exponents, Fraction]]:
        return iter(self._terms.items())

    def coefficient(self, exponents: Exponents) -> Fraction:
        return self._terms.get(tuple(exponents), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * len(self.ring.variables))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedPoly):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    __hash__ = None  # mutable-looking container semantics; equality only

    # -- arithmetic ------------------------------------------------------

    def _check_ring(self, other: GradedPoly) -> None:
        if self.ring != other.ring:
            raise IncompatibleRingError(
                f"cannot combine polynomials over {self.ring} and {other.ring}"
            )

    def __add__(self, other: GradedPoly) -> GradedPoly:
        if not isinstance(other, GradedPoly):
            return NotImplemented
        self._check_ring(other)
        terms = dict(self._terms)
        for exps, coeff in other._terms.items():
            total = terms.get(exps, Fraction(0)) + coeff
            if total:
                terms[exps] = total
            else:
                terms.pop(exps, None)
        return GradedPoly(self.ring, terms)

    def __neg__(self) -> GradedPoly:
        return GradedPoly(self.ring, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: GradedPoly) -> GradedPoly:
        if not isinstance(other, GradedPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> GradedPoly:
        if isinstance(other, GradedPoly):
            self._check_ring(other)
            ring = self.ring
            terms: dict[Exponents, Fraction] = {}
            for e1, c1 in self._terms.items():
                for e2, c2 in other._terms.items():
                    exps = tuple(a + b for a, b in zip(e1, e2))
                    if ring.weighted_degree(exps) > ring.bound:
                        continue
                    total = terms.get(exps, Fraction(0)) + c1 * c2
                    if total:
                        terms[exps] = total
                    else:
                        terms.pop(exps, None)
            return GradedPoly(ring, terms)
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return self.ring.zero()
            return GradedPoly(self.ring, {e: c * other for e, c in self._terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, scalar: Scalar) -> GradedPoly:
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        return self * (Fraction(1) / Fraction(scalar))

    def __pow__(self, power: int) -> GradedPoly:
        if power < 0:
            raise ValueError("negative powers are not defined here")
        result = self.ring.one()
        base = self
        n = power
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- graded structure --------------------------------------------------

    def component(self, degree: int) -> GradedPoly:
        """The part of pure weighted degree ``degree``."""
        if degree < 0 or degree > self.ring.bound:
            raise ComponentRangeError(
                f"degree {degree} outside [0, {self.ring.bound}]"
            )
        terms = {
            e: c for e, c in self._terms.items() if self.ring.weighted_degree(e) == degree
        }
        return GradedPoly(self.ring, terms)

    def scale_vars(self, factors: Mapping[str, Scalar]) -> GradedPoly:
        """Substitute ``v -> factors[v] * v`` for every variable ``v``.

        This is a ring homomorphism; a factor must be supplied for every
        variable of the ring.
        """
        names = self.ring.names
        missing = [name for name in names if name not in factors]
        if missing:
            raise IncompleteSubstitutionError(f"no scale factor for {missing}")
        fr = [Fraction(factors[name]) for name in names]
        terms: dict[Exponents, Fraction] = {}
        for exps, coeff in self._terms.items():
            for f, e in zip(fr, exps):
                if e:
                    coeff = coeff * f**e
            if coeff:
                terms[exps] = coeff
        return GradedPoly(self.ring, terms)

    # -- rendering ---------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        """Terms in canonical order: weighted degree, then earlier variables first."""
        return sorted(
            self._terms.items(),
            key=lambda item: (
                self.ring.weighted_degree(item[0]),
                tuple(-e for e in item[0]),
            ),
        )

    def render(self) -> str:
        """Canonical text form, coefficients as ``num`` or ``num/den``."""
        if not self._terms:
            return "0"
        parts: list[str] = []
        for exps, coeff in self.sorted_terms():
            monomial = "*".join(
                name if e == 1 else f"{name}^{e}"
                for (name, _), e in zip(self.ring.variables, exps)
                if e
            )
            mag = abs(coeff)
            if monomial:
                body = monomial if mag == 1 else f"{mag}*{monomial}"
            else:
                body = str(mag)
            if not parts:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"GradedPoly({self.render()!r})"
