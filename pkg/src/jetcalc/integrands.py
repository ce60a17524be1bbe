"""Piecewise-polynomial integrands built from marked stratification trees.

A :class:`MarkedSimplexProblem` ties a stratification tree to the
coordinates of a weighted simplex: coordinate i carries a declared label,
and a point t marks every edge with the linear value

    sum_i t_i * (numerator of labels[i]) / denominator,

optionally shifted by a constant multiple of an auxiliary label's marking
(the twist).  The *index sum* at level i is then the sum, over root-to-leaf
paths with at most i strictly negative edge marks, of the product of the
marks times the leaf degree.  It is piecewise polynomial in t and
positively homogeneous of degree n (without the twist); a zero mark kills
its path, so counting zeros as non-negative is inert.

Integration over the simplex is exact whenever every edge form has one
sign on the whole simplex (checkable at the vertices, since the forms are
affine), or when the index cap is at least n so no indicator survives: the
integrand is then a single polynomial and integrates term by term through
the closed-form monomial moments.  Otherwise a deterministic seeded
Monte-Carlo fallback reports (estimate, standard error).

The harmonic twist at order k replaces the auxiliary scale by H_k/(k r)
with H_k = 1 + 1/2 + ... + 1/k, and expands the coordinates to the
block-weighted simplex (each base label repeated with weights 1..k); the
jet bound coefficient multiplies its integral at index cap 1 by
binom(n+kr-1, kr-1) / (k!)^r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import mc
from .simplex import AffineForm, SimplexSpec, affine_product_expectation
from .strat import ChildEdge, Leaf, Node, StratTree, assignment_max

Scalar = int | Fraction


class MixedSignError(ValueError):
    """An edge form changes sign on the simplex, so exact integration is off."""


class MissingTwistError(ValueError):
    """The problem carries no auxiliary twist label."""


@dataclass(frozen=True)
class MarkedSimplexProblem:
    """A tree whose edge marks are linear forms in the simplex coordinates.

    ``labels[i]`` is the declared label whose marking multiplies t_i
    (repetitions allowed); ``aux_label``, when set, contributes the
    constant ``aux_scale * marking/denominator`` to every edge mark.
    """

    tree: StratTree
    labels: tuple[str, ...]
    simplex: SimplexSpec
    aux_label: str | None = None
    aux_scale: Fraction = field(default_factory=lambda: Fraction(1))

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "aux_scale", Fraction(self.aux_scale))
        if len(self.labels) != self.simplex.arity:
            raise ValueError(
                f"{len(self.labels)} coordinate labels for a simplex of arity "
                f"{self.simplex.arity}"
            )
        for label in self.labels:
            self.tree.denominator(label)
        if self.aux_label is not None:
            self.tree.denominator(self.aux_label)

    @property
    def arity(self) -> int:
        return self.simplex.arity

    def edge_form(self, edge: ChildEdge, with_twist: bool) -> AffineForm:
        """The affine form t -> mark of this edge."""
        coeffs = [self.tree.effective(edge, label) for label in self.labels]
        constant = Fraction(0)
        if with_twist and self.aux_label is not None:
            constant = self.aux_scale * self.tree.effective(edge, self.aux_label)
        return AffineForm(constant, coeffs)


def _eval(
    prob: MarkedSimplexProblem, t: Sequence[Scalar], max_index: int, with_twist: bool
) -> Fraction:
    if len(t) != prob.arity:
        raise ValueError(f"point arity {len(t)} != problem arity {prob.arity}")
    point = [Fraction(x) for x in t]
    total = Fraction(0)
    for edges, leaf in prob.tree.paths():
        product = Fraction(1)
        negatives = 0
        for edge in edges:
            value = prob.edge_form(edge, with_twist)(point)
            if value < 0:
                negatives += 1
                if negatives > max_index:
                    break
            product *= value
        else:
            total += product * leaf.degree
    return total


def index_sum(prob: MarkedSimplexProblem, t: Sequence[Scalar], max_index: int) -> Fraction:
    """The index-truncated path sum at t, twist ignored.

    Defined on all of Q^r, not only on the simplex; positively homogeneous
    of degree n under t -> lambda t with lambda > 0.
    """
    return _eval(prob, t, max_index, with_twist=False)


def twisted_index_sum(
    prob: MarkedSimplexProblem, t: Sequence[Scalar], max_index: int
) -> Fraction:
    """The index-truncated path sum at t with the constant twist shifts."""
    if prob.aux_label is None:
        raise MissingTwistError("problem has no auxiliary twist label")
    return _eval(prob, t, max_index, with_twist=True)


def max_tensor_degree(
    prob: MarkedSimplexProblem,
    points: Sequence[Sequence[Scalar]],
    max_index: int,
    algorithm: str = "dp",
) -> Fraction:
    """Assignment maximum over per-edge choices among several points.

    Each point u_j induces the edge mark sum_i u_{j,i} * marking_i; an
    assignment picks one point per edge, and the value is the maximum of
    (-1)^i times the index-truncated path sum.  With all points equal this
    collapses to the plain index sum up to the (-1)^i sign, since every
    choice yields the same marks.  No twist enters.
    """
    if not points:
        raise ValueError("need at least one point")
    pts = [[Fraction(x) for x in u] for u in points]
    for u in pts:
        if len(u) != prob.arity:
            raise ValueError(f"point arity {len(u)} != problem arity {prob.arity}")

    def options_of(edge: ChildEdge) -> list[Fraction]:
        coeffs = [prob.tree.effective(edge, label) for label in prob.labels]
        return [
            sum((ui * ci for ui, ci in zip(u, coeffs)), Fraction(0)) for u in pts
        ]

    return assignment_max(prob.tree.root, options_of, max_index, algorithm=algorithm)


# -- integration ----------------------------------------------------------------


def _classify_edge(prob: MarkedSimplexProblem, form: AffineForm) -> int:
    """Sign of an affine form on the simplex: +1 never negative, -1 negative
    almost everywhere, 0 identically zero; raises on a genuine sign change.

    An affine form on a simplex attains its extremes at the vertices
    e_l / a_l, so the vertex values coeff_l / a_l + constant decide.
    """
    values = [
        form.coeffs[l] / prob.simplex.weights[l] + form.constant
        for l in range(prob.arity)
    ]
    if all(v == 0 for v in values):
        return 0
    if all(v >= 0 for v in values):
        return 1
    if all(v <= 0 for v in values):
        return -1
    raise MixedSignError(
        "an edge form changes sign on the simplex; use Monte-Carlo integration"
    )


def integrate_exact(prob: MarkedSimplexProblem, max_index: int) -> Fraction:
    """Exact integral of the index sum over the simplex, uniform measure.

    Twist shifts are included whenever the problem carries a twist label.
    Requires every edge form to keep one sign on the simplex (identically
    zero forms are allowed: they kill their paths), unless max_index >= n
    in which case every path counts and no sign analysis is needed.  The
    surviving integrand is a polynomial; each path contributes its leaf
    degree times the exact expectation of the product of its edge forms.
    """
    with_twist = prob.aux_label is not None
    unconditional = max_index >= prob.tree.dimension
    total = Fraction(0)
    for edges, leaf in prob.tree.paths():
        forms = [prob.edge_form(edge, with_twist) for edge in edges]
        if not unconditional:
            negatives = sum(1 for f in forms if _classify_edge(prob, f) < 0)
            if negatives > max_index:
                continue
        total += leaf.degree * affine_product_expectation(prob.simplex, forms)
    return total


def integrate_mc(
    prob: MarkedSimplexProblem, max_index: int, cfg: mc.MCConfig
) -> tuple[float, float]:
    """Monte-Carlo integral of the index sum: (estimate, standard error).

    Twist shifts are included whenever the problem carries a twist label.
    Deterministic for fixed (seed, samples) and independent of the worker
    count: sampling and evaluation are block-wise with merged tallies.
    """
    with_twist = prob.aux_label is not None
    edges: list[ChildEdge] = []
    index_of: dict[int, int] = {}

    def collect(node: Node) -> None:
        if isinstance(node, Leaf):
            return
        for e in node.children:
            if id(e) not in index_of:
                index_of[id(e)] = len(edges)
                edges.append(e)
            collect(e.child)

    collect(prob.tree.root)
    forms = [prob.edge_form(e, with_twist) for e in edges]
    coeff_matrix = np.array(
        [[float(c) for c in f.coeffs] for f in forms], dtype=float
    ).reshape(len(forms), prob.arity)
    constants = np.array([float(f.constant) for f in forms])
    path_edges: list[list[int]] = []
    degrees: list[int] = []
    for path, leaf in prob.tree.paths():
        path_edges.append([index_of[id(e)] for e in path])
        degrees.append(leaf.degree)

    def job(b: int, n: int) -> mc.MomentTally:
        t = mc.sample_block(prob.simplex, cfg.seed, b, n)
        marks = t @ coeff_matrix.T + constants  # (n, E)
        neg = marks < 0
        values = np.zeros(n)
        for cols, degree in zip(path_edges, degrees):
            if cols:
                keep = neg[:, cols].sum(axis=1) <= max_index
                values += np.where(keep, marks[:, cols].prod(axis=1) * degree, 0.0)
            else:
                values += float(degree)
        tally = mc.MomentTally.empty(1)
        tally.absorb(values[:, None])
        return tally

    total = mc.MomentTally.empty(1)
    for part in mc.map_blocks(cfg, job):
        total.merge(part)
    return float(total.mean()[0]), float(total.stderr()[0])


# -- harmonic twist and the jet bound coefficient ---------------------------------


def harmonic_number(k: int) -> Fraction:
    """H_k = 1 + 1/2 + ... + 1/k, exactly."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return sum((Fraction(1, j) for j in range(1, k + 1)), Fraction(0))


def harmonic_twist(
    tree: StratTree, base_labels: Sequence[str], aux_label: str, k: int
) -> MarkedSimplexProblem:
    """The order-k problem on the block-weighted simplex.

    Coordinates are the base labels repeated k times over the weight blocks
    (1,...,1, ..., k,...,k), each block repeating all r base labels; the
    auxiliary label contributes the constant H_k/(k r) times its effective
    marking to every edge mark.
    """
    base = tuple(base_labels)
    if not base:
        raise ValueError("need at least one base label")
    r = len(base)
    return MarkedSimplexProblem(
        tree=tree,
        labels=base * k,
        simplex=mc.block_weights(k, r),
        aux_label=aux_label,
        aux_scale=harmonic_number(k) / (k * r),
    )


def jet_bound_coefficient(
    tree: StratTree,
    base_labels: Sequence[str],
    aux_label: str,
    k: int,
    cfg: mc.MCConfig | None = None,
) -> Fraction | float:
    """Leading coefficient of the order-k first-cohomology jet bound.

    binom(n+kr-1, kr-1) / (k!)^r  times the integral of the twisted index
    sum at index cap 1 over the block-weighted simplex.  The exact route is
    taken when the sign structure allows; otherwise the Monte-Carlo
    fallback runs with ``cfg`` (required in that case) and a float is
    returned.
    """
    n = tree.dimension
    r = len(tuple(base_labels))
    problem = harmonic_twist(tree, base_labels, aux_label, k)
    coefficient = Fraction(
        math.comb(n + k * r - 1, k * r - 1), math.factorial(k) ** r
    )
    try:
        return coefficient * integrate_exact(problem, 1)
    except MixedSignError:
        if cfg is None:
            raise
        estimate, _ = integrate_mc(problem, 1, cfg)
        return float(coefficient) * estimate
