"""Marked stratification trees and their truncated degree calculus.

A stratification tree of dimension n is a rooted tree in which every
root-to-leaf path has exactly n edges.  A set of bundle labels is declared
up front, each with a positive integer denominator d; every edge carries an
integer numerator m per label, the effective marking being the rational
m/d.  Leaves carry positive integer degrees.

For a label L, a root-to-leaf path has *index* equal to its number of
strictly negative effective L-markings, and contributes the product of its
markings times its leaf degree.  The central quantities are

    degree_by_index(T, L, l)  = sum over paths of index exactly l,
    degree_truncated(T, L, l) = sum over paths of index at most l,

computed both by direct path enumeration and by the sign-splitting
recursion (positive children keep the index budget, negative children
consume one unit), which must agree.

The module also provides structure-preserving transformations with exactly
computable effect on truncated degrees: refinements by zero-marked
branches (degrees unchanged), powers of the markings (degrees scale by f^n
or stay fixed depending on whether the denominator absorbs the power),
finite covers satisfying a per-edge projection-formula constraint (degrees
scale by the covering degree), model trees for ample bundles and for nef
differences, and the assignment maximum: the largest signed truncated
degree over all ways of assigning one declared label to each edge,
evaluated by brute force or by a min/max dynamic program over subtrees.

Trees are immutable after construction; all operations are pure.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Mapping, Sequence

Scalar = int | Fraction


class TreeStructureError(ValueError):
    """Structural or parse-level violation of the tree format."""


class UnknownLabelError(ValueError):
    """A bundle label that was never declared."""


class InvalidCoverError(ValueError):
    """A cover plan violates the projection-formula or sign constraints."""


@dataclass(frozen=True)
class Leaf:
    degree: int


@dataclass(frozen=True)
class ChildEdge:
    markings: dict[str, int]
    child: "Node"


@dataclass(frozen=True)
class InternalNode:
    children: tuple[ChildEdge, ...]


Node = Leaf | InternalNode


@dataclass(frozen=True)
class StratTree:
    """dimension n, declared (label, denominator) pairs, and the root node.

    Construction validates: uniform depth n, leaf degrees >= 1, positive
    denominators, unique labels, and complete marking maps (one integer
    numerator per declared label on every edge).
    """

    dimension: int
    bundles: tuple[tuple[str, int], ...]
    root: Node

    def __post_init__(self) -> None:
        if self.dimension < 0:
            raise TreeStructureError(f"dimension must be >= 0, got {self.dimension}")
        names = [label for label, _ in self.bundles]
        if len(set(names)) != len(names):
            raise TreeStructureError(f"duplicate bundle labels in {names}")
        for label, den in self.bundles:
            if den < 1:
                raise TreeStructureError(
                    f"denominator of {label!r} must be >= 1, got {den}"
                )
        label_set = set(names)

        def walk(node: Node, depth: int) -> None:
            if isinstance(node, Leaf):
                if depth != self.dimension:
                    raise TreeStructureError(
                        f"leaf at depth {depth}, expected uniform depth {self.dimension}"
                    )
                if node.degree < 1:
                    raise TreeStructureError(
                        f"leaf degree must be >= 1, got {node.degree}"
                    )
                return
            if depth >= self.dimension:
                raise TreeStructureError(
                    f"internal node at depth {depth} exceeds dimension {self.dimension}"
                )
            for edge in node.children:
                if set(edge.markings) != label_set:
                    raise TreeStructureError(
                        f"edge markings {sorted(edge.markings)} do not match "
                        f"declared labels {sorted(label_set)}"
                    )
                walk(edge.child, depth + 1)

        walk(self.root, 0)

    # -- accessors ---------------------------------------------------------

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(label for label, _ in self.bundles)

    def denominator(self, label: str) -> int:
        for name, den in self.bundles:
            if name == label:
                return den
        raise UnknownLabelError(f"label {label!r} is not declared")

    def effective(self, edge: ChildEdge, label: str) -> Fraction:
        """The rational marking numerator/denominator of an edge for a label."""
        return Fraction(edge.markings[label], self.denominator(label))

    def paths(self) -> Iterator[tuple[tuple[ChildEdge, ...], Leaf]]:
        """All root-to-leaf paths as (edge sequence, leaf)."""

        def walk(node: Node, prefix: tuple[ChildEdge, ...]):
            if isinstance(node, Leaf):
                yield prefix, node
                return
            for edge in node.children:
                yield from walk(edge.child, prefix + (edge,))

        yield from walk(self.root, ())

    def edge_count(self) -> int:
        def count(node: Node) -> int:
            if isinstance(node, Leaf):
                return 0
            return sum(1 + count(e.child) for e in node.children)

        return count(self.root)


# -- JSON-style dict round trip ----------------------------------------------


def _require(d: Mapping, field: str, kind, where: str):
    if field not in d:
        raise TreeStructureError(f"missing field {field!r} in {where}")
    value = d[field]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise TreeStructureError(
            f"field {field!r} in {where} must be {kind.__name__}, got {type(value).__name__}"
        )
    return value


def tree_from_dict(data: Mapping) -> StratTree:
    """Parse a tree from its dict form.

    Schema: ``{"dimension": n, "bundles": [{"label": str, "denominator": int},
    ...], "root": node}`` with internal nodes ``{"children": [{"markings":
    {label: int}, "node": node}, ...]}`` and leaves ``{"degree": int}``.
    Markings may omit labels (numerator 0); unknown labels are an error.
    """
    dimension = _require(data, "dimension", int, "tree")
    bundles_raw = _require(data, "bundles", list, "tree")
    bundles = []
    for i, b in enumerate(bundles_raw):
        if not isinstance(b, Mapping):
            raise TreeStructureError(f"field 'bundles'[{i}] must be an object")
        label = _require(b, "label", str, f"bundles[{i}]")
        den = _require(b, "denominator", int, f"bundles[{i}]")
        bundles.append((label, den))
    labels = [label for label, _ in bundles]
    label_set = set(labels)

    def parse_node(d, where: str) -> Node:
        if not isinstance(d, Mapping):
            raise TreeStructureError(f"node at {where} must be an object")
        if "degree" in d:
            return Leaf(degree=_require(d, "degree", int, where))
        children_raw = _require(d, "children", list, where)
        edges = []
        for i, entry in enumerate(children_raw):
            if not isinstance(entry, Mapping):
                raise TreeStructureError(f"field 'children'[{i}] at {where} must be an object")
            markings_raw = _require(entry, "markings", Mapping, f"{where}.children[{i}]")
            for key, value in markings_raw.items():
                if key not in label_set:
                    raise TreeStructureError(
                        f"unknown label {key!r} in markings at {where}.children[{i}]"
                    )
                if not isinstance(value, int) or isinstance(value, bool):
                    raise TreeStructureError(
                        f"marking {key!r} at {where}.children[{i}] must be an integer"
                    )
            markings = {label: int(markings_raw.get(label, 0)) for label in labels}
            child = parse_node(
                _require(entry, "node", Mapping, f"{where}.children[{i}]"),
                f"{where}.children[{i}].node",
            )
            edges.append(ChildEdge(markings=markings, child=child))
        return InternalNode(children=tuple(edges))

    root = parse_node(_require(data, "root", Mapping, "tree"), "root")
    return StratTree(dimension=dimension, bundles=tuple(bundles), root=root)


def tree_to_dict(tree: StratTree) -> dict:
    """Serialize to the dict form; reparsing yields an equal tree."""

    def emit(node: Node) -> dict:
        if isinstance(node, Leaf):
            return {"degree": node.degree}
        return {
            "children": [
                {"markings": dict(edge.markings), "node": emit(edge.child)}
                for edge in node.children
            ]
        }

    return {
        "dimension": tree.dimension,
        "bundles": [
            {"label": label, "denominator": den} for label, den in tree.bundles
        ],
        "root": emit(tree.root),
    }


# -- truncated degrees ---------------------------------------------------------


def path_weight(tree: StratTree, edges: Sequence[ChildEdge], label: str) -> tuple[Fraction, int]:
    """A path's (product of effective markings, index).

    The index counts the strictly negative effective markings along the
    path; a zero marking is non-negative, which is inert since it already
    kills the product.
    """
    product = Fraction(1)
    negatives = 0
    for edge in edges:
        value = tree.effective(edge, label)
        if value < 0:
            negatives += 1
        product *= value
    return product, negatives


def degree_by_index(tree: StratTree, label: str, index: int) -> Fraction:
    """Sum of marking products times leaf degrees over paths of exact index."""
    tree.denominator(label)  # validates the label
    total = Fraction(0)
    for edges, leaf in tree.paths():
        product, negatives = path_weight(tree, edges, label)
        if negatives == index:
            total += product * leaf.degree
    return total


def degree_truncated(tree: StratTree, label: str, max_index: int) -> Fraction:
    """Sum over paths of index at most max_index, by direct enumeration."""
    tree.denominator(label)
    total = Fraction(0)
    for edges, leaf in tree.paths():
        product, negatives = path_weight(tree, edges, label)
        if negatives <= max_index:
            total += product * leaf.degree
    return total


def degree_recursive(tree: StratTree, label: str, max_index: int) -> Fraction:
    """Same value as degree_truncated, by the sign-splitting recursion.

    Children with positive marking recurse with the same index budget,
    children with negative marking consume one unit of budget, zero-marked
    children contribute nothing; a leaf returns its degree while the budget
    is non-negative.
    """
    den = tree.denominator(label)

    def rec(node: Node, budget: int) -> Fraction:
        if budget < 0:
            return Fraction(0)
        if isinstance(node, Leaf):
            return Fraction(node.degree)
        total = Fraction(0)
        for edge in node.children:
            m = edge.markings[label]
            if m == 0:
                continue
            sub = rec(edge.child, budget - 1 if m < 0 else budget)
            if sub:
                total += Fraction(m, den) * sub
        return total

    return rec(tree.root, max_index)


# -- refinements ----------------------------------------------------------------


def _zeroed(node: Node, labels: Sequence[str]) -> Node:
    """Copy of a branch with every marking set to 0 (leaf degrees kept)."""
    if isinstance(node, Leaf):
        return node
    return InternalNode(
        children=tuple(
            ChildEdge(markings={label: 0 for label in labels}, child=_zeroed(e.child, labels))
            for e in node.children
        )
    )


def _node_at(tree: StratTree, path: Sequence[int]) -> Node:
    node: Node = tree.root
    for step in path:
        if isinstance(node, Leaf):
            raise TreeStructureError(f"path {tuple(path)} descends through a leaf")
        try:
            node = node.children[step].child
        except IndexError:
            raise TreeStructureError(f"path {tuple(path)} leaves the tree") from None
    return node


def refine(
    tree: StratTree, insertions: Sequence[tuple[Sequence[int], Node]]
) -> StratTree:
    """Attach extra zero-marked branches; all truncated degrees are unchanged.

    Each insertion is (path, branch): ``path`` is a sequence of child
    indices addressing an internal node, and ``branch`` is grafted there as
    a new last child whose connecting edge and entire interior carry
    marking 0 for every label (its markings, if any, are ignored; leaf
    degrees are kept).  The branch depth must keep the tree uniform.
    Insertions are applied in order against the evolving tree.
    """
    result = tree
    for path, branch in insertions:
        target = _node_at(result, path)
        if isinstance(target, Leaf):
            raise TreeStructureError(
                f"cannot attach a branch below a leaf at path {tuple(path)}"
            )
        needed = result.dimension - len(path) - 1
        cleaned = _zeroed(branch, result.labels)
        if not _depth_exact(cleaned, needed):
            raise TreeStructureError(
                f"branch at path {tuple(path)} must have uniform depth {needed}"
            )
        new_edge = ChildEdge(
            markings={label: 0 for label in result.labels}, child=cleaned
        )

        def rebuild(node: Node, remaining: tuple[int, ...]) -> Node:
            if not remaining:
                assert isinstance(node, InternalNode)
                return InternalNode(children=node.children + (new_edge,))
            assert isinstance(node, InternalNode)
            step = remaining[0]
            edges = list(node.children)
            edges[step] = ChildEdge(
                markings=edges[step].markings,
                child=rebuild(edges[step].child, remaining[1:]),
            )
            return InternalNode(children=tuple(edges))

        result = StratTree(
            dimension=result.dimension,
            bundles=result.bundles,
            root=rebuild(result.root, tuple(path)),
        )
    return result


def _depth_exact(node: Node, expected: int) -> bool:
    """True iff every root-to-leaf path of the branch has length ``expected``."""
    if isinstance(node, Leaf):
        return expected == 0
    if expected <= 0:
        return False
    return all(_depth_exact(e.child, expected - 1) for e in node.children)


# -- powers of the marking data ---------------------------------------------------


def power_trivialization(
    tree: StratTree, label: str, f: int, keep_denominator: bool
) -> StratTree:
    """Raise the marking data of one label to the f-th power.

    Numerators of ``label`` are multiplied by f everywhere.  With
    ``keep_denominator=True`` the denominator stays fixed, so every
    n-dimensional truncated degree scales by f^n; with
    ``keep_denominator=False`` the denominator is multiplied by f as well
    and every truncated degree is unchanged.
    """
    if f < 1:
        raise ValueError(f"power must be >= 1, got {f}")
    tree.denominator(label)

    def rescale(node: Node) -> Node:
        if isinstance(node, Leaf):
            return node
        return InternalNode(
            children=tuple(
                ChildEdge(
                    markings={
                        key: value * f if key == label else value
                        for key, value in edge.markings.items()
                    },
                    child=rescale(edge.child),
                )
                for edge in node.children
            )
        )

    bundles = tuple(
        (name, den if keep_denominator or name != label else den * f)
        for name, den in tree.bundles
    )
    return StratTree(dimension=tree.dimension, bundles=bundles, root=rescale(tree.root))


# -- finite covers -----------------------------------------------------------------


@dataclass(frozen=True)
class LeafCover:
    """One covering point of a leaf, with its relative degree."""

    multiplier: int

    def __post_init__(self) -> None:
        if self.multiplier < 1:
            raise InvalidCoverError(f"leaf multiplier must be >= 1, got {self.multiplier}")


@dataclass(frozen=True)
class EdgeCover:
    """The pieces an edge splits into: (new numerator, subtree cover) pairs."""

    pieces: tuple[tuple[int, "NodeCover | LeafCover"], ...]

    def __post_init__(self) -> None:
        if not self.pieces:
            raise InvalidCoverError("an edge must split into at least one piece")


@dataclass(frozen=True)
class NodeCover:
    """Per-child-edge split plans, aligned with the node's children."""

    edges: tuple[EdgeCover, ...]


def _cover_degree(plan: "NodeCover | LeafCover", node: Node, label: str) -> int:
    """Relative covering degree of a validated plan over a branch.

    The degree is read off the projection sums of the edges whose original
    numerator is nonzero (all must agree, and each sum must be a positive
    integer multiple of its numerator).  If every child edge is zero-marked
    the markings carry no ramification information; the convention is then
    that pieces are unramified, so the degree is the common sum of the
    pieces' degrees per edge.
    """
    if isinstance(plan, LeafCover):
        if not isinstance(node, Leaf):
            raise InvalidCoverError("leaf plan attached to an internal node")
        return plan.multiplier
    if not isinstance(node, InternalNode):
        raise InvalidCoverError("node plan attached to a leaf")
    if len(plan.edges) != len(node.children):
        raise InvalidCoverError(
            f"plan covers {len(plan.edges)} edges, node has {len(node.children)}"
        )
    any_marked = any(edge.markings[label] != 0 for edge in node.children)
    delta: int | None = None
    for edge, edge_plan in zip(node.children, plan.edges):
        m = edge.markings[label]
        total = 0
        piece_degrees = 0
        for new_num, sub in edge_plan.pieces:
            if m == 0 and new_num != 0:
                raise InvalidCoverError("zero-marked edge must split with zero numerators")
            if m > 0 and new_num < 0 or m < 0 and new_num > 0:
                raise InvalidCoverError(
                    f"piece numerator {new_num} does not preserve the sign of {m}"
                )
            sub_degree = _cover_degree(sub, edge.child, label)
            total += new_num * sub_degree
            piece_degrees += sub_degree
        if m != 0:
            if total % m != 0 or total // m < 1:
                raise InvalidCoverError(
                    f"projection sum {total} is not a positive integer multiple of {m}"
                )
            d = total // m
        elif not any_marked:
            d = piece_degrees  # unramified convention on all-zero nodes
        else:
            continue  # zero-marked edge next to marked ones: unconstrained
        if delta is None:
            delta = d
        elif delta != d:
            raise InvalidCoverError(
                f"inconsistent covering degrees {delta} and {d} at one node"
            )
    if delta is None:
        raise InvalidCoverError(
            "covering degree is undetermined: the node has no children"
        )
    return delta


def _apply_cover(plan: "NodeCover | LeafCover", node: Node, label: str) -> Node:
    if isinstance(plan, LeafCover):
        assert isinstance(node, Leaf)
        return Leaf(degree=plan.multiplier * node.degree)
    assert isinstance(node, InternalNode)
    edges: list[ChildEdge] = []
    for edge, edge_plan in zip(node.children, plan.edges):
        for new_num, sub in edge_plan.pieces:
            markings = dict(edge.markings)
            markings[label] = new_num
            edges.append(
                ChildEdge(markings=markings, child=_apply_cover(sub, edge.child, label))
            )
    return InternalNode(children=tuple(edges))


def cover(
    tree: StratTree, label: str, plan: "NodeCover | LeafCover"
) -> tuple[StratTree, int]:
    """Apply a finite-cover plan; truncated degrees for ``label`` scale by delta.

    Each edge with numerator m splits into pieces with new numerators m'_j
    (sharing the sign of m, or zero) and sub-plans of relative degrees
    delta_j, subject to the projection constraint sum_j m'_j delta_j =
    delta * m for the node's single relative degree delta; the global delta
    is computed from the plan, never trusted from the caller.  Markings of
    other labels are copied unchanged onto each piece; covered leaves
    multiply their degrees by their piece's relative degree.
    """
    tree.denominator(label)
    delta = _cover_degree(plan, tree.root, label)
    covered = StratTree(
        dimension=tree.dimension,
        bundles=tree.bundles,
        root=_apply_cover(plan, tree.root, label),
    )
    return covered, delta


def identity_cover(node: Node, label: str) -> "NodeCover | LeafCover":
    """The trivial plan: every edge keeps its numerator, delta = 1."""
    if isinstance(node, Leaf):
        return LeafCover(multiplier=1)
    return NodeCover(
        edges=tuple(
            EdgeCover(
                pieces=((edge.markings[label], identity_cover(edge.child, label)),)
            )
            for edge in node.children
        )
    )


def replicate_cover(node: Node, label: str, copies: int) -> "NodeCover | LeafCover":
    """Duplicate every top-level child ``copies`` times with identical
    markings and subtrees; the covering degree is ``copies``."""
    if copies < 1:
        raise InvalidCoverError(f"copies must be >= 1, got {copies}")
    if isinstance(node, Leaf):
        return LeafCover(multiplier=copies)
    return NodeCover(
        edges=tuple(
            EdgeCover(
                pieces=tuple(
                    (edge.markings[label], identity_cover(edge.child, label))
                    for _ in range(copies)
                )
            )
            for edge in node.children
        )
    )


# -- model trees ------------------------------------------------------------------


def ample_tree(
    n: int,
    markings: Sequence[int],
    leaf_degree: int = 1,
    label: str = "L",
    denominator: int = 1,
) -> StratTree:
    """A single-chain tree with strictly positive markings.

    Every path has index 0, so all truncated degrees of every level agree
    with the full degree prod(markings)/denominator^n * leaf_degree.
    """
    if len(markings) != n:
        raise ValueError(f"need {n} markings, got {len(markings)}")
    if any(m <= 0 for m in markings):
        raise ValueError(f"markings must be strictly positive, got {tuple(markings)}")
    node: Node = Leaf(degree=leaf_degree)
    for m in reversed([int(x) for x in markings]):
        node = InternalNode(children=(ChildEdge(markings={label: m}, child=node),))
    return StratTree(dimension=n, bundles=((label, denominator),), root=node)


def nef_difference_tree(n: int, f: Scalar, g: Scalar) -> StratTree:
    """The complete binary model of a difference of nef classes.

    Labels F, G, L; every node has an F-child marked (F: f, G: 0, L: f) and
    a G-child marked (F: 0, G: g, L: -g), with unit leaf degrees.  The
    by-index degrees of L are exactly (-1)^j binom(n, j) f^(n-j) g^j.
    """
    fv, gv = Fraction(f), Fraction(g)
    if fv < 0 or gv < 0:
        raise ValueError("f and g must be non-negative")
    den = math.lcm(fv.denominator, gv.denominator)
    f_num = int(fv * den)
    g_num = int(gv * den)
    bundles = (("F", den), ("G", den), ("L", den))

    def build(depth: int) -> Node:
        if depth == n:
            return Leaf(degree=1)
        child = build(depth + 1)
        return InternalNode(
            children=(
                ChildEdge(markings={"F": f_num, "G": 0, "L": f_num}, child=child),
                ChildEdge(markings={"F": 0, "G": g_num, "L": -g_num}, child=child),
            )
        )

    return StratTree(dimension=n, bundles=bundles, root=build(0))


# -- assignment maxima ---------------------------------------------------------------


def _expand_positions(node: Node) -> Node:
    """Structurally identical copy with all-distinct node/edge objects."""
    if isinstance(node, Leaf):
        return Leaf(degree=node.degree)
    return InternalNode(
        children=tuple(
            ChildEdge(markings=dict(e.markings), child=_expand_positions(e.child))
            for e in node.children
        )
    )


def assignment_max(
    root: Node,
    options_of: Callable[[ChildEdge], Sequence[Fraction]],
    max_index: int,
    algorithm: str = "dp",
) -> Fraction:
    """Max over per-edge choices of (-1)^i times the index-truncated path sum.

    Each edge independently picks one value from ``options_of(edge)``; a
    path's index is its count of strictly negative chosen values, and paths
    of index above ``max_index`` are dropped.  ``dp`` propagates subtree
    maxima and minima per remaining budget (choices in disjoint subtrees
    are independent); ``brute`` enumerates all assignments.
    """
    i = max_index
    sign = -1 if i % 2 else 1

    if algorithm == "dp":

        def tables(node: Node) -> tuple[list[Fraction], list[Fraction]]:
            if isinstance(node, Leaf):
                deg = Fraction(node.degree)
                return [deg] * (i + 1), [deg] * (i + 1)
            maxs = [Fraction(0)] * (i + 1)
            mins = [Fraction(0)] * (i + 1)
            for edge in node.children:
                child_max, child_min = tables(edge.child)
                options = options_of(edge)
                for budget in range(i + 1):
                    best = None
                    worst = None
                    for value in options:
                        if value > 0:
                            lo = value * child_min[budget]
                            hi = value * child_max[budget]
                        elif value < 0:
                            if budget >= 1:
                                lo = value * child_max[budget - 1]
                                hi = value * child_min[budget - 1]
                            else:
                                lo = hi = Fraction(0)
                        else:
                            lo = hi = Fraction(0)
                        best = hi if best is None or hi > best else best
                        worst = lo if worst is None or lo < worst else worst
                    maxs[budget] += best
                    mins[budget] += worst
            return maxs, mins

        maxs, mins = tables(root)
        return maxs[i] if sign == 1 else -mins[i]

    if algorithm == "brute":
        expanded = _expand_positions(root)
        edges: list[ChildEdge] = []

        def collect(node: Node) -> None:
            if isinstance(node, Leaf):
                return
            for e in node.children:
                edges.append(e)
                collect(e.child)

        collect(expanded)
        option_lists = [list(options_of(e)) for e in edges]

        def evaluate(choice: dict[int, Fraction]) -> Fraction:
            def walk(node: Node, budget: int) -> Fraction:
                if budget < 0:
                    return Fraction(0)
                if isinstance(node, Leaf):
                    return Fraction(node.degree)
                total = Fraction(0)
                for e in node.children:
                    value = choice[id(e)]
                    sub = walk(e.child, budget - 1 if value < 0 else budget)
                    if sub:
                        total += value * sub
                return total

            return walk(expanded, i)

        best: Fraction | None = None
        for combo in itertools.product(*option_lists):
            choice = {id(e): v for e, v in zip(edges, combo)}
            value = sign * evaluate(choice)
            if best is None or value > best:
                best = value
        assert best is not None
        return best

    raise ValueError(f"unknown algorithm {algorithm!r}; use 'dp' or 'brute'")


def max_marking_degree(
    tree: StratTree, labels: Sequence[str], max_index: int, algorithm: str = "dp"
) -> Fraction:
    """Max over edge-to-label assignments of the signed truncated degree.

    For an assignment phi, the tree is remarked with each edge's phi-label
    marking; the value is (-1)^i times the index-truncated degree, and the
    maximum ranges over all |labels|^(#edges) assignments.  With a single
    label this collapses to (-1)^i * degree_truncated.
    """
    if not labels:
        raise ValueError("label set must be non-empty")
    for label in labels:
        tree.denominator(label)
    dens = {label: tree.denominator(label) for label in labels}

    def options_of(edge: ChildEdge) -> list[Fraction]:
        return [Fraction(edge.markings[label], dens[label]) for label in labels]

    return assignment_max(tree.root, options_of, max_index, algorithm=algorithm)


def validate_product_trivialization(
    tree: StratTree, parts: Sequence[str], whole: str, aux: str
) -> bool:
    """True iff on every edge the whole's effective marking is the sum of the
    parts' plus the auxiliary's effective markings."""
    for label in (*parts, whole, aux):
        tree.denominator(label)

    def check(node: Node) -> bool:
        if isinstance(node, Leaf):
            return True
        for edge in node.children:
            lhs = tree.effective(edge, whole)
            rhs = sum(
                (tree.effective(edge, p) for p in parts),
                tree.effective(edge, aux),
            )
            if lhs != rhs:
                return False
            if not check(edge.child):
                return False
        return True

    return check(tree.root)
