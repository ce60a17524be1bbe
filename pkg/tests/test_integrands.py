import random
from fractions import Fraction

import pytest

from _helpers import random_tree
from jetcalc import mc
from jetcalc.integrands import (
    MarkedSimplexProblem,
    MissingTwistError,
    MixedSignError,
    harmonic_number,
    harmonic_twist,
    index_sum,
    integrate_exact,
    integrate_mc,
    jet_bound_coefficient,
    max_tensor_degree,
    twisted_index_sum,
)
from jetcalc.simplex import SimplexSpec
from jetcalc.strat import Leaf, StratTree, tree_from_dict

TWO_LABEL_SPLIT = tree_from_dict(
    {
        "dimension": 1,
        "bundles": [
            {"label": "L1", "denominator": 1},
            {"label": "L2", "denominator": 1},
        ],
        "root": {
            "children": [
                {"markings": {"L1": 1, "L2": 0}, "node": {"degree": 1}},
                {"markings": {"L1": 0, "L2": -1}, "node": {"degree": 1}},
            ]
        },
    }
)

SINGLE_EDGE = tree_from_dict(
    {
        "dimension": 1,
        "bundles": [
            {"label": "L1", "denominator": 1},
            {"label": "L2", "denominator": 1},
        ],
        "root": {
            "children": [{"markings": {"L1": 1, "L2": -2}, "node": {"degree": 1}}]
        },
    }
)


def problem(tree, labels, weights, **kw):
    return MarkedSimplexProblem(
        tree=tree, labels=labels, simplex=SimplexSpec(weights), **kw
    )


def test_index_sum_examples():
    prob = problem(TWO_LABEL_SPLIT, ("L1", "L2"), (1, 1))
    half = (Fraction(1, 2), Fraction(1, 2))
    assert index_sum(prob, half, 0) == Fraction(1, 2)
    assert index_sum(prob, half, 1) == 0
    assert index_sum(prob, (0, 0), 1) == 0
    # all-positive tree: independent of the index cap
    chain = tree_from_dict(
        {
            "dimension": 2,
            "bundles": [{"label": "L", "denominator": 1}],
            "root": {
                "children": [
                    {
                        "markings": {"L": 2},
                        "node": {
                            "children": [{"markings": {"L": 1}, "node": {"degree": 1}}]
                        },
                    }
                ]
            },
        }
    )
    p = problem(chain, ("L",), (1,))
    values = {index_sum(p, (Fraction(1, 3),), i) for i in range(3)}
    assert len(values) == 1


def test_index_sum_homogeneity():
    rng = random.Random(12)
    for _ in range(20):
        tree = random_tree(rng, rng.randint(1, 3), (("L1", 1), ("L2", 2)))
        prob = problem(tree, ("L1", "L2"), (1, 2))
        t = tuple(Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(2))
        lam = Fraction(rng.randint(1, 5), rng.randint(1, 3))
        for i in range(tree.dimension + 1):
            assert index_sum(prob, tuple(lam * x for x in t), i) == (
                lam**tree.dimension * index_sum(prob, t, i)
            )


def test_index_sum_layers_by_cap():
    rng = random.Random(44)
    for _ in range(20):
        tree = random_tree(rng, rng.randint(1, 3), (("L1", 1), ("L2", 1)), max_degree=1)
        prob = problem(tree, ("L1", "L2"), (1, 1))
        t = tuple(Fraction(rng.randint(-2, 2), rng.randint(1, 3)) for _ in range(2))
        # difference of consecutive caps equals the by-index layer
        by_index = []
        for edges, leaf in tree.paths():
            marks = [prob.edge_form(e, False)(t) for e in edges]
            idx = sum(1 for v in marks if v < 0)
            prod = Fraction(1)
            for v in marks:
                prod *= v
            by_index.append((idx, prod * leaf.degree))
        for i in range(1, tree.dimension + 1):
            layer = sum((v for idx, v in by_index if idx == i), Fraction(0))
            assert index_sum(prob, t, i) - index_sum(prob, t, i - 1) == layer


def test_twisted_index_sum_examples():
    # p == 0 twist equals the plain sum
    tree = tree_from_dict(
        {
            "dimension": 1,
            "bundles": [
                {"label": "L", "denominator": 1},
                {"label": "N", "denominator": 1},
            ],
            "root": {
                "children": [{"markings": {"L": 1, "N": 0}, "node": {"degree": 1}}]
            },
        }
    )
    prob = problem(tree, ("L",), (1,), aux_label="N")
    for t in [(Fraction(1, 2),), (Fraction(2),)]:
        assert twisted_index_sum(prob, t, 1) == index_sum(prob, t, 1)

    shifted = tree_from_dict(
        {
            "dimension": 1,
            "bundles": [
                {"label": "L", "denominator": 1},
                {"label": "N", "denominator": 1},
            ],
            "root": {
                "children": [{"markings": {"L": 1, "N": -1}, "node": {"degree": 1}}]
            },
        }
    )
    prob = problem(shifted, ("L",), (1,), aux_label="N")
    assert twisted_index_sum(prob, (Fraction(1, 2),), 0) == 0
    assert twisted_index_sum(prob, (Fraction(1, 2),), 1) == Fraction(-1, 2)
    assert twisted_index_sum(prob, (Fraction(2),), 0) == 1  # shift moved the boundary
    plain = problem(shifted, ("L",), (1,))
    with pytest.raises(MissingTwistError):
        twisted_index_sum(plain, (Fraction(1),), 0)


def test_max_tensor_degree_single_point_collapse():
    rng = random.Random(6)
    for _ in range(20):
        tree = random_tree(rng, rng.randint(1, 2), (("L1", 1), ("L2", 2)))
        prob = problem(tree, ("L1", "L2"), (1, 2))
        t = tuple(Fraction(rng.randint(0, 3), rng.randint(1, 2)) for _ in range(2))
        for i in range(tree.dimension + 1):
            expected = (-1) ** i * index_sum(prob, t, i)
            assert max_tensor_degree(prob, [t], i) == expected
            assert max_tensor_degree(prob, [t, t, t], i) == expected


def test_max_tensor_degree_example_and_homogeneity():
    prob = problem(SINGLE_EDGE, ("L1", "L2"), (1, 1))
    u1, u2 = (1, 0), (0, 1)
    # marks: u1 -> 1, u2 -> -2; at cap 1 the max of -(sum) is 2
    assert max_tensor_degree(prob, [u1, u2], 1) == 2
    assert max_tensor_degree(prob, [u1, u2], 0) == 1
    lam = Fraction(3, 2)
    n = prob.tree.dimension
    scaled = [tuple(lam * x for x in u) for u in (u1, u2)]
    assert max_tensor_degree(prob, scaled, 1) == lam**n * 2


def test_max_tensor_degree_brute_dp_agree():
    rng = random.Random(15)
    for _ in range(25):
        tree = random_tree(rng, rng.randint(1, 2), (("L1", 1), ("L2", 1)), max_children=2)
        prob = problem(tree, ("L1", "L2"), (1, 1))
        points = [
            tuple(Fraction(rng.randint(0, 2)) for _ in range(2))
            for _ in range(rng.randint(1, 3))
        ]
        i = rng.randint(0, tree.dimension)
        assert max_tensor_degree(prob, points, i, "brute") == max_tensor_degree(
            prob, points, i, "dp"
        )


def test_integrate_exact_examples():
    prob = problem(TWO_LABEL_SPLIT, ("L1", "L2"), (1, 1))
    assert integrate_exact(prob, 1) == 0  # E[t1] - E[t2]
    assert integrate_exact(prob, 0) == Fraction(1, 2)

    # all-positive: every cap gives the full polynomial integral
    chain = tree_from_dict(
        {
            "dimension": 2,
            "bundles": [{"label": "L", "denominator": 1}],
            "root": {
                "children": [
                    {
                        "markings": {"L": 1},
                        "node": {
                            "children": [{"markings": {"L": 1}, "node": {"degree": 1}}]
                        },
                    }
                ]
            },
        }
    )
    p = problem(chain, ("L",), (1,))
    assert integrate_exact(p, 0) == integrate_exact(p, 2) == 1  # E[t^2] on a point


def test_integrate_exact_mixed_sign():
    tree = tree_from_dict(
        {
            "dimension": 1,
            "bundles": [
                {"label": "L1", "denominator": 1},
                {"label": "L2", "denominator": 1},
            ],
            "root": {
                "children": [{"markings": {"L1": 1, "L2": -1}, "node": {"degree": 1}}]
            },
        }
    )
    prob = problem(tree, ("L1", "L2"), (1, 1))
    with pytest.raises(MixedSignError):
        integrate_exact(prob, 0)
    # cap >= dimension: the indicator disappears and the integral is exact
    assert integrate_exact(prob, 1) == 0  # E[t1 - t2] by symmetry


def test_integrate_mc_against_exact():
    rng = random.Random(200)
    cfg = mc.MCConfig(seed=99, samples=120_000)
    checked = 0
    while checked < 5:
        tree = random_tree(
            rng, rng.randint(1, 2), (("L1", 1), ("L2", 2)), numerators=(0, 4)
        )
        prob = problem(tree, ("L1", "L2"), (1, 2))
        i = rng.randint(0, tree.dimension)
        exact = integrate_exact(prob, i)  # all markings >= 0: sign-constant
        estimate, stderr = integrate_mc(prob, i, cfg)
        assert abs(estimate - float(exact)) <= 4 * max(stderr, 1e-15)
        checked += 1


def test_integrate_mc_mixed_sign_value():
    # single edge marked t1 - t2 on the unit segment: the positive part of
    # (2s - 1) integrates to 1/4
    tree = tree_from_dict(
        {
            "dimension": 1,
            "bundles": [
                {"label": "L1", "denominator": 1},
                {"label": "L2", "denominator": 1},
            ],
            "root": {
                "children": [{"markings": {"L1": 1, "L2": -1}, "node": {"degree": 1}}]
            },
        }
    )
    prob = problem(tree, ("L1", "L2"), (1, 1))
    estimate, stderr = integrate_mc(prob, 0, mc.MCConfig(seed=5, samples=400_000))
    assert abs(estimate - 0.25) <= 4 * stderr


def test_integrate_mc_constant_integrand():
    point = StratTree(dimension=0, bundles=(("L", 1),), root=Leaf(degree=3))
    prob = problem(point, ("L",), (1,))
    estimate, stderr = integrate_mc(prob, 0, mc.MCConfig(seed=1, samples=70_000))
    assert estimate == 3.0 and stderr == 0.0


def test_integrate_mc_deterministic_and_worker_independent():
    prob = problem(SINGLE_EDGE, ("L1", "L2"), (2, 3))
    a = integrate_mc(prob, 1, mc.MCConfig(seed=11, samples=200_000, workers=1))
    b = integrate_mc(prob, 1, mc.MCConfig(seed=11, samples=200_000, workers=1))
    c = integrate_mc(prob, 1, mc.MCConfig(seed=11, samples=200_000, workers=4))
    assert a == b == c
    d = integrate_mc(prob, 1, mc.MCConfig(seed=12, samples=200_000))
    assert d != a


def test_integrate_mc_matches_exact_with_twist():
    # sign-constant twisted problem: exact and Monte-Carlo integrals agree
    tree = tree_from_dict(
        {
            "dimension": 2,
            "bundles": [
                {"label": "L", "denominator": 1},
                {"label": "N", "denominator": 2},
            ],
            "root": {
                "children": [
                    {
                        "markings": {"L": 1, "N": 1},
                        "node": {
                            "children": [
                                {"markings": {"L": 2, "N": -1}, "node": {"degree": 2}}
                            ]
                        },
                    }
                ]
            },
        }
    )
    prob = harmonic_twist(tree, ["L"], "N", 2)
    # second edge's mark is 2Y - 3/8 with Y >= 1/2 on the (1,2)-simplex:
    # both edges keep one sign, so the exact route is available
    for cap in (0, 1, 2):
        exact = integrate_exact(prob, cap)
        estimate, stderr = integrate_mc(prob, cap, mc.MCConfig(seed=77, samples=150_000))
        assert abs(estimate - float(exact)) <= 4 * max(stderr, 1e-15)


def test_harmonic_twist():
    assert harmonic_number(1) == 1
    assert harmonic_number(2) == Fraction(3, 2)
    tree = tree_from_dict(
        {
            "dimension": 1,
            "bundles": [
                {"label": "L", "denominator": 1},
                {"label": "N", "denominator": 2},
            ],
            "root": {
                "children": [{"markings": {"L": 1, "N": 3}, "node": {"degree": 1}}]
            },
        }
    )
    prob = harmonic_twist(tree, ["L"], "N", 2)
    assert prob.simplex.weights == (1, 2)
    assert prob.labels == ("L", "L")
    assert prob.aux_scale == Fraction(3, 4)  # H_2 / (k r) = (3/2) / 2
    one = harmonic_twist(tree, ["L"], "N", 1)
    assert one.aux_scale == Fraction(1, 1)  # 1/r with r = 1
    edge = tree.root.children[0]
    form = prob.edge_form(edge, with_twist=True)
    assert form.constant == Fraction(3, 4) * Fraction(3, 2)


def test_jet_bound_coefficient_n1_formula():
    # dimension 1: every path has index <= 1, so the bound coefficient is
    # H_k * (sum of whole-degree markings) / (k!)^r
    import math

    tree = tree_from_dict(
        {
            "dimension": 1,
            "bundles": [
                {"label": "L", "denominator": 1},
                {"label": "N", "denominator": 1},
            ],
            "root": {
                "children": [
                    {"markings": {"L": 2, "N": 0}, "node": {"degree": 1}},
                    {"markings": {"L": 1, "N": 0}, "node": {"degree": 3}},
                ]
            },
        }
    )
    c1 = Fraction(2 * 1 + 1 * 3)
    for k in (1, 2, 3, 4):
        value = jet_bound_coefficient(tree, ["L"], "N", k)
        assert value == harmonic_number(k) * c1 / math.factorial(k)


def test_jet_bound_coefficient_positive_tree_full_cap():
    # all-positive markings: the cap-1 integral equals the full-cap integral
    import math

    tree = tree_from_dict(
        {
            "dimension": 2,
            "bundles": [
                {"label": "L", "denominator": 1},
                {"label": "N", "denominator": 1},
            ],
            "root": {
                "children": [
                    {
                        "markings": {"L": 1, "N": 1},
                        "node": {
                            "children": [
                                {"markings": {"L": 2, "N": 0}, "node": {"degree": 1}}
                            ]
                        },
                    }
                ]
            },
        }
    )
    k, r, n = 2, 1, 2
    problem_k = harmonic_twist(tree, ["L"], "N", k)
    full = integrate_exact(problem_k, n)
    coefficient = Fraction(
        math.comb(n + k * r - 1, k * r - 1), math.factorial(k) ** r
    )
    assert jet_bound_coefficient(tree, ["L"], "N", k) == coefficient * full


def test_jet_bound_requires_cfg_for_mixed_sign():
    # dimension 2 so the cap-1 indicator is active; each edge's mark on the
    # k=2 block simplex is 2Y - 3/2 with Y in [1/2, 1]: mixed sign
    tree = tree_from_dict(
        {
            "dimension": 2,
            "bundles": [
                {"label": "L", "denominator": 1},
                {"label": "N", "denominator": 1},
            ],
            "root": {
                "children": [
                    {
                        "markings": {"L": 2, "N": -2},
                        "node": {
                            "children": [
                                {"markings": {"L": 2, "N": -2}, "node": {"degree": 1}}
                            ]
                        },
                    }
                ]
            },
        }
    )
    with pytest.raises(MixedSignError):
        jet_bound_coefficient(tree, ["L"], "N", 2)
    value = jet_bound_coefficient(
        tree, ["L"], "N", 2, mc.MCConfig(seed=3, samples=50_000)
    )
    assert isinstance(value, float)
