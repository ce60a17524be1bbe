"""Deterministic seeded sampling on weighted simplexes and experiment suite.

Sampling contract
-----------------
Uniform points of the weighted simplex D_a are drawn as the affine image of
the standard simplex: z uniform on { z >= 0, sum z = 1 } via normalized
standard exponentials, then t_i = z_i / a_i.  Streams are generated in
fixed-size blocks (65536 samples); block b of a run with seed s uses the
Philox 64-bit counter-based generator keyed by SeedSequence((s & 2^64-1,
b)).  Results are therefore bit-identical for identical (seed, samples)
regardless of worker count; workers only split blocks, and per-block
partial statistics (count, sum, sum of squares) are merged in block order.

Experiments
-----------
Statistical cross-checks of the exact moment formulas of
:mod:`jetcalc.simplex` on the block-weighted simplex with weight vector
(1,...,1, 2,...,2, ..., k,...,k) (each value repeated r times), written
X = (X_{j,l}):

* block sums Y_j = sum_l X_{j,l} have E[Y_j] = 1/(jk) and
  E[Y_j^2] = (r+1) / (j^2 k (kr+1));
* the rescaled vector (j Y_j)_j has density  C (y_1...y_k)^(r-1)  on the
  standard simplex with C = (kr-1)! / ((k-1)! (r-1)!^k), checked through
  its moments;
* distinct block sums are negatively correlated,
  E[Y_j Y_l] = r/(j l k (kr+1)) <= E[Y_j] E[Y_l];
* for an affine form A(t) = sum_{j,l} t_{j,l} d_l, the variance obeys the
  exact rational bound  Var[A] <= (2/k^2) (sum_{j<=k} 1/j^2) E[S^2]  with
  S = sum_l d_l T_l on the standard simplex (a sharpening of the pi^2/(3k^2)
  constant to a rational intermediate value).

Each check emits JSON-ready records {experiment, params, estimate, stderr,
exact, zscore}; the statistical acceptance threshold is 4 standard errors.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence

import numpy as np

from . import strat
from .simplex import (
    AffineForm,
    SimplexSpec,
    affine_product_expectation,
    monomial_moment,
)

BLOCK_SIZE = 1 << 16

_SEED_MASK = (1 << 64) - 1


class InvalidTrivializationError(ValueError):
    """The tree's whole-bundle markings are not the sum of parts plus twist."""


@dataclass(frozen=True)
class MCConfig:
    """Seed, sample count and worker count of one deterministic run."""

    seed: int
    samples: int
    workers: int = 1

    def __post_init__(self) -> None:
        if self.samples < 1:
            raise ValueError(f"sample count must be >= 1, got {self.samples}")
        if self.workers < 1:
            raise ValueError(f"worker count must be >= 1, got {self.workers}")


def block_sizes(samples: int) -> list[int]:
    """Sizes of the fixed blocks covering a run of the given length."""
    full, rest = divmod(samples, BLOCK_SIZE)
    return [BLOCK_SIZE] * full + ([rest] if rest else [])


def block_rng(seed: int, block_index: int) -> np.random.Generator:
    """The Philox generator of one block; the documented determinism contract."""
    key = np.random.SeedSequence((seed & _SEED_MASK, block_index))
    return np.random.Generator(np.random.Philox(key))


def sample_block(spec: SimplexSpec, seed: int, block_index: int, count: int) -> np.ndarray:
    """One (count, r) block of uniform points of D_a."""
    rng = block_rng(seed, block_index)
    exp = rng.standard_exponential((count, spec.arity))
    z = exp / exp.sum(axis=1, keepdims=True)
    return z / np.asarray(spec.weights, dtype=float)


def map_blocks(
    cfg: MCConfig, fn: Callable[[int, int], object]
) -> list[object]:
    """Run fn(block_index, block_count) over all blocks, results in block order.

    Workers only affect scheduling; the output list is always ordered by
    block index, keeping every downstream reduction deterministic.
    """
    sizes = block_sizes(cfg.samples)
    if cfg.workers == 1 or len(sizes) <= 1:
        return [fn(b, n) for b, n in enumerate(sizes)]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        futures = [pool.submit(fn, b, n) for b, n in enumerate(sizes)]
        return [f.result() for f in futures]


def sample_simplex(spec: SimplexSpec, cfg: MCConfig) -> Iterator[np.ndarray]:
    """Stream of cfg.samples uniform points of D_a, one vector at a time."""
    for b, n in enumerate(block_sizes(cfg.samples)):
        block = sample_block(spec, cfg.seed, b, n)
        yield from block


@dataclass
class MomentTally:
    """Per-statistic running (count, sum, sum of squares), merged block-wise."""

    count: int
    sums: np.ndarray
    sumsqs: np.ndarray

    @classmethod
    def empty(cls, width: int) -> "MomentTally":
        return cls(0, np.zeros(width), np.zeros(width))

    def absorb(self, values: np.ndarray) -> None:
        """Add one (block, width) matrix of statistic values."""
        self.count += values.shape[0]
        self.sums += values.sum(axis=0)
        self.sumsqs += (values * values).sum(axis=0)

    def merge(self, other: "MomentTally") -> None:
        self.count += other.count
        self.sums += other.sums
        self.sumsqs += other.sumsqs

    def mean(self) -> np.ndarray:
        return self.sums / self.count

    def stderr(self) -> np.ndarray:
        if self.count < 2:
            return np.zeros_like(self.sums)
        var = (self.sumsqs - self.sums**2 / self.count) / (self.count - 1)
        return np.sqrt(np.maximum(var, 0.0) / self.count)


def _tally_statistics(
    spec: SimplexSpec,
    cfg: MCConfig,
    width: int,
    stats_of_block: Callable[[np.ndarray], np.ndarray],
) -> MomentTally:
    """Sample all blocks, evaluate a (block, width) statistic matrix on each,
    and merge the tallies in block order."""

    def job(b: int, n: int) -> MomentTally:
        tally = MomentTally.empty(width)
        tally.absorb(stats_of_block(sample_block(spec, cfg.seed, b, n)))
        return tally

    total = MomentTally.empty(width)
    for part in map_blocks(cfg, job):
        total.merge(part)
    return total


# -- the block-weighted simplex ----------------------------------------------


def block_weights(k: int, r: int) -> SimplexSpec:
    """The weight vector (1,...,1, ..., k,...,k), each value repeated r times."""
    if k < 1 or r < 1:
        raise ValueError("k and r must be >= 1")
    return SimplexSpec(j for j in range(1, k + 1) for _ in range(r))


def jets_decomposition(
    samples: np.ndarray, k: int, r: int
) -> tuple[np.ndarray, np.ndarray]:
    """Split samples of the block-weighted simplex into (Y', Z).

    For X = (X_{j,l}) reshape to blocks, set Y_j = sum_l X_{j,l}, return
    Y'_j = j * Y_j (a point of the standard simplex) and Z^j = X_j / Y_j
    (k independent uniform points of the standard (r-1)-simplex).  Rows
    with a zero block sum (a measure-zero event) are dropped.
    """
    x = np.asarray(samples, dtype=float).reshape(-1, k, r)
    y = x.sum(axis=2)
    keep = (y != 0).all(axis=1)
    x, y = x[keep], y[keep]
    yprime = y * np.arange(1, k + 1)
    z = x / y[:, :, None]
    return yprime, z


def _record(
    experiment: str,
    params: dict,
    estimate: float,
    stderr: float,
    exact: Fraction | None,
) -> dict:
    z = None
    if exact is not None:
        z = (estimate - float(exact)) / stderr if stderr > 0 else 0.0
    return {
        "experiment": experiment,
        "params": params,
        "estimate": estimate,
        "stderr": stderr,
        "exact": str(exact) if exact is not None else None,
        "zscore": z,
    }


def dirichlet_density_check(k: int, r: int, cfg: MCConfig) -> dict:
    """Moments of the rescaled block sums against their closed-form density.

    The density of Y' on the standard simplex is C (y_1...y_k)^(r-1) with
    C = (kr-1)!/((k-1)! (r-1)!^k); the exact moment of y^q is C times the
    uniform moment of y^(q + (r-1, ..., r-1)).  All moments with |q| <= 2
    are compared at 4-sigma.
    """
    spec = block_weights(k, r)
    unit = SimplexSpec((1,) * k)
    constant = Fraction(
        math.factorial(k * r - 1),
        math.factorial(k - 1) * math.factorial(r - 1) ** k,
    )
    exponents: list[tuple[int, ...]] = []
    for j in range(k):
        e = [0] * k
        e[j] = 1
        exponents.append(tuple(e))
    for j in range(k):
        for l in range(j, k):
            e = [0] * k
            e[j] += 1
            e[l] += 1
            exponents.append(tuple(e))
    exacts = [
        constant * monomial_moment(unit, tuple(qi + r - 1 for qi in q))
        for q in exponents
    ]

    exp_arr = np.asarray(exponents, dtype=float)

    def stats(block: np.ndarray) -> np.ndarray:
        yprime, _ = jets_decomposition(block, k, r)
        # prod over coordinates of yprime**q, one column per exponent vector
        return np.prod(yprime[:, None, :] ** exp_arr[None, :, :], axis=2)

    tally = _tally_statistics(spec, cfg, len(exponents), stats)
    means, errs = tally.mean(), tally.stderr()
    records = [
        _record(
            "dirichlet-density",
            {"k": k, "r": r, "moment": list(q)},
            float(means[i]),
            float(errs[i]),
            exacts[i],
        )
        for i, q in enumerate(exponents)
    ]
    zs = [abs(rec["zscore"]) for rec in records]
    return {
        "experiment": "dirichlet-density",
        "params": {"k": k, "r": r, "seed": cfg.seed, "samples": cfg.samples},
        "records": records,
        "max_abs_zscore": max(zs),
        "density_constant": str(constant),
    }


def negative_correlation_check(k: int, r: int, cfg: MCConfig) -> dict:
    """Distinct block sums are negatively correlated.

    Exact side: E[Y_j Y_l] computed through simplex moments must equal
    r/(j l k (kr+1)) and be bounded by E[Y_j] E[Y_l] = 1/(j k l k).
    Empirical side: the estimated E[Y_j Y_l] must not exceed the product of
    the estimated means by more than 4 standard errors.
    """
    if k < 2:
        raise ValueError("need k >= 2 for a pair of distinct block sums")
    spec = block_weights(k, r)
    pairs = [(j, l) for j in range(1, k + 1) for l in range(j + 1, k + 1)]

    records = []
    exact_products: dict[tuple[int, int], Fraction] = {}
    for j, l in pairs:
        form_j = AffineForm(0, [1 if (idx // r) + 1 == j else 0 for idx in range(k * r)])
        form_l = AffineForm(0, [1 if (idx // r) + 1 == l else 0 for idx in range(k * r)])
        exact = affine_product_expectation(spec, [form_j, form_l])
        closed = Fraction(r, j * l * k * (k * r + 1))
        if exact != closed:
            raise AssertionError(
                f"moment expansion {exact} disagrees with closed form {closed}"
            )
        bound = Fraction(1, j * k) * Fraction(1, l * k)
        if exact > bound:
            raise AssertionError(f"E[Y_{j} Y_{l}] = {exact} exceeds {bound}")
        exact_products[(j, l)] = exact

    # statistics: all Y_j means, then all pair products
    def stats(block: np.ndarray) -> np.ndarray:
        y = block.reshape(-1, k, r).sum(axis=2)
        cols = [y[:, j - 1] for j in range(1, k + 1)]
        cols += [y[:, j - 1] * y[:, l - 1] for j, l in pairs]
        return np.column_stack(cols)

    tally = _tally_statistics(spec, cfg, k + len(pairs), stats)
    means, errs = tally.mean(), tally.stderr()
    ok = True
    for idx, (j, l) in enumerate(pairs):
        est = float(means[k + idx])
        err = float(errs[k + idx])
        records.append(
            _record(
                "negative-correlation",
                {"k": k, "r": r, "pair": [j, l]},
                est,
                err,
                exact_products[(j, l)],
            )
        )
        if est > float(means[j - 1] * means[l - 1]) + 4 * err:
            ok = False
    zs = [abs(rec["zscore"]) for rec in records]
    return {
        "experiment": "negative-correlation",
        "params": {"k": k, "r": r, "seed": cfg.seed, "samples": cfg.samples},
        "records": records,
        "max_abs_zscore": max(zs),
        "empirically_negatively_correlated": ok,
    }


def variance_bound_check(k: int, r: int, d: Sequence[int | Fraction]) -> dict:
    """Exact rational variance bound for A(t) = sum_{j,l} t_{j,l} d_l.

    Var[A] on the block-weighted simplex and E[S^2] on the standard
    (r-1)-simplex are both computed by exact moment expansion; the check is

        Var[A]  <=  (2/k^2) (sum_{j<=k} 1/j^2) E[S^2]

    whose constant is rational (and below pi^2/(3 k^2)).
    """
    coeffs = [Fraction(x) for x in d]
    if len(coeffs) != r:
        raise ValueError(f"need {r} coefficients, got {len(coeffs)}")
    spec = block_weights(k, r)
    form = AffineForm(0, [coeffs[idx % r] for idx in range(k * r)])
    mean = affine_product_expectation(spec, [form])
    second = affine_product_expectation(spec, [form, form])
    variance = second - mean * mean

    unit = SimplexSpec((1,) * r)
    s_form = AffineForm(0, coeffs)
    s_second = affine_product_expectation(unit, [s_form, s_form])
    constant = Fraction(2, k * k) * sum(
        (Fraction(1, j * j) for j in range(1, k + 1)), Fraction(0)
    )
    bound = constant * s_second
    holds = variance <= bound
    return {
        "experiment": "variance-bound",
        "params": {"k": k, "r": r, "d": [str(x) for x in coeffs]},
        "variance": str(variance),
        "bound": str(bound),
        "bound_constant": str(constant),
        "pi_constant": math.pi**2 / (3 * k * k),
        "holds": holds,
    }


def averaging_experiment(
    tree: strat.StratTree,
    base_labels: Sequence[str],
    aux_label: str,
    whole_label: str,
    max_index: int,
    k_values: Sequence[int],
    cfg: MCConfig,
    method: str = "auto",
) -> dict:
    """Scaled harmonic-twist integrals against the truncated whole degree.

    The tree must factor: on every edge the whole label's effective marking
    equals the sum of the base labels' plus the auxiliary's (validated
    first).  For each k the twisted integrand is integrated over the
    block-weighted simplex (exactly when its sign structure allows,
    otherwise by Monte Carlo), and the scaled value

        (k r)^n * integral / H_k^n,      H_k = 1 + 1/2 + ... + 1/k,

    is reported next to the target degree_truncated(tree, whole, i); the
    (log k)^n scaling is reported alongside for comparison (k >= 2).
    ``method`` is "auto", "exact" or "mc".
    """
    from . import integrands

    if not strat.validate_product_trivialization(
        tree, base_labels, whole_label, aux_label
    ):
        raise InvalidTrivializationError(
            f"{whole_label!r} markings are not the sum of {list(base_labels)} "
            f"plus {aux_label!r} on every edge"
        )
    n = tree.dimension
    r = len(base_labels)
    target = strat.degree_truncated(tree, whole_label, max_index)
    rows = []
    for k in k_values:
        problem = integrands.harmonic_twist(tree, base_labels, aux_label, k)
        h = sum((Fraction(1, j) for j in range(1, k + 1)), Fraction(0))
        used = method
        stderr = 0.0
        if method in ("auto", "exact"):
            try:
                value = float(integrands.integrate_exact(problem, max_index))
                used = "exact"
            except integrands.MixedSignError:
                if method == "exact":
                    raise
                used = "mc"
        if used == "mc":
            value, stderr = integrands.integrate_mc(problem, max_index, cfg)
        scaled = (k * r) ** n * value / float(h) ** n
        row = {
            "experiment": "averaging",
            "params": {"k": k, "max_index": max_index, "method": used},
            "estimate": value,
            "stderr": stderr,
            "exact": None,
            "zscore": None,
            "scaled": scaled,
            "scaled_log": (k * r) ** n * value / math.log(k) ** n if k >= 2 else None,
            "target": str(target),
            "gap": abs(scaled - float(target)),
        }
        rows.append(row)
    return {
        "experiment": "averaging",
        "params": {
            "max_index": max_index,
            "k_values": list(k_values),
            "seed": cfg.seed,
            "samples": cfg.samples,
            "target": str(target),
        },
        "records": rows,
    }
