"""Independent verification: exact-rational geometry and brute-force capacity.

Everything here avoids the floating-point solver path on purpose.  Vertices
are re-derived by exact Gaussian elimination over rationals straight from
the raw constraint matrix (no SVD), and the capacity oracle enumerates all
small vertex subsets whose exact mixture reproduces the dataset law,
keeping the cheapest.  Entropies are still evaluated in floating point.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .engine import DisclosureMapping, privacy_residuals
from .errors import BudgetExceededError, DimensionMismatchError, PrivDiscError
from .probability import Channel, DiscreteScenario, entropy, entropy_of_vector

ORACLE_MAX_SUPPORT = 8
ORACLE_MAX_NULLITY = 4
EXACT_MAX_SUPPORT = 24
EXACT_SUBSET_CAP = 1_000_000

__all__ = [
    "VerificationResult",
    "verify_mapping",
    "ExactExtremePointSet",
    "exact_null_space",
    "exact_constraint_matrix",
    "exact_dataset_law",
    "exact_extreme_points",
    "brute_force_capacity",
]


@dataclass(frozen=True)
class VerificationResult:
    """Residuals of the defining properties of a private disclosure mapping."""

    per_sample_tv: tuple[float, ...]
    marginal_preservation_error: float
    markov_consistency_error: float
    passed: bool
    tol: float


def verify_mapping(scenario: DiscreteScenario, mapping: DisclosureMapping,
                   tol: float = 1e-9,
                   protected: list[Channel] | None = None) -> VerificationResult:
    """Check privacy, marginal preservation, and Bayes consistency of a mapping.

    ``per_sample_tv`` holds one total-variation residual per protected
    variable (by default, every sample).  The mapping passes when all
    residuals are within ``tol``.
    """
    if mapping.support_size != scenario.support_size:
        raise DimensionMismatchError("mapping support does not match scenario support")
    tv = privacy_residuals(scenario, mapping, protected)
    p = scenario.p_dataset.probs
    reconstructed = mapping.cond_dataset_given_y.matrix @ mapping.p_y.probs
    marginal_err = float(np.abs(reconstructed - p).max())
    bayes = (mapping.p_y.probs[:, None]
             * mapping.cond_dataset_given_y.matrix.T / p[None, :])
    markov_err = float(np.abs(bayes - mapping.cond_y_given_dataset.matrix).max())
    passed = max(tv) <= tol and marginal_err <= tol and markov_err <= tol
    return VerificationResult(
        per_sample_tv=tv,
        marginal_preservation_error=marginal_err,
        markov_consistency_error=markov_err,
        passed=passed,
        tol=tol,
    )


# ---------------------------------------------------------------------------
# Exact rational linear algebra


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form in place; returns (rows, pivot columns)."""
    if not rows:
        return rows, []
    n_cols = len(rows[0])
    pivots = []
    r = 0
    for c in range(n_cols):
        pivot_row = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = rows[r][c]
        rows[r] = [v / inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def _solve_exact(columns: list[tuple[Fraction, ...]],
                 rhs: list[Fraction]) -> list[Fraction] | None:
    """Unique exact solution of ``[columns] u = rhs``, or None.

    Returns None when the columns are dependent or the system inconsistent;
    dependent subsets are redundant for vertex purposes because any basic
    solution is already produced by an independent subset.
    """
    n_rows = len(rhs)
    aug = [[col[i] for col in columns] + [rhs[i]] for i in range(n_rows)]
    reduced, pivots = _rref(aug)
    n_vars = len(columns)
    # Unique solvability means a pivot in every variable column and none in
    # the right-hand-side column.
    if pivots != list(range(n_vars)):
        return None
    solution = [Fraction(0)] * n_vars
    for row, p in zip(reduced, pivots):
        solution[p] = row[-1]
    return solution


def exact_null_space(matrix: list[list[Fraction]]) -> list[tuple[Fraction, ...]]:
    """Rational basis of the null space, one vector per free column."""
    work = [row[:] for row in matrix]
    reduced, pivots = _rref(work)
    n_cols = len(matrix[0])
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * n_cols
        vec[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            vec[p] = -row[f]
        basis.append(tuple(vec))
    return basis


def exact_constraint_matrix(scenario: DiscreteScenario) -> list[list[Fraction]]:
    """Per-sample indicator constraint rows with exact 0/1 entries."""
    rows = []
    for i in range(scenario.n_samples):
        for symbol in range(scenario.sample_alphabets[i]):
            rows.append([Fraction(1 if outcome[i] == symbol else 0)
                         for outcome in scenario.support])
    return rows


def exact_dataset_law(scenario: DiscreteScenario) -> list[Fraction]:
    """Dataset probabilities as exact rationals.

    Uses the scenario's exact law when present; otherwise converts each
    float to the rational it represents exactly in binary.
    """
    if scenario.exact_p_dataset is not None:
        return list(scenario.exact_p_dataset)
    return [Fraction(float(v)) for v in scenario.p_dataset.probs]


@dataclass(frozen=True)
class ExactExtremePointSet:
    """Vertices of the feasibility polytope as exact rational vectors."""

    points: tuple[tuple[Fraction, ...], ...]
    bases: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.points)

    def as_float(self) -> np.ndarray:
        return np.array([[float(v) for v in point] for point in self.points])


def exact_extreme_points(constraints: list[list[Fraction]],
                         p_exact: list[Fraction],
                         max_support: int = EXACT_MAX_SUPPORT) -> ExactExtremePointSet:
    """Enumerate polytope vertices by exact elimination on the raw constraints.

    Works directly with ``{t >= 0 : P t = P p}``; no orthonormal reduction
    is involved, so the result is an independent check of the floating
    enumeration.
    """
    n_cols = len(p_exact)
    if n_cols > max_support:
        raise BudgetExceededError(f"support {n_cols} exceeds exact budget {max_support}")
    work = [row[:] for row in constraints]
    _, pivots = _rref(work)
    rank = len(pivots)
    if math.comb(n_cols, rank) > EXACT_SUBSET_CAP:
        raise BudgetExceededError("exact enumeration would exceed the subset cap")
    rhs = [sum(row[j] * p_exact[j] for j in range(n_cols)) for row in constraints]
    cols = [tuple(row[j] for row in constraints) for j in range(n_cols)]
    points: list[tuple[Fraction, ...]] = []
    bases: list[tuple[int, ...]] = []
    seen: set[tuple[Fraction, ...]] = set()
    for basis in itertools.combinations(range(n_cols), rank):
        solution = _solve_exact([cols[j] for j in basis], rhs)
        if solution is None or any(v < 0 for v in solution):
            continue
        point = [Fraction(0)] * n_cols
        for j, v in zip(basis, solution):
            point[j] = v
        key = tuple(point)
        if key in seen:
            continue
        seen.add(key)
        points.append(key)
        bases.append(basis)
    return ExactExtremePointSet(points=tuple(points), bases=tuple(bases))


def brute_force_capacity(scenario: DiscreteScenario,
                         max_y: int | None = None,
                         max_support: int = ORACLE_MAX_SUPPORT,
                         max_nullity: int = ORACLE_MAX_NULLITY) -> float:
    """Capacity by exhaustive search over small exact vertex mixtures.

    Every optimal mixture uses at most nullity+1 vertices, so enumerating
    all subsets up to that size (solving each mixture exactly and keeping
    the cheapest nonnegative one) recovers the LP optimum independently of
    any solver.  Intended for tiny instances only.
    """
    if scenario.support_size > max_support:
        raise BudgetExceededError("scenario exceeds the oracle support budget")
    constraints = exact_constraint_matrix(scenario)
    p_exact = exact_dataset_law(scenario)
    work = [row[:] for row in constraints]
    _, pivots = _rref(work)
    nullity = scenario.support_size - len(pivots)
    if nullity > max_nullity:
        raise BudgetExceededError("scenario exceeds the oracle nullity budget")
    vertices = exact_extreme_points(constraints, p_exact)
    subset_limit = nullity + 1 if max_y is None else min(max_y, nullity + 1)
    latent = scenario.latent_channel.matrix
    h_latent = entropy(scenario.latent_pmf())
    float_points = vertices.as_float()
    costs = [entropy_of_vector(latent @ fp) for fp in float_points]
    best = None
    for size in range(1, subset_limit + 1):
        for subset in itertools.combinations(range(len(vertices)), size):
            weights = _solve_exact([vertices.points[k] for k in subset], p_exact)
            if weights is None or any(w < 0 for w in weights):
                continue
            cost = sum(float(w) * costs[k] for w, k in zip(weights, subset))
            if best is None or cost < best:
                best = cost
    if best is None:
        raise PrivDiscError("no exact vertex mixture reproduces the dataset law")
    return max(0.0, h_latent - best)
