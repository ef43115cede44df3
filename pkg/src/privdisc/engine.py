"""Optimal disclosure mappings under exact per-sample privacy.

The capacity problem ``max I(latent; Y)`` over mappings whose output is
independent of every protected variable reduces to a linear program: the
admissible conditional dataset laws form a polytope, only its extreme
points matter (entropy is concave), and the optimal mixture weights solve

    min  sum_k u_k H(M p_k)   s.t.   [p_1 ... p_K] u = p,  u >= 0,

where M is the latent channel and p_k are the polytope vertices.  The
capacity is then H(latent) minus the optimum, and the positive-weight
vertices become the columns of the conditional law given each output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geometry
from .errors import (DimensionMismatchError, DistributionError,
                     InfeasibleLPError, TruncatedEnumerationError)
from .geometry import (ConstraintSystem, ExtremePointSet, build_constraint_matrix,
                       enumerate_extreme_points, indicator_channel, null_space_basis)
from .lp import solve_equality_lp
from .probability import (Channel, DiscreteScenario, Pmf, conditional_mutual_information,
                          entropy, entropy_of_vector, mutual_information, tv_distance)

FEASIBILITY_TOL = 1e-9
WEIGHT_TOL = 1e-10
MARGINAL_TOL = 1e-9

__all__ = [
    "DisclosureMapping",
    "DisclosureReport",
    "SelfDisclosureReport",
    "check_feasibility",
    "disclosure_upper_bound",
    "solve_capacity",
    "assemble_mapping",
    "self_disclosure",
    "conditional_entropy_bound",
    "latent_output_information",
    "privacy_residuals",
    "constant_mapping",
    "deterministic_mapping",
]


@dataclass(frozen=True)
class DisclosureMapping:
    """Stochastic disclosure mapping together with its induced laws.

    ``cond_y_given_dataset`` is the mapping itself (one column per dataset
    outcome); ``p_y`` and ``cond_dataset_given_y`` are the output marginal
    and the Bayes-inverted conditional, kept consistent via
    ``P_{Y|Z} = diag(p_Y) P_{Z|Y}^T diag(p_Z)^{-1}``.
    """

    p_y: Pmf
    cond_dataset_given_y: Channel
    cond_y_given_dataset: Channel

    @property
    def output_size(self) -> int:
        return len(self.p_y)

    @property
    def support_size(self) -> int:
        return self.cond_y_given_dataset.input_size

    def joint_with_dataset(self, p_dataset: Pmf) -> np.ndarray:
        """Joint array p(z, y) of shape (support, outputs)."""
        return p_dataset.probs[:, None] * self.cond_y_given_dataset.matrix.T

    def sample(self, support_index: int, rng: np.random.Generator) -> int:
        """Draw one output symbol for the given dataset outcome."""
        return int(rng.choice(self.output_size,
                              p=self.cond_y_given_dataset.matrix[:, support_index]))


@dataclass(frozen=True)
class DisclosureReport:
    """Capacity, mapping, bounds, and diagnostics for one solved instance."""

    capacity: float
    mapping: DisclosureMapping
    upper_bound: float
    feasible: bool
    y_cardinality: int
    lp_weights: np.ndarray
    residuals: tuple[float, ...]
    rank: int
    nullity: int
    support_size: int
    lp_optimum: float
    alternative_optimum: bool
    extreme_points: ExtremePointSet


@dataclass(frozen=True)
class SelfDisclosureReport:
    """Self-disclosure capacity report plus its efficiency statistics."""

    report: DisclosureReport
    efficiency: float
    efficiency_bound: float

    @property
    def capacity(self) -> float:
        return self.report.capacity


def _protected_blocks(scenario: DiscreteScenario,
                      protected: list[Channel] | None) -> list[Channel]:
    if protected:
        return list(protected)
    return [indicator_channel(scenario, i) for i in range(scenario.n_samples)]


def check_feasibility(scenario: DiscreteScenario,
                      protected: list[Channel] | None = None,
                      tol: float = FEASIBILITY_TOL) -> bool:
    """True iff some admissible perturbation direction moves the latent law.

    Any positive capacity requires a null vector of the privacy constraint
    matrix outside the null space of the latent channel; with none, every
    admissible mapping leaves the latent independent of the output.
    """
    system = null_space_basis(build_constraint_matrix(scenario, protected))
    if system.nullity == 0:
        return False
    image = scenario.latent_channel.matrix @ system.null_basis.T
    return bool(np.abs(image).max() > tol)


def disclosure_upper_bound(scenario: DiscreteScenario,
                           protected: list[Channel] | None = None) -> float:
    """Single-variable leakage bound: min over protected U of I(latent; Z | U)."""
    blocks = _protected_blocks(scenario, protected)
    p = scenario.p_dataset.probs
    latent = scenario.latent_channel.matrix
    best = math.inf
    for chan in blocks:
        joint = latent[:, :, None] * p[None, :, None] * chan.matrix.T[None, :, :]
        best = min(best, conditional_mutual_information(joint))
    return best


def _upper_bound_fast(latent: np.ndarray, p: np.ndarray,
                      blocks: list[Channel]) -> float:
    """Same bound as :func:`disclosure_upper_bound`, via the identity
    I(T; Z | U) = H(T | U) - H(T | Z), valid because T and U are generated
    from Z through independent channels."""
    joint_tz = latent * p[None, :]
    h_t_given_z = (entropy_of_vector(joint_tz.ravel())
                   - entropy_of_vector(p))
    best = math.inf
    for chan in blocks:
        joint_tu = joint_tz @ chan.matrix.T
        h_t_given_u = (entropy_of_vector(joint_tu.ravel())
                       - entropy_of_vector(joint_tu.sum(axis=0)))
        best = min(best, h_t_given_u - h_t_given_z)
    return max(0.0, best)


def assemble_mapping(vertices: np.ndarray, weights: np.ndarray,
                     p_dataset: Pmf) -> DisclosureMapping:
    """Build the mapping that mixes the given vertices with the given weights.

    ``vertices`` has one column per candidate conditional law.  Weights below
    1e-10 are dropped; the retained mixture must reproduce ``p_dataset``
    within 1e-9.  Output labels follow the order of retained vertices.
    """
    vertices = np.asarray(vertices, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if vertices.ndim != 2 or vertices.shape[1] != weights.size:
        raise DimensionMismatchError("one weight per vertex column required")
    if np.any(weights < -WEIGHT_TOL):
        raise DistributionError("mixture weights must be nonnegative")
    if float(np.abs(vertices @ weights - p_dataset.probs).max()) > MARGINAL_TOL:
        raise DistributionError("mixture does not reproduce the dataset law")
    keep = np.flatnonzero(weights > WEIGHT_TOL)
    if keep.size == 0:
        raise DistributionError("all mixture weights are zero")
    w = weights[keep]
    cols = vertices[:, keep]
    p_y = Pmf(w / w.sum())
    # Explicit renormalizations below absorb solver noise of order 1e-12.
    cols = cols / cols.sum(axis=0)
    cond_y = p_y.probs[:, None] * cols.T / p_dataset.probs[None, :]
    cond_y = cond_y / cond_y.sum(axis=0)
    return DisclosureMapping(
        p_y=p_y,
        cond_dataset_given_y=Channel(cols, atol=1e-9),
        cond_y_given_dataset=Channel(cond_y, atol=1e-9),
    )


def constant_mapping(p_dataset: Pmf) -> DisclosureMapping:
    """The trivial mapping whose output is a single constant symbol."""
    return DisclosureMapping(
        p_y=Pmf([1.0]),
        cond_dataset_given_y=Channel(p_dataset.probs[:, None]),
        cond_y_given_dataset=Channel(np.ones((1, len(p_dataset)))),
    )


def deterministic_mapping(p_dataset: Pmf, outputs: list[int],
                          output_size: int) -> DisclosureMapping:
    """Mapping realizing a function of the dataset outcome.

    Output symbols that no outcome reaches are dropped and the remaining
    ones are relabeled in increasing order.
    """
    cond_y = np.zeros((output_size, len(p_dataset)))
    for j, y in enumerate(outputs):
        cond_y[y, j] = 1.0
    p_y = cond_y @ p_dataset.probs
    keep = np.flatnonzero(p_y > 0.0)
    cond_y = cond_y[keep]
    p_y = p_y[keep]
    cond_x = p_dataset.probs[None, :] * cond_y / p_y[:, None]
    return DisclosureMapping(
        p_y=Pmf(p_y, atol=1e-9),
        cond_dataset_given_y=Channel(cond_x.T, atol=1e-9),
        cond_y_given_dataset=Channel(cond_y),
    )


def privacy_residuals(scenario: DiscreteScenario, mapping: DisclosureMapping,
                      protected: list[Channel] | None = None) -> tuple[float, ...]:
    """Total-variation gap to exact independence, one entry per protected variable."""
    blocks = _protected_blocks(scenario, protected)
    joint_zy = mapping.joint_with_dataset(scenario.p_dataset)
    out = []
    for chan in blocks:
        joint_uy = chan.matrix @ joint_zy
        product = joint_uy.sum(axis=1)[:, None] * joint_uy.sum(axis=0)[None, :]
        out.append(tv_distance(joint_uy.ravel(), product.ravel()))
    return tuple(out)


def solve_capacity(scenario: DiscreteScenario,
                   protected: list[Channel] | None = None,
                   cap: int = geometry.DEFAULT_SUBSET_CAP) -> DisclosureReport:
    """Solve the disclosure capacity LP and assemble the optimal mapping.

    Raises :class:`TruncatedEnumerationError` when the vertex enumeration
    would be partial under ``cap``; partial vertex sets would silently
    underestimate the capacity.
    """
    blocks = _protected_blocks(scenario, protected)
    matrix = build_constraint_matrix(scenario, blocks)
    system = null_space_basis(matrix)
    points = enumerate_extreme_points(system, scenario.p_dataset, cap=cap)
    if points.truncated:
        raise TruncatedEnumerationError(
            f"vertex enumeration exceeded cap={cap}; "
            "raise the cap or use the windowed heuristics")
    return _solve_from_vertices(scenario, blocks, system, points)


def _solve_from_vertices(scenario: DiscreteScenario, blocks: list[Channel],
                         system: ConstraintSystem,
                         points: ExtremePointSet) -> DisclosureReport:
    latent = scenario.latent_channel.matrix
    h_latent = entropy(scenario.latent_pmf())
    vmat = points.matrix()
    costs = np.array([entropy_of_vector(latent @ vmat[:, k])
                      for k in range(vmat.shape[1])])
    sol = solve_equality_lp(costs, vmat, scenario.p_dataset.probs)
    if float(np.abs(vmat @ sol.x - scenario.p_dataset.probs).max()) > MARGINAL_TOL:
        raise InfeasibleLPError("LP solution violates the marginal constraint")
    mapping = assemble_mapping(vmat, sol.x, scenario.p_dataset)
    capacity = h_latent - sol.objective
    if capacity < 0.0:
        if capacity < -FEASIBILITY_TOL:
            raise InfeasibleLPError(f"negative capacity {capacity}; LP breakdown")
        capacity = 0.0
    if scenario.latent_channel.output_size == 1:
        feasible = False  # constant latent: nothing to disclose
    else:
        nontrivial = np.abs(latent @ system.null_basis.T).max() if system.nullity else 0.0
        feasible = bool(nontrivial > FEASIBILITY_TOL)
    return DisclosureReport(
        capacity=capacity,
        mapping=mapping,
        upper_bound=_upper_bound_fast(latent, scenario.p_dataset.probs, blocks),
        feasible=feasible,
        y_cardinality=mapping.output_size,
        lp_weights=sol.x,
        residuals=privacy_residuals(scenario, mapping, blocks),
        rank=system.rank,
        nullity=system.nullity,
        support_size=scenario.support_size,
        lp_optimum=sol.objective,
        alternative_optimum=sol.alternative_optimum,
        extreme_points=points,
    )


def self_disclosure(scenario: DiscreteScenario,
                    cap: int = geometry.DEFAULT_SUBSET_CAP) -> SelfDisclosureReport:
    """Disclose the dataset itself: capacity of ``max I(dataset; Y)``.

    Runs the capacity solve with the identity latent channel and reports the
    efficiency (capacity over dataset entropy) next to its upper bound
    ``1 - max_j H(X_j)/H(dataset)``.
    """
    identity = DiscreteScenario(
        sample_alphabets=scenario.sample_alphabets,
        support=scenario.support,
        p_dataset=scenario.p_dataset,
        latent_channel=Channel.identity(scenario.support_size),
        latent_alphabet=scenario.support_size,
        exact_p_dataset=scenario.exact_p_dataset,
    )
    report = solve_capacity(identity, cap=cap)
    h_dataset = scenario.dataset_entropy()
    max_sample = max(entropy(scenario.sample_marginal(i))
                     for i in range(scenario.n_samples))
    return SelfDisclosureReport(
        report=report,
        efficiency=report.capacity / h_dataset if h_dataset > 0 else 0.0,
        efficiency_bound=1.0 - max_sample / h_dataset if h_dataset > 0 else 0.0,
    )


def conditional_entropy_bound(scenario: DiscreteScenario) -> tuple[float, float]:
    """Bounds on the residual dataset uncertainty under an optimal mapping.

    Returns ``(log2 rank(P), log2 min(sum |X_i| - n + 1, support))``; the
    first never exceeds the second because each constraint block contributes
    one redundant row.
    """
    system = null_space_basis(build_constraint_matrix(scenario))
    g = sum(scenario.sample_alphabets)
    cap2 = min(g - scenario.n_samples + 1, scenario.support_size)
    first = math.log2(system.rank)
    second = math.log2(cap2)
    if first > second + 1e-12:
        raise InfeasibleLPError("rank exceeds its structural bound; matrix is malformed")
    return first, second


def latent_output_information(scenario: DiscreteScenario,
                              mapping: DisclosureMapping) -> float:
    """Achieved information I(latent; Y) of a mapping on a scenario."""
    joint_zy = mapping.joint_with_dataset(scenario.p_dataset)
    joint_wy = scenario.latent_channel.matrix @ joint_zy
    return mutual_information(joint_wy)
