"""Analytic solutions and constructions that bypass the capacity LP.

Covers the dataset of two binary samples (where the feasibility polytope is
a segment and everything is in closed form), modular-sum features that meet
the single-sample leakage bound with equality, shift-masked modular chains
for windowed privacy, and the equiprobable-cell partition mapping whose
information grows without bound in the cell count.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .engine import (DisclosureMapping, DisclosureReport, _upper_bound_fast,
                     assemble_mapping, constant_mapping, deterministic_mapping,
                     privacy_residuals)
from .errors import BudgetExceededError, DimensionMismatchError, DistributionError
from .geometry import ExtremePointSet, indicator_channel
from .probability import Channel, DiscreteScenario, Pmf, entropy_of_vector

TWO_BINARY_SUPPORT = ((0, 0), (0, 1), (1, 0), (1, 1))
# Admissible perturbation direction of the full-support two-binary dataset.
NULL_DIRECTION = np.array([1.0, -1.0, -1.0, 1.0])
ENUMERATION_BUDGET = 10_000_000

__all__ = [
    "TWO_BINARY_SUPPORT",
    "NULL_DIRECTION",
    "TwoBinaryParams",
    "two_binary_scenario",
    "two_binary_solve",
    "modular_sum_construct",
    "modular_chain_construct",
    "partition_construct",
    "iid_uniform_scenario",
]


@dataclass(frozen=True)
class TwoBinaryParams:
    """Joint law of two binary samples in marginal/overlap coordinates.

    The dataset vector over ``((0,0), (0,1), (1,0), (1,1))`` is
    ``[alpha - r, r, (beta - alpha) + r, (1 - beta) - r]``, where ``alpha``
    and ``beta`` fix the two marginals and ``r`` their interdependency,
    constrained to ``[0, R]`` with ``R = min(alpha, 1 - beta)``.
    """

    alpha: float
    beta: float
    r: float

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0 and 0.0 < self.beta < 1.0):
            raise DistributionError("alpha and beta must lie strictly inside (0, 1)")
        if not (-1e-12 <= self.r <= self.big_r + 1e-12):
            raise DistributionError(f"r={self.r} outside [0, {self.big_r}]")
        if np.any(self.dataset_vector() < -1e-12):
            raise DistributionError("parameters do not define a valid dataset law")

    @property
    def big_r(self) -> float:
        return min(self.alpha, 1.0 - self.beta)

    def dataset_vector(self) -> np.ndarray:
        return np.array([
            self.alpha - self.r,
            self.r,
            (self.beta - self.alpha) + self.r,
            (1.0 - self.beta) - self.r,
        ])


def two_binary_scenario(params: TwoBinaryParams, latent: Channel) -> DiscreteScenario:
    """Scenario for the two-binary law; zero-mass outcomes are dropped."""
    if latent.input_size != 4:
        raise DimensionMismatchError("latent channel needs one column per outcome of "
                                     f"{TWO_BINARY_SUPPORT}")
    vec = np.clip(params.dataset_vector(), 0.0, None)
    keep = np.flatnonzero(vec > 1e-12)
    return DiscreteScenario(
        sample_alphabets=(2, 2),
        support=tuple(TWO_BINARY_SUPPORT[j] for j in keep),
        p_dataset=Pmf(vec[keep] / vec[keep].sum()),
        latent_channel=Channel(latent.matrix[:, keep]),
        latent_alphabet=latent.output_size,
    )


def two_binary_solve(params: TwoBinaryParams, latent: Channel) -> DisclosureReport:
    """Closed-form capacity and optimal mapping for two binary samples.

    The polytope is the segment ``p + s * [1,-1,-1,1]`` over the admissible
    range of ``s``; its two endpoints are the only vertices and their
    mixture weights are forced by marginal preservation, so no LP is
    needed.  Degenerate laws (an outcome of mass zero) admit no disclosure
    and return capacity zero with the constant mapping.
    """
    scenario = two_binary_scenario(params, latent)
    p = params.dataset_vector()
    blocks = [indicator_channel(scenario, 0), indicator_channel(scenario, 1)]
    degenerate = scenario.support_size < 4

    if degenerate:
        mapping = constant_mapping(scenario.p_dataset)
        points = ExtremePointSet(points=(scenario.p_dataset,),
                                 bases=(tuple(range(scenario.support_size)),),
                                 truncated=False)
        return DisclosureReport(
            capacity=0.0,
            mapping=mapping,
            upper_bound=_upper_bound_fast(scenario.latent_channel.matrix,
                                          scenario.p_dataset.probs, blocks),
            feasible=False,
            y_cardinality=1,
            lp_weights=np.array([1.0]),
            residuals=privacy_residuals(scenario, mapping, blocks),
            rank=scenario.support_size,
            nullity=0,
            support_size=scenario.support_size,
            lp_optimum=entropy_of_vector(scenario.latent_channel.matrix
                                         @ scenario.p_dataset.probs),
            alternative_optimum=False,
            extreme_points=points,
        )

    # Segment endpoints: largest admissible moves along the null direction.
    s_max = min(p[1], p[2])
    s_min = -min(p[0], p[3])
    a1 = np.clip(p + s_min * NULL_DIRECTION, 0.0, None)
    a2 = np.clip(p + s_max * NULL_DIRECTION, 0.0, None)
    weight_a1 = s_max / (s_max - s_min)

    m = latent.matrix
    p_w = m @ p
    lp_optimum = (weight_a1 * entropy_of_vector(m @ a1)
                  + (1.0 - weight_a1) * entropy_of_vector(m @ a2))
    capacity = max(0.0, entropy_of_vector(p_w) - lp_optimum)
    mapping = assemble_mapping(np.column_stack([a1, a2]),
                               np.array([weight_a1, 1.0 - weight_a1]),
                               scenario.p_dataset)
    unit_dir = NULL_DIRECTION / 2.0
    feasible = bool(np.abs(m @ unit_dir).max() > 1e-9)
    points = ExtremePointSet(
        points=(Pmf(a1, atol=1e-9), Pmf(a2, atol=1e-9)),
        bases=(tuple(int(i) for i in np.flatnonzero(a1 > 0.0)),
               tuple(int(i) for i in np.flatnonzero(a2 > 0.0))),
        truncated=False,
    )
    return DisclosureReport(
        capacity=capacity,
        mapping=mapping,
        upper_bound=_upper_bound_fast(m, p, blocks),
        feasible=feasible,
        y_cardinality=mapping.output_size,
        lp_weights=np.array([weight_a1, 1.0 - weight_a1]),
        residuals=privacy_residuals(scenario, mapping, blocks),
        rank=3,
        nullity=1,
        support_size=4,
        lp_optimum=lp_optimum,
        alternative_optimum=False,
        extreme_points=points,
    )


def iid_uniform_scenario(n: int, size: int) -> DiscreteScenario:
    """Dataset of ``n`` iid uniform samples on ``size`` symbols, latent = dataset."""
    support = tuple(itertools.product(range(size), repeat=n))
    total = len(support)
    return DiscreteScenario(
        sample_alphabets=(size,) * n,
        support=support,
        p_dataset=Pmf.uniform(total),
        latent_channel=Channel.identity(total),
        latent_alphabet=total,
        exact_p_dataset=(Fraction(1, total),) * total,
    )


def modular_sum_construct(modulus: int, k_mult: int = 1
                          ) -> tuple[DiscreteScenario, DisclosureMapping]:
    """Independent uniforms whose modular sum is both the latent and the output.

    Sample one is uniform on ``modulus`` symbols, sample two on
    ``k_mult * modulus``; the latent is their sum mod ``modulus`` and the
    disclosed variable is the same function, so it attains the
    single-sample leakage bound ``log2 modulus`` with equality while staying
    independent of each sample.
    """
    if modulus < 2 or k_mult < 1:
        raise DistributionError("need modulus >= 2 and k_mult >= 1")
    size2 = k_mult * modulus
    support = tuple(itertools.product(range(modulus), range(size2)))
    total = len(support)
    p = Pmf.uniform(total)
    outputs = [(x1 + x2) % modulus for x1, x2 in support]
    scenario = DiscreteScenario(
        sample_alphabets=(modulus, size2),
        support=support,
        p_dataset=p,
        latent_channel=Channel.deterministic(outputs, modulus),
        latent_alphabet=modulus,
        exact_p_dataset=(Fraction(1, total),) * total,
    )
    return scenario, deterministic_mapping(p, outputs, modulus)


def modular_chain_construct(n: int, k: int, modulus: int,
                            seed: int = 0) -> DisclosureMapping:
    """Shift-masked modular sums over sliding windows of iid uniform samples.

    The output is the tuple ``(Q + X_i + ... + X_{i+k-1} mod M)`` over all
    windows, with one shared uniform shift Q that is marginalized exactly
    here; the resulting conditional law leaves every k-window of samples
    exactly independent of the output.  ``seed`` only fixes the generator
    used when :meth:`DisclosureMapping.sample` realizes outputs on data.
    """
    if not 1 <= k <= n:
        raise DimensionMismatchError(f"window length k={k} outside [1, {n}]")
    if modulus < 2:
        raise DistributionError("modulus must be at least 2")
    if modulus ** (n + 1) > ENUMERATION_BUDGET:
        raise BudgetExceededError("full enumeration over the shift exceeds the budget")
    del seed  # mapping itself is exact; sampling takes an explicit rng
    m_windows = n - k + 1
    support = list(itertools.product(range(modulus), repeat=n))
    n_outputs = modulus ** m_windows
    cond_y = np.zeros((n_outputs, len(support)))
    place = modulus ** np.arange(m_windows - 1, -1, -1)
    for j, x in enumerate(support):
        sums = np.array([sum(x[i:i + k]) % modulus for i in range(m_windows)])
        for q in range(modulus):
            y_idx = int(((sums + q) % modulus) @ place)
            cond_y[y_idx, j] += 1.0 / modulus
    p = Pmf.uniform(len(support))
    p_y = cond_y @ p.probs
    keep = np.flatnonzero(p_y > 0.0)
    cond_y = cond_y[keep]
    p_y = p_y[keep]
    cond_x = (p.probs[None, :] * cond_y / p_y[:, None]).T
    return DisclosureMapping(
        p_y=Pmf(p_y, atol=1e-9),
        cond_dataset_given_y=Channel(cond_x, atol=1e-9),
        cond_y_given_dataset=Channel(cond_y, atol=1e-9),
    )


def partition_construct(n_cells: int) -> DisclosureMapping:
    """Modular sum of two independent uniform cell indices.

    This is the discrete skeleton of disclosing continuous data through
    equiprobable partition cells: the output is uniform, independent of
    each index, and carries ``log2 n_cells`` bits about the pair, which
    grows without bound in the cell count.
    """
    if n_cells < 2:
        raise DistributionError("need at least two cells")
    scenario = iid_uniform_scenario(2, n_cells)
    outputs = [(i + j) % n_cells for i, j in scenario.support]
    return deterministic_mapping(scenario.p_dataset, outputs, n_cells)
