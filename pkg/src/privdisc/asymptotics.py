"""Large-dataset quantities for conditionally iid observations of a latent.

When samples are iid given the latent variable, only the reduction of the
latent that merges symbols with identical observation laws is learnable
from data.  Its entropy caps I(latent; dataset) as the dataset grows, and
the disclosure capacity is sandwiched between two zero-leakage limits: the
output-perturbation limit (curator sees only the reduced latent) and the
full-data limit (curator also sees one sample).  The bridge quantity
computed here interpolates between the two as the number of protected
samples increases.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import geometry
from .engine import DisclosureReport, solve_capacity
from .errors import DistributionError, TruncatedEnumerationError
from .geometry import indicator_channel
from .probability import (Channel, DiscreteScenario, Pmf, build_observation_scenario,
                          entropy)

GROUPING_TOL = 1e-10

__all__ = [
    "PrivateInformationResult",
    "private_information",
    "c_alpha_zero",
    "j_value",
    "CapacityScan",
    "capacity_scan",
]


@dataclass(frozen=True)
class PrivateInformationResult:
    """Reduction of a latent variable to its observationally distinct part.

    ``grouping`` maps each positive-mass latent symbol to its group; symbols
    land in the same group exactly when their conditional observation laws
    coincide (within 1e-10 in the sup norm).  ``c_x_w`` is the entropy of
    the grouped variable, the asymptotically learnable information.
    """

    c_x_w: float
    w_tilde_size: int
    grouping: dict[int, int]
    p_w_tilde: Pmf
    channel_x_given_w_tilde: Channel


def private_information(p_wx: np.ndarray, tol: float = GROUPING_TOL
                        ) -> PrivateInformationResult:
    """Merge latent symbols with identical conditional observation columns."""
    joint = np.asarray(p_wx, dtype=float)
    if joint.ndim != 2 or np.any(joint < 0.0) or abs(joint.sum() - 1.0) > 1e-9:
        raise DistributionError("p_wx must be a nonnegative joint summing to 1")
    p_w = joint.sum(axis=1)
    support = np.flatnonzero(p_w > 0.0)
    if support.size == 0:
        raise DistributionError("latent variable has empty support")
    grouping: dict[int, int] = {}
    reps: list[np.ndarray] = []
    masses: list[float] = []
    weighted: list[np.ndarray] = []
    for w in support:
        col = joint[w] / p_w[w]
        for g, rep in enumerate(reps):
            if np.abs(col - rep).max() <= tol:
                grouping[int(w)] = g
                masses[g] += p_w[w]
                weighted[g] = weighted[g] + joint[w]
                break
        else:
            grouping[int(w)] = len(reps)
            reps.append(col)
            masses.append(float(p_w[w]))
            weighted.append(joint[w].copy())
    p_tilde = Pmf(np.array(masses), atol=1e-9)
    channel = Channel(np.column_stack([v / v.sum() for v in weighted]), atol=1e-9)
    return PrivateInformationResult(
        c_x_w=entropy(p_tilde),
        w_tilde_size=len(reps),
        grouping=grouping,
        p_w_tilde=p_tilde,
        channel_x_given_w_tilde=channel,
    )


def _reduced_joint_scenario(reduction: PrivateInformationResult,
                            n: int) -> DiscreteScenario:
    """Scenario over (reduced latent, n conditionally iid samples).

    The support is ordered reduced-latent-major; the latent channel of the
    returned scenario extracts the reduced-latent coordinate.
    """
    chan = reduction.channel_x_given_w_tilde.matrix
    x_size = chan.shape[0]
    g_size = reduction.w_tilde_size
    support = []
    probs = []
    for g in range(g_size):
        for xs in itertools.product(range(x_size), repeat=n):
            mass = reduction.p_w_tilde.probs[g]
            for x in xs:
                mass *= chan[x, g]
            if mass > 0.0:
                support.append((g,) + xs)
                probs.append(mass)
    outputs = [outcome[0] for outcome in support]
    return DiscreteScenario(
        sample_alphabets=(g_size,) + (x_size,) * n,
        support=tuple(support),
        p_dataset=Pmf(np.array(probs), atol=1e-9),
        latent_channel=Channel.deterministic(outputs, g_size),
        latent_alphabet=g_size,
    )


def c_alpha_zero(p_wx: np.ndarray, mode: str,
                 cap: int = geometry.DEFAULT_SUBSET_CAP) -> float:
    """Zero-leakage disclosure limit about the reduced latent.

    ``mode="output_perturbation"``: the mapping sees only the reduced
    latent, and its output must be independent of a fresh observation.
    ``mode="full_data"``: the mapping sees the reduced latent and the
    observation jointly, with the same independence constraint.
    """
    reduction = private_information(p_wx)
    if mode == "output_perturbation":
        size = reduction.w_tilde_size
        scenario = DiscreteScenario(
            sample_alphabets=(size,),
            support=tuple((g,) for g in range(size)),
            p_dataset=reduction.p_w_tilde,
            latent_channel=Channel.identity(size),
            latent_alphabet=size,
        )
        report = solve_capacity(scenario,
                                protected=[reduction.channel_x_given_w_tilde],
                                cap=cap)
        return report.capacity
    if mode == "full_data":
        return _j_report(reduction, 1, cap).capacity
    raise ValueError(f"unknown mode {mode!r}")


def _j_report(reduction: PrivateInformationResult, n: int, cap: int) -> DisclosureReport:
    scenario = _reduced_joint_scenario(reduction, n)
    protected = [indicator_channel(scenario, i) for i in range(1, n + 1)]
    return solve_capacity(scenario, protected=protected, cap=cap)


def j_value(p_w: Pmf, obs: Channel, n: int,
            cap: int = geometry.DEFAULT_SUBSET_CAP) -> float:
    """Best disclosure about the reduced latent given the latent and n samples.

    The mapping observes the reduced latent together with all n samples and
    must stay independent of each sample.  At ``n = 1`` this equals the
    full-data zero-leakage limit; it is non-increasing in ``n`` and bounds
    the n-sample disclosure capacity from above.
    """
    joint = p_w.probs[:, None] * obs.matrix.T
    return _j_report(private_information(joint), n, cap).capacity


@dataclass(frozen=True)
class CapacityScan:
    """Per-dataset-size capacities next to their asymptotic anchors."""

    rows: tuple[tuple[int, float, float], ...]  # (n, I(latent; dataset), capacity)
    upper_bounds: tuple[float, ...]
    c_x_w: float
    c1_zero: float
    truncated_at: int | None


def capacity_scan(p_w: Pmf, obs: Channel, n_max: int,
                  cap: int = geometry.DEFAULT_SUBSET_CAP) -> CapacityScan:
    """Disclosure capacity for n = 1..n_max conditionally iid observations.

    Stops early (recording ``truncated_at``) if the vertex enumeration for
    some n exceeds the cap.
    """
    joint = p_w.probs[:, None] * obs.matrix.T
    reduction = private_information(joint)
    c1 = c_alpha_zero(joint, "output_perturbation", cap=cap)
    rows = []
    bounds = []
    truncated_at = None
    for n in range(1, n_max + 1):
        scenario = build_observation_scenario(p_w, obs, n)
        info = scenario.latent_dataset_information()
        try:
            report = solve_capacity(scenario, cap=cap)
        except TruncatedEnumerationError:
            truncated_at = n
            break
        rows.append((n, info, report.capacity))
        bounds.append(report.upper_bound)
    return CapacityScan(
        rows=tuple(rows),
        upper_bounds=tuple(bounds),
        c_x_w=reduction.c_x_w,
        c1_zero=c1,
        truncated_at=truncated_at,
    )
