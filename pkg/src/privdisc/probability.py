"""Exact discrete probability primitives.

Probability vectors, column-stochastic channels, and the scenario object
that the rest of the package operates on: a dataset of jointly distributed
samples together with the conditional law of a latent variable given the
dataset.  All information quantities are reported in bits.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatchError, DistributionError

PMF_ATOL = 1e-12
JOINT_ATOL = 1e-9

__all__ = [
    "PMF_ATOL",
    "JOINT_ATOL",
    "Pmf",
    "Channel",
    "DiscreteScenario",
    "entropy",
    "binary_entropy",
    "entropy_of_vector",
    "mutual_information",
    "conditional_mutual_information",
    "tv_distance",
    "build_observation_scenario",
    "build_observation_scenario_exact",
]


def _as_readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Pmf:
    """Probability vector on a finite alphabet.

    Entries must be nonnegative and sum to one within ``atol`` (default
    1e-12).  Construction never renormalizes silently; use
    :meth:`normalized` to opt in.
    """

    probs: np.ndarray
    alphabet_size: int = field(init=False)

    def __init__(self, probs: Iterable[float], atol: float = PMF_ATOL):
        vec = np.asarray(list(probs) if not isinstance(probs, np.ndarray) else probs,
                         dtype=float)
        if vec.ndim != 1 or vec.size == 0:
            raise DistributionError("pmf must be a nonempty 1-d vector")
        if np.any(vec < -atol):
            raise DistributionError(f"pmf has negative entry (min {vec.min():.3e})")
        total = float(vec.sum())
        if abs(total - 1.0) > atol:
            raise DistributionError(f"pmf sums to {total!r}, not 1")
        vec = np.clip(vec, 0.0, None)
        object.__setattr__(self, "probs", _as_readonly(vec))
        object.__setattr__(self, "alphabet_size", vec.size)

    @classmethod
    def normalized(cls, weights: Iterable[float]) -> "Pmf":
        """Build a pmf by explicitly renormalizing nonnegative weights."""
        vec = np.asarray(list(weights), dtype=float)
        if np.any(vec < 0.0) or vec.sum() <= 0.0:
            raise DistributionError("weights must be nonnegative with positive sum")
        return cls(vec / vec.sum())

    @classmethod
    def uniform(cls, size: int) -> "Pmf":
        return cls(np.full(size, 1.0 / size))

    def __len__(self) -> int:
        return self.alphabet_size


@dataclass(frozen=True)
class Channel:
    """Column-stochastic matrix: column ``j`` is the output pmf for input ``j``."""

    matrix: np.ndarray
    output_size: int = field(init=False)
    input_size: int = field(init=False)

    def __init__(self, matrix: Iterable[Iterable[float]], atol: float = PMF_ATOL):
        mat = np.asarray(matrix, dtype=float)
        if mat.ndim != 2 or mat.size == 0:
            raise DistributionError("channel must be a nonempty 2-d matrix")
        if np.any(mat < -atol):
            raise DistributionError("channel has a negative entry")
        sums = mat.sum(axis=0)
        if np.any(np.abs(sums - 1.0) > atol):
            j = int(np.argmax(np.abs(sums - 1.0)))
            raise DistributionError(f"channel column {j} sums to {sums[j]!r}")
        mat = np.clip(mat, 0.0, None)
        object.__setattr__(self, "matrix", _as_readonly(mat))
        object.__setattr__(self, "output_size", mat.shape[0])
        object.__setattr__(self, "input_size", mat.shape[1])

    @classmethod
    def identity(cls, size: int) -> "Channel":
        return cls(np.eye(size))

    @classmethod
    def deterministic(cls, outputs: Sequence[int], output_size: int) -> "Channel":
        """Channel realizing a function: input ``j`` maps to ``outputs[j]``."""
        mat = np.zeros((output_size, len(outputs)))
        for j, out in enumerate(outputs):
            mat[out, j] = 1.0
        return cls(mat)

    def apply(self, p: Pmf) -> Pmf:
        """Push an input distribution through the channel."""
        if len(p) != self.input_size:
            raise DimensionMismatchError("channel input size mismatch")
        return Pmf(self.matrix @ p.probs, atol=1e-9)


def entropy(p: Pmf, base2: bool = True) -> float:
    """Shannon entropy of a pmf, in bits (or nats when ``base2`` is False)."""
    return entropy_of_vector(p.probs, base2=base2)


def entropy_of_vector(vec: np.ndarray, base2: bool = True) -> float:
    """Entropy of a raw nonnegative vector; nonpositive entries contribute zero."""
    v = np.asarray(vec, dtype=float)
    pos = v[v > 0.0]
    h = float(-np.sum(pos * np.log2(pos)))
    return h if base2 else h * math.log(2.0)


def binary_entropy(p: float) -> float:
    """Entropy of a Bernoulli(p) variable in bits."""
    if p < 0.0 or p > 1.0:
        raise DistributionError(f"binary entropy argument {p} outside [0, 1]")
    if p == 0.0 or p == 1.0:
        return 0.0
    return float(-p * np.log2(p) - (1.0 - p) * np.log2(1.0 - p))


def _validate_joint(joint: np.ndarray, ndim: int) -> np.ndarray:
    arr = np.asarray(joint, dtype=float)
    if arr.ndim != ndim:
        raise DistributionError(f"joint must be {ndim}-dimensional")
    if np.any(arr < -JOINT_ATOL):
        raise DistributionError("joint has a negative entry")
    if abs(arr.sum() - 1.0) > JOINT_ATOL:
        raise DistributionError(f"joint sums to {arr.sum()!r}, not 1")
    return np.clip(arr, 0.0, None)


def mutual_information(joint: np.ndarray) -> float:
    """I(A;B) in bits from a joint array over A x B."""
    arr = _validate_joint(joint, 2)
    val = (entropy_of_vector(arr.sum(axis=1)) + entropy_of_vector(arr.sum(axis=0))
           - entropy_of_vector(arr.ravel()))
    return max(0.0, val) if val > -1e-9 else val


def conditional_mutual_information(joint: np.ndarray) -> float:
    """I(A;B|C) in bits from a joint array over A x B x C.

    Computed as the p(c)-weighted sum of per-slice mutual informations,
    skipping zero-probability slices.
    """
    arr = _validate_joint(joint, 3)
    p_c = arr.sum(axis=(0, 1))
    total = 0.0
    for c in range(arr.shape[2]):
        if p_c[c] <= 0.0:
            continue
        sl = arr[:, :, c] / p_c[c]
        total += p_c[c] * (entropy_of_vector(sl.sum(axis=1))
                           + entropy_of_vector(sl.sum(axis=0))
                           - entropy_of_vector(sl.ravel()))
    return max(0.0, total) if total > -1e-9 else total


def tv_distance(p: np.ndarray, q: np.ndarray) -> float:
    """Total variation distance between two distributions on a common alphabet."""
    return 0.5 * float(np.abs(np.asarray(p, float) - np.asarray(q, float)).sum())


@dataclass(frozen=True)
class DiscreteScenario:
    """Joint law of a latent variable and a dataset of discrete samples.

    The dataset law is stored over its support only: ``support[j]`` is the
    j-th dataset outcome (a tuple, one symbol per sample), ``p_dataset`` its
    probability, and column ``j`` of ``latent_channel`` the conditional law
    of the latent variable given that outcome.  ``exact_p_dataset``
    optionally carries the same probabilities as exact rationals for the
    exact-arithmetic verification path.
    """

    sample_alphabets: tuple[int, ...]
    support: tuple[tuple[int, ...], ...]
    p_dataset: Pmf
    latent_channel: Channel
    latent_alphabet: int
    exact_p_dataset: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        if len(self.support) != len(self.p_dataset):
            raise DimensionMismatchError("support and p_dataset length mismatch")
        if self.latent_channel.input_size != len(self.support):
            raise DimensionMismatchError("latent channel must have one column per outcome")
        if self.latent_channel.output_size != self.latent_alphabet:
            raise DimensionMismatchError("latent channel row count != latent alphabet")
        if np.any(self.p_dataset.probs <= 0.0):
            raise DistributionError("p_dataset must be strictly positive on the support")
        if len(set(self.support)) != len(self.support):
            raise DistributionError("support outcomes must be distinct")
        for outcome in self.support:
            if len(outcome) != len(self.sample_alphabets):
                raise DimensionMismatchError("outcome arity != number of samples")
            for i, sym in enumerate(outcome):
                if not 0 <= sym < self.sample_alphabets[i]:
                    raise DistributionError(f"symbol {sym} outside alphabet of sample {i}")
        if self.exact_p_dataset is not None:
            if len(self.exact_p_dataset) != len(self.support):
                raise DimensionMismatchError("exact_p_dataset length mismatch")
            if sum(self.exact_p_dataset) != 1:
                raise DistributionError("exact_p_dataset must sum to exactly 1")

    @property
    def n_samples(self) -> int:
        return len(self.sample_alphabets)

    @property
    def support_size(self) -> int:
        return len(self.support)

    @classmethod
    def from_joint(cls, joint: np.ndarray,
                   exact_joint: Sequence[Sequence[Fraction]] | None = None
                   ) -> "DiscreteScenario":
        """Build a scenario from a dense joint array.

        Axis 0 is the latent variable; axes 1..n are the samples.  Dataset
        outcomes of probability zero are dropped from the support.
        """
        arr = np.asarray(joint, dtype=float)
        if arr.ndim < 2:
            raise DistributionError("joint needs a latent axis and at least one sample axis")
        if np.any(arr < 0.0) or abs(arr.sum() - 1.0) > JOINT_ATOL:
            raise DistributionError("joint must be nonnegative and sum to 1")
        latent_size = arr.shape[0]
        alphabets = arr.shape[1:]
        flat = arr.reshape(latent_size, -1)
        p_x = flat.sum(axis=0)
        keep = np.flatnonzero(p_x > 0.0)
        outcomes = list(itertools.product(*(range(a) for a in alphabets)))
        support = tuple(outcomes[j] for j in keep)
        posterior = flat[:, keep] / p_x[keep]
        exact_p = None
        if exact_joint is not None:
            ex = [sum(col) for col in zip(*exact_joint)]
            exact_p = tuple(ex[j] for j in keep)
        return cls(
            sample_alphabets=tuple(int(a) for a in alphabets),
            support=support,
            p_dataset=Pmf(p_x[keep], atol=1e-9),
            latent_channel=Channel(posterior, atol=1e-9),
            latent_alphabet=latent_size,
            exact_p_dataset=exact_p,
        )

    def joint_latent_dataset(self) -> np.ndarray:
        """Joint array p(w, x^n) of shape (latent, support)."""
        return self.latent_channel.matrix * self.p_dataset.probs[None, :]

    def latent_pmf(self) -> Pmf:
        return Pmf(self.joint_latent_dataset().sum(axis=1), atol=1e-9)

    def sample_positions(self, i: int) -> np.ndarray:
        """Symbol of sample ``i`` for each support outcome."""
        return np.array([outcome[i] for outcome in self.support], dtype=int)

    def sample_marginal(self, i: int) -> Pmf:
        marg = np.zeros(self.sample_alphabets[i])
        np.add.at(marg, self.sample_positions(i), self.p_dataset.probs)
        return Pmf(marg, atol=1e-9)

    def latent_dataset_information(self) -> float:
        """I(latent; dataset) in bits."""
        return mutual_information(self.joint_latent_dataset().T)

    def dataset_entropy(self) -> float:
        return entropy(self.p_dataset)


def build_observation_scenario_exact(p_w: Sequence[Fraction],
                                     obs_channel: Sequence[Sequence[Fraction]],
                                     n: int) -> DiscreteScenario:
    """Conditionally iid observation scenario with an exact-rational dataset law.

    ``obs_channel[x][w]`` is the rational probability of observing ``x``
    given latent symbol ``w``.  Floats are derived from the rationals, so
    the float and exact laws describe the same measure.
    """
    w_size = len(p_w)
    x_size = len(obs_channel)
    if n < 1:
        raise DimensionMismatchError("need at least one sample")
    if any(len(row) != w_size for row in obs_channel):
        raise DimensionMismatchError("observation channel row width must match latent size")
    support = []
    exact_p: list[Fraction] = []
    posterior_cols: list[list[float]] = []
    for outcome in itertools.product(range(x_size), repeat=n):
        joint = []
        for w in range(w_size):
            mass = p_w[w]
            for sym in outcome:
                mass *= obs_channel[sym][w]
            joint.append(mass)
        total = sum(joint)
        if total == 0:
            continue
        support.append(outcome)
        exact_p.append(total)
        posterior_cols.append([float(m / total) for m in joint])
    return DiscreteScenario(
        sample_alphabets=(x_size,) * n,
        support=tuple(support),
        p_dataset=Pmf([float(v) for v in exact_p], atol=1e-9),
        latent_channel=Channel(np.array(posterior_cols).T, atol=1e-9),
        latent_alphabet=w_size,
        exact_p_dataset=tuple(exact_p),
    )


def build_observation_scenario(p_w: Pmf, obs_channel: Channel, n: int) -> DiscreteScenario:
    """Scenario where ``n`` samples are conditionally iid observations of the latent.

    ``p(x^n) = sum_w p(w) prod_i p(x_i | w)`` and the latent channel column for
    each outcome is the exact posterior.  Outcomes of probability zero are
    excluded; no epsilon pruning is applied.
    """
    if n < 1:
        raise DimensionMismatchError("need at least one sample")
    if obs_channel.input_size != len(p_w):
        raise DimensionMismatchError("observation channel input size must match latent alphabet")
    x_size = obs_channel.output_size
    w_size = len(p_w)
    outcomes = list(itertools.product(range(x_size), repeat=n))
    joint = np.empty((w_size, len(outcomes)))
    for j, outcome in enumerate(outcomes):
        lik = np.ones(w_size)
        for sym in outcome:
            lik *= obs_channel.matrix[sym, :]
        joint[:, j] = p_w.probs * lik
    p_x = joint.sum(axis=0)
    keep = np.flatnonzero(p_x > 0.0)
    posterior = joint[:, keep] / p_x[keep]
    return DiscreteScenario(
        sample_alphabets=(x_size,) * n,
        support=tuple(outcomes[j] for j in keep),
        p_dataset=Pmf(p_x[keep], atol=1e-9),
        latent_channel=Channel(posterior, atol=1e-9),
        latent_alphabet=w_size,
    )
