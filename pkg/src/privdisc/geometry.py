"""Privacy constraint geometry.

Independence of the disclosed variable from a protected variable U with
channel P_{U|Z} is equivalent to every conditional dataset law differing
from the prior only along Null(P_{U|Z}).  Stacking one block per protected
variable gives a constraint matrix whose null space characterizes all
admissible perturbations; the admissible conditional laws form the polytope

    S = { t >= 0 : A t = A p },

where the rows of A are the leading right singular vectors of the stacked
matrix.  Optimal mappings mix only extreme points of S, which are the basic
feasible solutions enumerated here.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, DistributionError, PrivDiscError
from .probability import Channel, DiscreteScenario, Pmf

DEFAULT_SV_TOL = 1e-10
DEFAULT_SUBSET_CAP = 2_000_000
FEASIBILITY_SLACK = 1e-9
DEDUP_TOL = 1e-8
_CHUNK = 4096

__all__ = [
    "DEFAULT_SUBSET_CAP",
    "ConstraintMatrix",
    "ConstraintSystem",
    "ExtremePointSet",
    "indicator_channel",
    "build_constraint_matrix",
    "null_space_basis",
    "enumerate_extreme_points",
]


def indicator_channel(scenario: DiscreteScenario, i: int) -> Channel:
    """Deterministic channel mapping each dataset outcome to the symbol of sample ``i``."""
    return Channel.deterministic(
        [outcome[i] for outcome in scenario.support], scenario.sample_alphabets[i]
    )


@dataclass(frozen=True)
class ConstraintMatrix:
    """Stacked protected-variable channels over the dataset support.

    ``rows`` holds one block per protected variable; ``row_blocks`` records
    ``(protected id, block height)`` in stacking order.  ``is_binary`` marks
    the pure indicator case, where every entry is 0 or 1.
    """

    rows: np.ndarray
    row_blocks: tuple[tuple[int, int], ...]
    support: tuple[tuple[int, ...], ...]
    p_dataset: Pmf
    is_binary: bool

    @property
    def n_constraints(self) -> int:
        return self.rows.shape[0]

    @property
    def support_size(self) -> int:
        return self.rows.shape[1]

    def block(self, j: int) -> np.ndarray:
        start = sum(h for _, h in self.row_blocks[:j])
        return self.rows[start:start + self.row_blocks[j][1]]


def build_constraint_matrix(scenario: DiscreteScenario,
                            protected: list[Channel] | None = None) -> ConstraintMatrix:
    """Stack the protected-variable channels into one constraint matrix.

    With no explicit ``protected`` list, one indicator block per sample is
    used, so the constraints demand independence from every individual
    sample.  Explicit channels (possibly stochastic) must take the dataset
    support as their input alphabet.
    """
    if scenario.support_size == 0:
        raise DistributionError("scenario has empty support")
    if not protected:
        protected = [indicator_channel(scenario, i) for i in range(scenario.n_samples)]
    blocks = []
    row_blocks = []
    for j, chan in enumerate(protected):
        if chan.input_size != scenario.support_size:
            raise DimensionMismatchError(
                f"protected channel {j} has {chan.input_size} inputs, "
                f"support has {scenario.support_size}")
        blocks.append(chan.matrix)
        row_blocks.append((j, chan.output_size))
    rows = np.vstack(blocks)
    is_binary = bool(np.all((rows == 0.0) | (rows == 1.0)))
    return ConstraintMatrix(
        rows=rows,
        row_blocks=tuple(row_blocks),
        support=scenario.support,
        p_dataset=scenario.p_dataset,
        is_binary=is_binary,
    )


@dataclass(frozen=True)
class ConstraintSystem:
    """Orthonormal row basis of the constraint row space, plus its null space.

    ``A`` are the leading right singular vectors (so Null(A) = Null(P)),
    ``b = A p``, and ``null_basis`` holds the trailing right singular
    vectors spanning the admissible perturbation directions.
    """

    A: np.ndarray
    b: np.ndarray
    rank: int
    nullity: int
    null_basis: np.ndarray
    p_dataset: Pmf

    @property
    def support_size(self) -> int:
        return self.A.shape[1]


def null_space_basis(P: ConstraintMatrix, sv_tol: float = DEFAULT_SV_TOL) -> ConstraintSystem:
    """Split the right singular vectors of the constraint matrix by rank.

    Singular values below ``sv_tol`` times the largest are treated as zero.
    The resulting null basis is validated against the raw matrix.
    """
    _, sing, vt = np.linalg.svd(P.rows)
    if sing.size == 0 or sing[0] <= 0.0:
        raise DistributionError("constraint matrix is identically zero")
    rank = int(np.sum(sing > sv_tol * sing[0]))
    a = vt[:rank]
    null_basis = vt[rank:]
    if null_basis.size and float(np.abs(P.rows @ null_basis.T).max()) > 1e-9:
        raise PrivDiscError("null-space residual exceeds tolerance; rank detection failed")
    return ConstraintSystem(
        A=a,
        b=a @ P.p_dataset.probs,
        rank=rank,
        nullity=P.support_size - rank,
        null_basis=null_basis,
        p_dataset=P.p_dataset,
    )


@dataclass(frozen=True)
class ExtremePointSet:
    """Extreme points of the feasibility polytope with their basis index sets."""

    points: tuple[Pmf, ...]
    bases: tuple[tuple[int, ...], ...]
    truncated: bool

    def __len__(self) -> int:
        return len(self.points)

    def matrix(self) -> np.ndarray:
        """Column-per-vertex matrix, shape (support, n_points)."""
        return np.column_stack([p.probs for p in self.points])


def enumerate_extreme_points(sys: ConstraintSystem, p_dataset: Pmf,
                             cap: int = DEFAULT_SUBSET_CAP) -> ExtremePointSet:
    """Enumerate basic feasible solutions of ``{A t = b, t >= 0}``.

    Column subsets of size rank are visited in lexicographic order.  A
    subset is skipped when its square submatrix is numerically singular
    (smallest singular value below 1e-10 of the largest); a solution is
    accepted when nonnegative up to 1e-9 slack, then clipped, renormalized,
    and deduplicated at 1e-8 in the sup norm.  If the number of subsets
    exceeds ``cap``, a partial set is returned with ``truncated`` set.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    m = sys.support_size
    r = sys.rank
    if len(p_dataset) != m:
        raise DimensionMismatchError("p_dataset length does not match system")
    if r == 0:
        raise PrivDiscError("constraint system has rank zero")
    total = math.comb(m, r)
    truncated = total > cap
    if truncated:
        warnings.warn(
            f"extreme-point enumeration truncated at {cap} of {total} subsets; "
            "consider the windowed heuristics instead", RuntimeWarning)

    accepted: list[np.ndarray] = []
    bases: list[tuple[int, ...]] = []
    combos = itertools.islice(itertools.combinations(range(m), r), cap)
    while True:
        chunk = list(itertools.islice(combos, _CHUNK))
        if not chunk:
            break
        idx = np.array(chunk, dtype=int)
        sub = sys.A[:, idx.ravel()].reshape(r, len(chunk), r).transpose(1, 0, 2)
        sing = np.linalg.svd(sub, compute_uv=False)
        ok = sing[:, -1] > DEFAULT_SV_TOL * sing[:, 0]
        if not np.any(ok):
            continue
        rhs = np.broadcast_to(sys.b, (int(ok.sum()), r))
        sols = np.linalg.solve(sub[ok], rhs[..., None])[..., 0]
        feas = sols.min(axis=1) >= -FEASIBILITY_SLACK
        for row, basis in zip(sols[feas], idx[ok][feas]):
            point = np.zeros(m)
            point[basis] = np.clip(row, 0.0, None)
            total_mass = point.sum()
            if abs(total_mass - 1.0) > FEASIBILITY_SLACK:
                continue
            point /= total_mass
            if accepted and np.min(
                    np.max(np.abs(np.asarray(accepted) - point), axis=1)) <= DEDUP_TOL:
                continue
            accepted.append(point)
            bases.append(tuple(int(i) for i in basis))
    return ExtremePointSet(
        points=tuple(Pmf(p, atol=1e-9) for p in accepted),
        bases=tuple(bases),
        truncated=truncated,
    )
