"""Two-phase simplex for small dense equality-form LPs.

Solves ``min c.x  s.t.  A x = b, x >= 0`` with Bland's anti-cycling rule.
Phase one works on an artificial basis and handles redundant equality rows
by dropping them; phase two continues from the feasible basis found.  The
systems here are small (tens of rows), so basis systems are re-solved from
scratch each iteration instead of maintaining an updated inverse.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InfeasibleLPError

_PIVOT_TOL = 1e-9
_COST_TOL = 1e-9
ALT_OPTIMUM_TOL = 1e-9

__all__ = ["LPSolution", "solve_equality_lp"]


@dataclass(frozen=True)
class LPSolution:
    x: np.ndarray
    objective: float
    basis: tuple[int, ...]
    alternative_optimum: bool
    iterations: int


def _simplex(a: np.ndarray, b: np.ndarray, c: np.ndarray, basis: list[int],
             allowed: np.ndarray, max_iter: int) -> tuple[list[int], np.ndarray, int]:
    """Run simplex iterations from a feasible basis; returns (basis, x_B, iters)."""
    m, n = a.shape
    for it in range(max_iter):
        b_inv = np.linalg.inv(a[:, basis])
        x_b = b_inv @ b
        reduced = c - (c[basis] @ b_inv) @ a
        in_basis = np.zeros(n, dtype=bool)
        in_basis[basis] = True
        candidates = np.flatnonzero(allowed & ~in_basis & (reduced < -_COST_TOL))
        if candidates.size == 0:
            return basis, x_b, it
        j = int(candidates[0])  # Bland: smallest eligible index
        d = b_inv @ a[:, j]
        pos = d > _PIVOT_TOL
        if not np.any(pos):
            raise InfeasibleLPError("LP direction unbounded; constraint system is broken")
        ratios = np.full(m, np.inf)
        # Basic values inside the feasibility fuzz are exactly zero for the
        # ratio test, otherwise degenerate vertices produce spurious
        # positive steps.
        x_eff = np.where(x_b > _PIVOT_TOL, x_b, 0.0)
        ratios[pos] = x_eff[pos] / d[pos]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + 1e-12)
        leave = int(min(ties, key=lambda r: basis[r]))  # Bland on ties
        basis[leave] = j
    raise InfeasibleLPError("simplex iteration limit reached")


def solve_equality_lp(c: np.ndarray, a: np.ndarray, b: np.ndarray,
                      max_iter: int | None = None) -> LPSolution:
    """Solve ``min c.x : A x = b, x >= 0``; raises if no feasible point exists.

    The equality rows are first compressed to a full-row-rank system via an
    orthonormal row basis: the matrices arriving here (vertex mixtures of a
    polytope) routinely carry many redundant rows, and a full-row-rank
    system keeps every simplex basis well conditioned and lets phase one
    drive all artificial variables out.  Consistency of dropped rows is the
    caller's residual check; for mixture systems it holds by construction.
    """
    a_orig = np.asarray(a, dtype=float)
    b_orig = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    n = a_orig.shape[1]
    u, sing, _ = np.linalg.svd(a_orig, full_matrices=False)
    if sing.size == 0 or sing[0] <= 0.0:
        raise InfeasibleLPError("constraint matrix is zero")
    q = u[:, sing > 1e-10 * sing[0]].T
    a = q @ a_orig
    b = q @ b_orig
    m = a.shape[0]
    if max_iter is None:
        max_iter = 200 * (m + n + 10)

    flip = b < 0.0
    a = np.where(flip[:, None], -a, a)
    b = np.where(flip, -b, b)

    # Phase 1: artificial variables form the starting identity basis.
    a_ext = np.hstack([a, np.eye(m)])
    c_phase1 = np.concatenate([np.zeros(n), np.ones(m)])
    basis = list(range(n, n + m))
    allowed = np.ones(n + m, dtype=bool)
    basis, x_b, it1 = _simplex(a_ext, b, c_phase1, basis, allowed, max_iter)
    if float(c_phase1[basis] @ np.clip(x_b, 0.0, None)) > 1e-8:
        raise InfeasibleLPError("phase-1 optimum positive: no feasible point")

    # Degenerate optima can leave artificials basic at zero; with full row
    # rank each has a real pivot, chosen by magnitude for stability.
    for r, var in enumerate(basis):
        if var < n:
            continue
        bmat = a_ext[:, basis]
        e_r = np.zeros(m)
        e_r[r] = 1.0
        row = np.linalg.solve(bmat.T, e_r) @ a
        in_basis = set(basis)
        row[[j for j in in_basis if j < n]] = 0.0
        j = int(np.argmax(np.abs(row)))
        if abs(row[j]) <= _PIVOT_TOL or j in in_basis:
            raise InfeasibleLPError("cannot eliminate artificial variable; "
                                    "row rank reduction failed")
        basis[r] = j

    basis, x_b, it2 = _simplex(a, b, c, basis, np.ones(n, dtype=bool), max_iter)

    x = np.zeros(n)
    x[basis] = np.clip(x_b, 0.0, None)
    bmat = a[:, basis]
    y = np.linalg.solve(bmat.T, c[basis])
    reduced = c - y @ a
    in_basis = np.zeros(n, dtype=bool)
    in_basis[basis] = True
    alt = bool(np.any(np.abs(reduced[~in_basis]) <= ALT_OPTIMUM_TOL))
    return LPSolution(
        x=x,
        objective=float(c @ x),
        basis=tuple(int(v) for v in basis),
        alternative_optimum=alt,
        iterations=it1 + it2,
    )
