"""Dense two-phase primal simplex for standard-form problems

    min c.x   s.t.  E x = f,  x >= 0.

Bland's rule makes the pivot sequence (and so the returned basis)
deterministic. Rows and columns are equilibrated before pivoting; the
reported solution is always in the caller's original units.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import IterationLimit

TOL_LP = 1e-9

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPProblem:
    objective: np.ndarray
    eq_matrix: np.ndarray
    eq_rhs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.objective, dtype=float))
        E = np.atleast_2d(np.asarray(self.eq_matrix, dtype=float))
        f = np.atleast_1d(np.asarray(self.eq_rhs, dtype=float))
        if E.shape != (f.shape[0], c.shape[0]):
            raise ValueError(
                f"inconsistent shapes: eq_matrix {E.shape}, rhs {f.shape}, objective {c.shape}"
            )
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "eq_matrix", E)
        object.__setattr__(self, "eq_rhs", f)


@dataclass
class LPSolution:
    status: str
    x: np.ndarray | None = None
    objective_value: float | None = None
    basis: tuple[int, ...] | None = None
    reduced_costs: np.ndarray | None = field(default=None, repr=False)
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


class _Tableau:
    def __init__(self, T: np.ndarray, basis: list[int], tol: float, budget: int):
        self.T = T
        self.basis = basis
        self.tol = tol
        self.budget = budget
        self.iterations = 0

    def pivot(self, r: int, c: int) -> None:
        T = self.T
        T[r] /= T[r, c]
        col = T[:, c].copy()
        col[r] = 0.0
        T -= np.outer(col, T[r])
        T[:, c] = 0.0
        T[r, c] = 1.0
        self.basis[r] = c

    def run(self, ncols: int) -> str:
        """Iterate on the objective stored in the last row. Columns at or
        beyond ``ncols`` never enter."""
        T, tol = self.T, self.tol
        m = T.shape[0] - 1
        while True:
            red = T[m, :ncols]
            entering = np.flatnonzero(red < -tol)
            if entering.size == 0:
                return OPTIMAL
            c = int(entering[0])
            colv = T[:m, c]
            rows = np.flatnonzero(colv > tol)
            if rows.size == 0:
                return UNBOUNDED
            ratios = T[rows, -1] / colv[rows]
            best = ratios.min()
            ties = rows[ratios <= best + tol * max(1.0, abs(best))]
            r = int(min(ties, key=lambda i: self.basis[i]))
            self.iterations += 1
            if self.iterations > self.budget:
                raise IterationLimit(f"simplex exceeded {self.budget} pivots")
            self.pivot(r, c)


def _equilibrate(E: np.ndarray, f: np.ndarray):
    col_scale = np.abs(E).max(axis=0)
    col_scale[col_scale == 0.0] = 1.0
    Es = E / col_scale
    row_scale = np.maximum(np.abs(Es).max(axis=1), np.abs(f))
    row_scale[row_scale == 0.0] = 1.0
    return Es / row_scale[:, None], f / row_scale, col_scale


def solve(p: LPProblem, tol: float = TOL_LP, max_pivots: int | None = None) -> LPSolution:
    """Two-phase primal simplex with Bland's anti-cycling rule.

    Raises IterationLimit when the pivot budget (default ``50 * (N + n)``)
    is exhausted; infeasible and unbounded problems are reported through
    ``status`` instead.
    """
    E0, f0, c0 = p.eq_matrix, p.eq_rhs, p.objective
    m, N = E0.shape
    if max_pivots is None:
        max_pivots = 50 * (N + m)
    E, f, col_scale = _equilibrate(E0, f0)
    c = c0 * (1.0 / col_scale)
    sign = np.where(f < 0, -1.0, 1.0)
    E = E * sign[:, None]
    f = f * sign

    # phase one: artificials N..N+m-1, objective row sums them out
    T = np.zeros((m + 1, N + m + 1))
    T[:m, :N] = E
    T[:m, N:N + m] = np.eye(m)
    T[:m, -1] = f
    T[m, :N] = -E.sum(axis=0)
    T[m, -1] = -f.sum()
    tab = _Tableau(T, list(range(N, N + m)), tol, max_pivots)
    tab.run(N)

    x1 = np.zeros(N)
    for i, j in enumerate(tab.basis):
        if j < N:
            x1[j] = T[i, -1]
    resid = np.abs(E @ x1 - f).max() if m else 0.0
    if resid > tol * (1.0 + (np.abs(f).max() if m else 0.0)):
        return LPSolution(INFEASIBLE, iterations=tab.iterations)

    # drive remaining artificials out of the basis; rows where that is
    # impossible are linear combinations of others and get dropped
    keep = []
    for i in range(m):
        if tab.basis[i] >= N:
            j = int(np.argmax(np.abs(T[i, :N]))) if N else 0
            if N and abs(T[i, j]) > tol:
                tab.pivot(i, j)
                keep.append(i)
        else:
            keep.append(i)
    rows = keep + [m]
    T2 = np.hstack([T[rows][:, :N], T[rows][:, -1:]])
    basis = [tab.basis[i] for i in keep]
    mk = len(keep)
    T2[mk, :] = 0.0
    T2[mk, :N] = c
    for i, j in enumerate(basis):
        T2[mk] -= c[j] * T2[i]
    tab2 = _Tableau(T2, basis, tol, max_pivots)
    tab2.iterations = tab.iterations
    status = tab2.run(N)
    if status == UNBOUNDED:
        return LPSolution(UNBOUNDED, iterations=tab2.iterations)

    basis = tuple(sorted(tab2.basis))
    xs = np.zeros(N)
    for i, j in enumerate(tab2.basis):
        xs[j] = T2[i, -1]
    # re-solve the basic columns in original units to shed pivoting error
    x = xs / col_scale
    if basis:
        B = E0[:, list(basis)]
        xb, *_ = np.linalg.lstsq(B, f0, rcond=None)
        if np.all(xb >= -tol * (1.0 + np.abs(xb).max())):
            cand = np.zeros(N)
            cand[list(basis)] = xb
            scale = 1.0 + np.abs(f0).max()
            if np.abs(E0 @ cand - f0).max() <= np.abs(E0 @ x - f0).max() + tol * scale:
                x = cand
    x = np.where(x < 0, 0.0, x)
    red = T2[mk, :N] * col_scale
    return LPSolution(OPTIMAL, x, float(c0 @ x), basis, red, tab2.iterations)


def feasible(eq_matrix, eq_rhs, tol: float = TOL_LP) -> tuple[bool, np.ndarray | None]:
    """Phase-one feasibility of ``{x >= 0 : E x = f}`` with a witness."""
    E = np.atleast_2d(np.asarray(eq_matrix, dtype=float))
    sol = solve(LPProblem(np.zeros(E.shape[1]), E, eq_rhs), tol=tol)
    if sol.status == OPTIMAL:
        return True, sol.x
    return False, None


def residual(eq_matrix, x, eq_rhs) -> float:
    return float(np.abs(np.asarray(eq_matrix) @ x - np.asarray(eq_rhs)).max(initial=0.0))


def _rational(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(float(v))


def feasible_exact(eq_matrix, eq_rhs, max_pivots: int | None = None) -> bool:
    """Exact phase-one feasibility of ``{x >= 0 : E x = f}``.

    ``E`` and ``f`` may hold floats or Fractions. Every float is a dyadic rational, so the data are converted without
    loss and the simplex runs in rational arithmetic with Bland's rule.
    The answer carries no tolerance: a point whose distance to the cone is
    far below double precision is still reported outside.
    """
    E = [[_rational(v) for v in row] for row in eq_matrix]
    f = [_rational(v) for v in eq_rhs]
    m, N = len(E), len(E[0]) if E else 0
    if max_pivots is None:
        max_pivots = 50 * (N + m)
    # rows with negative rhs are negated so the artificial basis is feasible
    for i in range(m):
        if f[i] < 0:
            E[i] = [-v for v in E[i]]
            f[i] = -f[i]
    T = [E[i] + [Fraction(int(i == j)) for j in range(m)] + [f[i]] for i in range(m)]
    T.append([-sum((E[i][j] for i in range(m)), Fraction(0)) for j in range(N)]
             + [Fraction(0)] * m + [-sum(f, Fraction(0))])
    basis = list(range(N, N + m))
    for _ in range(max_pivots + 1):
        obj = T[m]
        c = next((j for j in range(N) if obj[j] < 0), None)
        if c is None:
            return obj[-1] == 0
        best = None
        for i in range(m):
            if T[i][c] > 0:
                ratio = T[i][-1] / T[i][c]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:  # cannot happen in phase one; the objective is bounded below
            return obj[-1] == 0
        r = best[1]
        piv = T[r][c]
        T[r] = [v / piv for v in T[r]]
        for i in range(m + 1):
            if i != r and T[i][c] != 0:
                factor = T[i][c]
                T[i] = [a - factor * b for a, b in zip(T[i], T[r])]
        basis[r] = c
    raise IterationLimit(f"exact simplex exceeded {max_pivots} pivots")
