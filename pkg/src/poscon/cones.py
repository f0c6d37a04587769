"""Polyhedral cones in the nonnegative orthant, held as generator matrices.

Membership, inclusion and invariance all reduce to LP feasibility on the
generators. ``simplicial_enumeration_member`` is the brute-force check over
all n-column subsets and serves as an independent oracle for ``member``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from . import linprog
from .errors import CombinatorialBudget, NegativeEntry, RankDeficient
from .posmat import TOL_ZERO, as_matrix, as_vector

ENUMERATION_CAP = 50_000
COND_MAX = 1e12
TOL_DEDUP = 1e-9


@dataclass(frozen=True, eq=False)
class GeneratorCone:
    """Cone spanned by the columns of ``generators`` (n x m).

    Zero columns are dropped on construction, with their labels.
    """

    generators: np.ndarray
    labels: tuple[str, ...]

    def __init__(self, generators, labels=None, tol_zero: float = TOL_ZERO):
        G = np.array(generators, dtype=float)
        if G.ndim == 1:
            G = G[:, None]
        if G.ndim != 2:
            raise ValueError(f"generators must be an n x m matrix, got shape {G.shape}")
        if labels is None:
            labels = [f"g{j}" for j in range(G.shape[1])]
        labels = tuple(labels)
        if len(labels) != G.shape[1]:
            raise ValueError("one label per generator column is required")
        neg = np.argwhere(G < -tol_zero)
        if len(neg):
            r, c = map(int, neg[0])
            raise NegativeEntry(r, c, float(G[r, c]), where="generators")
        G = np.where(G < 0, 0.0, G)
        keep = np.abs(G).max(axis=0, initial=0.0) > tol_zero if G.shape[1] else np.zeros(0, bool)
        G = G[:, keep]
        G.setflags(write=False)
        object.__setattr__(self, "generators", G)
        object.__setattr__(self, "labels", tuple(l for l, k in zip(labels, keep) if k))

    @property
    def ambient_dim(self) -> int:
        return self.generators.shape[0]

    @property
    def size(self) -> int:
        return self.generators.shape[1]

    def __len__(self) -> int:
        return self.size

    def extend(self, other: "GeneratorCone") -> "GeneratorCone":
        return GeneratorCone(np.hstack([self.generators, other.generators]),
                             self.labels + other.labels)

    def deduplicated(self, tol: float = TOL_DEDUP) -> "GeneratorCone":
        """Merge columns that point in the same direction (1-norm
        normalised, within ``tol``); the first occurrence is kept."""
        G = self.generators
        dirs = G / G.sum(axis=0)
        kept: list[int] = []
        for j in range(G.shape[1]):
            if all(np.abs(dirs[:, j] - dirs[:, i]).max() > tol for i in kept):
                kept.append(j)
        return GeneratorCone(G[:, kept], [self.labels[j] for j in kept])


def standard_orthant(n: int) -> GeneratorCone:
    return GeneratorCone(np.eye(n), [f"e{i + 1}" for i in range(n)])


def member(C: GeneratorCone, p, tol: float = linprog.TOL_LP
           ) -> tuple[bool, np.ndarray | None]:
    """Is ``p`` a nonnegative combination of the generators?

    Returns the verdict and, when it holds, the coefficient vector ``w``
    with ``C.generators @ w ~= p``.
    """
    p = np.asarray(as_vector(p, where="p"))
    if p.shape[0] != C.ambient_dim:
        raise ValueError(f"point has dimension {p.shape[0]}, cone lives in R^{C.ambient_dim}")
    pnorm = np.abs(p).max()
    if pnorm == 0.0:
        return True, np.zeros(C.size)
    if C.size == 0:
        return False, None
    G = C.generators
    colnorm = np.abs(G).max(axis=0)
    ok, w = linprog.feasible(G / colnorm, p / pnorm, tol=tol)
    if not ok:
        return False, None
    return True, w * pnorm / colnorm


def includes(C_outer: GeneratorCone, C_inner: GeneratorCone,
             tol: float = linprog.TOL_LP) -> bool:
    return all(member(C_outer, g, tol)[0] for g in C_inner.generators.T)


def invariance_witness(C: GeneratorCone, A, tol: float = linprog.TOL_LP
                       ) -> np.ndarray | None:
    """Nonnegative X with ``A G = G X``, or None if some ``A g`` leaves the
    cone."""
    a = np.asarray(as_matrix(A))
    G = C.generators
    cols = []
    for g in G.T:
        ok, w = member(C, a @ g, tol)
        if not ok:
            return None
        cols.append(w)
    return np.column_stack(cols) if cols else np.zeros((0, 0))


def a_invariant(C: GeneratorCone, A, tol: float = linprog.TOL_LP) -> bool:
    return invariance_witness(C, A, tol) is not None


def simplicial_enumeration_member(C: GeneratorCone, p, tol: float = linprog.TOL_LP,
                                  cap: int = ENUMERATION_CAP,
                                  cond_max: float = COND_MAX) -> list[np.ndarray]:
    """All basic nonnegative solutions of ``G x = p``.

    Every n-subset of columns whose square submatrix is invertible is
    solved directly; solutions with all coefficients >= -tol (relative) are
    kept, embedded in R^m. An empty list means ``p`` is outside the cone.
    """
    p = np.asarray(as_vector(p, where="p"))
    G = C.generators
    n, m = G.shape
    if m == 0 or np.linalg.matrix_rank(G) < n:
        raise RankDeficient(f"generator matrix has row rank below {n}")
    total = comb(m, n)
    if total > cap:
        raise CombinatorialBudget(f"C({m},{n}) = {total} subsets exceeds cap {cap}")
    found: list[np.ndarray] = []
    for idx in combinations(range(m), n):
        sub = G[:, idx]
        if np.linalg.cond(sub) > cond_max:
            continue
        z = np.linalg.solve(sub, p)
        if np.all(z >= -tol * (1.0 + np.abs(z).max())):
            x = np.zeros(m)
            x[list(idx)] = np.where(z < 0, 0.0, z)
            if not any(np.abs(x - y).max() <= tol * (1.0 + np.abs(x).max()) for y in found):
                found.append(x)
    return found


def project_simplex(C: GeneratorCone) -> np.ndarray:
    """Generators scaled onto ``{x >= 0, sum(x) = 1}``; one row per
    generator."""
    G = C.generators
    return (G / G.sum(axis=0)).T
