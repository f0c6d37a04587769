"""Nonnegative matrices: validation, digraph structure, irreducibility,
cyclicity degree and the block-cyclic normal form."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from math import gcd

import numpy as np

from . import _eig
from .errors import CyclicityMismatch, NegativeEntry, Reducible

TOL_ZERO = 1e-12
TOL_EIG = 1e-8


def _frozen(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("entries must be finite")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class NonnegMatrix:
    """Square matrix with nonnegative entries; immutable once built."""

    entries: np.ndarray

    def __init__(self, entries):
        arr = _frozen(entries, 2)
        if arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise ValueError(f"need a nonempty square matrix, got shape {arr.shape}")
        neg = np.argwhere(arr < 0)
        if len(neg):
            r, c = map(int, neg[0])
            raise NegativeEntry(r, c, float(arr[r, c]), where="A")
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __eq__(self, other):
        return isinstance(other, NonnegMatrix) and np.array_equal(self.entries, other.entries)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class NonnegVector:
    entries: np.ndarray

    def __init__(self, entries, where: str = "b"):
        arr = _frozen(entries, 1)
        if arr.shape[0] < 1:
            raise ValueError("need a nonempty vector")
        neg = np.flatnonzero(arr < 0)
        if len(neg):
            i = int(neg[0])
            raise NegativeEntry(i, 0, float(arr[i]), where=where)
        object.__setattr__(self, "entries", arr)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __eq__(self, other):
        return isinstance(other, NonnegVector) and np.array_equal(self.entries, other.entries)

    __hash__ = None


@dataclass(frozen=True)
class StructureInfo:
    irreducible: bool
    cyclicity_h: int
    permutation: tuple[int, ...] | None = None
    block_sizes: tuple[int, ...] | None = None


def as_matrix(A) -> NonnegMatrix:
    return A if isinstance(A, NonnegMatrix) else NonnegMatrix(A)


def as_vector(b, where: str = "b") -> NonnegVector:
    return b if isinstance(b, NonnegVector) else NonnegVector(b, where=where)


def validate_positive_system(A, b) -> None:
    """Raise NegativeEntry unless ``A`` and ``b`` are entrywise nonnegative."""
    A = as_matrix(A)
    b = as_vector(b)
    if A.dim != b.dim:
        raise ValueError(f"dimension mismatch: A is {A.dim}x{A.dim}, b has {b.dim} entries")


def _successors(A: np.ndarray, tol: float) -> list[list[int]]:
    # edge i -> j when A[j, i] > tol: state i feeds state j
    n = A.shape[0]
    return [[int(j) for j in np.flatnonzero(A[:, i] > tol)] for i in range(n)]


def _reach(adj: list[list[int]], start: int) -> set[int]:
    seen = {start}
    todo = [start]
    while todo:
        u = todo.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                todo.append(v)
    return seen


def strongly_connected_components(A, tol_zero: float = TOL_ZERO) -> list[list[int]]:
    """SCCs of the adjacency digraph (Kosaraju), each sorted, ordered by
    smallest member."""
    a = np.asarray(as_matrix(A))
    n = a.shape[0]
    succ = _successors(a, tol_zero)
    pred = [[] for _ in range(n)]
    for u in range(n):
        for v in succ[u]:
            pred[v].append(u)
    order: list[int] = []
    visited = [False] * n
    for root in range(n):
        if visited[root]:
            continue
        visited[root] = True
        stack = [(root, iter(succ[root]))]
        while stack:
            node, it = stack[-1]
            for v in it:
                if not visited[v]:
                    visited[v] = True
                    stack.append((v, iter(succ[v])))
                    break
            else:
                stack.pop()
                order.append(node)
    comp = [-1] * n
    comps: list[list[int]] = []
    for root in reversed(order):
        if comp[root] != -1:
            continue
        members = []
        comp[root] = len(comps)
        todo = [root]
        while todo:
            u = todo.pop()
            members.append(u)
            for v in pred[u]:
                if comp[v] == -1:
                    comp[v] = len(comps)
                    todo.append(v)
        comps.append(sorted(members))
    return sorted(comps)


def is_irreducible(A, tol_zero: float = TOL_ZERO) -> bool:
    a = np.asarray(as_matrix(A))
    n = a.shape[0]
    if n == 1:
        return True
    succ = _successors(a, tol_zero)
    if len(_reach(succ, 0)) != n:
        return False
    pred = [[] for _ in range(n)]
    for u in range(n):
        for v in succ[u]:
            pred[v].append(u)
    return len(_reach(pred, 0)) == n


def _levels(a: np.ndarray, tol_zero: float) -> list[int]:
    succ = _successors(a, tol_zero)
    level = [-1] * a.shape[0]
    level[0] = 0
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in succ[u]:
            if level[v] == -1:
                level[v] = level[u] + 1
                queue.append(v)
    return level


def _graph_period(a: np.ndarray, tol_zero: float) -> int:
    level = _levels(a, tol_zero)
    succ = _successors(a, tol_zero)
    h = 0
    for u, vs in enumerate(succ):
        for v in vs:
            h = gcd(h, abs(level[u] + 1 - level[v]))
    return h


def dominant_count(eigs: np.ndarray, tol_eig: float = TOL_EIG) -> int:
    mod = np.abs(eigs)
    rho = mod.max()
    return int(np.sum(mod >= rho - tol_eig * max(1.0, rho)))


def cyclicity_degree(A, tol_zero: float = TOL_ZERO, tol_eig: float = TOL_EIG,
                     eigenvalues=None) -> int:
    """Period of the adjacency digraph, cross-checked against the number of
    eigenvalues on the spectral circle."""
    M = as_matrix(A)
    a = np.asarray(M)
    if not is_irreducible(M, tol_zero):
        raise Reducible(strongly_connected_components(M, tol_zero))
    if a.shape[0] == 1:
        return 1
    h = _graph_period(a, tol_zero)
    eigs = _eig.eigvals(a) if eigenvalues is None else np.asarray(eigenvalues)
    count = dominant_count(eigs, tol_eig)
    if count != h:
        raise CyclicityMismatch(
            f"digraph period {h} but {count} eigenvalues of maximal modulus"
        )
    return h


def cyclic_normal_form(A, tol_zero: float = TOL_ZERO, tol_eig: float = TOL_EIG
                       ) -> tuple[StructureInfo, NonnegMatrix]:
    """Permute ``A`` into block-cyclic form.

    Nonzero blocks of the result sit on the block superdiagonal plus the
    bottom-left corner. The permutation ``perm`` gives ``Ahat =
    A[perm][:, perm]``, i.e. ``S[perm[k], k] = 1`` and ``Ahat = S.T @ A @ S``.
    """
    M = as_matrix(A)
    a = np.asarray(M)
    n = a.shape[0]
    h = cyclicity_degree(M, tol_zero, tol_eig)
    if h == 1:
        info = StructureInfo(True, 1, tuple(range(n)), (n,))
        return info, M
    level = _levels(a, tol_zero)
    block = [(-lv) % h for lv in level]
    perm = tuple(sorted(range(n), key=lambda i: (block[i], i)))
    sizes = tuple(block.count(k) for k in range(h))
    ahat = a[np.ix_(perm, perm)]
    return StructureInfo(True, h, perm, sizes), NonnegMatrix(ahat)


def structure(A, tol_zero: float = TOL_ZERO, tol_eig: float = TOL_EIG) -> StructureInfo:
    return cyclic_normal_form(A, tol_zero, tol_eig)[0]


def permutation_matrix(perm) -> np.ndarray:
    n = len(perm)
    S = np.zeros((n, n))
    S[list(perm), range(n)] = 1.0
    return S
