"""Worked-example systems and random generators shared by the tests."""

from pathlib import Path

import numpy as np

from poscon.controllability import full_rank
from poscon.posmat import is_irreducible

DATA = Path(__file__).resolve().parent.parent / "data"

A0 = np.array([[4.0, 4.0], [11.0, 2.0]])
B0 = np.array([2.0, 1.0])

A1 = np.array([[0.9727, 0.0, 0.0263],
               [0.0388, 0.1273, 0.2156],
               [0.0, 3.4497, 0.0]])
B1 = np.array([0.0, 1.0, 1.0])

A2 = np.array([[0.0, 1.0, 0.0],
               [1.0, 0.0, 0.5],
               [0.0, 0.4, 1.0]])
B2 = np.array([0.0, 1.0, 0.0])

A3 = np.array([[0.0, 1.6333, 1.1049, 0.0],
               [23.5667, 6.0944, 0.0, 0.0],
               [0.0, 0.0, 1.1225, 1.0672],
               [0.0, 1.6611, 0.0, 0.7830]])
B3 = np.array([0.0, 0.0, 1.0, 1.0])

P4 = np.array([[1.0, 3.0, 1.0, 1.0],
               [1.0, 3.0, 4.0, 3.0],
               [1.0, 2.0, 2.0, 1.0],
               [1.0, 1.0, 2.0, 1.0]])
# least-1-norm solutions printed with the worked example, one row per vertex
X4 = np.array([[0.1209, 0.3735, 0.0, 0.0078, 0.0, 0.0001],
               [2.3460, 0.6165, 0.0876, 0.0, 0.0003, 0.0],
               [0.2989, 0.6982, 0.0473, 0.0, 0.0003, 0.0],
               [0.2517, 0.7798, 0.0071, 0.0, 0.0003, 0.0]])

RECURSION3 = np.array([166.7569, 16.1434, 0.0, 0.0, 39.7036, 6.0262])


def weighted_cycle(n, rng):
    """Single n-cycle with positive weights: e_i -> e_{i+1}."""
    A = np.zeros((n, n))
    for i in range(n):
        A[(i + 1) % n, i] = rng.uniform(0.5, 2.0)
    return A


def random_irreducible(n, rng, density=0.5):
    """Sparse nonnegative matrix, resampled until irreducible."""
    while True:
        mask = rng.random((n, n)) < density
        A = np.where(mask, rng.uniform(0.1, 2.0, (n, n)), 0.0)
        if is_irreducible(A):
            return A


def random_cyclic(n, h, rng):
    """Irreducible matrix of cyclicity h: block-cyclic with dense blocks."""
    sizes = [1] * h
    for _ in range(n - h):
        sizes[rng.integers(h)] += 1
    starts = np.cumsum([0] + sizes)
    A = np.zeros((n, n))
    for k in range(h):
        src = slice(starts[k], starts[k + 1])
        dst = slice(starts[(k + 1) % h], starts[(k + 1) % h + 1])
        A[dst, src] = rng.uniform(0.2, 2.0, (sizes[(k + 1) % h], sizes[k]))
    perm = rng.permutation(n)
    return A[np.ix_(perm, perm)]


def random_full_rank_b(A, rng, tries=50):
    n = A.shape[0]
    for _ in range(tries):
        b = np.where(rng.random(n) < 0.6, rng.uniform(0.1, 1.0, n), 0.0)
        if b.any() and full_rank(A, b):
            return b
    return None

# one "PASS/FAIL ..." line per acceptance criterion, printed at session end
ACCEPTANCE_LINES: list[str] = []
