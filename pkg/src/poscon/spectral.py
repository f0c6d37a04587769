"""Spectral structure of nonnegative matrices.

Covers the dominant/subdominant split, rational-angle detection for
eigenvalues, the minimal root-of-unity multiplier and the decision of
whether a matrix (or the residual block of its spectrum) admits a recursion
``A^k = sum_i c_i A^i`` with nonnegative coefficients.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _eig
from . import linprog
from .errors import BudgetExceeded, IrrationalAngle, Reducible
from .posmat import (
    TOL_EIG,
    TOL_ZERO,
    as_matrix,
    cyclicity_degree,
    is_irreducible,
    strongly_connected_components,
)

TOL_ANGLE = 1e-9
Q_MAX = 64
TOL_CLUSTER = 1e-6
TOL_RECUR = 1e-8

INFINITE = "infinite"
FINITE = "finite"


@dataclass(frozen=True)
class SpectralSummary:
    eigenvalues: np.ndarray
    rho: float
    dominant: np.ndarray
    nondominant: np.ndarray
    h: int
    a2_spectrum: np.ndarray | None = None
    split_mode: str | None = None


@dataclass(frozen=True)
class AngleClass:
    value: complex
    is_rational: bool
    p_over_q: Fraction | None
    denominator_q: int | None
    phase: float


@dataclass(frozen=True)
class RecursionCertificate:
    holds: bool
    degree_nm: int | None = None
    coefficients: np.ndarray | None = None
    failing_condition: str | None = None
    note: str = ""
    searched: tuple[int, int] | None = field(default=None)


def _tol(scale: float, tol: float) -> float:
    return tol * max(1.0, scale)


def clean_eigenvalues(eigs, tol_eig: float = TOL_EIG) -> np.ndarray:
    """Snap numerically-real eigenvalues onto the real axis and sort by
    decreasing modulus, then increasing phase in [0, 2pi)."""
    eigs = np.asarray(eigs, dtype=complex).copy()
    for i, lam in enumerate(eigs):
        if abs(lam.imag) <= _tol(abs(lam), tol_eig):
            eigs[i] = complex(lam.real, 0.0)
    phase = np.mod(np.angle(eigs), 2 * np.pi)
    mod = np.round(np.abs(eigs), 12)
    order = np.lexsort((phase, -mod))
    return eigs[order]


def spectrum(A, tol_eig: float = TOL_EIG) -> SpectralSummary:
    """All eigenvalues of ``A`` with the dominant/non-dominant partition.

    ``h`` is the number of eigenvalues on the spectral circle; for an
    irreducible matrix that equals the cyclicity degree.
    """
    a = np.asarray(as_matrix(A))
    eigs = clean_eigenvalues(_eig.eigvals(a), tol_eig)
    mod = np.abs(eigs)
    rho = float(mod.max())
    dom = mod >= rho - _tol(rho, tol_eig)
    return SpectralSummary(eigs, rho, eigs[dom], eigs[~dom], int(dom.sum()))


def pf_split(A, mode: str, tol_zero: float = TOL_ZERO, tol_eig: float = TOL_EIG
             ) -> SpectralSummary:
    """Spectrum of the block left after splitting off Perron-Frobenius
    eigenvalues.

    ``mode="infinite"`` removes all ``h`` eigenvalues on the spectral
    circle; ``mode="finite"`` removes only ``rho(A)`` itself.
    """
    if mode not in (INFINITE, FINITE):
        raise ValueError(f"unknown split mode {mode!r}")
    M = as_matrix(A)
    if not is_irreducible(M, tol_zero):
        raise Reducible(strongly_connected_components(M, tol_zero))
    s = spectrum(M, tol_eig)
    h = cyclicity_degree(M, tol_zero, tol_eig, eigenvalues=s.eigenvalues)
    if mode == INFINITE:
        rest = s.nondominant
    else:
        i = int(np.argmin(np.abs(s.eigenvalues - s.rho)))
        rest = np.delete(s.eigenvalues, i)
    return SpectralSummary(s.eigenvalues, s.rho, s.dominant, s.nondominant, h,
                           rest, mode)


def classify_angle(lam: complex, q_max: int = Q_MAX, tol_angle: float = TOL_ANGLE
                   ) -> AngleClass:
    """Decide whether ``arg(lam) / 2pi`` is a fraction with denominator at
    most ``q_max``.

    The candidate is the best rational approximation from the continued
    fraction expansion of the phase; it is accepted within ``tol_angle``.
    """
    lam = complex(lam)
    if lam == 0:
        raise ValueError("the zero eigenvalue has no polar angle")
    phase = (cmath.phase(lam) / (2 * math.pi)) % 1.0
    frac = Fraction(phase).limit_denominator(q_max)
    if abs(phase - float(frac)) > tol_angle:
        return AngleClass(lam, False, None, None, phase)
    frac = Fraction(frac.numerator % frac.denominator, frac.denominator)
    return AngleClass(lam, True, frac, frac.denominator, phase)


def minimal_M(a2_dominant, h: int, q_max: int = Q_MAX, tol_angle: float = TOL_ANGLE
              ) -> int:
    """Smallest M such that every listed eigenvalue, divided by its modulus,
    is an (M*h)-th root of unity."""
    M = 1
    for lam in a2_dominant:
        ac = classify_angle(lam, q_max, tol_angle)
        if not ac.is_rational:
            raise IrrationalAngle(
                f"phase {ac.phase:.12g} of {lam} is not p/q with q <= {q_max}"
            )
        q = ac.denominator_q
        M = math.lcm(M, q // math.gcd(q, h))
    return M


def _clusters(values, tol: float) -> list[list[complex]]:
    groups: list[list[complex]] = []
    for v in values:
        for g in groups:
            if abs(g[0] - v) <= tol:
                g.append(v)
                break
        else:
            groups.append([v])
    return groups


def roitman_conditions(a2_spectrum, h: int, q_max: int = Q_MAX,
                       tol_eig: float = TOL_EIG, tol_angle: float = TOL_ANGLE,
                       tol_cluster: float = TOL_CLUSTER) -> RecursionCertificate:
    """Spectral test for a nonnegative recursion of the residual block.

    Vacuously true when no eigenvalue is positive real. Otherwise the four
    conditions are checked in order and the first failure is recorded.
    """
    note = f"rational-angle test at resolution Q_max={q_max}"
    eigs = np.asarray(list(a2_spectrum), dtype=complex)
    if eigs.size == 0:
        return RecursionCertificate(True, note=note)
    mod = np.abs(eigs)
    rho2 = float(mod.max())
    t = _tol(rho2, tol_eig)
    is_pos = (np.abs(eigs.imag) <= t) & (eigs.real > t)
    if not is_pos.any():
        return RecursionCertificate(True, note=note)
    if np.any(np.abs(eigs[is_pos].real - rho2) > t):
        return RecursionCertificate(False, failing_condition="C1", note=note)
    dom_mask = mod >= rho2 - t
    dominant = eigs[dom_mask]
    classes = [classify_angle(l, q_max, tol_angle) for l in dominant]
    if not all(c.is_rational for c in classes):
        return RecursionCertificate(False, failing_condition="C2", note=note)
    if any(len(g) > 1 for g in _clusters(eigs, _tol(rho2, tol_cluster))
           if abs(abs(g[0]) - rho2) <= t):
        return RecursionCertificate(False, failing_condition="C3", note=note)
    M = minimal_M(dominant, h, q_max, tol_angle)
    period = M * h
    for lam in eigs[~dom_mask]:
        if abs(lam) <= t:
            continue
        turns = (cmath.phase(lam) / (2 * math.pi)) % 1.0 * period
        if abs(turns - round(turns)) <= tol_angle * period:
            return RecursionCertificate(False, failing_condition="C4", note=note)
    return RecursionCertificate(True, note=note)


def default_k_max(n: int) -> int:
    return max(20, 5 * n)


def nonneg_recursion_coeffs(A, k_max: int | None = None, tol_lp: float = linprog.TOL_LP,
                            tol_recur: float = TOL_RECUR, strict: bool = False
                            ) -> RecursionCertificate:
    """Lowest degree ``n_m`` in ``n..k_max`` with ``A^n_m = sum c_i A^i``,
    ``c >= 0``.

    Each degree is an LP over the stacked entries of the powers. Among the
    feasible coefficient vectors the one with least ``sum(c)`` is returned.
    Powers are taken of ``A / rho(A)`` to keep the equations well scaled.
    With ``strict=True`` an exhausted search raises BudgetExceeded instead
    of returning ``holds=False``.
    """
    a = np.asarray(as_matrix(A))
    n = a.shape[0]
    if k_max is None:
        k_max = default_k_max(n)
    rho = float(np.abs(_eig.eigvals(a)).max())
    if rho == 0.0:
        rho = 1.0
    B = a / rho
    powers = [np.eye(n)]
    for _ in range(k_max):
        powers.append(powers[-1] @ B)
    for nm in range(max(n, 1), k_max + 1):
        E = np.column_stack([powers[i].ravel() for i in range(nm)])
        f = powers[nm].ravel()
        # c_i = d_i * rho^(nm - i); minimise sum(c) in the scaled variables
        w = rho ** (nm - np.arange(nm, dtype=float))
        w = w / w.max()
        sol = linprog.solve(linprog.LPProblem(w, E, f), tol=tol_lp)
        if not sol.optimal:
            continue
        c = sol.x * rho ** (nm - np.arange(nm, dtype=float))
        target = np.linalg.matrix_power(a, nm)
        replay = sum(ci * np.linalg.matrix_power(a, i) for i, ci in enumerate(c))
        scale = np.abs(target).max() or 1.0
        if np.abs(target - replay).max() > tol_recur * scale:
            continue
        return RecursionCertificate(True, nm, c, searched=(n, nm))
    if strict:
        raise BudgetExceeded((n, k_max))
    return RecursionCertificate(False, searched=(n, k_max))


def char_poly(eigenvalues) -> np.ndarray:
    """Monic characteristic polynomial coefficients, highest degree first."""
    return np.real_if_close(np.poly(np.asarray(eigenvalues, dtype=complex)), tol=1e6).real
