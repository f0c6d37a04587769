"""Controllable subsets of single-input positive systems x+ = A x + b u.

The k-step controllable set is the cone over the columns of
``[b, Ab, ..., A^(k-1) b]``. This module decides whether the union over all
k (and its closure) is polyhedral, using a spectral criterion and an
independent direct iteration, computes vertex numbers and generators, and
checks user target sets with an explicit input sequence when one exists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import cones, linprog, spectral
from .cones import GeneratorCone
from .errors import (
    ConvergenceFailure,
    Disagreement,
    LimitGeneratorUsed,
    RankDeficient,
)
from .posmat import (
    TOL_EIG,
    TOL_ZERO,
    NonnegMatrix,
    NonnegVector,
    StructureInfo,
    as_matrix,
    as_vector,
    cyclic_normal_form,
    validate_positive_system,
)

CONTROLLABLE_FINITE = "controllable_finite"
ALMOST_CONTROLLABLE = "almost_controllable"
NOT_CONTROLLABLE = "not_controllable"

MAX_SQUARINGS = 64
# finite-horizon direct iteration runs in rational arithmetic up to this size
EXACT_MAX_N = 12


@dataclass(frozen=True)
class Tolerances:
    zero: float = TOL_ZERO
    eig: float = TOL_EIG
    angle: float = spectral.TOL_ANGLE
    q_max: int = spectral.Q_MAX
    cluster: float = spectral.TOL_CLUSTER
    recur: float = spectral.TOL_RECUR
    lp: float = linprog.TOL_LP
    lim: float = 1e-10
    sim: float = 1e-8
    rank: float = 1e-10
    coeff: float = 1e-9


@dataclass(frozen=True, eq=False)
class SystemSI:
    A: NonnegMatrix
    b: NonnegVector
    structure: StructureInfo
    spectral: spectral.SpectralSummary
    full_rank: bool
    tol: Tolerances = Tolerances()

    @property
    def n(self) -> int:
        return self.A.dim

    @property
    def h(self) -> int:
        return self.structure.cyclicity_h

    @property
    def rho(self) -> float:
        return self.spectral.rho

    @cached_property
    def limit(self) -> "LimitCone":
        return limit_cone(self)


@dataclass(frozen=True, eq=False)
class LimitCone:
    A_f: tuple[np.ndarray, ...]
    C_lim: GeneratorCone
    v_f: GeneratorCone
    projector: np.ndarray
    squarings: int


@dataclass
class PolyhedralityVerdict:
    kind: str
    polyhedral: bool
    method: str
    direct_k: int | None
    k_max: int
    a2_spectrum: np.ndarray | None = None
    failing_condition: str | None = None
    generators: GeneratorCone | None = None
    simplicial: bool | None = None
    recursion: spectral.RecursionCertificate | None = None
    vf_contained: bool | None = None

    @property
    def k_vert(self) -> int | None:
        return self.direct_k if self.polyhedral else None

    @property
    def agreement(self) -> bool:
        return self.polyhedral == (self.direct_k is not None)


@dataclass
class TargetResult:
    point: np.ndarray
    status: str
    horizon: int
    horizon_bounded: bool
    witness: np.ndarray | None = None
    objective: float | None = None
    residual: float | None = None
    inputs: np.ndarray | None = None
    replay_error: float | None = None


@dataclass
class ControllabilityReport:
    system: SystemSI
    finite: PolyhedralityVerdict | None
    infinite: PolyhedralityVerdict | None
    special_case: GeneratorCone | None
    limit: LimitCone
    targets: list[TargetResult] = field(default_factory=list)
    target_kinds: list[str] = field(default_factory=list)
    disagreements: list[str] = field(default_factory=list)

    @property
    def status(self) -> str:
        return "disagreement" if self.disagreements else "ok"


def krylov_columns(A, b, k: int) -> np.ndarray:
    """``[b, Ab, ..., A^(k-1) b]`` as an n x k array."""
    a = np.asarray(A, dtype=float)
    x = np.asarray(b, dtype=float)
    cols = []
    for _ in range(k):
        cols.append(x)
        x = a @ x
    return np.column_stack(cols) if cols else np.zeros((a.shape[0], 0))


def _power_label(j: int) -> str:
    return "b" if j == 0 else ("A b" if j == 1 else f"A^{j} b")


def full_rank(A, b, tol_rank: float = 1e-10) -> bool:
    M = krylov_columns(A, b, np.asarray(A).shape[0])
    norms = np.abs(M).max(axis=0)
    if np.any(norms == 0.0):
        return False
    M = M / norms
    s = np.linalg.svd(M, compute_uv=False)
    return bool(s.min() > tol_rank * s.max())


def make_system(A, b, tol: Tolerances = Tolerances()) -> SystemSI:
    """Validate ``(A, b)`` and precompute structure and spectrum.

    Rejects reducible ``A``. A rank-deficient controllability matrix is
    accepted only when ``b`` lies in the cone of the nonnegative
    eigenvectors of ``A^h`` (the closed-form special case).
    """
    validate_positive_system(A, b)
    A = as_matrix(A)
    b = as_vector(b)
    info, _ = cyclic_normal_form(A, tol.zero, tol.eig)
    spec = spectral.spectrum(A, tol.eig)
    spec = spectral.SpectralSummary(spec.eigenvalues, spec.rho, spec.dominant,
                                    spec.nondominant, info.cyclicity_h)
    rank_ok = full_rank(A, b, tol.rank)
    sys = SystemSI(A, b, info, spec, rank_ok, tol)
    if not rank_ok and special_case(sys) is None:
        raise RankDeficient(
            "rank(conmat_n) < n and b is not in the cone of the Perron eigenvectors of A^h"
        )
    return sys


def conmat(sys: SystemSI, k: int) -> GeneratorCone:
    if k < 1:
        raise ValueError("k must be at least 1")
    M = krylov_columns(sys.A, sys.b, k)
    return GeneratorCone(M, [_power_label(j) for j in range(k)], tol_zero=sys.tol.zero)


def limit_cone(sys: SystemSI) -> LimitCone:
    """Limit matrices ``A_f,i = lim_k (A^h / rho^h)^k A^i`` and the cones
    they induce.

    The limit is reached by repeated squaring. Iterates are kept at unit
    max-norm so rounding in rho cannot compound across squarings; the
    converged direction is rescaled to the idempotent ``P @ P = P``.
    """
    a = np.asarray(sys.A)
    n, h, rho = sys.n, sys.h, sys.rho
    if rho == 0.0:
        raise ConvergenceFailure("spectral radius is zero")
    P = np.linalg.matrix_power(a / rho, h)
    P /= np.abs(P).max()
    tol = sys.tol.lim
    for it in range(1, MAX_SQUARINGS + 1):
        Q = P @ P
        qmax = np.abs(Q).max()
        if qmax == 0.0:
            raise ConvergenceFailure("normalised powers vanished")
        Q /= qmax
        if np.abs(Q - P).max() <= tol:
            P = Q
            break
        P = Q
    else:
        raise ConvergenceFailure(f"limit projector not reached in {MAX_SQUARINGS} squarings")
    P = P * (np.trace(P) / np.trace(P @ P))
    P = np.where(np.abs(P) <= tol * np.abs(P).max(), 0.0, P)

    A_f = []
    Ai = np.eye(n)
    for _ in range(h):
        A_f.append(P @ Ai)
        Ai = Ai @ a
    b = np.asarray(sys.b)
    lim_cols = np.column_stack([M @ b for M in A_f])
    C_lim = GeneratorCone(np.where(lim_cols < 0, 0.0, lim_cols),
                          [f"A_f,{i} b" for i in range(h)], tol_zero=sys.tol.zero)

    perm = sys.structure.permutation
    sizes = sys.structure.block_sizes
    Phat = P[np.ix_(perm, perm)]
    vf = np.zeros((n, h))
    start = 0
    for k, size in enumerate(sizes):
        blk = Phat[start:start + size, start:start + size]
        col = blk[:, int(np.argmax(np.abs(blk).sum(axis=0)))]
        col = np.abs(col)
        vf[[perm[start + i] for i in range(size)], k] = col / col.sum()
        start += size
    v_f = GeneratorCone(vf, [f"v_f,{i}" for i in range(h)])
    return LimitCone(tuple(A_f), C_lim, v_f, P, it)


def limit_residuals(sys: SystemSI, lc: LimitCone | None = None) -> list[float]:
    """Residuals of ``A A_f,i = A_f,i+1`` (i < h-1) and
    ``A A_f,h-1 = rho^h A_f,0``, in that order."""
    lc = lc or sys.limit
    a = np.asarray(sys.A)
    h = sys.h
    out = []
    for i in range(h - 1):
        out.append(float(np.abs(a @ lc.A_f[i] - lc.A_f[i + 1]).max()))
    out.append(float(np.abs(a @ lc.A_f[h - 1] - sys.rho ** h * lc.A_f[0]).max()))
    return out


def exact_krylov_columns(A, b, k: int) -> list[list[Fraction]]:
    """``b, Ab, ..., A^(k-1) b`` in exact rational arithmetic, as columns."""
    a = [[Fraction(float(v)) for v in row] for row in np.asarray(A)]
    x = [Fraction(float(v)) for v in np.asarray(b)]
    cols = []
    for _ in range(k):
        cols.append(x)
        x = [sum((aij * xj for aij, xj in zip(row, x)), Fraction(0)) for row in a]
    return cols


def direct_vertex_number(sys: SystemSI, k_max: int, with_limit: bool = False,
                         exact: bool = False) -> int | None:
    """Smallest k <= k_max with ``A^k b`` in the cone of the first k powers
    (plus the limit generators when ``with_limit``).

    With ``exact`` the powers and the membership test use rational
    arithmetic on the stored matrix, so growth far below double precision
    is still seen; the limit generators have no exact form, so the two
    options are exclusive.
    """
    if exact:
        if with_limit:
            raise ValueError("exact iteration is available only without limit generators")
        cols = exact_krylov_columns(sys.A, sys.b, k_max + 1)
        for k in range(1, k_max + 1):
            E = [[cols[j][i] for j in range(k)] for i in range(sys.n)]
            if linprog.feasible_exact(E, cols[k]):
                return k
        return None
    extra = sys.limit.C_lim if with_limit else None
    cols = krylov_columns(sys.A, sys.b, k_max + 1)
    for k in range(1, k_max + 1):
        C = GeneratorCone(cols[:, :k], [_power_label(j) for j in range(k)],
                          tol_zero=sys.tol.zero)
        if extra is not None:
            C = C.extend(extra)
        if cones.member(C, cols[:, k], sys.tol.lp)[0]:
            return k
    return None


def _nonpositive_tail(coeffs: np.ndarray, rho: float, tol: float) -> bool:
    deg = len(coeffs) - 1
    scale = np.array([max(1.0, rho) ** (i + 1) for i in range(deg)])
    return bool(np.all(coeffs[1:] <= tol * scale))


def _require_full_rank(sys: SystemSI) -> None:
    if not sys.full_rank:
        raise RankDeficient("polyhedrality tests assume rank(conmat_n) = n")


def polyhedral_fin(sys: SystemSI, k_max: int | None = None) -> PolyhedralityVerdict:
    """Is the finite-time controllable set polyhedral?

    The spectral test (no positive eigenvalue left after removing rho) is
    authoritative; the direct iteration supplies the vertex number, in
    exact arithmetic for n <= EXACT_MAX_N. Raises Disagreement, with the
    verdict attached, when they conflict.
    """
    _require_full_rank(sys)
    k_max = k_max or spectral.default_k_max(sys.n)
    tol = sys.tol
    split = spectral.pf_split(sys.A, spectral.FINITE, tol.zero, tol.eig)
    a2 = split.a2_spectrum
    t = tol.eig * max(1.0, sys.rho)
    positive = [l for l in a2 if abs(l.imag) <= t and l.real > t]
    polyhedral = not positive
    direct_k = direct_vertex_number(sys, k_max, exact=sys.n <= EXACT_MAX_N)
    v = PolyhedralityVerdict(
        "finite", polyhedral, "spectral", direct_k, k_max, a2,
        failing_condition=None if polyhedral else "positive eigenvalue "
        f"{positive[0].real:.6g} outside rho",
    )
    if polyhedral:
        cp = spectral.char_poly(sys.spectral.eigenvalues)
        v.simplicial = _nonpositive_tail(cp, sys.rho, tol.coeff)
        v.recursion = spectral.nonneg_recursion_coeffs(sys.A, k_max, tol.lp, tol.recur)
        if direct_k is not None:
            v.generators = conmat(sys, direct_k)
            v.vf_contained = cones.includes(v.generators, sys.limit.v_f, tol.lp)
    else:
        v.simplicial = False
    if not v.agreement:
        raise Disagreement(_disagreement_text(v), v)
    return v


def polyhedral_inf(sys: SystemSI, k_max: int | None = None) -> PolyhedralityVerdict:
    """Is the closure of the controllable set polyhedral?

    Spectral route: the conditions on the spectrum left after removing all
    h dominant eigenvalues. Direct route: first k with ``A^k b`` in the cone
    of the first k powers and the limit generators.
    """
    _require_full_rank(sys)
    k_max = k_max or spectral.default_k_max(sys.n)
    tol = sys.tol
    split = spectral.pf_split(sys.A, spectral.INFINITE, tol.zero, tol.eig)
    cert = spectral.roitman_conditions(split.a2_spectrum, sys.h, tol.q_max, tol.eig,
                                       tol.angle, tol.cluster)
    direct_k = direct_vertex_number(sys, k_max, with_limit=True)
    v = PolyhedralityVerdict("infinite", cert.holds, "spectral", direct_k, k_max,
                             split.a2_spectrum, cert.failing_condition, recursion=cert)
    if cert.holds:
        a2 = split.a2_spectrum
        cp = spectral.char_poly(a2) if len(a2) else np.array([1.0])
        rho2 = float(np.abs(a2).max()) if len(a2) else 0.0
        v.simplicial = _nonpositive_tail(cp, rho2, tol.coeff)
        if direct_k is not None:
            v.generators = conmat(sys, direct_k).extend(sys.limit.C_lim)
    else:
        v.simplicial = False
    if not v.agreement:
        raise Disagreement(_disagreement_text(v), v)
    return v


def _disagreement_text(v: PolyhedralityVerdict) -> str:
    if v.polyhedral:
        return (f"{v.kind}: spectral test says polyhedral but no vertex number "
                f"found up to k_max={v.k_max}")
    return (f"{v.kind}: spectral test says non-polyhedral but direct iteration "
            f"closed at k={v.direct_k}")


def special_case(sys: SystemSI) -> GeneratorCone | None:
    """Closed form when b is a nonnegative combination of the Perron
    eigenvectors of A^h: the controllable set is spanned by the first h
    powers."""
    if not cones.member(sys.limit.v_f, np.asarray(sys.b), sys.tol.lp)[0]:
        return None
    return conmat(sys, sys.h).deduplicated()


def special_case_verdicts(sys: SystemSI, k_max: int | None = None
                          ) -> tuple[PolyhedralityVerdict, PolyhedralityVerdict]:
    C = special_case(sys)
    if C is None:
        raise RankDeficient("b is not in the cone of the Perron eigenvectors of A^h")
    k_max = k_max or spectral.default_k_max(sys.n)
    k = direct_vertex_number(sys, max(k_max, sys.h))
    fin = PolyhedralityVerdict("finite", True, "special_case", k, k_max, generators=C)
    inf = PolyhedralityVerdict("infinite", True, "special_case", k, k_max, generators=C)
    return fin, inf


def simulate(sys: SystemSI, inputs, x0=None) -> np.ndarray:
    """States x(0..N) under ``x(t+1) = A x(t) + b u(t)``."""
    a = np.asarray(sys.A)
    b = np.asarray(sys.b)
    x = np.zeros(sys.n) if x0 is None else np.asarray(x0, dtype=float)
    traj = [x]
    for u in np.asarray(inputs, dtype=float):
        x = a @ x + b * u
        traj.append(x)
    return np.array(traj)


def reconstruct_inputs(sys: SystemSI, witness, num_limit: int = 0) -> np.ndarray:
    """Input sequence realising a conic combination of ``b, ..., A^(N-1) b``.

    ``witness[j]`` weights ``A^j b``, so it becomes the input applied j steps
    before the end: ``u(N-1-j) = witness[j]``. Trailing ``num_limit`` entries
    weight limit generators, which no finite input can produce.
    """
    w = np.asarray(witness, dtype=float)
    if num_limit:
        lim = w[-num_limit:]
        if np.any(lim > sys.tol.lp * (1.0 + np.abs(w).max())):
            raise LimitGeneratorUsed("witness loads a limit generator; no finite input exists")
        w = w[:-num_limit]
    return w[::-1].copy()


def check_target(sys: SystemSI, targets, kind: str = "cone", N: int | None = None,
                 horizon_bounded: bool = False) -> list[TargetResult]:
    """Classify each target vertex by the least-1-norm LP over ``N`` powers.

    A vertex reachable by the powers alone is ``controllable_finite`` and
    comes with an input sequence. Failing that, the Perron eigenvectors of
    ``A^h`` are appended; success there means ``almost_controllable``.
    """
    if kind not in ("cone", "polytope"):
        raise ValueError(f"unknown target kind {kind!r}")
    if N is None:
        N = 10 * sys.n
    tol = sys.tol
    Mf = krylov_columns(sys.A, sys.b, N)
    vf = sys.limit.v_f.generators
    Minf = np.hstack([Mf, vf])
    results = []
    for p in targets:
        p = np.asarray(as_vector(p, where="target"))
        if p.shape[0] != sys.n:
            raise ValueError(f"target has dimension {p.shape[0]}, system has {sys.n}")
        sol = linprog.solve(linprog.LPProblem(np.ones(N), Mf, p), tol=tol.lp)
        if sol.optimal:
            u = reconstruct_inputs(sys, sol.x)
            final = simulate(sys, u)[-1]
            results.append(TargetResult(
                p, CONTROLLABLE_FINITE, N, horizon_bounded, sol.x, sol.objective_value,
                linprog.residual(Mf, sol.x, p), u, float(np.abs(final - p).max()),
            ))
            continue
        sol = linprog.solve(linprog.LPProblem(np.ones(Minf.shape[1]), Minf, p), tol=tol.lp)
        if sol.optimal:
            results.append(TargetResult(
                p, ALMOST_CONTROLLABLE, N, horizon_bounded, sol.x, sol.objective_value,
                linprog.residual(Minf, sol.x, p),
            ))
        else:
            results.append(TargetResult(p, NOT_CONTROLLABLE, N, horizon_bounded))
    return results


def analyze(sys: SystemSI, k_max: int | None = None) -> ControllabilityReport:
    """Both polyhedrality verdicts plus the special case, collecting
    disagreements instead of raising."""
    k_max = k_max or spectral.default_k_max(sys.n)
    disagreements = []
    sc = special_case(sys)
    if not sys.full_rank:
        fin, inf = special_case_verdicts(sys, k_max)
    else:
        verdicts = []
        for fn in (polyhedral_fin, polyhedral_inf):
            try:
                verdicts.append(fn(sys, k_max))
            except Disagreement as exc:
                disagreements.append(str(exc))
                verdicts.append(exc.verdict)
        fin, inf = verdicts
    return ControllabilityReport(sys, fin, inf, sc, sys.limit, disagreements=disagreements)


def target_horizon(report: ControllabilityReport, user_N: int | None = None
                   ) -> tuple[int, bool]:
    """Horizon for target checks and whether it is only a bound.

    The vertex number is used when the finite set is polyhedral; otherwise
    the user bound (default 10 n) gives a bounded-horizon verdict.
    """
    fin = report.finite
    if fin is not None and fin.polyhedral and fin.direct_k is not None:
        return (max(user_N, fin.direct_k) if user_N else fin.direct_k), False
    return (user_N or 10 * report.system.n), True
