"""Dense eigenvalues by balancing, Householder Hessenberg reduction and
Francis double-shift QR (EISPACK ``hqr`` lineage).

Only eigenvalues are produced; no Schur vectors are accumulated.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import EigenFailure

_RADIX = 2.0


def balance(a: np.ndarray) -> np.ndarray:
    """Diagonal similarity scaling that equalises row and column norms."""
    a = np.array(a, dtype=float)
    n = a.shape[0]
    sqrdx = _RADIX * _RADIX
    done = False
    while not done:
        done = True
        for i in range(n):
            r = np.abs(a[i, :]).sum() - abs(a[i, i])
            c = np.abs(a[:, i]).sum() - abs(a[i, i])
            if c == 0.0 or r == 0.0:
                continue
            g = r / _RADIX
            f = 1.0
            s = c + r
            while c < g:
                f *= _RADIX
                c *= sqrdx
            g = r * _RADIX
            while c > g:
                f /= _RADIX
                c /= sqrdx
            if (c + r) / f < 0.95 * s:
                done = False
                a[i, :] /= f
                a[:, i] *= f
    return a


def hessenberg(a: np.ndarray) -> np.ndarray:
    h = np.array(a, dtype=float)
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1:, k].copy()
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            continue
        if x[0] > 0:
            alpha = -alpha
        v = x
        v[0] -= alpha
        vnorm = np.linalg.norm(v)
        if vnorm == 0.0:
            continue
        v /= vnorm
        h[k + 1:, k:] -= 2.0 * np.outer(v, v @ h[k + 1:, k:])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v)
        h[k + 2:, k] = 0.0
    return h


def _hqr(a: np.ndarray, max_sweeps: int) -> np.ndarray:
    a = [list(map(float, row)) for row in a]
    n = len(a)
    wr = [0.0] * n
    wi = [0.0] * n
    anorm = 0.0
    for i in range(n):
        for j in range(max(i - 1, 0), n):
            anorm += abs(a[i][j])
    nn = n - 1
    t = 0.0
    sweeps = 0
    while nn >= 0:
        its = 0
        while True:
            l = 0
            for ll in range(nn, 0, -1):
                s = abs(a[ll - 1][ll - 1]) + abs(a[ll][ll])
                if s == 0.0:
                    s = anorm
                if abs(a[ll][ll - 1]) + s == s:
                    a[ll][ll - 1] = 0.0
                    l = ll
                    break
            x = a[nn][nn]
            if l == nn:
                wr[nn], wi[nn] = x + t, 0.0
                nn -= 1
                break
            y = a[nn - 1][nn - 1]
            w = a[nn][nn - 1] * a[nn - 1][nn]
            if l == nn - 1:
                p = 0.5 * (y - x)
                q = p * p + w
                z = math.sqrt(abs(q))
                x += t
                if q >= 0.0:
                    z = p + math.copysign(z, p)
                    wr[nn - 1] = wr[nn] = x + z
                    if z != 0.0:
                        wr[nn] = x - w / z
                    wi[nn - 1] = wi[nn] = 0.0
                else:
                    wr[nn - 1] = wr[nn] = x + p
                    wi[nn - 1], wi[nn] = -z, z
                nn -= 2
                break
            sweeps += 1
            if sweeps > max_sweeps:
                raise EigenFailure(f"QR iteration did not converge in {max_sweeps} sweeps")
            if its > 0 and its % 10 == 0:
                # exceptional shift breaks cycling on e.g. permutation matrices
                t += x
                for i in range(nn + 1):
                    a[i][i] -= x
                s = abs(a[nn][nn - 1]) + abs(a[nn - 1][nn - 2])
                x = y = 0.75 * s
                w = -0.4375 * s * s
            its += 1
            m = nn - 2
            while m >= l:
                z = a[m][m]
                r = x - z
                s = y - z
                p = (r * s - w) / a[m + 1][m] + a[m][m + 1]
                q = a[m + 1][m + 1] - z - r - s
                r = a[m + 2][m + 1]
                s = abs(p) + abs(q) + abs(r)
                p /= s
                q /= s
                r /= s
                if m == l:
                    break
                u = abs(a[m][m - 1]) * (abs(q) + abs(r))
                v = abs(p) * (abs(a[m - 1][m - 1]) + abs(z) + abs(a[m + 1][m + 1]))
                if u + v == v:
                    break
                m -= 1
            for i in range(m + 2, nn + 1):
                a[i][i - 2] = 0.0
                if i != m + 2:
                    a[i][i - 3] = 0.0
            for k in range(m, nn):
                if k != m:
                    p = a[k][k - 1]
                    q = a[k + 1][k - 1]
                    r = a[k + 2][k - 1] if k != nn - 1 else 0.0
                    x = abs(p) + abs(q) + abs(r)
                    if x != 0.0:
                        p /= x
                        q /= x
                        r /= x
                s = math.copysign(math.sqrt(p * p + q * q + r * r), p)
                if s == 0.0:
                    continue
                if k == m:
                    if l != m:
                        a[k][k - 1] = -a[k][k - 1]
                else:
                    a[k][k - 1] = -s * x
                p += s
                x = p / s
                y = q / s
                z = r / s
                q /= p
                r /= p
                for j in range(k, nn + 1):
                    p = a[k][j] + q * a[k + 1][j]
                    if k != nn - 1:
                        p += r * a[k + 2][j]
                        a[k + 2][j] -= p * z
                    a[k + 1][j] -= p * y
                    a[k][j] -= p * x
                mmin = nn if nn < k + 3 else k + 3
                for i in range(l, mmin + 1):
                    p = x * a[i][k] + y * a[i][k + 1]
                    if k != nn - 1:
                        p += z * a[i][k + 2]
                        a[i][k + 2] -= p * r
                    a[i][k + 1] -= p * q
                    a[i][k] -= p
    return np.array(wr) + 1j * np.array(wi)


def eigvals(a, max_sweeps: int | None = None) -> np.ndarray:
    """All eigenvalues of a real square matrix, with multiplicity.

    Raises EigenFailure once the total number of QR sweeps exceeds
    ``max_sweeps`` (default ``200 * n``).
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("eigvals needs a square matrix")
    n = a.shape[0]
    if n == 0:
        return np.zeros(0, dtype=complex)
    if not np.all(np.isfinite(a)):
        raise EigenFailure("matrix has non-finite entries")
    if max_sweeps is None:
        max_sweeps = 200 * n
    return _hqr(hessenberg(balance(a)), max_sweeps)
