"""Householder QR, least squares and LU determinants for complex matrices.

Matrices are plain numpy 2-D complex arrays (row-major; ``shape`` gives the
row/column counts).  The QR is computed with Householder reflections rather
than Gram-Schmidt; the gcd machinery downstream relies on its stability.
All routines are deterministic: identical inputs give bit-identical outputs.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

RANK_REL_TOL = 1e-10


def _as_matrix(a):
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2:
        raise ValueError("expected a 2-D array")
    return arr


def qr(a):
    """Thin Householder factorization a = Q R with Q (m, n), R (n, n) upper.

    Requires m >= n.  For square input this is the full factorization.
    """
    a = _as_matrix(a)
    m, n = a.shape
    if m < n:
        raise ValueError("qr requires rows >= cols")
    r = a.astype(complex, copy=True)
    q = np.eye(m, dtype=complex)
    for j in range(min(n, m - 1)):
        x = r[j:, j]
        normx = np.linalg.norm(x)
        if normx == 0.0:
            continue
        phase = x[0] / abs(x[0]) if abs(x[0]) > 0 else 1.0
        v = x.copy()
        v[0] += phase * normx
        vnorm2 = np.real(np.vdot(v, v))
        if vnorm2 == 0.0:
            continue
        w = v.conj() @ r[j:, :]
        r[j:, :] -= np.outer(v, w) * (2.0 / vnorm2)
        wq = q[:, j:] @ v
        q[:, j:] -= np.outer(wq, v.conj()) * (2.0 / vnorm2)
    r[np.tril_indices(m, -1, n)] = 0.0
    return q[:, :n], r[:n, :]


def solve_upper(r, y):
    """Back substitution for an upper-triangular system r x = y."""
    r = _as_matrix(r)
    n = r.shape[1]
    x = np.zeros(n, dtype=complex)
    for i in range(n - 1, -1, -1):
        x[i] = (y[i] - r[i, i + 1 :] @ x[i + 1 :]) / r[i, i]
    return x


class LstsqResult(NamedTuple):
    x: np.ndarray
    residual: float
    rank_deficient: bool


def lstsq(a, b) -> LstsqResult:
    """Minimize |a x - b|_2 via QR.

    Diagonal entries of R below ``RANK_REL_TOL`` times the largest are
    treated as zero; in that case the result is flagged rank-deficient and
    the minimum-norm solution (SVD based) is returned instead.
    """
    a = _as_matrix(a)
    b = np.asarray(b, dtype=complex).ravel()
    if a.shape[0] < a.shape[1]:
        raise ValueError("lstsq requires rows >= cols")
    if a.shape[0] != b.size:
        raise ValueError("shape mismatch between matrix and right-hand side")
    q, r = qr(a)
    diag = np.abs(np.diag(r))
    rank_deficient = bool(diag.size) and bool(diag.min() <= RANK_REL_TOL * diag.max())
    if rank_deficient:
        x = np.linalg.lstsq(a, b, rcond=RANK_REL_TOL)[0]
    else:
        x = solve_upper(r, q.conj().T @ b)
    residual = float(np.linalg.norm(a @ x - b))
    return LstsqResult(x, residual, rank_deficient)


def det(a) -> complex:
    """Determinant via LU with partial pivoting."""
    a = _as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError("determinant requires a square matrix")
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0.0j
    lu = a.astype(complex, copy=True)
    sign = 1.0 + 0.0j
    for k in range(n - 1):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if abs(lu[p, k]) == 0.0:
            return 0.0 + 0.0j
        if p != k:
            lu[[k, p], :] = lu[[p, k], :]
            sign = -sign
        factors = lu[k + 1 :, k] / lu[k, k]
        lu[k + 1 :, k + 1 :] -= np.outer(factors, lu[k, k + 1 :])
        lu[k + 1 :, k] = 0.0
    return complex(sign * np.prod(np.diag(lu)))
