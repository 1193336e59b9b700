"""Cyclic Jacobi eigensolver for real symmetric matrices.

Rotations are applied in a fixed round-robin ("tournament") order: each
sweep is split into n-1 rounds of n/2 disjoint index pairs, and all
rotations of a round are applied at once. Disjoint rotations commute, so
a round is exactly equivalent to applying them one after another, and the
fixed schedule makes the result bit-reproducible.
"""

from functools import lru_cache

import numpy as np

from .exceptions import ConvergenceError

__all__ = ["jacobi_eigh", "round_robin_schedule"]


@lru_cache(maxsize=64)
def round_robin_schedule(n):
    """Return the pair schedule of one sweep for an ``n x n`` matrix.

    Returns
    -------
    list of (ndarray, ndarray)
        One ``(p, q)`` pair of index arrays per round with ``p < q``. Every
        unordered pair ``{i, j}`` with ``i != j`` appears exactly once.
    """
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        p, q = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a >= n or b >= n:
                continue
            p.append(min(a, b))
            q.append(max(a, b))
        rounds.append((np.array(p, dtype=np.intp), np.array(q, dtype=np.intp)))
        # circle method: keep players[0] fixed, rotate the rest
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _rotate_rows(mat, p, q, c, s):
    rp, rq = mat[p], mat[q]
    mat[p] = c * rp - s * rq
    mat[q] = s * rp + c * rq


def _offdiag_norm(a):
    return np.linalg.norm(a - np.diag(np.diag(a)))


def jacobi_eigh(a, tol=1e-12, max_sweeps=100):
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Parameters
    ----------
    a : (n, n) array_like
        Symmetric matrix. Only its symmetric part is used.
    tol : float
        Stop once the off-diagonal Frobenius norm drops to
        ``tol * ||a||_F``.
    max_sweeps : int
        Maximum number of full sweeps.

    Returns
    -------
    w : (n,) ndarray
        Eigenvalues, unsorted (diagonal of the converged matrix).
    v : (n, n) ndarray
        Orthonormal eigenvectors as columns, ``a @ v[:, i] = w[i] * v[:, i]``.

    Raises
    ------
    ConvergenceError
        If the tolerance is not met within ``max_sweeps`` sweeps.
    """
    a = np.array(a, dtype=np.float64)
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    vt = np.eye(n)
    if n < 2:
        return np.diag(a).copy(), vt

    target = tol * np.linalg.norm(a)
    schedule = round_robin_schedule(n)
    sweeps = 0
    while _offdiag_norm(a) > target:
        if sweeps >= max_sweeps:
            raise ConvergenceError(
                f"Jacobi iteration did not converge after {sweeps} sweeps "
                f"(off-diagonal norm {_offdiag_norm(a):.3e}, target {target:.3e})",
                iterations=sweeps,
            )
        for p, q in schedule:
            apq = a[p, q]
            active = apq != 0.0
            if not active.any():
                continue
            safe = np.where(active, apq, 1.0)
            theta = (a[q, q] - a[p, p]) / (2.0 * safe)
            sign = np.where(theta >= 0.0, 1.0, -1.0)
            t = sign / (np.abs(theta) + np.hypot(1.0, theta))
            c = 1.0 / np.hypot(1.0, t)
            s = t * c
            c = np.where(active, c, 1.0)
            s = np.where(active, s, 0.0)

            cr, sr = c[:, None], s[:, None]
            # J^T A J == J^T (J^T A)^T for symmetric A: two contiguous row passes
            _rotate_rows(a, p, q, cr, sr)
            a = np.ascontiguousarray(a.T)
            _rotate_rows(a, p, q, cr, sr)
            a[p, q] = 0.0
            a[q, p] = 0.0
            _rotate_rows(vt, p, q, cr, sr)
        sweeps += 1
    return np.diag(a).copy(), np.ascontiguousarray(vt.T)
