"""Householder tridiagonalization and implicit-shift QL for symmetric matrices."""

import hashlib
import math

import numpy as np

MAX_QL_ITERATIONS = 60


class EigenConvergenceError(RuntimeError):
    pass


def matrix_hash(A):
    return hashlib.sha256(np.ascontiguousarray(A, dtype=float).tobytes()).hexdigest()[:16]


def householder_tridiagonalize(A, compute_q=False):
    """Reduce a symmetric matrix to tridiagonal form T = Q^T A Q.

    Returns ``(d, e, Q)`` with diagonal ``d``, off-diagonal ``e`` (length
    n - 1) and ``Q`` (``None`` unless ``compute_q``).
    """
    a = np.array(A, dtype=float)
    n = a.shape[0]
    Q = np.eye(n) if compute_q else None
    for k in range(n - 2):
        x = a[k + 1:, k]
        scale = np.max(np.abs(x))
        if scale == 0.0:
            continue
        alpha = scale * np.linalg.norm(x / scale)
        if x[0] > 0:
            alpha = -alpha
        u = x.copy()
        u[0] -= alpha
        # H depends only on the direction of u; rescale to avoid underflow
        u /= np.max(np.abs(u))
        unorm2 = u @ u
        if unorm2 == 0.0:
            continue
        # A <- H A H with H = I - 2 u u^T / (u^T u), as a rank-2 update
        sub = a[k + 1:, k + 1:]
        p = sub @ u * (2.0 / unorm2)
        K = (u @ p) / unorm2
        q = p - K * u
        sub -= np.outer(u, q) + np.outer(q, u)
        a[k + 1:, k] = 0.0
        a[k, k + 1:] = 0.0
        a[k + 1, k] = a[k, k + 1] = alpha
        if compute_q:
            Q[:, k + 1:] -= np.outer(Q[:, k + 1:] @ u, u) * (2.0 / unorm2)
    d = np.diag(a).copy()
    e = np.diag(a, 1).copy()
    return d, e, Q


def tridiagonal_ql(d, e, Z=None, max_iter=MAX_QL_ITERATIONS):
    """Eigenvalues of the symmetric tridiagonal matrix (d, e) by implicit QL.

    Wilkinson-type shift with deflation on negligible off-diagonals. When
    ``Z`` is given its columns are rotated along, so passing the Householder
    ``Q`` yields eigenvectors of the original matrix. Returns ``(w, Z)``.
    """
    d = np.array(d, dtype=float)
    n = d.size
    e = np.array(e, dtype=float)
    if Z is not None:
        Z = np.array(Z, dtype=float)
    if n > 1 and abs(d[-1]) < abs(d[0]):
        # QL chases from the bottom: put the larger end there (graded matrices)
        w, Zr = tridiagonal_ql(d[::-1], e[::-1], None if Z is None else Z[:, ::-1], max_iter)
        return w, Zr
    e = np.append(e, 0.0)
    eps = np.finfo(float).eps
    # absolute deflation floor: keeps graded blocks from stalling while the
    # eigenvalue error stays far below eps * ||T||
    floor = eps * eps * max(np.max(np.abs(d), initial=0.0), np.max(np.abs(e), initial=0.0))
    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd or abs(e[m]) <= floor:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > max_iter:
                raise EigenConvergenceError(
                    f"QL iteration did not converge for eigenvalue {l} after {max_iter} sweeps"
                )
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if Z is not None:
                    zi1 = Z[:, i + 1].copy()
                    Z[:, i + 1] = s * Z[:, i] + c * zi1
                    Z[:, i] = c * Z[:, i] - s * zi1
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d, Z


def eigh_householder_ql(A, eigenvectors=False):
    """Full symmetric eigendecomposition, eigenvalues sorted ascending."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    if n == 0:
        return (np.empty(0), np.empty((0, 0))) if eigenvectors else np.empty(0)
    big = float(np.max(np.abs(A)))
    if big == 0.0:
        w, Z = np.zeros(n), np.eye(n)
    else:
        # exact power-of-two rescale into [0.5, 1) keeps subnormals out of the sweeps
        exp = math.frexp(big)[1]
        d, e, Q = householder_tridiagonalize(np.ldexp(A, -exp), compute_q=eigenvectors)
        try:
            w, Z = tridiagonal_ql(d, e, Q)
        except EigenConvergenceError as exc:
            raise EigenConvergenceError(f"{exc} (matrix {matrix_hash(A)})") from None
        w = np.ldexp(w, exp)
    order = np.argsort(w, kind="stable")
    if eigenvectors:
        return w[order], Z[:, order]
    return w[order]
