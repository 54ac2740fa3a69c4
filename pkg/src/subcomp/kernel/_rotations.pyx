# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled plane-rotation cores.

Two cyclic Jacobi sweeps drive every factorization in the package: a
one-sided pass that orthogonalizes the rows of a matrix (singular value
machinery) and a two-sided pass for symmetric eigenproblems.  Both are
deterministic: fixed sweep order, no pivot search, no randomness.
"""

from libc.math cimport fabs, sqrt

BACKEND_NAME = "compiled"


def onesided_rows(double[:, ::1] W, double[:, ::1] Vt, int max_sweeps, double tol, double floor2):
    """Orthogonalize the rows of W in place, accumulating rotations in Vt.

    On success the rows of W are mutually orthogonal (relative inner product
    below ``tol``) and ``Vt`` holds the product of all rotations, so that
    ``W_out = Vt @ W_in``.  Rows whose squared norm has fallen below
    ``floor2`` are numerically zero and take no further part; without this
    cutoff, pairs of vanishing rows chase each other forever on rank-deficient
    input.  Returns the number of sweeps used, or -1 if the pass did not
    converge within ``max_sweeps``.
    """
    cdef Py_ssize_t n = W.shape[0]
    cdef Py_ssize_t m = W.shape[1]
    cdef Py_ssize_t nv = Vt.shape[1]
    cdef Py_ssize_t p, q, k, sweep
    cdef double alpha, beta, gamma, zeta, t, c, s, xp, xq
    cdef bint rotated

    if n < 2:
        return 1

    for sweep in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                alpha = 0.0
                beta = 0.0
                gamma = 0.0
                for k in range(m):
                    xp = W[p, k]
                    xq = W[q, k]
                    alpha += xp * xp
                    beta += xq * xq
                    gamma += xp * xq
                if alpha <= floor2 or beta <= floor2:
                    continue
                if gamma == 0.0 or fabs(gamma) <= tol * sqrt(alpha * beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                if zeta >= 0.0:
                    t = 1.0 / (zeta + sqrt(1.0 + zeta * zeta))
                else:
                    t = -1.0 / (-zeta + sqrt(1.0 + zeta * zeta))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                for k in range(m):
                    xp = W[p, k]
                    xq = W[q, k]
                    W[p, k] = c * xp - s * xq
                    W[q, k] = s * xp + c * xq
                for k in range(nv):
                    xp = Vt[p, k]
                    xq = Vt[q, k]
                    Vt[p, k] = c * xp - s * xq
                    Vt[q, k] = s * xp + c * xq
        if not rotated:
            return sweep + 1
    return -1


def symmetric_rows(double[:, ::1] A, double[:, ::1] Qt, int max_sweeps, double thresh):
    """Diagonalize the symmetric matrix A in place by cyclic Jacobi rotations.

    ``Qt`` accumulates the transposed eigenvector matrix: row i of ``Qt`` ends
    up being the eigenvector for the eigenvalue left at ``A[i, i]``.  An
    off-diagonal entry is rotated away only while it exceeds ``thresh``.
    Returns the sweep count on convergence, -1 otherwise.
    """
    cdef Py_ssize_t n = A.shape[0]
    cdef Py_ssize_t p, q, i, k, sweep
    cdef double apq, app, aqq, tau, t, c, s, aip, aiq, xp, xq
    cdef bint rotated

    if n < 2:
        return 1

    for sweep in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if fabs(apq) <= thresh:
                    continue
                rotated = True
                app = A[p, p]
                aqq = A[q, q]
                tau = (aqq - app) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                for i in range(n):
                    if i != p and i != q:
                        aip = A[i, p]
                        aiq = A[i, q]
                        A[i, p] = c * aip - s * aiq
                        A[p, i] = A[i, p]
                        A[i, q] = s * aip + c * aiq
                        A[q, i] = A[i, q]
                A[p, p] = app - t * apq
                A[q, q] = aqq + t * apq
                A[p, q] = 0.0
                A[q, p] = 0.0
                for k in range(n):
                    xp = Qt[p, k]
                    xq = Qt[q, k]
                    Qt[p, k] = c * xp - s * xq
                    Qt[q, k] = s * xp + c * xq
        if not rotated:
            return sweep + 1
    return -1
