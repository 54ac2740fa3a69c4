"""Pure-Python fallback for the plane-rotation cores.

Same rotation formulas and the same cyclic sweep order as the compiled
extension, with the inner row updates vectorized through numpy.  Results agree
with the compiled core up to rounding; the sweep structure is identical.
"""

import math

BACKEND_NAME = "python"


def onesided_rows(W, Vt, max_sweeps, tol, floor2):
    n = W.shape[0]
    if n < 2:
        return 1
    for sweep in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                wp = W[p]
                wq = W[q]
                alpha = float(wp @ wp)
                beta = float(wq @ wq)
                gamma = float(wp @ wq)
                if alpha <= floor2 or beta <= floor2:
                    continue
                if gamma == 0.0 or abs(gamma) <= tol * math.sqrt(alpha * beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                if zeta >= 0.0:
                    t = 1.0 / (zeta + math.sqrt(1.0 + zeta * zeta))
                else:
                    t = -1.0 / (-zeta + math.sqrt(1.0 + zeta * zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                new_p = c * wp - s * wq
                W[q] = s * wp + c * wq
                W[p] = new_p
                vp = Vt[p]
                vq = Vt[q]
                new_vp = c * vp - s * vq
                Vt[q] = s * vp + c * vq
                Vt[p] = new_vp
        if not rotated:
            return sweep + 1
    return -1


def symmetric_rows(A, Qt, max_sweeps, thresh):
    n = A.shape[0]
    if n < 2:
        return 1
    for sweep in range(max_sweeps):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = float(A[p, q])
                if abs(apq) <= thresh:
                    continue
                rotated = True
                app = float(A[p, p])
                aqq = float(A[q, q])
                tau = (aqq - app) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # A <- J^T A J applied as a column rotation then a row rotation
                colp = c * A[:, p] - s * A[:, q]
                colq = s * A[:, p] + c * A[:, q]
                A[:, p] = colp
                A[:, q] = colq
                rowp = c * A[p, :] - s * A[q, :]
                rowq = s * A[p, :] + c * A[q, :]
                A[p, :] = rowp
                A[q, :] = rowq
                A[p, q] = 0.0
                A[q, p] = 0.0
                qp = Qt[p]
                qq = Qt[q]
                new_qp = c * qp - s * qq
                Qt[q] = s * qp + c * qq
                Qt[p] = new_qp
        if not rotated:
            return sweep + 1
    return -1
