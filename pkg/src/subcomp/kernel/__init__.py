"""Dense real matrix primitives with an explicit tolerance policy.

Every other module phrases its numerics through this kernel.  The actual
factorization work is done by cyclic Jacobi rotation cores; a compiled
extension is used when available and a pure-Python implementation of the same
sweeps is the fallback, selected once at import time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InputError, NumericalFailure, PreconditionError
from . import _pyrotations

try:
    from . import _rotations as _compiled
except ImportError:  # extension not built; pure-Python core takes over
    _compiled = None

_BACKENDS = {"python": _pyrotations}
if _compiled is not None:
    _BACKENDS["compiled"] = _compiled
_DEFAULT_BACKEND = "compiled" if _compiled is not None else "python"

_EPS = np.finfo(np.float64).eps
_MAX_SWEEPS = 64
_ONESIDED_TOL = 1.0e-15
_SYM_THRESH_FACTOR = 5.0e-15


def active_backend() -> str:
    """Name of the rotation core used by default ("compiled" or "python")."""
    return _DEFAULT_BACKEND


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def _core(backend: str | None):
    if backend is None:
        return _BACKENDS[_DEFAULT_BACKEND]
    try:
        return _BACKENDS[backend]
    except KeyError:
        raise InputError(f"unknown kernel backend {backend!r}; available: {available_backends()}")


@dataclass(frozen=True)
class TolerancePolicy:
    """Thresholds separating numerical zero from signal.

    rank_rel/rank_abs control which singular values count as nonzero,
    angle_tol is the resolution for principal angles in radians, and
    subspace_tol bounds the sine of the largest principal angle two equal
    subspaces may exhibit.
    """

    rank_rel: float = 2.0 ** -40
    rank_abs: float = 1.0e-12
    angle_tol: float = 1.0e-9
    subspace_tol: float = 1.0e-9

    def __post_init__(self):
        for name in ("rank_rel", "rank_abs", "angle_tol", "subspace_tol"):
            value = getattr(self, name)
            if not (0.0 < value < 1.0):
                raise InputError(f"tolerance {name} must lie strictly inside (0, 1), got {value!r}")


DEFAULT_TOLERANCE = TolerancePolicy()

TOLERANCE_PROFILES = {
    "default": DEFAULT_TOLERANCE,
    "strict": TolerancePolicy(rank_rel=2.0 ** -46, rank_abs=1.0e-14, angle_tol=1.0e-11, subspace_tol=1.0e-11),
    "loose": TolerancePolicy(rank_rel=2.0 ** -30, rank_abs=1.0e-9, angle_tol=1.0e-7, subspace_tol=1.0e-7),
}


def as_matrix(value, name: str = "matrix") -> np.ndarray:
    """Validate and convert to a dense 2-D float64 array; reject NaN/Inf."""
    a = np.asarray(value, dtype=np.float64)
    if a.ndim != 2:
        raise InputError(f"{name} must be two-dimensional, got shape {a.shape}")
    if a.size and not np.isfinite(a).all():
        raise InputError(f"{name} contains non-finite entries")
    return a


def as_vector(value, name: str = "vector") -> np.ndarray:
    a = np.asarray(value, dtype=np.float64)
    if a.ndim != 1:
        raise InputError(f"{name} must be one-dimensional, got shape {a.shape}")
    if a.size and not np.isfinite(a).all():
        raise InputError(f"{name} contains non-finite entries")
    return a


def rank_threshold(sigma_max: float, dims: tuple[int, int], tol: TolerancePolicy) -> float:
    """Singular values above this count as nonzero under ``tol``."""
    return max(tol.rank_rel * float(sigma_max) * max(dims[0], dims[1], 1), tol.rank_abs)


def rank_count(sigma, sigma_max: float, dims: tuple[int, int], tol: TolerancePolicy) -> int:
    """Number of entries of a descending singular-value sequence above threshold."""
    sigma = np.asarray(sigma, dtype=np.float64)
    thr = rank_threshold(sigma_max, dims, tol)
    return int(np.count_nonzero(sigma > thr))


def _canonicalize_column(col: np.ndarray) -> float:
    """Sign making the largest-magnitude entry positive (first index on ties)."""
    if col.size == 0:
        return 1.0
    i = int(np.argmax(np.abs(col)))
    return -1.0 if col[i] < 0.0 else 1.0


def _complete_columns(U: np.ndarray, todo: list[int]) -> None:
    """Fill the listed columns of U with deterministic orthonormal completions."""
    m = U.shape[0]
    for j in todo:
        resid = np.eye(m) - U @ U.T
        norms = np.linalg.norm(resid, axis=0)
        i = int(np.argmax(norms))
        v = resid[:, i]
        v = v - U @ (U.T @ v)
        nv = np.linalg.norm(v)
        if nv == 0.0:
            raise NumericalFailure("cannot complete orthonormal basis")
        U[:, j] = v / nv


def _onesided(a: np.ndarray, backend: str | None):
    """Run the row-orthogonalization core on a^T; rows come back norm-sorted.

    Returns (rows, vt, norms) with ``a = rows.T @ vt`` up to rounding, rows
    mutually orthogonal, norms descending.
    """
    m, n = a.shape
    W = np.array(a.T, dtype=np.float64, order="C", copy=True)
    Vt = np.eye(n, dtype=np.float64, order="C")
    scale = float(np.max(np.linalg.norm(W, axis=1))) if n else 0.0
    floor = 16.0 * _EPS * scale
    status = _core(backend).onesided_rows(W, Vt, _MAX_SWEEPS, _ONESIDED_TOL, floor * floor)
    if status < 0:
        raise NumericalFailure(f"one-sided Jacobi did not converge within {_MAX_SWEEPS} sweeps")
    norms = np.linalg.norm(W, axis=1)
    order = np.argsort(-norms, kind="stable")
    return W[order], Vt[order], norms[order]


def svd(a, backend: str | None = None):
    """Thin singular value decomposition A = U @ diag(s) @ V.T.

    U is m-by-k and V is n-by-k with orthonormal columns, k = min(m, n), and
    s is descending and nonnegative.  Columns carry a canonical sign (largest
    entry of each U column positive) so results are deterministic.
    """
    a = as_matrix(a, "A")
    m, n = a.shape
    k = min(m, n)
    W, Vt, norms = _onesided(a, backend)
    sigma = norms[:k].copy()
    smax = float(norms[0]) if n else 0.0
    zero_cut = 64.0 * _EPS * max(m, n, 1) * smax
    U = np.zeros((m, k))
    completed: list[int] = []
    for j in range(k):
        if norms[j] > zero_cut:
            U[:, j] = W[j] / norms[j]
        else:
            completed.append(j)
    if completed:
        _complete_columns(U, completed)
    V = Vt[:k].T.copy() if k else np.zeros((n, 0))
    completed_set = set(completed)
    for j in range(k):
        sign = _canonicalize_column(U[:, j])
        if sign < 0.0:
            U[:, j] = -U[:, j]
            if j not in completed_set:
                V[:, j] = -V[:, j]
    for j in completed:
        if _canonicalize_column(V[:, j]) < 0.0:
            V[:, j] = -V[:, j]
    return U, sigma, V


def null_space(a, tol: TolerancePolicy = DEFAULT_TOLERANCE, backend: str | None = None) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical kernel of A under ``tol``."""
    a = as_matrix(a, "A")
    m, n = a.shape
    if n == 0:
        return np.zeros((0, 0))
    _, Vt, norms = _onesided(a, backend)
    smax = float(norms[0])
    thr = rank_threshold(smax, (m, n), tol)
    r = int(np.count_nonzero(norms > thr))
    N = Vt[r:].T.copy()
    for j in range(N.shape[1]):
        if _canonicalize_column(N[:, j]) < 0.0:
            N[:, j] = -N[:, j]
    return N


def orthonormalize(a, tol: TolerancePolicy = DEFAULT_TOLERANCE, backend: str | None = None) -> np.ndarray:
    """Orthonormal basis of the column span; column count = numerical rank."""
    a = as_matrix(a, "A")
    U, s, _ = svd(a, backend=backend)
    if s.size == 0:
        return np.zeros((a.shape[0], 0))
    thr = rank_threshold(float(s[0]), a.shape, tol)
    r = int(np.count_nonzero(s > thr))
    return U[:, :r].copy()


def rank(a, tol: TolerancePolicy = DEFAULT_TOLERANCE, backend: str | None = None) -> int:
    a = as_matrix(a, "A")
    if min(a.shape) == 0:
        return 0
    _, _, norms = _onesided(a, backend)
    return rank_count(norms[: min(a.shape)], float(norms[0]), a.shape, tol)


def sym_eig(a, backend: str | None = None):
    """Eigendecomposition of a symmetric matrix: A @ Q = Q @ diag(w).

    Eigenvalues come back ascending, Q orthogonal with canonical column signs.
    Raises PreconditionError when A is asymmetric beyond tolerance.
    """
    a = as_matrix(a, "A")
    n, m = a.shape
    if n != m:
        raise PreconditionError(f"symmetric eigensolver needs a square matrix, got {a.shape}")
    scale = float(np.linalg.norm(a)) if a.size else 0.0
    asym = float(np.max(np.abs(a - a.T))) if a.size else 0.0
    if asym > 1.0e-10 * (1.0 + scale):
        raise PreconditionError(f"matrix asymmetry {asym:.3e} exceeds tolerance")
    S = np.array((a + a.T) / 2.0, dtype=np.float64, order="C")
    Qt = np.eye(n, dtype=np.float64, order="C")
    status = _core(backend).symmetric_rows(S, Qt, _MAX_SWEEPS, _SYM_THRESH_FACTOR * scale)
    if status < 0:
        raise NumericalFailure(f"Jacobi eigensolver did not converge within {_MAX_SWEEPS} sweeps")
    w = np.diag(S).copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    Q = Qt[order].T.copy() if n else np.zeros((0, 0))
    for j in range(n):
        if _canonicalize_column(Q[:, j]) < 0.0:
            Q[:, j] = -Q[:, j]
    return w, Q


def spectral_norm(a, backend: str | None = None) -> float:
    """Largest singular value (0 for empty matrices)."""
    a = as_matrix(a, "A")
    if min(a.shape) == 0:
        return 0.0
    _, _, norms = _onesided(a, backend)
    return float(norms[0])


def min_singular_value(a, backend: str | None = None) -> float:
    """Smallest singular value of the thin SVD; +inf for empty matrices."""
    a = as_matrix(a, "A")
    k = min(a.shape)
    if k == 0:
        return float("inf")
    _, _, norms = _onesided(a, backend)
    return float(norms[k - 1])


def solve_square(a, b, backend: str | None = None) -> np.ndarray:
    """Solve A @ X = B for square invertible A via the rotation core."""
    a = as_matrix(a, "A")
    b = as_matrix(b, "B")
    n, m = a.shape
    if n != m:
        raise InputError(f"solve_square needs a square matrix, got {a.shape}")
    if b.shape[0] != n:
        raise InputError("right-hand side has incompatible row count")
    if n == 0:
        return np.zeros((0, b.shape[1]))
    U, s, V = svd(a, backend=backend)
    if s[0] == 0.0 or s[-1] <= 64.0 * _EPS * n * s[0]:
        raise NumericalFailure("matrix is numerically singular")
    return V @ ((U.T @ b) / s[:, None])


def clamp(values, lo: float, hi: float) -> np.ndarray:
    """Clamp into a mathematically valid range before inverse trigonometry."""
    return np.clip(np.asarray(values, dtype=np.float64), lo, hi)
