"""Relative position of a subspace pair and the common-complement decision.

The pair is analyzed through its four corner intersections and its principal
angles; the master decision cross-checks four criteria that are equivalent in
finite dimensions (dimension equality, corner equality, a spectral count, and
cone codimensions) and treats any disagreement as a numerical failure rather
than voting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernel
from .errors import InputError, NumericalFailure
from .kernel import DEFAULT_TOLERANCE, TolerancePolicy
from .subspace import Subspace

HALF_PI = math.pi / 2.0


@dataclass(frozen=True)
class PairDecomposition:
    """Corner dimensions, principal angles, and the squared-cosine spectrum."""

    dim_mn: int            # dim(M ∩ N)
    dim_m_nperp: int       # dim(M ∩ N^perp)
    dim_mperp_n: int       # dim(M^perp ∩ N)
    dim_mperp_nperp: int   # dim(M^perp ∩ N^perp)
    generic_mult: int      # angles strictly inside (0, pi/2)
    angles: tuple          # ascending, length dim M (right angles pad the tail)
    gram_spectrum: tuple   # descending, length dim M, equals cos^2 of angles


@dataclass(frozen=True)
class PositionReport:
    decomposition: PairDecomposition
    generic_position: bool
    generalized_generic: bool
    position_p_prime: bool
    equivalently_positioned: bool
    dims_equal: bool
    reduced_dims_equal: bool


@dataclass(frozen=True)
class ConeReport:
    """Maximal linear subspaces inside the distance cones and their codimensions."""

    epsilon: float
    max_subspace_dim_m: int
    max_subspace_dim_n: int
    ulc_m: int
    ulc_n: int


@dataclass(frozen=True)
class SpectralCountCheck:
    """Corner dimensions balanced against the interior spectral count."""

    holds: bool
    left_count: int
    right_count: int
    spectral_count: int


@dataclass(frozen=True)
class DecisionReport:
    decision: bool
    epsilon: float
    dims_equal: bool
    equivalently_positioned: bool
    spectral_check: SpectralCountCheck
    cone: ConeReport
    reduced_dims_equal: bool
    decomposition: PairDecomposition


def _check_pair(m: Subspace, n: Subspace):
    if m.ambient_dim != n.ambient_dim:
        raise InputError(f"ambient dimensions differ: {m.ambient_dim} vs {n.ambient_dim}")


def _sines(m: Subspace, n: Subspace) -> np.ndarray:
    """Ascending sines of the angles of m against n, padded to dim m."""
    if m.dim == 0:
        return np.zeros(0)
    if n.dim == 0:
        return np.ones(m.dim)
    resid = m.basis - n.basis @ (n.basis.T @ m.basis)
    _, s, _ = kernel.svd(resid)
    return kernel.clamp(s[::-1], 0.0, 1.0)


def _cosines(m: Subspace, n: Subspace) -> np.ndarray:
    """Descending cosines of the cross principal angles, length min(dims)."""
    if min(m.dim, n.dim) == 0:
        return np.zeros(0)
    _, c, _ = kernel.svd(m.basis.T @ n.basis)
    return kernel.clamp(c, 0.0, 1.0)


def _merged_angles(cosines: np.ndarray, sines: np.ndarray, dim_m: int) -> np.ndarray:
    """Merge cosine- and sine-side spectra at the crossover cos^2 = 1/2.

    Small angles are resolved by their sines, large angles by their cosines;
    indices beyond the cross spectrum are exact right angles.
    """
    k = cosines.shape[0]
    angles = np.empty(dim_m)
    for i in range(dim_m):
        if i >= k:
            angles[i] = HALF_PI
        elif cosines[i] * cosines[i] > 0.5:
            angles[i] = math.asin(min(sines[i], 1.0))
        else:
            angles[i] = math.acos(cosines[i])
    angles.sort()
    return angles


def principal_angles(m: Subspace, n: Subspace) -> tuple:
    """Ascending principal angles of the pair, length min(dim m, dim n)."""
    _check_pair(m, n)
    k = min(m.dim, n.dim)
    angles = _merged_angles(_cosines(m, n), _sines(m, n), m.dim)
    return tuple(angles[:k])


def principal_angles_m_sided(m: Subspace, n: Subspace) -> tuple:
    """Ascending angle multiset padded with right angles to length dim m."""
    _check_pair(m, n)
    return tuple(_merged_angles(_cosines(m, n), _sines(m, n), m.dim))


def subspace_distance(m: Subspace, n: Subspace) -> float:
    """Largest principal angle between two equal-dimensional subspaces."""
    _check_pair(m, n)
    if m.dim != n.dim:
        raise InputError(f"subspace distance needs equal dimensions, got {m.dim} vs {n.dim}")
    if m.dim == 0:
        return 0.0
    s = _sines(m, n)
    return math.asin(min(float(s[-1]), 1.0))


@dataclass(frozen=True)
class _PairAnalysis:
    """Everything derivable from one pass over a pair, shared by the checks."""

    m: Subspace
    n: Subspace
    decomposition: PairDecomposition
    sines_m: np.ndarray   # ascending, length dim M
    sines_n: np.ndarray   # ascending, length dim N


def _analyze(m: Subspace, n: Subspace, tol: TolerancePolicy) -> _PairAnalysis:
    _check_pair(m, n)
    n_amb = m.ambient_dim
    m_perp = m.orthocomplement()
    n_perp = n.orthocomplement()
    corner_mn = m.intersect(n, tol).dim
    corner_m_np = m.intersect(n_perp, tol).dim
    corner_mp_n = m_perp.intersect(n, tol).dim
    corner_mp_np = m_perp.intersect(n_perp, tol).dim

    cosines = _cosines(m, n)
    sines_m = _sines(m, n)
    sines_n = _sines(n, m)
    angles = _merged_angles(cosines, sines_m, m.dim)

    zeros = int(np.count_nonzero(angles <= tol.angle_tol))
    rights = int(np.count_nonzero(angles >= HALF_PI - tol.angle_tol))
    generic = m.dim - zeros - rights

    problems = []
    if zeros != corner_mn:
        problems.append(f"zero angles {zeros} != dim(M∩N) {corner_mn}")
    if rights != corner_m_np:
        problems.append(f"right angles {rights} != dim(M∩N^perp) {corner_m_np}")
    if corner_mn + corner_mp_n + generic != n.dim:
        problems.append("N-side dimension identity violated")
    if corner_mn + corner_m_np + corner_mp_n + corner_mp_np + 2 * generic != n_amb:
        problems.append("ambient dimension count violated")
    if problems:
        raise NumericalFailure("pair decomposition inconsistent: " + "; ".join(problems))

    cos_padded = np.zeros(m.dim)
    cos_padded[: cosines.shape[0]] = cosines
    gram = tuple(float(c * c) for c in cos_padded)

    dec = PairDecomposition(
        dim_mn=corner_mn,
        dim_m_nperp=corner_m_np,
        dim_mperp_n=corner_mp_n,
        dim_mperp_nperp=corner_mp_np,
        generic_mult=generic,
        angles=tuple(float(a) for a in angles),
        gram_spectrum=gram,
    )
    return _PairAnalysis(m, n, dec, sines_m, sines_n)


def pair_decomposition(m: Subspace, n: Subspace,
                       tol: TolerancePolicy = DEFAULT_TOLERANCE) -> PairDecomposition:
    """Corner dimensions and angle multiset of the pair, consistency-checked."""
    return _analyze(m, n, tol).decomposition


def _report_from(dec: PairDecomposition, dim_m: int, dim_n: int) -> PositionReport:
    equivalently = dec.dim_m_nperp == dec.dim_mperp_n
    return PositionReport(
        decomposition=dec,
        generic_position=(dec.dim_mn == 0 and dec.dim_m_nperp == 0
                          and dec.dim_mperp_n == 0 and dec.dim_mperp_nperp == 0),
        generalized_generic=(dec.dim_mn == 0 and dec.dim_mperp_nperp == 0 and equivalently),
        position_p_prime=(dec.dim_m_nperp == 0 and dec.dim_mperp_n == 0),
        equivalently_positioned=equivalently,
        dims_equal=(dim_m == dim_n),
        reduced_dims_equal=(dim_m - dec.dim_mn == dim_n - dec.dim_mn),
    )


def classify(m: Subspace, n: Subspace, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> PositionReport:
    """Position flags of the pair (generic, p', equivalently positioned, ...)."""
    analysis = _analyze(m, n, tol)
    return _report_from(analysis.decomposition, m.dim, n.dim)


def _margin_from_sines(sines_m: np.ndarray, angles: tuple, tol: TolerancePolicy) -> float:
    zeros = sum(1 for a in angles if a <= tol.angle_tol)
    if zeros >= len(angles):
        return 1.0
    return min(float(sines_m[zeros]), 1.0)


def sum_closedness_margin(m: Subspace, n: Subspace,
                          tol: TolerancePolicy = DEFAULT_TOLERANCE) -> float:
    """Smallest sine of a strictly positive principal angle (1 if there is none).

    Finite-dimensional sums are always closed; this margin is the quantitative
    surrogate that the truncated examples track as it decays to zero.
    """
    analysis = _analyze(m, n, tol)
    return _margin_from_sines(analysis.sines_m, analysis.decomposition.angles, tol)


def default_epsilon(m: Subspace, n: Subspace, tol: TolerancePolicy = DEFAULT_TOLERANCE) -> float:
    """Half the closedness margin, capped at 1/2: below every spectral gap."""
    analysis = _analyze(m, n, tol)
    return _default_epsilon(analysis, tol)


def _default_epsilon(analysis: _PairAnalysis, tol: TolerancePolicy) -> float:
    margin = _margin_from_sines(analysis.sines_m, analysis.decomposition.angles, tol)
    return min(0.5, 0.5 * margin)


def _check_epsilon(epsilon: float):
    if not (0.0 < epsilon < 1.0):
        raise InputError(f"epsilon must lie strictly inside (0, 1), got {epsilon!r}")


def _spectral_check(analysis: _PairAnalysis, epsilon: float, tol: TolerancePolicy) -> SpectralCountCheck:
    dec = analysis.decomposition
    lam = np.asarray(dec.gram_spectrum)
    if lam.size:
        delta0 = kernel.rank_threshold(float(lam[0]), (analysis.m.dim, analysis.n.dim), tol)
        upper = 1.0 - epsilon - tol.rank_abs
        count = int(np.count_nonzero((lam > delta0) & (lam < upper)))
    else:
        count = 0
    left = dec.dim_m_nperp + count
    right = dec.dim_mperp_n + count
    return SpectralCountCheck(left == right, left, right, count)


def spectral_count_check(m: Subspace, n: Subspace, epsilon: float,
                         tol: TolerancePolicy = DEFAULT_TOLERANCE) -> SpectralCountCheck:
    """Balance the off-corner dimensions against the spectrum strictly inside
    (rank threshold, 1 - epsilon).

    Finite-dimensionally the interior count appears on both sides, so the check
    holds exactly when the pair is equivalently positioned; with infinite
    interior multiplicity both sides would saturate, which cannot happen here.
    """
    _check_epsilon(epsilon)
    return _spectral_check(_analyze(m, n, tol), epsilon, tol)


def _cone_report(analysis: _PairAnalysis, epsilon: float) -> ConeReport:
    count_m = int(np.count_nonzero(analysis.sines_m <= epsilon))
    count_n = int(np.count_nonzero(analysis.sines_n <= epsilon))
    return ConeReport(
        epsilon=epsilon,
        max_subspace_dim_m=count_m,
        max_subspace_dim_n=count_n,
        ulc_m=analysis.m.dim - count_m,
        ulc_n=analysis.n.dim - count_n,
    )


def cone_report(m: Subspace, n: Subspace, epsilon: float,
                tol: TolerancePolicy = DEFAULT_TOLERANCE) -> ConeReport:
    """Largest linear subspace of each space inside its epsilon distance cone.

    By the min-max characterization of x -> ||x - P_other x||^2 the maximal
    dimension equals the count of principal angles with sine at most epsilon;
    the upper linear codimension is dim minus that count.
    """
    _check_epsilon(epsilon)
    return _cone_report(_analyze(m, n, tol), epsilon)


def cone_maximal_subspace(m: Subspace, n: Subspace, epsilon: float,
                          tol: TolerancePolicy = DEFAULT_TOLERANCE) -> Subspace:
    """A subspace of m inside the cone attaining the maximal dimension."""
    _check_epsilon(epsilon)
    _check_pair(m, n)
    if m.dim == 0:
        return Subspace.zero(m.ambient_dim)
    if n.dim == 0:
        return Subspace.zero(m.ambient_dim)
    resid = m.basis - n.basis @ (n.basis.T @ m.basis)
    _, s, v = kernel.svd(resid)
    keep = s <= epsilon  # descending, so the kept block is the tail
    return Subspace(m.ambient_dim, m.basis @ v[:, keep])


def has_common_complement(m: Subspace, n: Subspace,
                          tol: TolerancePolicy = DEFAULT_TOLERANCE,
                          epsilon: float | None = None) -> DecisionReport:
    """Master decision: equal dimensions, cross-checked four independent ways.

    The dimension test, corner-dimension equality, the spectral count, and the
    cone codimension equality are all equivalent here; any disagreement is a
    tolerance bug and raises NumericalFailure instead of being voted away.
    """
    analysis = _analyze(m, n, tol)
    if epsilon is None:
        epsilon = _default_epsilon(analysis, tol)
    else:
        _check_epsilon(epsilon)

    dec = analysis.decomposition
    report = _report_from(dec, m.dim, n.dim)
    spectral = _spectral_check(analysis, epsilon, tol)
    cone = _cone_report(analysis, epsilon)

    decision = m.dim == n.dim
    checks = {
        "equivalently_positioned": report.equivalently_positioned,
        "spectral_count": spectral.holds,
        "cone_codimensions": cone.ulc_m == cone.ulc_n,
        "reduced_dimensions": report.reduced_dims_equal,
    }
    disagreements = {name: value for name, value in checks.items() if value != decision}
    if disagreements:
        raise NumericalFailure(
            f"decision cross-checks disagree with dimension test ({decision}): {disagreements}; "
            f"corners=({dec.dim_mn},{dec.dim_m_nperp},{dec.dim_mperp_n},{dec.dim_mperp_nperp}) "
            f"epsilon={epsilon}"
        )
    return DecisionReport(
        decision=decision,
        epsilon=epsilon,
        dims_equal=decision,
        equivalently_positioned=report.equivalently_positioned,
        spectral_check=spectral,
        cone=cone,
        reduced_dims_equal=report.reduced_dims_equal,
        decomposition=dec,
    )
