"""Constructive witnesses: complements, symmetries, involutions, graph forms.

Every construction returns a machine-checkable certificate.  Constructions
stated for pairs with dense sum are performed inside Y = M + N and extended by
the canonical orthogonal splitting Y ⊕ Y^perp; a complement of the reduced
problem plus Y^perp is a complement of the original one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernel, relpos
from .errors import (
    InputError,
    InvalidCertificateError,
    InvalidInvolutionError,
    NoComplementError,
    NumericalFailure,
    PreconditionError,
)
from .kernel import DEFAULT_TOLERANCE, TolerancePolicy
from .subspace import Subspace

_CERT_TOL = 1.0e-9


@dataclass(frozen=True)
class ComplementCertificate:
    """Verified evidence that one subspace complements both members of a pair."""

    complement: Subspace
    projection_m_along_k: np.ndarray
    projection_n_along_k: np.ndarray
    min_basis_sv_m: float
    min_basis_sv_n: float
    inverse_residual: float


@dataclass(frozen=True)
class GraphForm:
    """A pair exhibited as two operator graphs over a split of the ambient space.

    ``change_of_basis`` maps ambient coordinates to X1 ⊕ X2 coordinates; the
    image of M is the graph of ``operator_m`` and the image of N the graph of
    ``operator_n`` (both X1 -> X2).
    """

    dim_x1: int
    dim_x2: int
    operator_m: np.ndarray
    operator_n: np.ndarray
    change_of_basis: np.ndarray
    cond_change_of_basis: float


@dataclass(frozen=True)
class InvolutionCertificate:
    """An involution exchanging the pair, with I + S bounded below on M."""

    involution: np.ndarray
    lower_bound: float            # the constructive closed-form constant
    fixed_subspace: Subspace      # ker(S - I)
    negated_subspace: Subspace    # ker(S + I)
    involution_residual: float    # ||S^2 - I||_2
    exchange_residual: float      # subspace distance between S(M) and N
    lower_bound_attained: float   # sigma_min((I + S) B_M), the sharp value


def _check_pair(m: Subspace, n: Subspace):
    if m.ambient_dim != n.ambient_dim:
        raise InputError(f"ambient dimensions differ: {m.ambient_dim} vs {n.ambient_dim}")


def _right_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve X @ A = B for square invertible A."""
    return kernel.solve_square(a.T, b.T).T


def _oblique_projector(range_s: Subspace, kernel_s: Subspace, tol: TolerancePolicy):
    """Idempotent with the given range and kernel, via the block system.

    Returns (P, sigma_min of [B_range | B_kernel], threshold); sigma_min at or
    below the threshold means the two subspaces do not split the ambient space.
    """
    n = range_s.ambient_dim
    block = np.hstack([range_s.basis, kernel_s.basis])
    if block.shape[1] != n:
        raise InputError("range and kernel dimensions do not add up to the ambient dimension")
    if n == 0:
        return np.zeros((0, 0)), float("inf"), 0.0
    u, s, v = kernel.svd(block)
    smin = float(s[-1])
    thr = kernel.rank_threshold(float(s[0]), (n, n), tol)
    if smin <= thr:
        return None, smin, thr
    inv = v @ (u.T / s[:, None])
    proj = range_s.basis @ inv[: range_s.dim, :]
    return proj, smin, thr


def verify_common_complement(m: Subspace, n: Subspace, k: Subspace,
                             tol: TolerancePolicy = DEFAULT_TOLERANCE) -> ComplementCertificate:
    """Check that k complements both m and n and assemble the certificate.

    Raises InvalidCertificateError naming the failed predicate: dimension
    bookkeeping, either direct-sum witness, or the inverse identity between
    the two restricted oblique projections.
    """
    _check_pair(m, n)
    _check_pair(m, k)
    amb = m.ambient_dim
    if m.dim != n.dim:
        raise InvalidCertificateError("equal-dimensions", f"dim M = {m.dim}, dim N = {n.dim}")
    if k.dim != amb - m.dim:
        raise InvalidCertificateError(
            "complement-dimension", f"dim K = {k.dim}, expected {amb - m.dim}"
        )
    proj_m, smin_m, thr = _oblique_projector(m, k, tol)
    if proj_m is None:
        raise InvalidCertificateError(
            "direct-sum-with-m", f"sigma_min([B_M|B_K]) = {smin_m:.3e} <= {thr:.3e}"
        )
    proj_n, smin_n, thr = _oblique_projector(n, k, tol)
    if proj_n is None:
        raise InvalidCertificateError(
            "direct-sum-with-n", f"sigma_min([B_N|B_K]) = {smin_n:.3e} <= {thr:.3e}"
        )
    # P_{M||K}|_N and P_{N||K}|_M in basis coordinates must invert each other.
    into_m = m.basis.T @ (proj_m @ n.basis)
    into_n = n.basis.T @ (proj_n @ m.basis)
    if m.dim:
        resid = kernel.spectral_norm(into_n @ into_m - np.eye(n.dim))
    else:
        resid = 0.0
    if resid > _CERT_TOL:
        raise InvalidCertificateError("inverse-identity", f"residual {resid:.3e}")
    return ComplementCertificate(
        complement=k,
        projection_m_along_k=proj_m,
        projection_n_along_k=proj_n,
        min_basis_sv_m=smin_m,
        min_basis_sv_n=smin_n,
        inverse_residual=resid,
    )


@dataclass(frozen=True)
class _HalmosPieces:
    """Corner subspaces plus matched principal vectors of the generic part."""

    meet: Subspace          # M ∩ N
    m_only: Subspace        # M ∩ N^perp
    n_only: Subspace        # M^perp ∩ N
    p_vectors: np.ndarray   # generic principal vectors in M (columns)
    q_vectors: np.ndarray   # matched principal vectors in N
    cosines: np.ndarray     # their pairwise cosines, strictly inside (0, 1)


def _halmos_pieces(m: Subspace, n: Subspace, tol: TolerancePolicy) -> _HalmosPieces:
    amb = m.ambient_dim
    m_perp = m.orthocomplement()
    n_perp = n.orthocomplement()
    meet = m.intersect(n, tol)
    m_only = m.intersect(n_perp, tol)
    n_only = m_perp.intersect(n, tol)

    strip_m = meet.projector() + m_only.projector()
    generic_m = kernel.orthonormalize(m.basis - strip_m @ m.basis, tol)
    strip_n = meet.projector() + n_only.projector()
    generic_n = kernel.orthonormalize(n.basis - strip_n @ n.basis, tol)
    g = m.dim - meet.dim - m_only.dim
    if generic_m.shape[1] != g or generic_n.shape[1] != n.dim - meet.dim - n_only.dim:
        raise NumericalFailure("generic part dimension drifted from corner bookkeeping")
    if g == 0:
        empty = np.zeros((amb, 0))
        return _HalmosPieces(meet, m_only, n_only, empty, empty, np.zeros(0))
    u, c, v = kernel.svd(generic_m.T @ generic_n)
    c = kernel.clamp(c, 0.0, 1.0)
    if np.any(c >= 1.0 - 1.0e-12) or np.any(c <= 1.0e-12):
        raise NumericalFailure("generic principal cosine collapsed onto 0 or 1")
    return _HalmosPieces(meet, m_only, n_only, generic_m @ u, generic_n @ v, c)


def exchanging_symmetry(m: Subspace, n: Subspace,
                        tol: TolerancePolicy = DEFAULT_TOLERANCE) -> np.ndarray:
    """Orthogonal involution S with S(M) = N and <Sx, x> >= 0 on M.

    Acts as the identity on M ∩ N and on (M + N)^perp, reflects each generic
    principal plane across its bisector, and swaps the matched basis vectors
    of M ∩ N^perp and M^perp ∩ N.  Requires an equivalently positioned pair.
    """
    _check_pair(m, n)
    report = relpos.classify(m, n, tol)
    if not report.equivalently_positioned:
        raise PreconditionError(
            "pair is not equivalently positioned: "
            f"dim(M∩N^perp) = {report.decomposition.dim_m_nperp}, "
            f"dim(M^perp∩N) = {report.decomposition.dim_mperp_n}"
        )
    pieces = _halmos_pieces(m, n, tol)
    amb = m.ambient_dim
    span = m.sum(n, tol)
    sym = np.eye(amb) - span.projector() + pieces.meet.projector()
    for i in range(pieces.cosines.shape[0]):
        p = pieces.p_vectors[:, i]
        q = pieces.q_vectors[:, i]
        bisector = p + q
        bisector /= np.linalg.norm(bisector)
        difference = p - q
        difference /= np.linalg.norm(difference)
        sym += np.outer(bisector, bisector) - np.outer(difference, difference)
    for j in range(pieces.m_only.dim):
        a = pieces.m_only.basis[:, j]
        b = pieces.n_only.basis[:, j]
        sym += np.outer(a, b) + np.outer(b, a)
    return sym


def common_complement(m: Subspace, n: Subspace,
                      tol: TolerancePolicy = DEFAULT_TOLERANCE) -> ComplementCertificate:
    """Construct a common complement: the negated axis of the exchanging
    symmetry inside M + N, extended by (M + N)^perp."""
    _check_pair(m, n)
    if m.dim != n.dim:
        raise NoComplementError(
            f"no common complement exists: dim M = {m.dim} != dim N = {n.dim}"
        )
    amb = m.ambient_dim
    sym = exchanging_symmetry(m, n, tol)
    axis_minus = Subspace(amb, kernel.null_space(sym + np.eye(amb), tol))
    span = m.sum(n, tol)
    k = axis_minus.sum(span.orthocomplement(), tol)
    return verify_common_complement(m, n, k, tol)


def _graph_subspace(operator: np.ndarray) -> Subspace:
    """The graph {(x, Tx)} as a subspace of R^(dim_x1 + dim_x2)."""
    k2, k1 = operator.shape
    stacked = np.vstack([np.eye(k1), operator])
    return Subspace(k1 + k2, kernel.orthonormalize(stacked, DEFAULT_TOLERANCE))


def _validate_graph_form(form: GraphForm, m: Subspace, n: Subspace, tol: TolerancePolicy):
    amb = m.ambient_dim
    image_m = Subspace(amb, kernel.orthonormalize(form.change_of_basis @ m.basis, tol))
    image_n = Subspace(amb, kernel.orthonormalize(form.change_of_basis @ n.basis, tol))
    dist_m = relpos.subspace_distance(image_m, _graph_subspace(form.operator_m))
    dist_n = relpos.subspace_distance(image_n, _graph_subspace(form.operator_n))
    if max(dist_m, dist_n) > _CERT_TOL:
        raise NumericalFailure(
            f"graph form invariant violated: distances ({dist_m:.3e}, {dist_n:.3e})"
        )


def graph_pair_form(m: Subspace, n: Subspace, k: Subspace,
                    tol: TolerancePolicy = DEFAULT_TOLERANCE) -> GraphForm:
    """Exhibit the pair as graphs over X1 = K^perp, X2 = K (isometric form).

    With the orthogonal splitting the change of basis is an isometry; the
    operators are read off from the invertible compressions of M and N onto
    K^perp.
    """
    verify_common_complement(m, n, k, tol)
    x1 = k.orthocomplement()
    b1, b2 = x1.basis, k.basis
    g1 = b1.T @ m.basis   # invertible since K complements M
    g2 = b1.T @ n.basis
    op_m = _right_solve(g1, b2.T @ m.basis) if m.dim else np.zeros((k.dim, 0))
    op_n = _right_solve(g2, b2.T @ n.basis) if n.dim else np.zeros((k.dim, 0))
    u = np.vstack([b1.T, b2.T])
    _, s, _ = kernel.svd(u)
    cond = float(s[0] / s[-1]) if s.size else 1.0
    form = GraphForm(x1.dim, k.dim, op_m, op_n, u, cond)
    _validate_graph_form(form, m, n, tol)
    return form


def zero_graph_form(m: Subspace, n: Subspace,
                    tol: TolerancePolicy = DEFAULT_TOLERANCE,
                    complement: Subspace | None = None) -> GraphForm:
    """Graph form sending M to X1 ⊕ {0} (operator_m = 0), over X1 = M, X2 = K.

    The oblique projection onto M along K plays the role of the compression;
    the change of basis is the inverse of [B_M | B_K] and need not be
    isometric.
    """
    _check_pair(m, n)
    if m.dim != n.dim:
        raise NoComplementError(
            f"no common complement exists: dim M = {m.dim} != dim N = {n.dim}"
        )
    if complement is None:
        cert = common_complement(m, n, tol)
    else:
        cert = verify_common_complement(m, n, complement, tol)
    k = cert.complement
    amb = m.ambient_dim
    block = np.hstack([m.basis, k.basis])
    u_blk, s_blk, v_blk = kernel.svd(block)
    u = v_blk @ (u_blk.T / s_blk[:, None]) if amb else np.zeros((0, 0))
    cond = float(s_blk[0] / s_blk[-1]) if s_blk.size else 1.0
    g2 = m.basis.T @ (cert.projection_m_along_k @ n.basis)
    if m.dim:
        op_n = _right_solve(g2, k.basis.T @ n.basis) - k.basis.T @ m.basis
    else:
        op_n = np.zeros((k.dim, 0))
    op_m = np.zeros((k.dim, m.dim))
    form = GraphForm(m.dim, k.dim, op_m, op_n, u, cond)
    _validate_graph_form(form, m, n, tol)
    return form


def antisymmetric_graph_form(m: Subspace, n: Subspace,
                             tol: TolerancePolicy = DEFAULT_TOLERANCE,
                             complement: Subspace | None = None) -> GraphForm:
    """Graph form with operator_m = -operator_n, obtained by shearing the
    zero form so the pair becomes {Gr(-T), Gr(T)} with T half the zero-form
    operator."""
    base = zero_graph_form(m, n, tol, complement)
    half = base.operator_n / 2.0
    k1, k2 = base.dim_x1, base.dim_x2
    shear = np.eye(k1 + k2)
    shear[k1:, :k1] = -half
    u = shear @ base.change_of_basis
    _, s, _ = kernel.svd(u)
    cond = float(s[0] / s[-1]) if s.size else 1.0
    form = GraphForm(k1, k2, -half, half, u, cond)
    _validate_graph_form(form, m, n, tol)
    return form


def _restrict(sub: Subspace, span: Subspace, tol: TolerancePolicy) -> Subspace:
    """Coordinates of a subspace of ``span`` in the basis of ``span``."""
    coords = kernel.orthonormalize(span.basis.T @ sub.basis, tol)
    if coords.shape[1] != sub.dim:
        raise NumericalFailure("subspace lost rank when restricted to the span of the pair")
    return Subspace(span.dim, coords)


def involution_for_pair(m: Subspace, n: Subspace,
                        tol: TolerancePolicy = DEFAULT_TOLERANCE,
                        complement: Subspace | None = None) -> InvolutionCertificate:
    """Involution S with S(M) = N and ||x + Sx|| >= C ||x|| on M.

    Built as U^-1 diag(I, -I) U from the antisymmetric graph form inside
    Y = M + N, extended by the identity on Y^perp.  The reported lower bound
    is the closed-form constant 2 / (cond(U) (1 + ||T||)); the attained value
    sigma_min((I + S) B_M) is the sharp one and dominates it.
    """
    _check_pair(m, n)
    if m.dim != n.dim:
        raise NoComplementError(
            f"no common complement exists: dim M = {m.dim} != dim N = {n.dim}"
        )
    amb = m.ambient_dim
    span = m.sum(n, tol)
    m_inner = _restrict(m, span, tol)
    n_inner = _restrict(n, span, tol)
    if complement is not None:
        if not span.contains_subspace(complement, tol):
            raise PreconditionError("supplied complement must lie inside M + N")
        complement = _restrict(complement, span, tol)
    form = antisymmetric_graph_form(m_inner, n_inner, tol, complement)
    k1, k2 = form.dim_x1, form.dim_x2
    signs = np.diag(np.concatenate([np.ones(k1), -np.ones(k2)])) if k1 + k2 else np.zeros((0, 0))
    inner = kernel.solve_square(form.change_of_basis, signs @ form.change_of_basis)
    basis_y = span.basis
    sym = basis_y @ inner @ basis_y.T + (np.eye(amb) - basis_y @ basis_y.T)

    norm_t = kernel.spectral_norm(form.operator_m)
    bound = 2.0 / (form.cond_change_of_basis * (1.0 + norm_t))

    involution_residual = kernel.spectral_norm(sym @ sym - np.eye(amb))
    image = Subspace(amb, kernel.orthonormalize(sym @ m.basis, tol))
    exchange_residual = relpos.subspace_distance(image, n) if image.dim == n.dim else math.pi / 2
    attained = kernel.min_singular_value((np.eye(amb) + sym) @ m.basis) if m.dim else float("inf")

    fixed = Subspace(amb, kernel.null_space(sym - np.eye(amb), tol))
    negated = Subspace(amb, kernel.null_space(sym + np.eye(amb), tol))

    problems = []
    if involution_residual > _CERT_TOL:
        problems.append(f"involution residual {involution_residual:.3e}")
    if exchange_residual > _CERT_TOL:
        problems.append(f"exchange residual {exchange_residual:.3e}")
    if m.dim and attained < bound - _CERT_TOL:
        problems.append(f"attained bound {attained:.3e} below constant {bound:.3e}")
    if fixed.dim + negated.dim != amb:
        problems.append(f"eigenspace dimensions {fixed.dim}+{negated.dim} != {amb}")
    else:
        half_proj, smin, thr = _oblique_projector(fixed, negated, tol)
        if half_proj is None:
            problems.append(f"eigenspaces do not split the space (sigma_min {smin:.3e})")
        elif kernel.spectral_norm(half_proj - (np.eye(amb) + sym) / 2.0) > _CERT_TOL:
            problems.append("projection onto the fixed space differs from (I + S)/2")
    if problems:
        raise NumericalFailure("involution construction failed checks: " + "; ".join(problems))

    return InvolutionCertificate(
        involution=sym,
        lower_bound=bound,
        fixed_subspace=fixed,
        negated_subspace=negated,
        involution_residual=involution_residual,
        exchange_residual=exchange_residual,
        lower_bound_attained=attained,
    )


def complement_from_involution(m: Subspace, n: Subspace, involution,
                               tol: TolerancePolicy = DEFAULT_TOLERANCE) -> ComplementCertificate:
    """Recover a common complement from an exchanging involution.

    K is ker(S + I) intersected with Y = M + N, extended by Y^perp.  The
    involution identity, the exchange property, and the lower bound on M are
    preconditions; failures raise InvalidInvolutionError naming the predicate.
    """
    _check_pair(m, n)
    amb = m.ambient_dim
    s = kernel.as_matrix(involution, "involution")
    if s.shape != (amb, amb):
        raise InputError(f"involution must be {amb}x{amb}, got {s.shape}")
    smax = kernel.spectral_norm(s)
    identity_residual = kernel.spectral_norm(s @ s - np.eye(amb))
    if identity_residual > tol.subspace_tol * (1.0 + smax) ** 2:
        raise InvalidInvolutionError("involution-identity", f"||S^2 - I|| = {identity_residual:.3e}")
    image_basis = kernel.orthonormalize(s @ m.basis, tol)
    if image_basis.shape[1] != m.dim or not Subspace(amb, image_basis).equals(n, tol):
        raise InvalidInvolutionError("exchanges-subspaces", "S(M) != N")
    if m.dim:
        shifted = (np.eye(amb) + s) @ m.basis
        u_s, sv, _ = kernel.svd(shifted)
        thr = kernel.rank_threshold(float(sv[0]) if sv.size else 0.0, shifted.shape, tol)
        if float(sv[-1]) <= thr:
            raise InvalidInvolutionError(
                "bounded-below-on-union", f"sigma_min((I+S)B_M) = {float(sv[-1]):.3e}"
            )
    span = m.sum(n, tol)
    negated = Subspace(amb, kernel.null_space(s + np.eye(amb), tol))
    core = negated.intersect(span, tol)
    k = core.sum(span.orthocomplement(), tol)
    try:
        return verify_common_complement(m, n, k, tol)
    except InvalidCertificateError as exc:
        raise InvalidInvolutionError(exc.predicate, str(exc)) from exc


def projection_from_isomorphism(m: Subspace, n: Subspace, iso_map, bound: float,
                                tol: TolerancePolicy = DEFAULT_TOLERANCE) -> ComplementCertificate:
    """Common complement from an isomorphism U: M -> N fixing M ∩ N with
    ||Ux + y|| <= bound ||x + y||.

    The bounded projection z = x + y -> Ux + y onto N is assembled on
    Y = M + N; its kernel, extended by Y^perp, is the complement.
    """
    _check_pair(m, n)
    amb = m.ambient_dim
    u_map = kernel.as_matrix(iso_map, "isomorphism")
    if u_map.shape != (amb, amb):
        raise InputError(f"isomorphism matrix must be {amb}x{amb}, got {u_map.shape}")
    image = u_map @ m.basis
    image_basis = kernel.orthonormalize(image, tol)
    if image_basis.shape[1] != m.dim or m.dim != n.dim \
            or not Subspace(amb, image_basis).equals(n, tol):
        raise PreconditionError("map does not send M onto N invertibly")
    meet = m.intersect(n, tol)
    if meet.dim:
        fix_residual = kernel.spectral_norm(u_map @ meet.basis - meet.basis)
        if fix_residual > _CERT_TOL * (1.0 + kernel.spectral_norm(u_map)):
            raise PreconditionError(
                f"map does not fix M ∩ N pointwise (residual {fix_residual:.3e})"
            )
    span = m.sum(n, tol)
    block = np.hstack([m.basis, n.basis])
    if block.shape[1]:
        u_b, s_b, v_b = kernel.svd(block)
        thr = kernel.rank_threshold(float(s_b[0]), block.shape, tol)
        rank = int(np.count_nonzero(s_b > thr))
        pinv = v_b[:, :rank] @ (u_b[:, :rank].T / s_b[:rank, None])
        proj = np.hstack([u_map @ m.basis, n.basis]) @ pinv
    else:
        proj = np.zeros((amb, amb))
    if span.dim:
        norm_on_span = kernel.spectral_norm(proj @ span.basis)
        if norm_on_span > bound * (1.0 + _CERT_TOL):
            raise PreconditionError(
                f"operator norm {norm_on_span:.6e} exceeds the stated bound {bound}"
            )
    k = Subspace(amb, kernel.null_space(proj, tol))
    return verify_common_complement(m, n, k, tol)


def orthocomplement_common_complement(m: Subspace, n: Subspace,
                                      tol: TolerancePolicy = DEFAULT_TOLERANCE):
    """Does M^perp complement both M and N?  (holds, graph form over K = M^perp).

    Holds exactly when the dimensions agree and M^perp ∩ N = {0}, i.e. the
    largest principal angle is strictly below a right angle.  The returned
    form has operator_m = 0; the matching contraction form must then have
    I - T T^T onto, which is asserted.
    """
    _check_pair(m, n)
    m_perp = m.orthocomplement()
    holds = m.dim == n.dim and m_perp.intersect(n, tol).dim == 0
    if not holds:
        return False, None
    form = graph_pair_form(m, n, m_perp, tol)
    _, margin = contraction_graph_form(m, n, tol)
    if margin <= kernel.rank_threshold(1.0, (m.dim, m.dim), tol):
        raise NumericalFailure(
            f"surjectivity margin {margin:.3e} vanished although M^perp complements the pair"
        )
    return True, form


def contraction_graph_form(m: Subspace, n: Subspace,
                           tol: TolerancePolicy = DEFAULT_TOLERANCE):
    """Unitary graph form {Gr(-T), Gr(T)} with T a contraction.

    X1 collects the generic half-angle directions, the corner bisectors, and
    M ∩ N; X2 the complementary in-plane directions and (M + N)^perp.  The
    contraction is diagonal: tan(theta/2) on generic angles and 1 on the
    matched right-angle corners.  Returns (form, injectivity margin of
    I - T^T T); the margin is positive exactly in position p'.
    """
    _check_pair(m, n)
    report = relpos.classify(m, n, tol)
    if not report.equivalently_positioned:
        raise PreconditionError("contraction form requires an equivalently positioned pair")
    pieces = _halmos_pieces(m, n, tol)
    amb = m.ambient_dim
    span = m.sum(n, tol)
    residual = span.orthocomplement()
    g = pieces.cosines.shape[0]
    t = pieces.m_only.dim

    rows_x1 = []
    rows_x2 = []
    diag = []
    for i in range(g):
        p = pieces.p_vectors[:, i]
        q = pieces.q_vectors[:, i]
        bisector = p + q
        bisector /= np.linalg.norm(bisector)
        across = q - p
        across /= np.linalg.norm(across)
        rows_x1.append(bisector)
        rows_x2.append(across)
        c = float(pieces.cosines[i])
        diag.append(math.sqrt((1.0 - c) / (1.0 + c)))  # tan of the half angle
    for j in range(t):
        a = pieces.m_only.basis[:, j]
        b = pieces.n_only.basis[:, j]
        rows_x1.append((a + b) / math.sqrt(2.0))
        rows_x2.append((b - a) / math.sqrt(2.0))
        diag.append(1.0)

    k1 = g + t + pieces.meet.dim
    k2 = g + t + residual.dim
    u_rows = []
    u_rows.extend(rows_x1)
    u_rows.extend(pieces.meet.basis.T)
    u_rows.extend(rows_x2)
    u_rows.extend(residual.basis.T)
    u = np.vstack(u_rows) if u_rows else np.zeros((0, amb))

    contraction = np.zeros((k2, k1))
    for i, value in enumerate(diag):
        contraction[i, i] = value

    _, s, _ = kernel.svd(u)
    cond = float(s[0] / s[-1]) if s.size else 1.0
    if abs(cond - 1.0) > _CERT_TOL:
        raise NumericalFailure(f"contraction form change of basis is not unitary (cond {cond})")
    form = GraphForm(k1, k2, -contraction, contraction, u, cond)
    _validate_graph_form(form, m, n, tol)
    margin = 1.0 - max(diag) ** 2 if diag else 1.0
    return form, margin


def reduce_pair(m: Subspace, n: Subspace, tol: TolerancePolicy = DEFAULT_TOLERANCE):
    """Strip the common part: (M1, N1, L) with L = M ∩ N and trivial M1 ∩ N1.

    The reduced pair has a common complement exactly when the original does.
    """
    _check_pair(m, n)
    meet = m.intersect(n, tol)
    proj = meet.projector()
    m1 = Subspace(m.ambient_dim, kernel.orthonormalize(m.basis - proj @ m.basis, tol))
    n1 = Subspace(m.ambient_dim, kernel.orthonormalize(n.basis - proj @ n.basis, tol))
    if m1.dim != m.dim - meet.dim or n1.dim != n.dim - meet.dim:
        raise NumericalFailure("reduction changed dimensions inconsistently")
    return m1, n1, meet


def closed_companion(m: Subspace, n: Subspace, k: Subspace, m1: Subspace,
                     tol: TolerancePolicy = DEFAULT_TOLERANCE):
    """Companion subspace of N for a subspace M1 of M, with a closedness constant.

    With U the isomorphism P_{M||K}|_N, returns N1 = U^-1(M ⊖ M1) and the
    constant C' = min(1/||U^-1||, 1) / (sqrt(2) C); the bound
    ||x + y|| >= C' (||x|| + ||y||) on M1 x N1 is verified through the exact
    angle characterization sin(theta_min / 2) >= C'.
    """
    _check_pair(m, n)
    _check_pair(m, m1)
    cert = verify_common_complement(m, n, k, tol)
    if not m.contains_subspace(m1, tol):
        raise PreconditionError("M1 must be a subspace of M")
    amb = m.ambient_dim
    m2 = Subspace(amb, kernel.orthonormalize(m.basis - m1.projector() @ m.basis, tol))
    if m2.dim != m.dim - m1.dim:
        raise NumericalFailure("orthogonal complement of M1 inside M has wrong dimension")
    n1 = Subspace(amb, kernel.orthonormalize(cert.projection_n_along_k @ m2.basis, tol))
    if n1.dim != m2.dim:
        raise NumericalFailure("companion subspace lost rank under the inverse isomorphism")
    c_bound = kernel.spectral_norm(cert.projection_m_along_k)
    norm_inverse = kernel.spectral_norm(cert.projection_n_along_k @ m.basis) if m.dim else 0.0
    factor = min(1.0 / norm_inverse, 1.0) if norm_inverse > 0.0 else 1.0
    c_prime = factor / (math.sqrt(2.0) * c_bound) if c_bound > 0.0 else factor / math.sqrt(2.0)
    if m1.dim and n1.dim:
        theta_min = relpos.principal_angles(m1, n1)[0]
        attained = math.sin(theta_min / 2.0)
        if attained < c_prime - 1.0e-12:
            raise NumericalFailure(
                f"companion inequality violated: sin(theta/2) = {attained:.3e} < C' = {c_prime:.3e}"
            )
    return n1, c_prime
