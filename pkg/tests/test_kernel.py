import math

import numpy as np
import pytest

from subcomp import kernel
from subcomp.errors import InputError, NumericalFailure, PreconditionError
from subcomp.kernel import DEFAULT_TOLERANCE, TolerancePolicy

BACKENDS = kernel.available_backends()


def test_compiled_backend_is_active_when_built():
    # the build in this repository compiles the extension; the fallback stays importable
    assert "python" in BACKENDS
    if "compiled" in BACKENDS:
        assert kernel.active_backend() == "compiled"


@pytest.mark.parametrize("backend", BACKENDS)
class TestSvd:
    def test_diagonal(self, backend):
        _, s, _ = kernel.svd(np.diag([3.0, 2.0]), backend=backend)
        assert np.allclose(s, [3.0, 2.0], atol=1e-14)

    def test_permutation(self, backend):
        _, s, _ = kernel.svd([[0.0, 1.0], [1.0, 0.0]], backend=backend)
        assert np.allclose(s, [1.0, 1.0], atol=1e-14)

    def test_rank_one(self, backend):
        # A^T A = [[1,1],[1,1]] has eigenvalues 2 and 0
        _, s, _ = kernel.svd([[1.0, 1.0], [0.0, 0.0]], backend=backend)
        assert np.allclose(s, [math.sqrt(2.0), 0.0], atol=1e-14)

    def test_reconstruction_population(self, backend):
        rng = np.random.default_rng(101)
        for trial in range(1000):
            m = int(rng.integers(1, 13))
            n = int(rng.integers(1, 13))
            a = rng.standard_normal((m, n))
            if trial % 4 == 0:
                r = int(rng.integers(0, min(m, n) + 1))
                a = (rng.standard_normal((m, r)) @ rng.standard_normal((r, n))
                     if r else np.zeros((m, n)))
            u, s, v = kernel.svd(a, backend=backend)
            bound = 1e-12 * (1.0 + np.linalg.norm(a, 2))
            assert np.max(np.abs(a - u @ np.diag(s) @ v.T)) <= bound
            assert np.max(np.abs(u.T @ u - np.eye(u.shape[1]))) <= 1e-12
            assert np.max(np.abs(v.T @ v - np.eye(v.shape[1]))) <= 1e-12
            assert np.all(np.diff(s) <= 0.0)

    def test_values_match_lapack(self, backend):
        rng = np.random.default_rng(55)
        for _ in range(50):
            a = rng.standard_normal((int(rng.integers(1, 10)), int(rng.integers(1, 10))))
            _, s, _ = kernel.svd(a, backend=backend)
            expected = np.linalg.svd(a, compute_uv=False)
            assert np.allclose(s, expected, atol=1e-12 * (1 + expected[0]))

    def test_empty_shapes(self, backend):
        u, s, v = kernel.svd(np.zeros((3, 0)), backend=backend)
        assert u.shape == (3, 0) and s.shape == (0,) and v.shape == (0, 0)
        u, s, v = kernel.svd(np.zeros((0, 3)), backend=backend)
        assert u.shape == (0, 0) and s.shape == (0,) and v.shape == (3, 0)

    def test_rejects_nonfinite(self, backend):
        with pytest.raises(InputError):
            kernel.svd([[np.nan, 0.0], [0.0, 1.0]], backend=backend)
        with pytest.raises(InputError):
            kernel.svd([[np.inf, 0.0]], backend=backend)


@pytest.mark.parametrize("backend", BACKENDS)
class TestSymEig:
    def test_diagonal(self, backend):
        w, _ = kernel.sym_eig(np.diag([2.0, 5.0]), backend=backend)
        assert np.allclose(w, [2.0, 5.0], atol=1e-14)

    def test_swap(self, backend):
        w, _ = kernel.sym_eig([[0.0, 1.0], [1.0, 0.0]], backend=backend)
        assert np.allclose(w, [-1.0, 1.0], atol=1e-14)

    def test_two_by_two(self, backend):
        # characteristic polynomial (2-l)^2 - 1 has roots 1 and 3
        w, q = kernel.sym_eig([[2.0, 1.0], [1.0, 2.0]], backend=backend)
        assert np.allclose(w, [1.0, 3.0], atol=1e-14)
        assert np.allclose(q.T @ q, np.eye(2), atol=1e-14)

    def test_residual_population(self, backend):
        rng = np.random.default_rng(202)
        for _ in range(300):
            n = int(rng.integers(1, 13))
            a = rng.standard_normal((n, n))
            a = (a + a.T) / 2.0
            w, q = kernel.sym_eig(a, backend=backend)
            bound = 1e-10 * (1.0 + np.linalg.norm(a, 2))
            assert np.max(np.abs(a @ q - q @ np.diag(w))) <= bound
            assert np.max(np.abs(q.T @ q - np.eye(n))) <= 1e-12
            assert np.all(np.diff(w) >= -bound)

    def test_asymmetry_rejected(self, backend):
        with pytest.raises(PreconditionError):
            kernel.sym_eig([[0.0, 1.0], [0.0, 0.0]], backend=backend)

    def test_non_square_rejected(self, backend):
        with pytest.raises(PreconditionError):
            kernel.sym_eig(np.zeros((2, 3)), backend=backend)


@pytest.mark.parametrize("backend", BACKENDS)
class TestOrthonormalize:
    def test_collinear(self, backend):
        b = kernel.orthonormalize([[1.0, 2.0], [0.0, 0.0]], backend=backend)
        assert b.shape == (2, 1)
        assert np.allclose(np.abs(b[:, 0]), [1.0, 0.0], atol=1e-14)

    def test_zero_matrix(self, backend):
        assert kernel.orthonormalize(np.zeros((3, 2)), backend=backend).shape == (3, 0)

    def test_plane(self, backend):
        b = kernel.orthonormalize([[1.0, 1.0], [1.0, -1.0]], backend=backend)
        assert b.shape == (2, 2)
        assert np.allclose(b @ b.T, np.eye(2), atol=1e-12)

    def test_orthonormality_population(self, backend):
        rng = np.random.default_rng(303)
        for _ in range(200):
            m = int(rng.integers(1, 13))
            n = int(rng.integers(1, 13))
            r = int(rng.integers(0, min(m, n) + 1))
            a = (rng.standard_normal((m, r)) @ rng.standard_normal((r, n))
                 if r else np.zeros((m, n)))
            b = kernel.orthonormalize(a, backend=backend)
            assert b.shape[1] == r
            if r:
                assert np.max(np.abs(b.T @ b - np.eye(r))) <= 1e-12


class TestRankCount:
    def test_examples(self):
        tol = DEFAULT_TOLERANCE
        assert kernel.rank_count([3.0, 1e-16], 3.0, (2, 2), tol) == 1
        assert kernel.rank_count([], 0.0, (0, 0), tol) == 0
        assert kernel.rank_count([1.0, 1.0, 1.0], 1.0, (3, 3), tol) == 3

    def test_monotone_in_sigma(self):
        tol = DEFAULT_TOLERANCE
        lo = kernel.rank_count([1.0, 1e-13], 1.0, (2, 2), tol)
        hi = kernel.rank_count([1.0, 1e-3], 1.0, (2, 2), tol)
        assert lo <= hi

    def test_invariant_under_right_multiplication(self):
        rng = np.random.default_rng(404)
        for _ in range(200):
            m = int(rng.integers(2, 11))
            n = int(rng.integers(2, 11))
            r = int(rng.integers(0, min(m, n) + 1))
            a = (rng.standard_normal((m, r)) @ rng.standard_normal((r, n))
                 if r else np.zeros((m, n)))
            # invertible right factor with condition number at most 1e6
            q1, _ = np.linalg.qr(rng.standard_normal((n, n)))
            q2, _ = np.linalg.qr(rng.standard_normal((n, n)))
            scales = np.geomspace(1e-3, 1e3, n) if n > 1 else np.array([1.0])
            t = q1 @ np.diag(scales) @ q2
            before = kernel.orthonormalize(a).shape[1]
            after = kernel.orthonormalize(a @ t).shape[1]
            assert before == after == r


class TestNullSpace:
    def test_row(self):
        n = kernel.null_space([[1.0, 0.0]])
        assert n.shape == (2, 1)
        assert np.allclose(n[:, 0], [0.0, 1.0])

    def test_zero_map(self):
        n = kernel.null_space(np.zeros((2, 3)))
        assert n.shape == (3, 3)
        assert np.allclose(n.T @ n, np.eye(3), atol=1e-14)

    def test_orthogonal_to_rows(self):
        rng = np.random.default_rng(505)
        for _ in range(100):
            m = int(rng.integers(1, 8))
            n = int(rng.integers(1, 8))
            a = rng.standard_normal((m, n))
            null = kernel.null_space(a)
            assert null.shape[1] == n - np.linalg.matrix_rank(a)
            if null.shape[1]:
                assert np.max(np.abs(a @ null)) <= 1e-12 * (1 + np.linalg.norm(a))


class TestPolicy:
    def test_defaults(self):
        tol = TolerancePolicy()
        assert tol.rank_rel == 2.0 ** -40
        assert tol.rank_abs == 1e-12
        assert tol.angle_tol == 1e-9
        assert tol.subspace_tol == 1e-9

    @pytest.mark.parametrize("field", ["rank_rel", "rank_abs", "angle_tol", "subspace_tol"])
    @pytest.mark.parametrize("bad", [0.0, -1e-9, 1.0, 2.0])
    def test_rejects_out_of_range(self, field, bad):
        with pytest.raises(InputError):
            TolerancePolicy(**{field: bad})


class TestSolveSquare:
    def test_solves(self):
        x = kernel.solve_square([[2.0, 0.0], [0.0, 4.0]], np.eye(2))
        assert np.allclose(x, np.diag([0.5, 0.25]))

    def test_singular_raises(self):
        with pytest.raises(NumericalFailure):
            kernel.solve_square([[1.0, 1.0], [1.0, 1.0]], np.eye(2))


def test_backends_agree_on_singular_values():
    if len(BACKENDS) < 2:
        pytest.skip("only one backend built")
    rng = np.random.default_rng(606)
    for _ in range(50):
        a = rng.standard_normal((int(rng.integers(1, 10)), int(rng.integers(1, 10))))
        values = {b: kernel.svd(a, backend=b)[1] for b in BACKENDS}
        sa, sb = values["compiled"], values["python"]
        assert np.allclose(sa, sb, atol=1e-12 * (1 + sa[0] if sa.size else 1))


def test_deterministic_across_calls():
    rng = np.random.default_rng(707)
    a = rng.standard_normal((7, 5))
    u1, s1, v1 = kernel.svd(a)
    u2, s2, v2 = kernel.svd(a)
    assert np.array_equal(u1, u2) and np.array_equal(s1, s2) and np.array_equal(v1, v2)
