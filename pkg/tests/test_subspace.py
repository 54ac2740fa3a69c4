import numpy as np
import pytest

from conftest import random_pair, random_subspace
from subcomp.errors import InputError
from subcomp.subspace import Subspace


def span(*vectors, n=None):
    n = n if n is not None else len(vectors[0])
    return Subspace.from_spanning([np.asarray(v, dtype=float) for v in vectors], n)


class TestConstruction:
    def test_collinear_spanning(self):
        s = span([1.0, 0.0], [2.0, 0.0])
        assert s.dim == 1

    def test_empty_spanning(self):
        s = Subspace.from_spanning([], 3)
        assert s.dim == 0 and s.ambient_dim == 3

    def test_plane_in_r3(self):
        s = span([1.0, 1.0, 0.0], [1.0, -1.0, 0.0])
        assert s.dim == 2
        assert s.contains([5.0, -3.0, 0.0])
        assert not s.contains([0.0, 0.0, 1.0])

    def test_length_mismatch_rejected(self):
        with pytest.raises(InputError):
            Subspace.from_spanning([[1.0, 0.0]], 3)

    def test_non_orthonormal_basis_rejected(self):
        with pytest.raises(InputError):
            Subspace(2, [[1.0], [1.0]])

    def test_basis_is_read_only(self):
        s = span([1.0, 0.0])
        with pytest.raises(ValueError):
            s.basis[0, 0] = 2.0


class TestOrthocomplement:
    def test_line_in_plane(self):
        c = span([1.0, 0.0]).orthocomplement()
        assert c.dim == 1 and c.contains([0.0, 1.0])

    def test_full_space(self):
        assert Subspace.full(3).orthocomplement().dim == 0

    def test_diagonal_line(self):
        c = span([1.0, 1.0]).orthocomplement()
        assert c.contains([1.0, -1.0])

    def test_double_complement(self, rng):
        for _ in range(100):
            n = int(rng.integers(1, 11))
            m = random_subspace(rng, n, int(rng.integers(0, n + 1)))
            back = m.orthocomplement().orthocomplement()
            assert back.equals(m)

    def test_dimension_identity_exact(self, rng):
        for _ in range(100):
            n = int(rng.integers(1, 11))
            m = random_subspace(rng, n, int(rng.integers(0, n + 1)))
            assert m.dim + m.orthocomplement().dim == n


class TestIntersect:
    def test_idempotent(self):
        m = span([1.0, 2.0, 0.0], [0.0, 0.0, 1.0])
        assert m.intersect(m).equals(m)

    def test_transverse_lines(self):
        assert span([1.0, 0.0]).intersect(span([0.0, 1.0])).dim == 0

    def test_planes_in_r4(self):
        e = np.eye(4)
        m = span(e[0], e[1])
        n = span(e[0], e[2])
        meet = m.intersect(n)
        assert meet.dim == 1 and meet.contains(e[0])

    def test_ambient_mismatch(self):
        with pytest.raises(InputError):
            span([1.0, 0.0]).intersect(span([1.0, 0.0, 0.0]))


class TestSum:
    def test_zero_neutral(self):
        m = span([1.0, 2.0])
        assert m.sum(Subspace.zero(2)).equals(m)

    def test_lines_to_plane(self):
        s = span([1.0, 0.0, 0.0]).sum(span([0.0, 1.0, 0.0]))
        assert s.dim == 2 and s.contains([1.0, 1.0, 0.0])

    def test_dimension_formula(self, rng):
        e = np.eye(4)
        assert span(e[0], e[1]).sum(span(e[0], e[2])).dim == 3
        for _ in range(100):
            n = int(rng.integers(1, 9))
            m, other = random_pair(rng, n)
            total = m.sum(other).dim
            meet = m.intersect(other).dim
            assert total == m.dim + other.dim - meet


class TestMembershipAndEquality:
    def test_contains_examples(self):
        line = span([1.0, 0.0])
        assert line.contains([1.0, 0.0])
        assert not line.contains([0.0, 1.0])
        diag = span([1.0, 1.0])
        assert diag.contains(np.array([1.0, 1.0]) / np.sqrt(2.0))

    def test_equality_examples(self):
        m = span([1.0, 0.0])
        assert m.equals(m)
        assert m.equals(span([2.0, 0.0]))
        assert not m.equals(span([0.0, 1.0]))

    def test_zero_vector_always_contained(self):
        assert Subspace.zero(3).contains([0.0, 0.0, 0.0])


class TestProjector:
    def test_examples(self):
        assert np.allclose(span([1.0, 0.0]).projector(), np.diag([1.0, 0.0]))
        assert np.allclose(Subspace.full(2).projector(), np.eye(2))
        assert np.allclose(span([1.0, 1.0]).projector(), np.full((2, 2), 0.5), atol=1e-15)

    def test_idempotent_symmetric(self, rng):
        for _ in range(50):
            n = int(rng.integers(1, 9))
            m = random_subspace(rng, n, int(rng.integers(0, n + 1)))
            p = m.projector()
            assert np.max(np.abs(p @ p - p)) <= 1e-10
            assert np.max(np.abs(p - p.T)) <= 1e-10

    def test_projection_lands_inside(self, rng):
        for _ in range(50):
            n = int(rng.integers(1, 9))
            m = random_subspace(rng, n, int(rng.integers(1, n + 1)))
            x = rng.standard_normal(n)
            assert m.contains(m.project(x))


def test_de_morgan_population(rng):
    for _ in range(500):
        n = int(rng.integers(1, 11))
        m, other = random_pair(rng, n)
        left = m.sum(other).orthocomplement()
        right = m.orthocomplement().intersect(other.orthocomplement())
        assert left.equals(right)
