import math

import numpy as np
import pytest

from conftest import random_pair, random_subspace
from subcomp import kernel, relpos
from subcomp.errors import InputError
from subcomp.subspace import Subspace


def span(*vectors, n=None):
    n = n if n is not None else len(vectors[0])
    return Subspace.from_spanning([np.asarray(v, dtype=float) for v in vectors], n)


E2 = np.eye(2)
E3 = np.eye(3)
E4 = np.eye(4)


class TestPrincipalAngles:
    def test_identical(self):
        m = span(E3[0], E3[1])
        assert np.allclose(relpos.principal_angles(m, m), [0.0, 0.0], atol=1e-9)

    def test_orthogonal_lines(self):
        angles = relpos.principal_angles(span(E2[0]), span(E2[1]))
        assert np.allclose(angles, [math.pi / 2], atol=1e-14)

    def test_diagonal_line(self):
        # inner product of e1 with (1,1)/sqrt(2) is 1/sqrt(2)
        angles = relpos.principal_angles(span(E2[0]), span([1.0, 1.0]))
        assert np.allclose(angles, [math.pi / 4], atol=1e-14)

    def test_padded_multiset(self):
        m = span(E3[0], E3[1])
        n = span(E3[0])
        padded = relpos.principal_angles_m_sided(m, n)
        assert np.allclose(padded, [0.0, math.pi / 2], atol=1e-9)

    def test_small_angle_resolution(self):
        # a cosine-only computation cannot resolve angles near 1e-8
        theta = 1e-8
        m = span([1.0, 0.0])
        n = span([math.cos(theta), math.sin(theta)])
        angle = relpos.principal_angles(m, n)[0]
        assert abs(angle - theta) <= 1e-12

    def test_symmetry_population(self, rng):
        for _ in range(500):
            amb = int(rng.integers(1, 11))
            m, n = random_pair(rng, amb)
            mine = [a for a in relpos.principal_angles_m_sided(m, n)
                    if 1e-9 < a < math.pi / 2 - 1e-9]
            theirs = [a for a in relpos.principal_angles_m_sided(n, m)
                      if 1e-9 < a < math.pi / 2 - 1e-9]
            assert len(mine) == len(theirs)
            assert np.allclose(sorted(mine), sorted(theirs), atol=1e-9)


class TestPairDecomposition:
    def test_r4_planes(self):
        dec = relpos.pair_decomposition(span(E4[0], E4[1]), span(E4[0], E4[2]))
        assert (dec.dim_mn, dec.dim_m_nperp, dec.dim_mperp_n,
                dec.dim_mperp_nperp, dec.generic_mult) == (1, 1, 1, 1, 0)

    def test_equal_planes(self):
        m = Subspace.full(2)
        dec = relpos.pair_decomposition(m, m)
        assert (dec.dim_mn, dec.dim_m_nperp, dec.dim_mperp_n,
                dec.dim_mperp_nperp, dec.generic_mult) == (2, 0, 0, 0, 0)

    def test_generic_lines(self):
        dec = relpos.pair_decomposition(span(E2[0]), span([1.0, 1.0]))
        assert (dec.dim_mn, dec.dim_m_nperp, dec.dim_mperp_n,
                dec.dim_mperp_nperp, dec.generic_mult) == (0, 0, 0, 0, 1)

    def test_gram_spectrum_matches_angles(self, rng):
        for _ in range(100):
            amb = int(rng.integers(1, 9))
            m, n = random_pair(rng, amb)
            dec = relpos.pair_decomposition(m, n)
            for i, lam in enumerate(dec.gram_spectrum):
                angle = dec.angles[m.dim - 1 - i]
                assert abs(lam - math.cos(angle) ** 2) <= 1e-9

    def test_dimension_identities(self, rng):
        for _ in range(200):
            amb = int(rng.integers(1, 9))
            m, n = random_pair(rng, amb)
            dec = relpos.pair_decomposition(m, n)
            assert dec.dim_mn + dec.dim_m_nperp + dec.generic_mult == m.dim
            assert dec.dim_mn + dec.dim_mperp_n + dec.generic_mult == n.dim


class TestClassify:
    def test_generic(self):
        report = relpos.classify(span(E2[0]), span([1.0, 1.0]))
        assert report.generic_position
        assert report.generalized_generic
        assert report.position_p_prime
        assert report.equivalently_positioned

    def test_orthogonal_lines(self):
        report = relpos.classify(span(E2[0]), span(E2[1]))
        assert report.equivalently_positioned
        assert not report.position_p_prime

    def test_nested(self):
        report = relpos.classify(span(E3[0], E3[1]), span(E3[0]))
        assert not report.equivalently_positioned

    def test_implication_chain(self, rng):
        for _ in range(300):
            amb = int(rng.integers(1, 9))
            m, n = random_pair(rng, amb)
            report = relpos.classify(m, n)
            if report.generic_position:
                assert report.generalized_generic
            if report.generalized_generic:
                assert report.equivalently_positioned
            assert report.position_p_prime == (
                report.decomposition.dim_m_nperp == 0 and report.decomposition.dim_mperp_n == 0
            )


class TestSpectralCountCheck:
    def test_identical_lines(self):
        m = span(E2[0])
        check = relpos.spectral_count_check(m, m, 0.5)
        assert check == relpos.SpectralCountCheck(True, 0, 0, 0)

    def test_orthogonal_lines(self):
        check = relpos.spectral_count_check(span(E2[0]), span(E2[1]), 0.5)
        assert check.holds and check.left_count == check.right_count == 1

    def test_nested_fails(self):
        check = relpos.spectral_count_check(span(E3[0], E3[1]), span(E3[0]), 0.5)
        assert not check.holds
        assert (check.left_count, check.right_count) == (1, 0)

    def test_epsilon_validation(self):
        m = span(E2[0])
        with pytest.raises(InputError):
            relpos.spectral_count_check(m, m, 0.0)
        with pytest.raises(InputError):
            relpos.spectral_count_check(m, m, 1.0)


class TestConeReport:
    def test_orthogonal_lines(self):
        report = relpos.cone_report(span(E2[0]), span(E2[1]), 0.5)
        assert report.max_subspace_dim_m == 0
        assert report.ulc_m == 1 and report.ulc_n == 1

    def test_identical(self):
        m = span(E3[0], E3[1])
        report = relpos.cone_report(m, m, 0.5)
        assert report.max_subspace_dim_m == m.dim and report.ulc_m == 0

    def test_wide_cone_captures_pi_over_4(self):
        # sin(pi/4) is about 0.707, inside an epsilon of 0.8
        report = relpos.cone_report(span(E2[0]), span([1.0, 1.0]), 0.8)
        assert report.max_subspace_dim_m == 1

    def test_oracle_small_dimensions(self, rng):
        for _ in range(45):
            amb = int(rng.integers(1, 4))
            m, n = random_pair(rng, amb)
            sines = np.sort(np.sin(relpos.principal_angles_m_sided(m, n)))
            candidates = [0.4]
            candidates.extend((sines[i] + sines[i + 1]) / 2.0
                              for i in range(len(sines) - 1)
                              if sines[i + 1] - sines[i] > 1e-6)
            for eps in candidates:
                if not (0.0 < eps < 1.0):
                    continue
                report = relpos.cone_report(m, n, eps)
                count = report.max_subspace_dim_m
                attained = relpos.cone_maximal_subspace(m, n, eps)
                assert attained.dim == count
                if count and n.dim:
                    resid = attained.basis - n.basis @ (n.basis.T @ attained.basis)
                    assert kernel.spectral_norm(resid) <= eps + 1e-9
                # randomized search never beats the eigencount
                for dim in range(1, m.dim + 1):
                    hits = 0
                    for _ in range(200):
                        coeff = rng.standard_normal((m.dim, dim))
                        probe = Subspace.from_columns(m.basis @ coeff)
                        if probe.dim != dim or n.dim == 0:
                            continue
                        resid = probe.basis - n.basis @ (n.basis.T @ probe.basis)
                        if kernel.spectral_norm(resid) <= eps:
                            hits += 1
                    if dim > count:
                        assert hits == 0


class TestMarginAndDecision:
    def test_margin_orthogonal_lines(self):
        assert relpos.sum_closedness_margin(span(E2[0]), span(E2[1])) == 1.0

    def test_margin_identical(self):
        m = span(E2[0])
        assert relpos.sum_closedness_margin(m, m) == 1.0

    def test_decision_examples(self):
        assert relpos.has_common_complement(span(E3[0]), span(E3[1])).decision
        assert not relpos.has_common_complement(span(E3[0], E3[1]), span(E3[0])).decision
        assert relpos.has_common_complement(span(E4[0], E4[1]), span(E4[0], E4[2])).decision

    def test_decision_trivial_pairs(self):
        z = Subspace.zero(3)
        assert relpos.has_common_complement(z, z).decision
        assert not relpos.has_common_complement(z, span(E3[0])).decision
        full = Subspace.full(3)
        assert relpos.has_common_complement(full, full).decision

    def test_norm_below_one_implies_decision(self, rng):
        # equal dimensions plus largest cosine strictly below 1
        for _ in range(100):
            amb = int(rng.integers(2, 9))
            dim = int(rng.integers(1, amb))
            m = random_subspace(rng, amb, dim)
            n = random_subspace(rng, amb, dim)
            dec = relpos.pair_decomposition(m, n)
            if dec.gram_spectrum and dec.gram_spectrum[0] < 1.0 - 1e-6:
                assert relpos.has_common_complement(m, n).decision

    def test_ambient_mismatch(self):
        with pytest.raises(InputError):
            relpos.has_common_complement(span(E2[0]), span(E3[0]))


class TestInvarianceProperties:
    def test_duality(self, rng):
        for _ in range(200):
            amb = int(rng.integers(1, 9))
            m, n = random_pair(rng, amb)
            direct = relpos.has_common_complement(m, n).decision
            dual = relpos.has_common_complement(m.orthocomplement(), n.orthocomplement()).decision
            assert direct == dual

    def test_isomorphism_invariance(self, rng):
        # one fixed well-conditioned invertible map per ambient dimension;
        # the decision, dim(M∩N), dim(M^perp∩N^perp) and equivalent positioning
        # are invariant (the two cross corners individually are not)
        maps = {}
        for amb in range(2, 9):
            q1, _ = np.linalg.qr(rng.standard_normal((amb, amb)))
            q2, _ = np.linalg.qr(rng.standard_normal((amb, amb)))
            maps[amb] = q1 @ np.diag(np.geomspace(1.0, 1e3, amb)) @ q2
        for _ in range(200):
            amb = int(rng.integers(2, 9))
            m, n = random_pair(rng, amb)
            t = maps[amb]
            tm = Subspace.from_columns(t @ m.basis) if m.dim else Subspace.zero(amb)
            tn = Subspace.from_columns(t @ n.basis) if n.dim else Subspace.zero(amb)
            before = relpos.has_common_complement(m, n)
            after = relpos.has_common_complement(tm, tn)
            assert before.decision == after.decision
            assert before.decomposition.dim_mn == after.decomposition.dim_mn
            assert before.decomposition.dim_mperp_nperp == after.decomposition.dim_mperp_nperp
            assert before.equivalently_positioned == after.equivalently_positioned
