"""선형대수 기본 연산 테스트: 사영 검증, meet, 여공간, 시간 발전, 환원 동치"""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from app.core.errors import DimensionMismatchError, NonHermitianError, NonNestedChainError, NotAProjectorError
from app.linalg import (
    Projector,
    Subspace,
    commutator_norm,
    commutes,
    complement,
    contains,
    group_law_residual,
    hermitian_evolution,
    infimum_norm,
    intersect,
    leaves_invariant,
    meet,
    monotone_projector_limit,
    operator_norm,
    orthonormalize,
    subspace_distance,
    unitarity_residual,
)
from app.analyser.randomized import haar_unitary
from conftest import random_projector

seeds = st.integers(min_value=0, max_value=2**32 - 1)


class TestProjector:
    """Projector 생성과 검증"""

    def test_from_matrix_accepts_projector(self):
        proj = Projector.from_matrix([[0.5, 0.5], [0.5, 0.5]])
        assert proj.rank == 1
        assert proj.hermitian_residual() < 1e-12

    def test_from_matrix_rejects_non_hermitian(self):
        with pytest.raises(NotAProjectorError):
            Projector.from_matrix([[1.0, 1.0], [0.0, 0.0]])

    def test_from_matrix_rejects_non_idempotent(self):
        with pytest.raises(NotAProjectorError):
            Projector.from_matrix([[0.5, 0.0], [0.0, 0.5]])

    def test_diagonal_rejects_fractional_entries(self):
        with pytest.raises(NotAProjectorError):
            Projector.diagonal([1.0, 0.5])

    def test_subspace_of_zero_projector_is_empty(self):
        assert Projector.zero(3).subspace.k == 0


class TestSubspace:
    """정규직교화, 여공간, 포함 관계"""

    def test_orthonormalize_drops_dependent_vectors(self):
        s = orthonormalize([[1, 0, 0], [0, 1, 0], [1, 1, 0]])
        assert s.k == 2
        assert s.orthonormality_residual() < 1e-12

    def test_orthonormalize_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            orthonormalize([[1, 0], [1, 0, 0]])

    def test_complement_dimensions_add_up(self):
        s = orthonormalize([[1, 1, 0, 0], [0, 0, 1, 0]])
        rest = complement(s)
        assert s.k + rest.k == 4
        assert operator_norm(s.basis.conj().T @ rest.basis) < 1e-12

    def test_complement_of_zero_and_full(self):
        assert complement(Subspace.zero(3)).k == 3
        assert complement(Subspace.full(3)).k == 0

    def test_contains(self):
        big = orthonormalize([[1, 0, 0], [0, 1, 0]])
        small = orthonormalize([[1, 1, 0]])
        assert contains(big, small)
        assert not contains(small, big)
        assert contains(small, Subspace.zero(3))


class TestMeet:
    """meet(p, q) = Range(p) ∩ Range(q)"""

    def test_meet_of_coordinate_projectors(self):
        p = Projector.diagonal([1, 1, 0])
        q = Projector.diagonal([0, 1, 1])
        result = meet(p, q)
        assert result.rank == 1
        assert operator_norm(result.matrix - Projector.diagonal([0, 1, 0]).matrix) < 1e-12

    def test_meet_of_rotated_lines_is_zero(self):
        p = Projector.diagonal([1, 0])
        q = Projector.from_matrix([[0.5, 0.5], [0.5, 0.5]])
        assert meet(p, q).is_zero

    def test_meet_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            meet(Projector.identity(2), Projector.identity(3))

    @settings(max_examples=25, deadline=None)
    @given(seed=seeds, dim=st.integers(2, 6))
    def test_meet_lies_in_both_ranges(self, seed, dim):
        rng = np.random.default_rng(seed)
        p = random_projector(dim, int(rng.integers(1, dim + 1)), rng)
        q = random_projector(dim, int(rng.integers(1, dim + 1)), rng)
        result = meet(p, q)
        assert result.rank == max(0, p.rank + q.rank - dim)
        assert operator_norm(p.matrix @ result.matrix - result.matrix) < 1e-9
        assert operator_norm(q.matrix @ result.matrix - result.matrix) < 1e-9

    @settings(max_examples=25, deadline=None)
    @given(seed=seeds, dim=st.integers(1, 6))
    def test_meet_with_itself_and_identity(self, seed, dim):
        rng = np.random.default_rng(seed)
        p = random_projector(dim, int(rng.integers(0, dim + 1)), rng)
        assert subspace_distance(meet(p, p).subspace, p.subspace) < 1e-9
        assert subspace_distance(meet(p, Projector.identity(dim)).subspace, p.subspace) < 1e-9

    def test_intersect_and_infimum_norm(self):
        s1 = orthonormalize([[1, 0, 0], [0, 1, 0]])
        s2 = orthonormalize([[0, 1, 0], [0, 0, 1]])
        line = intersect(s1, s2)
        assert line.k == 1
        assert infimum_norm([s1, s2], [3, 4, 0]) == pytest.approx(4.0)


class TestReductionEquivalences:
    """pS_q ⊆ S_q, pS_q^⊥ ⊆ S_q^⊥, pq = qp, qS_p ⊆ S_p, qS_p^⊥ ⊆ S_p^⊥ 는 모두 동치"""

    @staticmethod
    def five(p: Projector, q: Projector) -> list[bool]:
        return [
            leaves_invariant(p, q.subspace),
            leaves_invariant(p, complement(q.subspace)),
            commutes(p, q),
            leaves_invariant(q, p.subspace),
            leaves_invariant(q, complement(p.subspace)),
        ]

    @settings(max_examples=20, deadline=None)
    @given(seed=seeds, dim=st.integers(2, 6))
    def test_commuting_pairs(self, seed, dim):
        rng = np.random.default_rng(seed)
        basis = haar_unitary(dim, rng)
        p = Subspace(basis[:, rng.permutation(dim)[:int(rng.integers(1, dim + 1))]]).projector
        q = Subspace(basis[:, rng.permutation(dim)[:int(rng.integers(1, dim + 1))]]).projector
        assert self.five(p, q) == [True] * 5

    @settings(max_examples=20, deadline=None)
    @given(seed=seeds, dim=st.integers(2, 6))
    def test_generic_pairs(self, seed, dim):
        rng = np.random.default_rng(seed)
        p = random_projector(dim, int(rng.integers(1, dim)), rng)
        q = random_projector(dim, int(rng.integers(1, dim)), rng)
        assert commutator_norm(p, q) > 1e-6
        assert self.five(p, q) == [False] * 5


class TestProjectorChain:
    """단조 사영 사슬"""

    def test_increasing_chain(self):
        chain = [orthonormalize([[1, 0, 0]]), orthonormalize([[1, 0, 0], [0, 1, 0]]), Subspace.full(3)]
        images = monotone_projector_limit(chain, [1, 1, 1])
        norms = [float(np.linalg.norm(v)) for v in images]
        assert norms == sorted(norms)
        assert np.allclose(images[-1], [1, 1, 1])

    def test_decreasing_chain(self):
        chain = [Subspace.full(2), orthonormalize([[1, 0]]), Subspace.zero(2)]
        images = monotone_projector_limit(chain, [1, 1])
        assert np.allclose(images[-1], 0)

    def test_non_nested_chain(self):
        chain = [orthonormalize([[1, 0]]), orthonormalize([[0, 1]])]
        with pytest.raises(NonNestedChainError):
            monotone_projector_limit(chain, [1, 1])

    def test_empty_chain(self):
        assert monotone_projector_limit([], [1, 0]) == []

    @settings(max_examples=20, deadline=None)
    @given(seed=seeds, increasing=st.booleans())
    def test_random_depth_five_chains(self, seed, increasing):
        rng = np.random.default_rng(seed)
        basis = haar_unitary(16, rng)
        ranks = sorted(int(r) for r in rng.choice(np.arange(1, 16), size=5, replace=False))
        chain = [Subspace(basis[:, :r]) for r in ranks]
        if not increasing:
            chain.reverse()
        phi = rng.standard_normal(16) + 1j * rng.standard_normal(16)

        images = monotone_projector_limit(chain, phi)
        norms = [float(np.linalg.norm(v)) for v in images]
        steps = np.diff(norms)
        assert np.all(steps >= -1e-12) if increasing else np.all(steps <= 1e-12)

        last = basis[:, :ranks[-1] if increasing else ranks[0]]
        limit = last @ (last.conj().T @ phi)
        assert np.linalg.norm(images[-1] - limit) < 1e-9
        errors = [float(np.linalg.norm(v - limit)) for v in images]
        assert np.all(np.diff(errors) <= 1e-12)


class TestEvolution:
    """U_t = exp(−itH)"""

    def test_rejects_non_hermitian_generator(self):
        with pytest.raises(NonHermitianError):
            hermitian_evolution([[0, 1], [0, 0]], 1.0)

    def test_zero_time_is_identity(self):
        u = hermitian_evolution([[1, 2], [2, -1]], 0.0)
        assert operator_norm(u - np.eye(2)) < 1e-12

    @settings(max_examples=20, deadline=None)
    @given(seed=seeds, dim=st.integers(1, 6), t=st.floats(-3, 3), s=st.floats(-3, 3))
    def test_unitary_and_group_law(self, seed, dim, t, s):
        rng = np.random.default_rng(seed)
        a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        h = a + a.conj().T
        assert unitarity_residual(hermitian_evolution(h, t)) < 1e-9
        assert group_law_residual(h, t, s) < 1e-9
