"""사건 세분과 세분 정리 테스트"""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from app.analyser import random_commuting_analyser, refine, validate_partition
from app.analyser.randomized import random_binary_splits, random_state_in
from app.analyser.scenarios import diagonal_partition
from app.commutant import compute_commutant
from app.core.errors import InvalidEventError
from app.histories import Event, HistorySpace, single_time_events
from app.linalg import Projector
from app.refinement import check_refinement_theorem, refine_event
from conftest import random_event


def split_d4(d4):
    return refine(d4.analyser, {("0", "1"): {"1a": Projector.diagonal([1, 0, 0, 0]),
                                             "1b": Projector.diagonal([0, 1, 0, 0])}})


def tilted_extra_time(d4):
    """시간 2에 (e0 + e1)/√2 방향의 선과 그 여공간을 추가한 세분. H_π′ = span{e2, e3}"""
    v = np.array([1.0, 1.0, 0.0, 0.0]) / np.sqrt(2)
    line = Projector.from_matrix(np.outer(v, v))
    rest = Projector.from_matrix(np.eye(4) - np.outer(v, v))
    return refine(d4.analyser, extra_times={2: validate_partition([line, rest], ["v", "w"], time="2")})


class TestRefineEvent:
    """A → A′"""

    def test_split_labels(self, d4):
        rm = split_d4(d4)
        space = HistorySpace.from_analyser(d4.analyser)
        refined = refine_event(rm, Event.cylinder(space, {"0": ["1"]}, name="first"))
        assert refined.child_event.histories == {("1a", "1"), ("1a", "2"), ("1b", "1"), ("1b", "2")}
        assert refined.child_event.name == "first′"

    def test_extra_time_is_unconstrained(self, d4):
        rm = refine(d4.analyser, extra_times={2: diagonal_partition({"u": [1, 0, 0, 1], "v": [0, 1, 1, 0]})})
        space = HistorySpace.from_analyser(d4.analyser)
        refined = refine_event(rm, Event.explicit(space, [("2", "2")]))
        assert refined.child_event.histories == {("2", "2", "u"), ("2", "2", "v")}

    def test_event_of_another_space(self, d4):
        rm = split_d4(d4)
        child_space = HistorySpace.from_analyser(rm.child)
        with pytest.raises(InvalidEventError):
            refine_event(rm, Event.everything(child_space))


class TestRefinementTheorem:
    """p_A′ = p_A p_π′"""

    def test_split_preserves_probabilities(self, d4):
        rm = split_d4(d4)
        events = single_time_events(HistorySpace.from_analyser(d4.analyser))
        report = check_refinement_theorem(rm, events, phi=d4.state)
        assert report.parent_times == ["0", "1"]
        assert report.child_times == ["0", "1"]
        assert len(report.events) == 4
        names = [check.name for check in report.checks]
        assert "P(A′) = P(A) for a state in H_pi′" in names
        assert all(check.passed for check in report.checks)

    def test_tilted_extra_time_shrinks_commutant(self, d4):
        rm = tilted_extra_time(d4)
        assert compute_commutant(rm.child).h_pi.k == 2
        events = single_time_events(HistorySpace.from_analyser(d4.analyser))
        report = check_refinement_theorem(rm, events, phi=d4.state)
        assert report.child_times == ["0", "1", "2"]
        assert all(check.passed for check in report.checks)
        assert any(check.name == "probability preservation skipped" for check in report.checks)

    def test_state_in_refined_commutant(self, d4):
        rm = tilted_extra_time(d4)
        events = single_time_events(HistorySpace.from_analyser(d4.analyser))
        report = check_refinement_theorem(rm, events, phi=[0, 0, 1, 0])
        names = [check.name for check in report.checks]
        assert "A′ is a pattern iff A is a pattern" in names
        assert all(check.passed for check in report.checks)

    def test_without_state(self, tri9):
        rm = refine(tri9.analyser)
        report = check_refinement_theorem(rm, single_time_events(HistorySpace.from_analyser(tri9.analyser)))
        assert len(report.checks) == 5
        assert all(check.passed for check in report.checks)


def rank_one_d4(d4):
    """D4의 모든 셀을 좌표 방향 랭크 1 셀로 나눈 세분"""
    def unit(i: int) -> Projector:
        mask = [0, 0, 0, 0]
        mask[i] = 1
        return Projector.diagonal(mask)

    return refine(d4.analyser, {
        ("0", "1"): {"1.0": unit(0), "1.1": unit(1)},
        ("0", "2"): {"2.2": unit(2), "2.3": unit(3)},
        ("1", "1"): {"1.0": unit(0), "1.2": unit(2)},
        ("1", "2"): {"2.1": unit(1), "2.3": unit(3)},
    })


def operator_residual(report) -> float:
    [check] = [check for check in report.checks if check.name == "p_A′ = p_A p_pi′"]
    return check.residual


class TestRandomRefinements:
    """무작위 사건과 공통 고유기저 세분"""

    def test_rank_one_refinement_of_d4(self, d4, rng):
        rm = rank_one_d4(d4)
        assert all(cell.rank == 1 for t in rm.child.times for _, cell in rm.child.partition(t).items())
        space = HistorySpace.from_analyser(d4.analyser)
        events = [random_event(space, rng) for _ in range(50)]
        report = check_refinement_theorem(rm, events, phi=d4.state)
        assert operator_residual(report) < 1e-9
        assert all(check.passed for check in report.checks)

    @settings(max_examples=10, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2**32 - 1))
    def test_shared_eigenbasis_refinements(self, seed):
        rng = np.random.default_rng(seed)
        generated = random_commuting_analyser(16, 2, 3, rng)
        splits = random_binary_splits(generated, rng)
        assert splits
        rm = refine(generated.analyser, splits)
        assert all(len(rm.children(t, a)) == (2 if (t, a) in splits else 1)
                   for t in rm.parent.times for a in rm.parent.labels(t))

        child_dec = compute_commutant(rm.child)
        assert child_dec.h_pi.k == 16
        space = HistorySpace.from_analyser(rm.parent)
        events = [random_event(space, rng) for _ in range(50)]
        phi = random_state_in(child_dec.h_pi, rng)
        report = check_refinement_theorem(rm, events, phi=phi, child_dec=child_dec)
        assert operator_residual(report) < 1e-9
        names = [check.name for check in report.checks]
        assert "P(A′) = P(A) for a state in H_pi′" in names
        assert all(check.passed for check in report.checks)

    def test_partial_splits_keep_labels(self, rng):
        generated = random_commuting_analyser(6, 2, 2, rng)
        splits = random_binary_splits(generated, rng, probability=0.0)
        assert splits == {}
        rm = refine(generated.analyser, splits)
        assert rm.child.times == generated.analyser.times
        assert all(rm.children(t, a) == {a} for t in rm.parent.times for a in rm.parent.labels(t))
