"""history 공간, 사건, 경로 측도, 관측량, 사건 논리 테스트"""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from app.analyser import ScenarioInstance, random_commuting_analyser
from app.analyser.randomized import random_state
from app.commutant import compute_commutant
from app.core.errors import (
    InputError,
    InvalidEventError,
    NullEventError,
    StateNotInCommutantError,
    ZeroStateError,
)
from app.histories import Event, HistorySpace, single_time_events
from app.histories.logic import certainty_checks, is_pattern, pvm_axiom_checks, sigma_ideal_checks
from app.histories.measure import (
    born_forms,
    build_path_measure,
    collapse_chain,
    conditional_from_measure,
    conditional_probability,
    event_probability,
    marginal_consistency_residual,
    path_probability,
    unnormalized_measure,
)
from app.histories.observables import (
    expectation_residual,
    label_index_observable,
    observable,
    restricted_commutator_norm,
)
from conftest import random_event


def measure_of(instance):
    an = instance.analyser
    dec = compute_commutant(an)
    return an, dec, build_path_measure(an, dec, instance.state)


class TestHistorySpace:
    """Ω 와 사건 연산"""

    def test_size_and_order(self, d4):
        space = HistorySpace.from_analyser(d4.analyser)
        assert space.size == 4
        assert list(space.histories()) == [("1", "1"), ("1", "2"), ("2", "1"), ("2", "2")]

    def test_cylinder(self, d4):
        space = HistorySpace.from_analyser(d4.analyser)
        event = Event.cylinder(space, {"1": ["2"]})
        assert event.sorted_histories() == [("1", "2"), ("2", "2")]

    def test_cylinder_rejects_unknown_time_and_label(self, d4):
        space = HistorySpace.from_analyser(d4.analyser)
        with pytest.raises(InvalidEventError):
            Event.cylinder(space, {"5": ["1"]})
        with pytest.raises(InvalidEventError):
            Event.cylinder(space, {"0": ["3"]})

    def test_explicit_rejects_foreign_history(self, d4):
        space = HistorySpace.from_analyser(d4.analyser)
        with pytest.raises(InvalidEventError):
            Event.explicit(space, [("1", "3")])

    def test_set_operations(self, d4):
        space = HistorySpace.from_analyser(d4.analyser)
        first = Event.cylinder(space, {"0": ["1"]})
        second = Event.cylinder(space, {"1": ["1"]})
        assert len(first.union(second)) == 3
        assert first.intersection(second).histories == {("1", "1")}
        assert first.complement().isdisjoint(first)
        assert first.intersection(second).issubset(first)

    def test_events_of_different_spaces(self, d4, tri9):
        first = Event.everything(HistorySpace.from_analyser(d4.analyser))
        second = Event.everything(HistorySpace.from_analyser(tri9.analyser))
        with pytest.raises(InvalidEventError):
            first.union(second)

    def test_single_time_event_names(self, d4):
        names = [event.name for event in single_time_events(HistorySpace.from_analyser(d4.analyser))]
        assert names == ["X_0=1", "X_0=2", "X_1=1", "X_1=2"]


class TestPathMeasure:
    """P_φ(ω) = ||p_ω φ̂||²"""

    def test_uniform_commuting_state(self, d4):
        _, _, pm = measure_of(d4)
        assert all(p == pytest.approx(0.25) for p in pm.probabilities.values())
        assert pm.total() == pytest.approx(1.0)
        assert len(pm.support()) == 4

    def test_static_histories(self, static):
        _, _, pm = measure_of(static)
        assert pm.probability(("1", "1")) == pytest.approx(0.7)
        assert pm.probability(("2", "2")) == pytest.approx(0.3)
        assert pm.probability(("1", "2")) == 0.0

    def test_nested_cell_probabilities(self, tri9):
        _, _, pm = measure_of(tri9)
        space = pm.space
        for t, expected in [("1", 1 / 3), ("2", 1 / 9)]:
            assert event_probability(pm, Event.cylinder(space, {t: ["1"]})) == pytest.approx(expected)

    def test_state_outside_commutant(self, q2):
        dec = compute_commutant(q2.analyser)
        with pytest.raises(StateNotInCommutantError):
            build_path_measure(q2.analyser, dec, q2.state)

    def test_zero_state(self, d4):
        dec = compute_commutant(d4.analyser)
        with pytest.raises(ZeroStateError):
            build_path_measure(d4.analyser, dec, np.zeros(4))

    def test_state_is_normalized(self, d4):
        dec = compute_commutant(d4.analyser)
        pm = build_path_measure(d4.analyser, dec, 3 * d4.state)
        assert pm.total() == pytest.approx(1.0)

    def test_unnormalized_measure_scales(self, d4):
        dec = compute_commutant(d4.analyser)
        event = Event.cylinder(dec.space, {"0": ["1"]})
        assert unnormalized_measure(dec, 2 * d4.state, event) == pytest.approx(2.0)

    def test_path_probability_agrees_with_measure(self, d4):
        an, dec, pm = measure_of(d4)
        assert path_probability(an, dec, d4.state, {"1": "2", "0": "1"}) == pytest.approx(
            pm.probability(("1", "2")))

    def test_path_probability_needs_commutant_state(self, q2):
        dec = compute_commutant(q2.analyser)
        with pytest.raises(StateNotInCommutantError):
            path_probability(q2.analyser, dec, q2.state, {"0": "+", "1": "+"})

    def test_marginals(self, static, tri9):
        for instance in (static, tri9):
            an = instance.analyser
            dec = compute_commutant(an)
            for t in an.times:
                assert marginal_consistency_residual(an, dec, instance.state, t) < 1e-10


class TestBornForms:
    """meet 형태와 시간 순서 곱 형태"""

    def test_rotated_qubit_forms_differ(self, q2):
        meet_form, product_form = born_forms(q2.analyser, q2.state, [("0", "+"), ("1", "+")])
        assert meet_form == pytest.approx(0.0, abs=1e-12)
        assert product_form == pytest.approx(0.5)

    def test_collapse_chain(self, q2):
        chain = collapse_chain(q2.analyser, q2.state, [("0", "+"), ("1", "+")])
        assert chain.probability == pytest.approx(0.5)
        assert chain.steps == pytest.approx((1.0, 0.5))
        assert not chain.truncated

    def test_collapse_chain_truncates_on_zero(self, q2):
        chain = collapse_chain(q2.analyser, q2.state, [("0", "-"), ("1", "+")])
        assert chain.probability == 0.0
        assert chain.truncated

    def test_collapse_chain_needs_increasing_times(self, q2):
        with pytest.raises(InputError, match="strictly increasing"):
            collapse_chain(q2.analyser, q2.state, [("1", "+"), ("0", "+")])


class TestConditional:
    """P(B | A) = P(A∩B) / P(A)"""

    def test_static_is_certain(self, static):
        an, dec, pm = measure_of(static)
        space = dec.space
        given = Event.cylinder(space, {"1": ["1"]})
        target = Event.cylinder(space, {"2": ["1"]})
        assert conditional_from_measure(pm, given, target) == pytest.approx(1.0)
        assert conditional_probability(an, dec, static.state, given, target.complement()) == pytest.approx(0.0)

    def test_commuting_cells_are_independent(self, d4):
        _, dec, pm = measure_of(d4)
        given = Event.cylinder(dec.space, {"0": ["2"]})
        target = Event.cylinder(dec.space, {"1": ["1"]})
        assert conditional_from_measure(pm, given, target) == pytest.approx(0.5)

    def test_null_condition(self, static):
        _, dec, pm = measure_of(static)
        with pytest.raises(NullEventError):
            conditional_from_measure(pm, Event.explicit(dec.space, [("1", "2")]), Event.everything(dec.space))


class TestObservables:
    """Q_f = Σ_ω f(ω) p_ω"""

    def test_label_index(self, d4):
        an, dec, pm = measure_of(d4)
        obs = label_index_observable(an, dec, "0")
        assert obs.spectrum() == [0.0, 1.0]
        assert obs.expectation(d4.state) == pytest.approx(0.5)
        assert expectation_residual(obs, pm) < 1e-12
        assert obs.spectral_projector([1.0]).rank == 2

    def test_observables_commute_on_commutant(self, tri9):
        an, dec, _ = measure_of(tri9)
        first = label_index_observable(an, dec, "1")
        second = label_index_observable(an, dec, "2")
        assert restricted_commutator_norm(first, second) < 1e-12

    def test_undefined_value(self, d4):
        dec = compute_commutant(d4.analyser)
        with pytest.raises(InputError, match="not defined"):
            observable(d4.analyser, dec, {("1", "1"): 1.0})


class TestEventLogic:
    """사건 PVM 공리, 확실성, null 사건"""

    def test_pvm_axioms(self, d4, tri9):
        for instance in (d4, tri9):
            dec = compute_commutant(instance.analyser)
            events = single_time_events(dec.space)
            for first in events:
                for second in events:
                    assert all(check.passed for check in pvm_axiom_checks(dec, first, second))

    def test_certainty(self, tri9):
        an = tri9.analyser
        dec = compute_commutant(an)
        for event in single_time_events(dec.space):
            assert all(check.passed for check in certainty_checks(an, dec, event))

    def test_pattern(self, static):
        dec = compute_commutant(static.analyser)
        space = dec.space
        assert is_pattern(dec, static.state, Event.cylinder(space, {"1": ["2"]}))
        assert not is_pattern(dec, static.state, Event.explicit(space, [("1", "2")]))

    def test_null_events_form_an_ideal(self, static):
        _, dec, pm = measure_of(static)
        space = dec.space
        events = single_time_events(space) + [Event.explicit(space, [("1", "2")], name="split")]
        report = sigma_ideal_checks(pm, events)
        assert "split" in report.null_events
        assert "empty" in report.null_events
        assert all(check.passed for check in report.checks)


def commuting_instance(dim: int, seed: int) -> ScenarioInstance:
    rng = np.random.default_rng(seed)
    an = random_commuting_analyser(dim, 3, min(3, dim), rng).analyser
    return ScenarioInstance(an, random_state(dim, rng))


class TestRandomizedIdentities:
    """무작위 사건, 조건, 관측량에 대한 항등식"""

    @pytest.fixture(params=["d4", "tri9", "static", "commuting16"])
    def instance(self, request):
        if request.param == "commuting16":
            return commuting_instance(16, 7)
        return request.getfixturevalue(request.param)

    def test_pvm_axioms_on_random_pairs(self, instance, rng):
        dec = compute_commutant(instance.analyser)
        for _ in range(50):
            first, second = random_event(dec.space, rng), random_event(dec.space, rng)
            checks = pvm_axiom_checks(dec, first, second)
            assert max(check.residual for check in checks) < 1e-9

    def test_conditional_formula_on_random_pairs(self, instance, rng):
        an, dec, pm = measure_of(instance)
        accepted = 0
        for _ in range(1000):
            given, target = random_event(dec.space, rng), random_event(dec.space, rng)
            p_given = event_probability(pm, given)
            if p_given <= 0.01:
                continue
            value = event_probability(pm, given.intersection(target)) / p_given
            projected = dec.event_projector(given).apply(pm.state)
            direct = event_probability(build_path_measure(an, dec, projected), target)
            assert abs(value - direct) < 1e-10
            assert conditional_from_measure(pm, given, target) == pytest.approx(value, abs=1e-12)
            accepted += 1
            if accepted == 50:
                break
        assert accepted == 50

    @pytest.mark.parametrize("name", ["d4", "commuting16"])
    def test_random_observables(self, name, request, rng):
        instance = commuting_instance(16, 11) if name == "commuting16" else request.getfixturevalue(name)
        an, dec, pm = measure_of(instance)
        for _ in range(20):
            f = {h: float(v) for h, v in zip(dec.space.histories(), rng.standard_normal(dec.space.size))}
            g = {h: float(v) for h, v in zip(dec.space.histories(), rng.standard_normal(dec.space.size))}
            first, second = observable(an, dec, f), observable(an, dec, g)
            assert expectation_residual(first, pm) < 1e-10
            assert expectation_residual(second, pm) < 1e-10
            assert restricted_commutator_norm(first, second) < 1e-9

    @settings(max_examples=50, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2**32 - 1), dim=st.integers(2, 16))
    def test_born_forms_agree_on_commuting_analysers(self, seed, dim):
        instance = commuting_instance(dim, seed)
        an, dec, pm = measure_of(instance)
        assert abs(pm.total() - 1.0) < 1e-10
        for history in dec.space.histories():
            meet_form, product_form = born_forms(an, instance.state, dec.space.assignment(history))
            assert abs(meet_form - product_form) < 1e-10
            assert abs(meet_form - pm.probability(history)) < 1e-10


class TestTriadicScenario:
    """3진 중첩 셀의 주변 확률과 null 사건"""

    def test_marginals_and_union(self, tri9):
        _, dec, pm = measure_of(tri9)
        first = Event.cylinder(dec.space, {"1": ["1"]})
        second = Event.cylinder(dec.space, {"2": ["1"]})
        assert abs(event_probability(pm, first) - 1 / 3) < 1e-12
        assert abs(event_probability(pm, second) - 1 / 9) < 1e-12
        assert abs(event_probability(pm, first.union(second)) - 1 / 3) < 1e-12

    def test_nesting_makes_a_null_event(self, tri9):
        _, dec, pm = measure_of(tri9)
        outside = Event.cylinder(dec.space, {"1": ["2"], "2": ["1"]}, name="outside")
        assert outside.histories == {("2", "1")}
        report = sigma_ideal_checks(pm, [outside, Event.empty(dec.space, name="nothing")]
                                    + single_time_events(dec.space))
        assert "outside" in report.null_events
        assert "nothing" in report.null_events
        assert all(check.passed for check in report.checks)
        assert not is_pattern(dec, tri9.state, outside)
