"""analyser 모델, Heisenberg 구성, 내장 시나리오, 세분과 병합 테스트"""
import math

import numpy as np
import pytest

from app.analyser import (
    Analyser,
    analysers_equivalent,
    canonical_time,
    coarsen,
    compose,
    heisenberg_analyser,
    list_scenarios,
    refine,
    scenario,
    shift_analyser,
    validate_partition,
)
from app.analyser.scenarios import diagonal_partition, resolve_params
from app.core.errors import (
    InputError,
    PartitionError,
    RefinementError,
    UnknownLabelError,
    UnknownScenarioError,
    UnknownTimeError,
)
from app.linalg import Projector, operator_norm


class TestTimeLabels:
    """시간 라벨 정규화"""

    @pytest.mark.parametrize("raw, expected", [(1, "1"), (1.0, "1"), ("1.00", "1"), (0.5, "0.5"),
                                                (0, "0"), ("-0.0", "0"), (100, "100")])
    def test_canonical_time(self, raw, expected):
        assert canonical_time(raw) == expected

    def test_rejects_non_numbers(self):
        with pytest.raises(UnknownTimeError):
            canonical_time("noon")


class TestPartition:
    """항등 분할 검증"""

    def test_default_labels(self):
        partition = validate_partition([Projector.diagonal([1, 0]), Projector.diagonal([0, 1])])
        assert partition.labels == ("1", "2")

    def test_overlapping_cells(self):
        cells = [Projector.diagonal([1, 0]), Projector.diagonal([1, 1])]
        with pytest.raises(PartitionError, match="partition cells overlap at time 3"):
            validate_partition(cells, time="3")

    def test_cells_must_sum_to_identity(self):
        with pytest.raises(PartitionError, match="sum to the identity"):
            validate_partition([Projector.diagonal([1, 0, 0]), Projector.diagonal([0, 1, 0])])

    def test_unknown_label(self, d4):
        with pytest.raises(UnknownLabelError):
            d4.analyser.cell("0", "3")

    def test_duplicate_times(self):
        partition = diagonal_partition([[1, 0], [0, 1]])
        with pytest.raises(InputError, match="duplicate"):
            Analyser.build({1: partition, "1.0": partition})


class TestHeisenberg:
    """p^t_a = U_{−t} p_a U_t"""

    def test_time_zero_is_base(self, q2):
        an = q2.analyser
        for (_, cell), (_, base) in zip(an.partition(0).items(), an.base.items()):
            assert operator_norm(cell.matrix - base.matrix) < 1e-12

    def test_quarter_turn_cells(self, q2):
        plus = q2.analyser.cell(1, "+").matrix
        assert np.allclose(plus, [[0.5, -0.5], [-0.5, 0.5]])

    def test_shift(self, q2):
        shifted = shift_analyser(q2.analyser, 1)
        assert shifted.times == ("1", "2")
        assert operator_norm(shifted.cell(1, "+").matrix - q2.analyser.cell(1, "+").matrix) < 1e-12

    def test_shift_needs_heisenberg(self, d4):
        with pytest.raises(InputError):
            shift_analyser(d4.analyser, 1)

    def test_zero_generator_repeats_partition(self):
        base = diagonal_partition({"a": [1, 0, 0], "b": [0, 1, 1]})
        an = heisenberg_analyser(base, np.zeros((3, 3)), [1, 2, 3])
        assert an.times == ("1", "2", "3")
        assert operator_norm(an.cell(3, "b").matrix - base.cell("b").matrix) < 1e-12


class TestScenarios:
    """내장 시나리오"""

    def test_list_is_sorted_and_complete(self):
        names = [info.name for info in list_scenarios()]
        assert names == ["D4", "PGRID", "Q2", "STATIC", "TRI9"]
        assert all(info.description and info.topic and info.anchor for info in list_scenarios())

    def test_each_entry_names_its_source_example(self):
        anchors = {info.name: info.anchor for info in list_scenarios()}
        assert anchors["Q2"] == "rotated-qubit example"
        assert anchors["TRI9"] == "triadic nesting example"
        assert list_scenarios() == list_scenarios()

    def test_lookup_is_case_insensitive(self):
        assert scenario("d4").analyser.dim == 4

    def test_unknown_scenario(self):
        with pytest.raises(UnknownScenarioError):
            scenario("Q3")

    def test_unknown_param(self):
        with pytest.raises(UnknownScenarioError, match="does not take"):
            resolve_params("D4", {"n": 3})

    def test_string_params_are_coerced(self):
        assert resolve_params("TRI9", {"levels": "3"}) == {"levels": 3}
        assert resolve_params("PGRID", {"times": "0,1"})["times"] == (0.0, 1.0)

    def test_tri_levels(self):
        instance = scenario("TRI9", {"levels": 3})
        assert instance.analyser.dim == 27
        assert instance.analyser.times == ("1", "2", "3")

    def test_static_state(self, static):
        assert np.allclose(np.abs(static.state) ** 2, [0.7, 0.3])
        assert static.analyser.times == ("1", "2")

    def test_pgrid_rejects_odd_ring(self):
        with pytest.raises(UnknownScenarioError):
            scenario("PGRID", {"n": 7})

    def test_pgrid_state_is_normalized(self):
        instance = scenario("PGRID")
        assert math.isclose(float(np.linalg.norm(instance.state)), 1.0)
        assert instance.analyser.times == ("0", "0.5", "1")


class TestRefinement:
    """세분, 병합, 합성"""

    def split_first_cell(self, d4):
        an = d4.analyser
        return refine(an, {("0", "1"): {"1a": Projector.diagonal([1, 0, 0, 0]),
                                        "1b": Projector.diagonal([0, 1, 0, 0])}})

    def test_refine_split(self, d4):
        rm = self.split_first_cell(d4)
        assert rm.child.labels("0") == ("1a", "1b", "2")
        assert rm.children("0", "1") == frozenset({"1a", "1b"})
        assert rm.parent_label("0", "1b") == "1"
        assert rm.extra_times == ()

    def test_refine_rejects_bad_split(self, d4):
        with pytest.raises(RefinementError):
            refine(d4.analyser, {("0", "1"): {"x": Projector.diagonal([1, 0, 0, 0])}})

    def test_refine_extra_time(self, d4):
        extra = diagonal_partition({"u": [1, 0, 0, 1], "v": [0, 1, 1, 0]})
        rm = refine(d4.analyser, extra_times={2: extra})
        assert rm.extra_times == ("2",)
        assert rm.child.history_count == 8

    def test_refine_rejects_existing_time(self, d4):
        with pytest.raises(RefinementError):
            refine(d4.analyser, extra_times={"1": d4.analyser.partition("1")})

    def test_coarsen_merges_labels(self, d4):
        rm = coarsen(d4.analyser, {"1": {"all": ["1", "2"]}})
        assert rm.parent.labels("1") == ("all",)
        assert rm.parent.cell("1", "all").rank == 4
        assert rm.child is d4.analyser

    def test_coarsen_drops_times(self, d4):
        rm = coarsen(d4.analyser, keep_times=["0"])
        assert rm.parent.times == ("0",)
        assert rm.extra_times == ("1",)

    def test_coarsen_rejects_bad_grouping(self, d4):
        with pytest.raises(RefinementError):
            coarsen(d4.analyser, {"1": {"x": ["1"]}})

    def test_compose(self, d4):
        outer = coarsen(d4.analyser, {"0": {"all": ["1", "2"]}})
        inner = self.split_first_cell(d4)
        composed = compose(outer, inner)
        assert composed.children("0", "all") == frozenset({"1a", "1b", "2"})
        assert analysers_equivalent(composed.child, inner.child)

    def test_compose_rejects_unrelated_maps(self, d4, tri9):
        with pytest.raises(RefinementError):
            compose(refine(d4.analyser), refine(tri9.analyser))
