"""궤적 표본기, 카운터 난수, 기록 통계, CSV 내보내기 테스트"""
import csv

import numpy as np
import pytest

from app.analyser import scenario
from app.commutant import compute_commutant
from app.core.errors import InputError, MissingLabelError
from app.histories import Event
from app.histories.measure import build_path_measure
from app.sampler import (
    ConfigMap,
    CounterRNG,
    record_statistics,
    sample_exact,
    sample_independent,
    to_configuration,
    write_trajectories_csv,
)
from app.sampler.rng import BLOCK


def path_measure(instance):
    an = instance.analyser
    return build_path_measure(an, compute_commutant(an), instance.state)


def within(freq: float, p: float, n: int, sigmas: float = 5.0) -> bool:
    return abs(freq - p) <= sigmas * np.sqrt(p * (1 - p) / n) + 1e-12


class TestCounterRNG:
    """(seed, 궤적 인덱스) 로 정해지는 난수"""

    def test_same_rows_for_any_split(self):
        rng = CounterRNG(7)
        whole = rng.uniforms(0, 3 * BLOCK, 2)
        parts = np.vstack([rng.uniforms(0, 100, 2), rng.uniforms(100, 2 * BLOCK, 2),
                           rng.uniforms(100 + 2 * BLOCK, BLOCK - 100, 2)])
        assert np.array_equal(whole, parts)

    def test_different_seeds(self):
        assert not np.array_equal(CounterRNG(1).uniforms(0, 10, 1), CounterRNG(2).uniforms(0, 10, 1))

    def test_range_and_empty(self):
        u = CounterRNG(3).uniforms(5, 50, 4)
        assert u.shape == (50, 4)
        assert np.all((u >= 0) & (u < 1))
        assert CounterRNG(3).uniforms(0, 0, 4).shape == (0, 4)

    def test_rejects_negative_seed(self):
        with pytest.raises(InputError):
            CounterRNG(-1)


class TestExactSampler:
    """P_φ 에서의 완전한 history 추출"""

    def test_static_records_always_agree(self, static):
        trajs = sample_exact(path_measure(static), 2000, seed=11)
        assert all(traj.labels[0] == traj.labels[1] for traj in trajs)
        share = sum(traj.labels == ("1", "1") for traj in trajs) / len(trajs)
        assert within(share, 0.7, len(trajs))

    def test_reproducible_across_threads(self, tri9):
        pm = path_measure(tri9)
        serial = sample_exact(pm, 5000, seed=42, threads=1)
        parallel = sample_exact(pm, 5000, seed=42, threads=4)
        assert [t.labels for t in serial] == [t.labels for t in parallel]
        assert [t.index for t in parallel] == list(range(5000))

    def test_only_nonzero_histories(self, tri9):
        trajs = sample_exact(path_measure(tri9), 1000, seed=5)
        assert {traj.labels for traj in trajs} <= {("1", "1"), ("1", "2"), ("2", "2")}

    def test_history_frequencies(self, d4):
        trajs = sample_exact(path_measure(d4), 4000, seed=3)
        for history in [("1", "1"), ("1", "2"), ("2", "1"), ("2", "2")]:
            share = sum(traj.labels == history for traj in trajs) / len(trajs)
            assert within(share, 0.25, len(trajs))

    def test_rejects_empty_request(self, d4):
        with pytest.raises(InputError):
            sample_exact(path_measure(d4), 0)


class TestIndependentSampler:
    """시간별 독립 추출"""

    def test_static_records_disagree(self, static):
        n = 4000
        trajs = sample_independent(static.analyser, static.state, n, seed=11)
        agree = sum(traj.labels[0] == traj.labels[1] for traj in trajs) / n
        assert within(agree, 0.7 ** 2 + 0.3 ** 2, n)

    def test_marginals_match_exact(self, tri9):
        n = 4000
        trajs = sample_independent(tri9.analyser, tri9.state, n, seed=8)
        for k, p in enumerate([1 / 3, 1 / 9]):
            share = sum(traj.labels[k] == "1" for traj in trajs) / n
            assert within(share, p, n)

    def test_works_outside_commutant(self, q2):
        trajs = sample_independent(q2.analyser, q2.state, 100, seed=1)
        assert all(traj.labels[0] == "+" for traj in trajs)


@pytest.mark.slow
class TestStaticLongRun:
    """STATIC(K=5, p=0.7), n = 10^5, 고정 seed"""

    N = 100_000
    SEED = 20240917

    @pytest.fixture(scope="class")
    def runs(self):
        instance = scenario("STATIC", {"K": 5, "p": 0.7})
        pm = path_measure(instance)
        constant = Event.cylinder(pm.space, {t: ["1"] for t in pm.space.times}, name="constant")
        exact = sample_exact(pm, self.N, seed=self.SEED)
        independent = sample_independent(instance.analyser, instance.state, self.N, seed=self.SEED)
        return {
            "pm": pm,
            "exact": exact,
            "independent": independent,
            "exact_report": record_statistics(exact, events=[constant], seed=self.SEED),
            "independent_report": record_statistics(independent, pairs=[("1", "2")], seed=self.SEED,
                                                    sampler="independent"),
        }

    def test_constant_path_frequency(self, runs):
        share = runs["exact_report"].empirical_event_freqs["constant"]
        assert within(share, 0.7, self.N, sigmas=3)

    def test_exact_records_always_agree(self, runs):
        stats = runs["exact_report"].record_correlation
        assert len(stats) == 10
        assert all(stat.frequency == 1.0 for stat in stats)

    def test_independent_agreement_is_separated(self, runs):
        [stat] = runs["independent_report"].record_correlation
        expected = 0.7 ** 2 + 0.3 ** 2
        sigma = np.sqrt(expected * (1 - expected) / self.N)
        assert within(stat.frequency, expected, self.N, sigmas=3)
        assert 1.0 - stat.frequency > 10 * sigma

    def test_bitwise_reproducible(self, runs):
        again = sample_exact(runs["pm"], self.N, seed=self.SEED, threads=4)
        assert [t.labels for t in again] == [t.labels for t in runs["exact"]]
        instance = scenario("STATIC", {"K": 5, "p": 0.7})
        again = sample_independent(instance.analyser, instance.state, self.N, seed=self.SEED, threads=3)
        assert [t.labels for t in again] == [t.labels for t in runs["independent"]]


class TestStatistics:
    """기록 상관과 사건 빈도"""

    def test_record_statistics(self, static):
        pm = path_measure(static)
        trajs = sample_exact(pm, 500, seed=9)
        same = Event.explicit(pm.space, [("1", "1"), ("2", "2")], name="same")
        report = record_statistics(trajs, events=[same], seed=9)
        assert report.n_paths == 500
        assert report.rng_seed == 9
        assert report.empirical_event_freqs["same"] == 1.0
        [stat] = report.record_correlation
        assert (stat.s, stat.t, stat.frequency, stat.stderr) == ("1", "2", 1.0, 0.0)
        assert sum(report.label_freqs["1"].values()) == pytest.approx(1.0)

    def test_needs_trajectories(self):
        with pytest.raises(InputError):
            record_statistics([])


class TestConfiguration:
    """라벨 → 구성 공간 점"""

    def test_index_map(self, d4):
        trajs = sample_exact(path_measure(d4), 20, seed=2)
        mapped = to_configuration(trajs, ConfigMap.index_map(d4.analyser))
        for traj in mapped:
            assert traj.points == tuple((float(int(a) - 1),) for a in traj.labels)

    def test_centroids(self, d4):
        cmap = ConfigMap.centroids(d4.analyser.partition("0"))
        assert cmap.point("1") == (0.5,)
        assert cmap.point("2") == (2.5,)

    def test_missing_label(self, d4):
        trajs = sample_exact(path_measure(d4), 5, seed=2)
        with pytest.raises(MissingLabelError):
            to_configuration(trajs, ConfigMap.from_mapping({"1": 0.0}))


class TestExport:
    """trajectories.csv"""

    def test_csv_rows_in_index_order(self, tmp_path, d4):
        trajs = sample_exact(path_measure(d4), 10, seed=4)
        mapped = to_configuration(trajs, ConfigMap.from_mapping({"1": [0, 1], "2": [2, 3]}))
        path = write_trajectories_csv(list(reversed(mapped)), tmp_path / "out" / "trajectories.csv")
        with path.open(encoding="utf-8") as handle:
            rows = list(csv.reader(handle))
        assert rows[0] == ["traj_id", "t_0", "t_1", "t_0_x", "t_1_x"]
        assert [int(row[0]) for row in rows[1:]] == list(range(10))
        first = mapped[0]
        assert rows[1][1:3] == list(first.labels)
        assert rows[1][3] == ("0.0;1.0" if first.labels[0] == "1" else "2.0;3.0")
