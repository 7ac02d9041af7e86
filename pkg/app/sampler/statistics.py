"""궤적 기록 상관 통계"""
import itertools
import math
from collections import Counter
from typing import Literal, Optional, Sequence

from app.core.errors import InputError
from app.histories.space import Event
from app.models.report import AgreementStat, SampleReport
from .trajectories import Trajectory


def record_statistics(trajs: Sequence[Trajectory], pairs: Optional[Sequence[tuple[str, str]]] = None,
                      events: Sequence[Event] = (), seed: int = 0,
                      sampler: Literal["exact", "independent"] = "exact") -> SampleReport:
    """시간 쌍별 라벨 일치 빈도와 사건 빈도, 시간별 라벨 빈도를 집계합니다.

    Args:
        trajs (Sequence[Trajectory]): 궤적 목록
        pairs: (s, t) 시간 쌍. Defaults to 모든 s < t.
        events (Sequence[Event], optional): 빈도를 셀 사건. Defaults to ().
        seed (int, optional): 보고서에 기록할 seed. Defaults to 0.
        sampler (str, optional): 표본기 이름. Defaults to "exact".

    Raises:
        InputError: 궤적이 없는 경우

    Returns:
        SampleReport: 표본 통계
    """
    if not trajs:
        raise InputError("record_statistics needs at least one trajectory")
    n = len(trajs)
    times = trajs[0].times
    pairs = list(pairs) if pairs is not None else list(itertools.combinations(times, 2))

    agreement = []
    for s, t in pairs:
        i, j = times.index(s), times.index(t)
        freq = sum(traj.labels[i] == traj.labels[j] for traj in trajs) / n
        agreement.append(AgreementStat(s=s, t=t, frequency=freq, stderr=math.sqrt(freq * (1 - freq) / n)))

    label_freqs = {}
    for k, t in enumerate(times):
        counts = Counter(traj.labels[k] for traj in trajs)
        label_freqs[t] = {label: count / n for label, count in sorted(counts.items())}

    event_freqs = {
        event.label(): sum(traj.labels in event.histories for traj in trajs) / n
        for event in events
    }
    return SampleReport(sampler=sampler, n_paths=n, rng_seed=seed, empirical_event_freqs=event_freqs,
                        record_correlation=agreement, label_freqs=label_freqs)
