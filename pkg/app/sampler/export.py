"""궤적 CSV 내보내기"""
import csv
import logging
from pathlib import Path
from typing import Sequence, Union

from .trajectories import Trajectory

logger = logging.getLogger(__name__)


def trajectory_header(trajs: Sequence[Trajectory]) -> list[str]:
    if not trajs:
        return ["traj_id"]
    times = trajs[0].times
    header = ["traj_id"] + [f"t_{t}" for t in times]
    if trajs[0].points is not None:
        header += [f"t_{t}_x" for t in times]
    return header


def write_trajectories_csv(trajs: Sequence[Trajectory], path: Union[str, Path]) -> Path:
    """한 행에 한 궤적을 인덱스 순서로 씁니다. 다차원 점의 좌표는 ';' 로 잇습니다."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(trajectory_header(trajs))
        for traj in sorted(trajs, key=lambda item: item.index):
            row = [traj.index, *traj.labels]
            if traj.points is not None:
                row += [";".join(repr(x) for x in point) for point in traj.points]
            writer.writerow(row)
    logger.info("wrote %d trajectories to %s", len(trajs), path)
    return path
