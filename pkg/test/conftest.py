"""공용 fixture: 내장 시나리오, 난수 생성기, 시나리오 파일 작성기"""
import json
from pathlib import Path
from typing import Optional

import numpy as np
import pytest

from app.analyser import scenario
from app.histories import Event, HistorySpace
from app.linalg import Projector, Subspace
from app.analyser.randomized import haar_unitary


@pytest.fixture
def d4():
    return scenario("D4")


@pytest.fixture
def q2():
    return scenario("Q2")


@pytest.fixture
def tri9():
    return scenario("TRI9")


@pytest.fixture
def static():
    return scenario("STATIC")


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def write_scenario(tmp_path):
    """dict를 JSON 시나리오 파일로 쓰고 경로를 돌려주는 함수"""

    def _write(data, name: str = "scenario.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(data) if not isinstance(data, str) else data, encoding="utf-8")
        return path

    return _write


def random_projector(dim: int, rank: int, rng: np.random.Generator) -> Projector:
    """Haar 기저의 앞 rank개 열이 생성하는 사영"""
    basis = haar_unitary(dim, rng)
    if rank == 0:
        return Projector.zero(dim)
    return Subspace(basis[:, :rank]).projector


def random_event(space: HistorySpace, rng: np.random.Generator, name: Optional[str] = None) -> Event:
    """Ω의 각 history를 1/2 확률로 담은 무작위 사건"""
    histories = list(space.histories())
    keep = rng.random(len(histories)) < 0.5
    return Event(space, frozenset(h for h, chosen in zip(histories, keep) if chosen), name)
