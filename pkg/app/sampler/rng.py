"""
카운터 기반 난수 (numpy Philox).

궤적 인덱스 i 의 난수 행은 (seed, i // BLOCK) 를 키로 하는 Philox 스트림의 i % BLOCK 번째 행이다.
따라서 같은 seed에서는 청크 크기나 스레드 수와 무관하게 같은 값이 나온다.
"""
from dataclasses import dataclass

import numpy as np

from app.core.errors import InputError

BLOCK = 1024
_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class CounterRNG:
    seed: int

    def __post_init__(self) -> None:
        if not 0 <= int(self.seed) <= _MASK:
            raise InputError(f"seed must be a non-negative 64-bit integer, got {self.seed}")

    def _block(self, block: int, width: int) -> np.ndarray:
        key = np.array([int(self.seed) & _MASK, block], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key)).random((BLOCK, width))

    def uniforms(self, start: int, count: int, width: int) -> np.ndarray:
        """궤적 start..start+count-1 에 대한 (count, width) 균등 난수"""
        if count <= 0:
            return np.zeros((0, width))
        rows = []
        stop = start + count
        for block in range(start // BLOCK, (stop - 1) // BLOCK + 1):
            chunk = self._block(block, width)
            lo = max(start, block * BLOCK) - block * BLOCK
            hi = min(stop, (block + 1) * BLOCK) - block * BLOCK
            rows.append(chunk[lo:hi])
        return np.vstack(rows)
