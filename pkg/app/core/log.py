"""로깅 구성"""
import logging
from typing import Optional

from .config import settings

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def setup_logging(level: Optional[str] = None) -> None:
    """루트 로거에 스트림 핸들러 하나를 설정합니다.

    Args:
        level (Optional[str], optional): 로그 레벨 이름. Defaults to settings.log_level.
    """
    logging.basicConfig(level=(level or settings.log_level).upper(), format=LOG_FORMAT, force=True)
