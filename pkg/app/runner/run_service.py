"""
시나리오 실행 서비스.

CLI와 HTTP 라우터가 함께 사용한다. 종료 코드 규칙:
0 모든 검증 통과, 2 검증 실패 또는 전제 조건 위반, 1 입력 오류(InputError, 보고서 없음).
"""
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

from app.core.config import Settings, settings as global_settings
from app.core.errors import InputError, NumericalCheckError, PreconditionError
from app.models.report import RunReport, TaskResult
from app.models.scenario import ALL_TASKS, SampleSpec, Scenario, ToleranceSpec
from app.sampler import Trajectory, write_trajectories_csv
from .loader import effective_settings, materialize
from .render import render_text
from .tasks import TASKS, RunContext

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_CHECK_FAILED = 2


@dataclass
class RunOptions:
    """CLI 플래그로 받는 실행 옵션"""

    seed: Optional[int] = None
    tol: Optional[float] = None
    threads: Optional[int] = None
    budget: Optional[int] = None
    tasks: Optional[Sequence[str]] = None


@dataclass
class RunOutcome:
    report: RunReport
    exit_code: int
    trajectories: Optional[list[Trajectory]] = field(default=None, repr=False)


def resolve_tasks(scenario: Scenario, options: RunOptions) -> list[str]:
    tasks = list(options.tasks) if options.tasks else list(scenario.tasks)
    unknown = [task for task in tasks if task not in TASKS]
    if unknown:
        raise InputError(f"unknown tasks {unknown}; available tasks are {list(ALL_TASKS)}")
    return tasks


def echo_scenario(scenario: Scenario, settings: Settings, seed: int, tasks: list[str], params: dict) -> dict:
    """유효 seed, 허용오차, 예산, 작업 목록을 채운 재실행 가능한 시나리오 사본"""
    sample = scenario.sample.model_copy(update={"seed": seed}) if scenario.sample else \
        SampleSpec(n=settings.default_samples, seed=seed)
    tolerances = ToleranceSpec(
        op_scale=settings.tol_op_scale,
        vec_scale=settings.tol_vec_scale,
        prob=settings.tol_prob,
        meet_scale=settings.tol_meet_scale,
        rank=settings.tol_rank,
        override=settings.tol_override,
    )
    update = {"sample": sample, "tolerances": tolerances, "budget": settings.budget, "tasks": tasks}
    if scenario.builtin is not None:
        update["params"] = params
    return scenario.model_copy(update=update).model_dump(mode="json", exclude_none=True)


def run_scenario(scenario: Scenario, options: Optional[RunOptions] = None,
                 base_settings: Optional[Settings] = None) -> RunOutcome:
    """시나리오를 실행하고 보고서와 종료 코드를 만듭니다.

    Args:
        scenario (Scenario): 검증된 시나리오
        options (Optional[RunOptions], optional): CLI 재정의 옵션. Defaults to None.
        base_settings (Optional[Settings], optional): 기준 설정. Defaults to 전역 settings.

    Raises:
        InputError: 시나리오 내용이 잘못되었거나 예산을 넘는 경우 (보고서를 만들지 않는다)

    Returns:
        RunOutcome: 보고서, 종료 코드, 표본 궤적
    """
    options = options or RunOptions()
    run_settings = effective_settings(base_settings or global_settings, scenario,
                                      options.tol, options.budget, options.threads)
    tasks = resolve_tasks(scenario, options)
    m = materialize(scenario, run_settings)
    if options.seed is not None:
        seed = options.seed
    elif scenario.sample is not None and scenario.sample.seed is not None:
        seed = scenario.sample.seed
    else:
        seed = run_settings.default_seed

    ctx = RunContext(m, seed)
    results: list[TaskResult] = []
    for task in tasks:
        started = time.perf_counter()
        logger.info("task %s started", task)
        try:
            data, checks = TASKS[task](ctx)
            result = TaskResult(task=task, passed=all(check.passed for check in checks), data=data, checks=checks)
        except (PreconditionError, NumericalCheckError) as e:
            result = TaskResult(task=task, passed=False, error=f"{type(e).__name__}: {e}")
        result.wall_clock = time.perf_counter() - started
        logger.info("task %s finished in %.3fs (passed=%s)", task, result.wall_clock, result.passed)
        results.append(result)

    max_residuals = {
        result.task: max((check.residual for check in result.checks), default=0.0)
        for result in results
    }
    passed = all(result.passed for result in results)
    report = RunReport(
        version=run_settings.version,
        scenario=echo_scenario(scenario, run_settings, seed, tasks, m.params),
        analyser=m.analyser.describe(),
        tasks=results,
        passed=passed,
        max_residuals=max_residuals,
    )
    return RunOutcome(report, EXIT_OK if passed else EXIT_CHECK_FAILED, ctx.trajectories)


def write_outputs(outcome: RunOutcome, out_dir: Union[str, Path]) -> list[Path]:
    """report.json, report.txt, (표본이 있으면) trajectories.csv 를 씁니다."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    json_path = out / "report.json"
    json_path.write_text(outcome.report.model_dump_json(indent=2), encoding="utf-8")
    written.append(json_path)
    text_path = out / "report.txt"
    text_path.write_text(render_text(outcome.report), encoding="utf-8")
    written.append(text_path)
    if outcome.trajectories:
        written.append(write_trajectories_csv(outcome.trajectories, out / "trajectories.csv"))
    return written
