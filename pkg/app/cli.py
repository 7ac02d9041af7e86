"""
historylab 명령행 인터페이스.

    historylab run SCENARIO [--out DIR] [--seed N] [--tol X] [--threads N]
                            [--format json|text] [--budget N] [--tasks a,b] [--param k=v]
    historylab list
    historylab serve

SCENARIO는 JSON 시나리오 파일 경로 또는 내장 시나리오 이름이다.
"""
import argparse
import logging
import sys
from typing import Optional, Sequence

from app.analyser.scenarios import list_scenarios
from app.core.config import settings
from app.core.errors import InputError
from app.core.log import setup_logging
from app.runner import EXIT_INPUT_ERROR, RunOptions, load_scenario, render_text, run_scenario, write_outputs

logger = logging.getLogger(__name__)


def parse_param(text: str) -> tuple[str, str]:
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    return key.strip(), value.strip()


def parse_tasks(text: str) -> list[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="historylab", description="History-space analyser laboratory")
    parser.add_argument("--log-level", default=None, help="logging level (default: HISTORYLAB_LOG_LEVEL)")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run a scenario file or a built-in scenario")
    run.add_argument("scenario", help="JSON scenario file or built-in name (Q2, D4, TRI9, STATIC, PGRID)")
    run.add_argument("--out", default="historylab-report", help="output directory")
    run.add_argument("--seed", type=int, default=None, help="sampler seed (overrides the scenario)")
    run.add_argument("--tol", type=float, default=None, help="global residual tolerance override")
    run.add_argument("--threads", type=int, default=None, help="worker threads for enumeration and sampling")
    run.add_argument("--format", choices=("json", "text"), default="text", help="what to print on stdout")
    run.add_argument("--budget", type=int, default=None, help="cap on the number of histories")
    run.add_argument("--tasks", type=parse_tasks, default=None, help="comma separated task subset")
    run.add_argument("--param", type=parse_param, action="append", default=[],
                     help="built-in scenario parameter key=value (repeatable)")

    commands.add_parser("list", help="list built-in scenarios")
    commands.add_parser("serve", help="serve the HTTP API with uvicorn")
    return parser


def command_run(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    if args.param:
        if scenario.builtin is None:
            raise InputError("--param only applies to built-in scenarios")
        scenario = scenario.model_copy(update={"params": {**scenario.params, **dict(args.param)}})
    options = RunOptions(seed=args.seed, tol=args.tol, threads=args.threads, budget=args.budget, tasks=args.tasks)
    outcome = run_scenario(scenario, options)
    written = write_outputs(outcome, args.out)
    logger.info("wrote %s", ", ".join(str(path) for path in written))
    if args.format == "json":
        print(outcome.report.model_dump_json(indent=2))
    else:
        print(render_text(outcome.report), end="")
    return outcome.exit_code


def command_list() -> int:
    for info in list_scenarios():
        print(f"{info.name:<8} {info.description} [{info.topic}; {info.anchor}]")
    return 0


def command_serve() -> int:
    import uvicorn

    print(f"Starting {settings.app_name} v{settings.version}...")
    print(f"API available at: http://localhost:{settings.port}/api/")
    print(f"API documentation at: http://localhost:{settings.port}/docs")
    uvicorn.run("app.main:app", host=settings.host, port=settings.port, reload=settings.debug)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    """명령행 진입점. 종료 코드를 반환합니다.

    Returns:
        int: 0 모든 검증 통과, 2 검증 실패, 1 입력 오류
    """
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    try:
        if args.command == "run":
            return command_run(args)
        if args.command == "list":
            return command_list()
        return command_serve()
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
