"""보고서의 사람이 읽는 텍스트 요약"""
from app.models.report import RunReport


def render_text(report: RunReport) -> str:
    analyser = report.analyser
    name = report.scenario.get("name") or report.scenario.get("builtin") or "<explicit>"
    lines = [
        f"historylab {report.version} - scenario {name}",
        f"dim {analyser['dim']}, times {', '.join(analyser['times'])}, |Omega| = {analyser['histories']}",
        f"result: {'PASS' if report.passed else 'FAIL'}",
        "",
    ]
    for task in report.tasks:
        status = "PASS" if task.passed else "FAIL"
        lines.append(f"[{status}] {task.task} ({task.wall_clock:.3f}s)")
        if task.error:
            lines.append(f"    error: {task.error}")
        for check in task.checks:
            mark = "ok " if check.passed else "BAD"
            lines.append(f"    {mark} {check.name}: {check.residual:.3e} (tol {check.tolerance:.1e})")
        if task.task == "commutant":
            lines.append(f"    dim H_pi = {task.data.get('dim_h_pi')}, dim N = {task.data.get('dim_n')}")
        elif task.task == "defect":
            lines.append(f"    max defect = {task.data.get('max_defect', 0.0):.6g}, verdict {task.data.get('verdict')}")
        elif task.task == "probabilities":
            for key, value in task.data.get("histories", {}).items():
                lines.append(f"    P({key}) = {value:.6g}")
    return "\n".join(lines) + "\n"
