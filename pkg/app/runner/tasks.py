"""
작업(task)별 실행 함수.

각 함수는 RunContext를 받아 (data, checks) 를 돌려준다. 전제 조건 위반과 수치 검증 실패는
예외로 올라가며 run_service가 실패한 TaskResult로 기록한다.
"""
import itertools
import logging
import math
from functools import cached_property
from typing import Any, Callable, Optional

import numpy as np

from app.commutant import (
    CommutantDecomposition,
    check_hpi_characterizations,
    compute_commutant,
    fa_kernel,
    na_member,
    projection_invariance_residual,
    shift_covariance_residual,
    theorem_two_checks,
)
from app.consistency import additivity_residual, defect_report, exceptional_two_time_measure
from app.core.errors import InvalidEventError, PreconditionError
from app.histories import Event
from app.histories.logic import certainty_checks, is_pattern, pvm_axiom_checks, sigma_ideal_checks
from app.histories.measure import (
    PathMeasure,
    born_forms,
    build_path_measure,
    collapse_chain,
    event_probability,
    marginal_consistency_residual,
)
from app.histories.observables import (
    Observable,
    expectation_residual,
    label_index_observable,
    observable,
    restricted_commutator_norm,
)
from app.linalg import operator_norm
from app.models.report import CheckResult, HpiReport
from app.models.scenario import ObservableSpec
from app.refinement import check_refinement_theorem
from app.sampler import (
    ConfigMap,
    Trajectory,
    record_statistics,
    sample_exact,
    sample_independent,
    to_configuration,
)
from .loader import Materialized

logger = logging.getLogger(__name__)

TaskOutput = tuple[dict[str, Any], list[CheckResult]]

SIGMA_BAND = 5.0


class RunContext:
    """한 번의 실행에서 작업들이 공유하는 계산 결과"""

    def __init__(self, m: Materialized, seed: int):
        self.m = m
        self.seed = seed
        self.trajectories: Optional[list[Trajectory]] = None

    @property
    def tol(self):
        return self.m.tol

    @cached_property
    def dec(self) -> CommutantDecomposition:
        return compute_commutant(self.m.analyser, self.m.settings.budget, self.m.settings.threads, self.tol)

    @cached_property
    def pm(self) -> PathMeasure:
        return build_path_measure(self.m.analyser, self.dec, self.m.state, self.tol)

    def report_probability(self, value: float) -> float:
        """tol_prob 미만은 보고서에서 정확한 0으로 적는다."""
        return 0.0 if abs(value) < self.tol.prob else float(value)

    def event(self, name: str) -> Event:
        for event in self.m.events:
            if event.name == name:
                return event
        raise InvalidEventError(f"unknown event {name!r}; defined events are {[e.name for e in self.m.events]}")


def history_key(history: tuple[str, ...]) -> str:
    return "|".join(history)


def run_commutant(ctx: RunContext) -> TaskOutput:
    an, dec, tol = ctx.m.analyser, ctx.dec, ctx.tol
    checks = check_hpi_characterizations(an, dec, n_perms=5, seed=ctx.seed, tol=tol)
    checks.append(CheckResult.of("p_pi commutes with every cell and joint projector",
                                 projection_invariance_residual(an, dec), tol.op))
    for event in ctx.m.events:
        checks += theorem_two_checks(an, dec, event, tol)

    witnesses = {}
    if len(an.times) <= ctx.m.settings.na_max_times:
        inclusion = 0.0
        for event in ctx.m.events:
            witness = na_member(an, event, ctx.m.state, ctx.m.settings.na_max_times, tol)
            witnesses[event.label()] = list(witness.times) if witness.member else None
            if witness.member:
                inclusion = max(inclusion, fa_kernel(an, event, dec, tol).residual(ctx.m.state)
                                / float(np.linalg.norm(ctx.m.state)))
        checks.append(CheckResult.of("N_A ⊆ F_A for the scenario state", inclusion, tol.vec))

    if an.hamiltonian is not None and an.base is not None:
        checks.append(CheckResult.of("time shift maps H_pi(S+1) onto H_pi(S)",
                                     shift_covariance_residual(an, 1, tol), tol.op))

    report = HpiReport(
        ambient_dim=an.dim,
        dim_h_pi=dec.h_pi.k,
        dim_n=dec.n_space.k,
        histories_total=dec.space.size,
        histories_nonzero=len(dec.joint_table),
        checks=checks,
    )
    data = report.model_dump(exclude={"checks"})
    data["na_witnesses"] = witnesses
    data["event_subspace_dims"] = {e.label(): dec.event_projector(e).rank for e in ctx.m.events}
    return data, checks


def run_probabilities(ctx: RunContext) -> TaskOutput:
    an, pm, tol = ctx.m.analyser, ctx.pm, ctx.tol
    born_gap, chain_gap = 0.0, 0.0
    for history in pm.space.histories():
        assignment = pm.space.assignment(history)
        meet_form, product_form = born_forms(an, pm.state, assignment, tol)
        born_gap = max(born_gap, abs(meet_form - product_form), abs(meet_form - pm.probability(history)))
        chain_gap = max(chain_gap, abs(collapse_chain(an, pm.state, assignment, tol).probability - meet_form))
    marginal_gap = max(marginal_consistency_residual(an, ctx.dec, pm.state, t, tol) for t in an.times)
    events = {e.label(): ctx.report_probability(event_probability(pm, e)) for e in ctx.m.events}
    histories = {history_key(h): ctx.report_probability(p) for h, p in pm.probabilities.items()}
    in_range = all(-tol.prob <= p <= 1 + tol.prob for p in list(histories.values()) + list(events.values()))
    checks = [
        CheckResult.of("total path mass is 1", abs(pm.total() - 1.0), tol.prob),
        CheckResult.of("meet form equals ordered product form", born_gap, tol.prob),
        CheckResult.of("collapse chain equals path probability", chain_gap, tol.prob),
        CheckResult.of("summing out one time gives the coarser measure", marginal_gap, tol.prob),
        CheckResult.flag("every probability lies in [0, 1]", in_range),
    ]
    return {"histories": histories, "events": events}, checks


def conditional_pairs(ctx: RunContext) -> list[tuple[Event, Event]]:
    if ctx.m.scenario.conditionals:
        return [(ctx.event(spec.given), ctx.event(spec.target)) for spec in ctx.m.scenario.conditionals]
    pairs = [(a, b) for a, b in itertools.permutations(ctx.m.events, 2)]
    return pairs[:ctx.m.settings.max_conditional_pairs]


def run_conditional(ctx: RunContext) -> TaskOutput:
    pm, tol = ctx.pm, ctx.tol
    table, skipped = [], []
    worst = 0.0
    for given, target in conditional_pairs(ctx):
        p_given = event_probability(pm, given)
        if p_given <= tol.prob:
            skipped.append({"given": given.label(), "target": target.label(),
                            "reason": "conditioning event has probability 0"})
            continue
        value = event_probability(pm, given.intersection(target)) / p_given
        projected = ctx.dec.event_projector(given).apply(pm.state)
        direct = event_probability(build_path_measure(ctx.m.analyser, ctx.dec, projected, tol), target)
        worst = max(worst, abs(value - direct))
        table.append({"given": given.label(), "target": target.label(),
                      "probability": ctx.report_probability(value)})
    checks = [CheckResult.of("P(B|A) equals P(B) under the state p_A phi", worst, tol.prob)]
    return {"conditionals": table, "skipped": skipped}, checks


def build_observable(ctx: RunContext, spec: ObservableSpec) -> Observable:
    an, dec = ctx.m.analyser, ctx.dec
    if spec.table is not None:
        table = {tuple(entry.history): entry.value for entry in spec.table}
        return observable(an, dec, table)
    position = dec.space.time_index(spec.at_time)
    values = spec.label_values
    return observable(an, dec, lambda history: values[history[position]])


def run_observables(ctx: RunContext) -> TaskOutput:
    an, dec, pm, tol = ctx.m.analyser, ctx.dec, ctx.pm, ctx.tol
    if ctx.m.observables:
        named = [(spec.name, build_observable(ctx, spec)) for spec in ctx.m.observables]
    else:
        named = [(f"index(X_{t})", label_index_observable(an, dec, t)) for t in an.times]

    data, worst_expectation, worst_spectral = {}, 0.0, 0.0
    for name, obs in named:
        worst_expectation = max(worst_expectation, expectation_residual(obs, pm))
        spectrum = obs.spectrum()
        full = obs.spectral_projector(spectrum).matrix
        worst_spectral = max(worst_spectral, operator_norm(full - dec.p_pi.matrix))
        data[name] = {"expectation": obs.expectation(pm.state, tol), "spectrum": spectrum}
    worst_commutator = max((restricted_commutator_norm(a, b) for (_, a), (_, b) in itertools.combinations(named, 2)),
                           default=0.0)
    checks = [
        CheckResult.of("integral of f equals <phi, Q_f phi>", worst_expectation, tol.prob),
        CheckResult.of("Q_f commute on H_pi", worst_commutator, tol.op),
        CheckResult.of("spectral projector of the whole spectrum is p_pi", worst_spectral, tol.op),
    ]
    return {"observables": data}, checks


def binomial_gap(freq: float, p: float, n: int) -> float:
    """|f − p| 를 5σ 이항 허용폭에 대한 비율로 나타낸 값 (1 미만이면 통과)"""
    band = SIGMA_BAND * math.sqrt(max(p * (1 - p), 0.0) / n) + 1e-12
    return abs(freq - p) / band


def run_sample(ctx: RunContext) -> TaskOutput:
    an = ctx.m.analyser
    spec = ctx.m.scenario.sample
    n = spec.n if spec else ctx.m.settings.default_samples
    which = spec.sampler if spec else "both"
    pairs = [tuple(str(x) for x in pair) for pair in spec.pairs] if spec and spec.pairs else None
    config = spec.config if spec else "index"
    threads = ctx.m.settings.threads
    data: dict[str, Any] = {}
    checks: list[CheckResult] = []

    if which in ("exact", "both"):
        try:
            pm = ctx.pm
        except PreconditionError as e:
            # independent sampling needs no path measure
            if which == "exact":
                raise
            data["exact_error"] = f"{type(e).__name__}: {e}"
            checks.append(CheckResult.flag("exact sampler has a path measure", False, detail=str(e)))
        else:
            trajs = sample_exact(pm, n, ctx.seed, threads)
            report = record_statistics(trajs, pairs, ctx.m.events, ctx.seed, "exact")
            worst = max((binomial_gap(report.empirical_event_freqs[e.label()], event_probability(pm, e), n)
                         for e in ctx.m.events), default=0.0)
            checks.append(CheckResult.of("exact sampler event frequencies within 5 sigma", worst, 1.0))
            data["exact"] = report.model_dump()
            ctx.trajectories = trajs
    if which in ("independent", "both"):
        trajs = sample_independent(an, ctx.m.state, n, ctx.seed, threads)
        report = record_statistics(trajs, pairs, ctx.m.events, ctx.seed, "independent")
        state = ctx.m.state / np.linalg.norm(ctx.m.state)
        worst = 0.0
        for t in an.times:
            for label, cell in an.partition(t).items():
                born = float(np.linalg.norm(cell.apply(state)) ** 2)
                worst = max(worst, binomial_gap(report.label_freqs[t].get(label, 0.0), born, n))
        checks.append(CheckResult.of("independent sampler single-time marginals within 5 sigma", worst, 1.0))
        data["independent"] = report.model_dump()
        if ctx.trajectories is None:
            ctx.trajectories = trajs

    if config != "none" and ctx.trajectories is not None:
        cmap = ConfigMap.index_map(an) if config == "index" else ConfigMap.centroids(an.partition(an.times[0]))
        ctx.trajectories = to_configuration(ctx.trajectories, cmap)
        data["config_map"] = {label: list(point) for label, point in cmap.points.items()}
    return data, checks


def run_defect(ctx: RunContext) -> TaskOutput:
    an, tol = ctx.m.analyser, ctx.tol
    report = defect_report(an, tol)
    checks = list(report.checks)
    bound_gap = 0.0
    for entry in report.entries:
        residual = additivity_residual(an, entry.s, entry.t, entry.b, ctx.m.state, tol)
        bound_gap = max(bound_gap, residual - 2 * entry.defect)
    checks.append(CheckResult.of("additivity residual bounded by twice the defect", max(bound_gap, 0.0), tol.prob))
    data = report.model_dump(exclude={"checks"})

    if len(an.times) >= 2:
        s, t = an.times[0], an.times[1]
        state = ctx.m.state / np.linalg.norm(ctx.m.state)
        for label, cell in an.partition(s).items():
            if np.linalg.norm(state - cell.apply(state)) < tol.vec:
                table = exceptional_two_time_measure(an, s, t, state, label, tol)
                data["exceptional_measure"] = {
                    "s": s, "t": t, "cell": label,
                    "table": {f"{a}|{b}": ctx.report_probability(p) for (a, b), p in table.items()},
                }
                break
    return data, checks


def run_refine(ctx: RunContext) -> TaskOutput:
    rm = ctx.m.refinement
    report = check_refinement_theorem(rm, ctx.m.events, ctx.m.state, parent_dec=ctx.dec, tol=ctx.tol)
    return report.model_dump(exclude={"checks"}), list(report.checks)


def run_logic(ctx: RunContext) -> TaskOutput:
    an, dec, tol = ctx.m.analyser, ctx.dec, ctx.tol
    events = ctx.m.events
    checks: list[CheckResult] = []
    for first, second in itertools.islice(itertools.combinations(events, 2), ctx.m.settings.max_conditional_pairs):
        checks += pvm_axiom_checks(dec, first, second, tol)
    for event in events:
        checks += certainty_checks(an, dec, event, tol)
    sigma = sigma_ideal_checks(ctx.pm, events)
    checks += sigma.checks
    patterns = {event.label(): is_pattern(dec, ctx.m.state, event, tol) for event in events}
    return {"null_events": sigma.null_events, "patterns": patterns}, checks


TASKS: dict[str, Callable[[RunContext], TaskOutput]] = {
    "commutant": run_commutant,
    "probabilities": run_probabilities,
    "conditional": run_conditional,
    "observables": run_observables,
    "sample": run_sample,
    "defect": run_defect,
    "refine": run_refine,
    "logic": run_logic,
}
