"""Прогон набора экспериментов: генерация, релаксации, оракул, метрики, CSV.

Почему: строки отчёта считаются независимо по экземплярам, поэтому их можно
раздать процессам и собрать в исходном порядке; ошибка одной строки не
останавливает прогон.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from ..config import settings
from ..constants import DEFAULT_RELAXATIONS, EXPERIMENT_GENERATOR
from ..errors import FracxError
from ..models import FractionalProgram, ReportRow, SuiteConfig, SummaryRow
from .kterm import build_kterm
from .lifted import x
from .lp import LinearModel, LpSolution, Separator, cutting_loop
from .metrics import cdf_rows, closed_lef_gap, relative_remaining_gap, summarize
from .oracle import best_integer_value, univariate_exact
from .program import VariableBounds, compute_bounds, validate_program
from .relaxations import (
    build_1term,
    build_1term_conic,
    build_cef,
    build_lef,
    build_ratio_mccormick,
    build_rqp,
)
from .univariate import build_uni_mc, build_uni_mh

logger = logging.getLogger(__name__)

Builder = Callable[[FractionalProgram, VariableBounds, int], tuple[LinearModel, list[Separator]]]

RELAXATION_BUILDERS: dict[str, Builder] = {
    "LEF": lambda fp, bounds, k: (build_lef(fp, bounds), []),
    "CEF": lambda fp, bounds, k: build_cef(fp, bounds),
    "RQP": lambda fp, bounds, k: (build_rqp(fp, bounds), []),
    "1TERM": lambda fp, bounds, k: (build_1term(fp, bounds), []),
    "1TERM-CONIC": lambda fp, bounds, k: build_1term_conic(fp, bounds),
    "KTERM": lambda fp, bounds, k: (build_kterm(fp, k), []),
    "ZMC": lambda fp, bounds, k: (build_ratio_mccormick(fp, bounds, disaggregate=False), []),
    "ZMC-D": lambda fp, bounds, k: (build_ratio_mccormick(fp, bounds, disaggregate=True), []),
}


@dataclass(slots=True)
class SuiteResult:
    rows: list[ReportRow]
    summary: list[SummaryRow] = field(default_factory=list)
    cdf: list[dict] = field(default_factory=list)

    @property
    def failed(self) -> int:
        return sum(1 for row in self.rows if row.status == "error")

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0


@dataclass(frozen=True)
class _Task:
    experiment: str
    n: int
    m: int
    seed: int
    relaxations: tuple[str, ...]
    k: tuple[int, ...]
    tol: float | None
    max_rounds: int | None


def _now_us() -> int:
    return time.perf_counter_ns() // 1000


def solve_relaxation(
    model: LinearModel,
    separators: list[Separator],
    tol: float | None = None,
    max_rounds: int | None = None,
) -> LpSolution:
    return cutting_loop(model, separators, max_rounds=max_rounds, tol=tol).require_optimal()


def _error_row(task: _Task, relaxation: str, k: int | None, exc: Exception) -> ReportRow:
    return ReportRow(
        experiment=task.experiment, n=task.n, m=task.m, seed=task.seed,
        relaxation=relaxation, k=k, status="error", error=f"{type(exc).__name__}: {exc}",
    )


def _plan(task: _Task) -> list[tuple[str, int | None]]:
    plan: list[tuple[str, int | None]] = []
    for name in task.relaxations:
        if name == "KTERM":
            plan += [(name, k) for k in task.k]
        else:
            plan.append((name, None))
    return plan


def _run_program(task: _Task) -> list[ReportRow]:
    from ..generators import GENERATORS

    plan = _plan(task)
    try:
        fp = GENERATORS[EXPERIMENT_GENERATOR[task.experiment]].generate(task.n, task.m, task.seed)
        validate_program(fp)
        bounds = compute_bounds(fp)
        lef = solve_relaxation(build_lef(fp, bounds), [], task.tol, task.max_rounds)
        hint = [lef.value(x(j)) for j in range(fp.n)]
        oracle = best_integer_value(fp, hints=[hint], seed=task.seed)
        v_hat = oracle.value
    except FracxError as exc:
        logger.warning("Экземпляр %s n=%d m=%d seed=%d: %s", task.experiment, task.n, task.m, task.seed, exc)
        return [_error_row(task, name, k, exc) for name, k in plan]

    rows: list[ReportRow] = []
    for name, k in plan:
        started = _now_us()
        try:
            model, separators = RELAXATION_BUILDERS[name](fp, bounds, k or 1)
            solution = solve_relaxation(model, separators, task.tol, task.max_rounds)
            gap = closed_lef_gap(lef.objective, solution.objective, v_hat)
        except FracxError as exc:
            logger.warning("%s seed=%d: %s", name, task.seed, exc)
            rows.append(_error_row(task, name, k, exc))
            continue
        rows.append(ReportRow(
            experiment=task.experiment, n=task.n, m=task.m, seed=task.seed,
            relaxation=name, k=k, value=solution.objective, oracle=v_hat, oracle_method=oracle.method,
            v_lef=lef.objective, closed_lef_gap=gap,
            rounds=solution.rounds, cuts=solution.cuts_added, time_us=_now_us() - started,
        ))
    return rows


def _run_univariate(task: _Task) -> list[ReportRow]:
    from ..generators import gen_univariate

    plan = _plan(task)
    try:
        inst = gen_univariate(task.m, task.seed)
        v_mc = solve_relaxation(build_uni_mc(inst), [], task.tol, task.max_rounds).objective
        exact = univariate_exact(inst)
        v_exact = exact.value
    except FracxError as exc:
        logger.warning("Одномерный экземпляр m=%d seed=%d: %s", task.m, task.seed, exc)
        return [_error_row(task, name, k, exc) for name, k in plan]

    rows: list[ReportRow] = []
    for name, k in plan:
        started = _now_us()
        try:
            if name == "UNI-MC":
                model, separators = build_uni_mc(inst), []
            else:
                model, separators = build_uni_mh(inst)
            solution = solve_relaxation(model, separators, task.tol, task.max_rounds)
            gap = relative_remaining_gap(solution.objective, v_mc, v_exact)
        except FracxError as exc:
            logger.warning("%s seed=%d: %s", name, task.seed, exc)
            rows.append(_error_row(task, name, k, exc))
            continue
        rows.append(ReportRow(
            experiment=task.experiment, n=task.n, m=task.m, seed=task.seed,
            relaxation=name, value=solution.objective, oracle=v_exact, oracle_method=exact.method,
            remaining_gap=gap, rounds=solution.rounds, cuts=solution.cuts_added,
            time_us=_now_us() - started,
        ))
    return rows


def run_instance(task: _Task) -> list[ReportRow]:
    """Все строки отчёта одного экземпляра; неожиданные исключения тоже становятся строками."""
    try:
        if task.experiment == "univariate":
            return _run_univariate(task)
        return _run_program(task)
    except Exception as exc:
        logger.exception("Сбой экземпляра %s seed=%d", task.experiment, task.seed)
        return [_error_row(task, name, k, exc) for name, k in _plan(task)]


def _tasks(config: SuiteConfig) -> list[_Task]:
    relaxations = tuple(config.relaxations or DEFAULT_RELAXATIONS[config.experiment])
    return [
        _Task(config.experiment, n, m, seed, relaxations, tuple(config.k), config.tol, config.max_rounds)
        for n, m in config.sizes
        for seed in config.seeds
    ]


def summary_path(out: Path) -> Path:
    return out.with_suffix(".summary.csv")


def cdf_path(out: Path) -> Path:
    return out.with_suffix(".cdf.csv")


def run_suite(config: SuiteConfig, write: bool = True) -> SuiteResult:
    """Прогнать все (размер, зерно) и записать отчёт, сводку и CDF рядом с config.out."""
    from ..exporters import export_cdf_csv, export_report_csv, export_summary_csv

    tasks = _tasks(config)
    threads = min(settings.threads if config.threads is None else config.threads, max(1, len(tasks)))
    logger.info(
        "Прогон %s: %d экземпляров, размеры %s, потоков %d",
        config.experiment, len(tasks), config.sizes, threads,
    )
    rows: list[ReportRow] = []
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for chunk in pool.map(run_instance, tasks):
                rows.extend(chunk)
    else:
        for task in tasks:
            rows.extend(run_instance(task))

    result = SuiteResult(rows, summarize(rows))
    if config.experiment == "univariate":
        result.cdf = cdf_rows(rows, "remaining_gap")
    if write:
        export_report_csv(rows, config.out)
        export_summary_csv(result.summary, summary_path(config.out))
        if config.experiment == "univariate":
            export_cdf_csv(result.cdf, cdf_path(config.out))
    logger.info("Прогон завершён: %d строк, ошибок %d", len(rows), result.failed)
    return result
