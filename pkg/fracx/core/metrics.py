"""Метрики разрыва и сводная статистика отчёта."""

from __future__ import annotations

import logging
import math
from typing import Sequence

import pandas as pd

from ..errors import DegenerateGap
from ..models import ReportRow, SummaryRow

logger = logging.getLogger(__name__)

GAP_EPS = 1e-9
SUMMARY_METRICS = ("closed_lef_gap", "remaining_gap", "value")
GROUP_KEYS = ["experiment", "n", "m", "relaxation"]


def closed_lef_gap(v_lef: float, v_model: float, v_hat: float) -> float:
    """100% · (v_LEF − v_model)/(v_LEF − v̂)."""
    if abs(v_lef - v_hat) < GAP_EPS:
        raise DegenerateGap(f"v_LEF={v_lef:.10g} совпадает с v̂={v_hat:.10g}")
    return 100.0 * (v_lef - v_model) / (v_lef - v_hat)


def relative_remaining_gap(v_mh: float, v_mc: float, v_exact: float) -> float:
    """100% · (v_MH − v_exact)/(v_MC − v_exact)."""
    if abs(v_mc - v_exact) < GAP_EPS:
        raise DegenerateGap(f"v_MC={v_mc:.10g} совпадает с точным значением {v_exact:.10g}")
    return 100.0 * (v_mh - v_exact) / (v_mc - v_exact)


def _frame(rows: Sequence[ReportRow]) -> pd.DataFrame:
    frame = pd.DataFrame([row.model_dump() for row in rows])
    if frame.empty:
        return frame
    return frame[frame["status"] == "ok"]


def _clean(value: float) -> float | None:
    return None if value is None or (isinstance(value, float) and math.isnan(value)) else float(value)


def summarize(rows: Sequence[ReportRow]) -> list[SummaryRow]:
    """count/avg/min/max/std (выборочное) по (эксперимент, n, m, релаксация) для каждой метрики."""
    frame = _frame(rows)
    if frame.empty:
        return []
    out: list[SummaryRow] = []
    for key, group in frame.groupby(GROUP_KEYS, sort=False):
        experiment, n, m, relaxation = key
        for metric in SUMMARY_METRICS:
            values = pd.to_numeric(group[metric], errors="coerce").dropna()
            if values.empty:
                continue
            out.append(SummaryRow(
                experiment=experiment, n=int(n), m=int(m), relaxation=relaxation,
                metric=metric, count=int(values.size),
                avg=_clean(values.mean()), min=_clean(values.min()), max=_clean(values.max()),
                std=_clean(values.std(ddof=1)) if values.size > 1 else None,
            ))
    return out


def cdf_rows(rows: Sequence[ReportRow], metric: str = "remaining_gap") -> list[dict]:
    """Эмпирическая функция распределения метрики: ранг, значение, доля."""
    frame = _frame(rows)
    if frame.empty:
        return []
    out: list[dict] = []
    for key, group in frame.groupby(GROUP_KEYS, sort=False):
        values = sorted(pd.to_numeric(group[metric], errors="coerce").dropna().tolist())
        total = len(values)
        for rank, gap in enumerate(values, start=1):
            out.append({
                **dict(zip(GROUP_KEYS, key)),
                "rank": rank, "gap": gap, "fraction": rank / total,
            })
    return out
