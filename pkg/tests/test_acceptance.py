"""Полномасштабные прогоны: включаются переменной FRACX_ACCEPTANCE=1."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from fracx.core.suite import run_suite
from fracx.models import SuiteConfig

from .conftest import acceptance


def _mean_gap(rows, relaxation: str) -> float:
    values = [r.closed_lef_gap for r in rows if r.relaxation == relaxation and r.status == "ok"]
    assert len(values) == 30
    return float(np.mean(values))


@acceptance
def test_uniform_closed_gaps_at_30_3(tmp_path: Path) -> None:
    config = SuiteConfig(
        experiment="uniform-gap", sizes=[(30, 3)], seeds=list(range(30)),
        relaxations=["LEF", "CEF", "1TERM-CONIC"], out=tmp_path / "uniform.csv",
    )
    result = run_suite(config)
    assert result.exit_code == 0
    assert 50.0 <= _mean_gap(result.rows, "1TERM-CONIC") <= 78.0
    assert 22.0 <= _mean_gap(result.rows, "CEF") <= 45.0


@acceptance
def test_univariate_remaining_gap_distribution(tmp_path: Path) -> None:
    config = SuiteConfig(
        experiment="univariate", sizes=[(1, 5)], seeds=list(range(100)),
        out=tmp_path / "univariate.csv",
    )
    result = run_suite(config)
    gaps = [r.remaining_gap for r in result.rows if r.relaxation == "UNI-MH" and r.status == "ok"]
    assert len(gaps) == 100
    assert float(np.median(gaps)) <= 10.0
    assert float(np.percentile(gaps, 80)) <= 35.0
