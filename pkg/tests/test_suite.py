"""Прогон набора и командная строка: строки отчёта, ошибки, файлы рядом с --out."""

from __future__ import annotations

import json
from pathlib import Path

import pytest
from pydantic import ValidationError

from fracx.constants import REPORT_FIELDS
from fracx.core.suite import cdf_path, run_suite, summary_path
from fracx.exporters import read_report_csv
from fracx.main import main, pair_sizes, parse_seeds
from fracx.models import SuiteConfig


def _config(tmp_path: Path, **overrides) -> SuiteConfig:
    data = {
        "experiment": "uniform-gap",
        "sizes": [(5, 2)],
        "seeds": [0, 1],
        "relaxations": ["LEF", "CEF", "1TERM-CONIC"],
        "out": tmp_path / "report.csv",
        "threads": 1,
    }
    data.update(overrides)
    return SuiteConfig(**data)


def test_parse_seeds_and_sizes() -> None:
    assert parse_seeds("0-2,7") == [0, 1, 2, 7]
    assert parse_seeds("") == []
    assert pair_sizes([10, 20], [2]) == [(10, 2), (20, 2)]
    with pytest.raises(ValueError):
        pair_sizes([1, 2], [1, 2, 3])


def test_config_rejects_foreign_relaxation(tmp_path: Path) -> None:
    with pytest.raises(ValidationError):
        _config(tmp_path, relaxations=["UNI-MH"])
    with pytest.raises(ValidationError):
        _config(tmp_path, sizes=[(0, 1)])
    assert _config(tmp_path, relaxations="lef, cef").relaxations == ["LEF", "CEF"]


def test_uniform_suite_rows_and_files(tmp_path: Path) -> None:
    config = _config(tmp_path)
    result = run_suite(config)
    assert result.exit_code == 0
    assert [(r.seed, r.relaxation) for r in result.rows] == [
        (0, "LEF"), (0, "CEF"), (0, "1TERM-CONIC"), (1, "LEF"), (1, "CEF"), (1, "1TERM-CONIC"),
    ]
    for row in result.rows:
        assert row.v_lef is not None and row.oracle is not None
        assert row.value >= row.oracle - 1e-6
        if row.relaxation == "LEF":
            assert row.closed_lef_gap == pytest.approx(0.0, abs=1e-9)
        assert -1e-2 <= row.closed_lef_gap <= 100.0 + 1e-2
    assert len(read_report_csv(config.out)) == 6
    assert summary_path(config.out).exists()
    assert not cdf_path(config.out).exists()


def test_kterm_rows_per_level(tmp_path: Path) -> None:
    config = _config(tmp_path, sizes=[(4, 2)], seeds=[3], relaxations=["LEF", "KTERM"], k=[1, 4])
    result = run_suite(config, write=False)
    kterm = [r for r in result.rows if r.relaxation == "KTERM"]
    assert [r.k for r in kterm] == [1, 4]
    # при k = n разрыв закрыт полностью
    assert kterm[1].closed_lef_gap == pytest.approx(100.0, abs=1e-4)
    assert not config.out.exists()


def test_error_rows_set_exit_code(tmp_path: Path) -> None:
    config = _config(tmp_path, sizes=[(15, 2)], seeds=[0], relaxations=["LEF", "KTERM"])
    result = run_suite(config)
    kterm = [r for r in result.rows if r.relaxation == "KTERM"]
    assert kterm[0].status == "error"
    assert kterm[0].error.startswith("SizeGuard")
    assert result.exit_code == 1


def test_oracle_method_marks_local_search(tmp_path: Path) -> None:
    """Выше предела перебора v̂ помечен как результат локального поиска."""
    config = _config(tmp_path, sizes=[(24, 2), (5, 2)], seeds=[0], relaxations=["LEF"])
    result = run_suite(config)
    large, small = result.rows
    assert large.n == 24 and large.status == "ok"
    assert large.oracle_method == "local-search"
    assert small.oracle_method == "binary-enumeration"
    assert [r.oracle_method for r in read_report_csv(config.out)] == ["local-search", "binary-enumeration"]


def test_empty_seed_list_writes_header(tmp_path: Path) -> None:
    config = _config(tmp_path, seeds=[])
    result = run_suite(config)
    assert result.rows == [] and result.exit_code == 0
    assert config.out.read_text(encoding="utf-8").splitlines() == [",".join(REPORT_FIELDS)]


def test_univariate_suite_writes_cdf(tmp_path: Path) -> None:
    config = _config(tmp_path, experiment="univariate", sizes=[(1, 3)], relaxations=[])
    result = run_suite(config)
    assert {r.relaxation for r in result.rows} == {"UNI-MC", "UNI-MH"}
    for row in result.rows:
        if row.relaxation == "UNI-MC" and row.status == "ok":
            assert row.remaining_gap == pytest.approx(100.0)
    assert cdf_path(config.out).exists()
    assert result.cdf


def test_parallel_run_keeps_order(tmp_path: Path) -> None:
    serial = run_suite(_config(tmp_path, relaxations=["LEF"]), write=False)
    parallel = run_suite(_config(tmp_path, relaxations=["LEF"], threads=2), write=False)
    assert [(r.seed, r.value) for r in serial.rows] == [(r.seed, r.value) for r in parallel.rows]


def test_cli_gen_solve_export(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    instance = tmp_path / "fp.json"
    assert main(["gen", "--experiment", "uniform", "--n", "4", "--m", "2", "--seed", "1", "--out", str(instance)]) == 0
    capsys.readouterr()
    assert main(["solve", "--instance", str(instance), "--relaxation", "lef"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["relaxation"] == "LEF"
    assert out["value"] >= out["oracle"] - 1e-6
    lp_file = tmp_path / "fp.lp"
    assert main(["export-lp", "--instance", str(instance), "--relaxation", "1term", "--out", str(lp_file)]) == 0
    assert lp_file.read_text(encoding="utf-8").startswith("\\ fracx model 1TERM")


def test_cli_membership(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["membership", "--point", "1", "0.5", "0.2", "--a", "0", "--b", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["inside"] is False
    assert main(["membership", "--point", "1", "0.5", "0.25", "--a", "0", "--b", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["inside"] is True


def test_cli_suite_exit_codes(tmp_path: Path) -> None:
    out = tmp_path / "cli.csv"
    code = main([
        "suite", "--experiment", "uniform-gap", "--n", "15", "--m", "2", "--seeds", "0",
        "--relaxations", "LEF,KTERM", "--out", str(out), "--threads", "1",
    ])
    assert code == 1
    assert out.exists()
    assert main(["suite", "--experiment", "uniform-gap", "--n", "5", "--m", "2", "--relaxations", "UNI-MH"]) == 1
