"""CSV-отчёты, JSON-экземпляры и LP-формат."""

from __future__ import annotations

from pathlib import Path

from fracx.constants import REPORT_FIELDS
from fracx.core.lp import LinearModel, Relation
from fracx.core.program import compute_bounds
from fracx.core.relaxations import build_lef
from fracx.exporters import (
    export_cdf_csv,
    export_lp,
    export_report_csv,
    export_summary_csv,
    load_instance,
    read_report_csv,
    sanitize,
    save_instance,
    write_lp,
)
from fracx.generators import gen_bilinear, gen_uniform, gen_univariate
from fracx.models import (
    BilinearFractionalProgram,
    FractionalProgram,
    ReportRow,
    Sense,
    SummaryRow,
    UnivariateInstance,
)


def test_report_csv_blank_cells(tmp_path: Path) -> None:
    rows = [
        ReportRow(experiment="uniform-gap", n=5, m=2, seed=0, relaxation="LEF", value=1.5, closed_lef_gap=0.0),
        ReportRow(experiment="uniform-gap", n=5, m=2, seed=0, relaxation="KTERM", k=2, status="error", error="SizeGuard: x"),
    ]
    path = tmp_path / "out" / "report.csv"
    export_report_csv(rows, path)
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == ",".join(REPORT_FIELDS)
    assert lines[1].startswith("uniform-gap,5,2,0,LEF,,ok,1.5,")
    back = read_report_csv(path)
    assert back[0].k is None and back[0].value == 1.5
    assert back[1].status == "error" and back[1].k == 2 and back[1].value is None


def test_empty_report_is_header_only(tmp_path: Path) -> None:
    path = tmp_path / "empty.csv"
    export_report_csv([], path)
    assert path.read_text(encoding="utf-8").splitlines() == [",".join(REPORT_FIELDS)]


def test_summary_and_cdf_csv(tmp_path: Path) -> None:
    summary = [SummaryRow(experiment="univariate", n=1, m=5, relaxation="UNI-MH", metric="remaining_gap", count=1, avg=3.0)]
    export_summary_csv(summary, tmp_path / "s.csv")
    assert "univariate,1,5,UNI-MH,remaining_gap,1,3.0,,," in (tmp_path / "s.csv").read_text(encoding="utf-8")
    cdf = [{"experiment": "univariate", "n": 1, "m": 5, "relaxation": "UNI-MH", "rank": 1, "gap": 0.5, "fraction": 1.0}]
    export_cdf_csv(cdf, tmp_path / "c.csv")
    assert (tmp_path / "c.csv").read_text(encoding="utf-8").splitlines()[1] == "univariate,1,5,UNI-MH,1,0.5,1.0"


def test_instances_keep_their_type(tmp_path: Path) -> None:
    cases = [
        (gen_uniform(4, 2, 1), FractionalProgram),
        (gen_univariate(3, 1), UnivariateInstance),
        (gen_bilinear(5, 1), BilinearFractionalProgram),
    ]
    for instance, kind in cases:
        path = tmp_path / f"{kind.__name__}.json"
        save_instance(instance, path)
        loaded = load_instance(path)
        assert isinstance(loaded, kind)
        assert loaded == instance


def test_sanitize_names() -> None:
    assert sanitize("y[0,1]") == "y(0,1)"
    assert sanitize("odd[0]:(0, 1)") == "odd(0).(0,_1)"
    assert sanitize("u[{0,2}]") == "u({0,2})"


def test_lp_text_sections(tmp_path: Path) -> None:
    model = LinearModel("tiny", Sense.MINIMIZE)
    model.add_var("a", 0.0, 4.0, obj=1.0)
    model.add_var("b", float("-inf"), float("inf"), obj=-2.0)
    model.add_var("c", 1.0, 1.0)
    model.add_var("d", 0.0, 1.0, binary=True)
    model.add_row({"a": 1.0, "b": -1.0}, Relation.LE, 3.0, "cap[0]")
    model.add_row({"a": 1.0, "d": 2.0}, Relation.GE, 1.0)
    text = export_lp(model)
    lines = text.splitlines()
    assert lines[0] == "\\ fracx model tiny"
    assert lines[1] == "Minimize"
    assert lines[2] == " obj: 1 a - 2 b"
    assert " cap(0): 1 a - 1 b <= 3" in lines
    assert " r1: 1 a + 2 d >= 1" in lines
    assert " 0 <= a <= 4" in lines
    assert " b free" in lines
    assert " c = 1" in lines
    assert lines[-2:] == [" d", "End"]
    write_lp(model, tmp_path / "m.lp")
    assert (tmp_path / "m.lp").read_text(encoding="utf-8") == text


def test_lp_of_empty_model_has_no_sections() -> None:
    """Пустая модель: только заголовок, направление и End."""
    text = export_lp(LinearModel("empty", Sense.MAXIMIZE))
    assert text.splitlines() == ["\\ fracx model empty", "Maximize", "End"]


def test_lp_of_relaxation_mentions_every_column() -> None:
    fp = gen_uniform(3, 1, 0)
    model = build_lef(fp, compute_bounds(fp))
    text = export_lp(model)
    for column in model.columns:
        assert sanitize(column) in text
    assert text.count("\n") > model.n_rows
