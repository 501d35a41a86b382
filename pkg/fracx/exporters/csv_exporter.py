"""Экспорт отчёта прогона, сводки и данных CDF в CSV."""

from __future__ import annotations

import csv
import logging
from pathlib import Path
from typing import Sequence

from ..constants import CDF_FIELDS, REPORT_FIELDS, SUMMARY_FIELDS
from ..models import ReportRow, SummaryRow

logger = logging.getLogger(__name__)

_TEXT_FIELDS = frozenset({"error", "oracle_method"})


def _blank(value: object) -> object:
    return "" if value is None else value


def _write(path: Path, fields: list[str], rows: Sequence[dict]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=fields)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _blank(row.get(k)) for k in fields})


def export_report_csv(rows: Sequence[ReportRow], path: Path) -> None:
    _write(path, REPORT_FIELDS, [row.model_dump() for row in rows])
    logger.info("CSV: %d строк отчёта -> %s", len(rows), path)


def export_summary_csv(rows: Sequence[SummaryRow], path: Path) -> None:
    _write(path, SUMMARY_FIELDS, [row.model_dump() for row in rows])
    logger.info("Summary CSV: %d строк -> %s", len(rows), path)


def export_cdf_csv(rows: Sequence[dict], path: Path) -> None:
    _write(path, CDF_FIELDS, rows)
    logger.info("CDF CSV: %d точек -> %s", len(rows), path)


def read_report_csv(path: Path) -> list[ReportRow]:
    """Обратное чтение отчёта; пустые ячейки числовых колонок становятся None."""
    rows = []
    with open(path, encoding="utf-8", newline="") as f:
        for raw in csv.DictReader(f):
            data = {k: (None if v == "" and k not in _TEXT_FIELDS else v) for k, v in raw.items()}
            rows.append(ReportRow.model_validate(data))
    return rows
