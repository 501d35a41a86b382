"""Почему: делаем локальный запуск pytest автономным без ручной настройки окружения."""

from __future__ import annotations

import os
import sys
from pathlib import Path

import pytest

ROOT_DIR = Path(__file__).resolve().parents[1]
if str(ROOT_DIR) not in sys.path:
    sys.path.insert(0, str(ROOT_DIR))

os.environ.setdefault("FRACX_THREADS", "1")
os.environ.setdefault("FRACX_LP_BACKEND", "auto")

from fracx.models import FractionalProgram, Ratio, VarKind  # noqa: E402

ACCEPTANCE = os.environ.get("FRACX_ACCEPTANCE") == "1"
acceptance = pytest.mark.skipif(not ACCEPTANCE, reason="полный прогон: FRACX_ACCEPTANCE=1")


@pytest.fixture
def worked_example() -> FractionalProgram:
    """m=2, n=2: максимум 25ρ¹ − 4y¹₁ − 24ρ² равен 1 на conv(G) и 9 на пересечении оболочек дробей."""
    return FractionalProgram(
        n=2, m=2,
        ratios=[
            Ratio(a0=1.0, a=[2.0, 4.0], b0=25.0, b=[-4.0, 0.0]),
            Ratio(a0=1.0, a=[3.0, 5.0], b0=-24.0, b=[0.0, 0.0]),
        ],
    )


@pytest.fixture
def witness_program() -> FractionalProgram:
    """m=1, n=2, a0 = a1 = a2 = 1: точка (½, ¼, ¼, ¼, ¼) лежит в LEF, но не в 1-Term."""
    return FractionalProgram(n=2, m=1, ratios=[Ratio(a0=1.0, a=[1.0, 1.0], b0=0.0, b=[0.0, 0.0])])


@pytest.fixture
def continuous_box() -> FractionalProgram:
    """Одна дробь (1 + x0 − x1)/(2 + x0 + x1) на [0, 1]²."""
    return FractionalProgram(
        n=2, m=1,
        ratios=[Ratio(a0=2.0, a=[1.0, 1.0], b0=1.0, b=[1.0, -1.0])],
        var_kind=[VarKind.CONTINUOUS, VarKind.CONTINUOUS],
        lo=[0.0, 0.0], hi=[1.0, 1.0],
    )
