"""Почему: все допуски и лимиты численного ядра в одном месте, переопределяются через FRACX_*.

Значения по умолчанию совпадают с константами из требований; тесты создают
`Settings(_env_file=None, ...)` и передают переопределения явно.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Literal

from pydantic import ValidationError, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Настройки fracx, читаются из переменных окружения с префиксом FRACX_."""

    model_config = SettingsConfigDict(
        env_prefix="FRACX_",
        env_file=".env",
        extra="ignore",
        env_ignore_empty=True,
    )

    # --- Параллелизм прогона ---
    threads: int = 1

    # --- LP-ядро ---
    lp_backend: Literal["auto", "dense", "highs"] = "auto"
    # auto: плотный симплекс, пока rows*cols не превышает порог, дальше HiGHS
    dense_cell_limit: int = 250_000
    feasibility_tol: float = 1e-7
    optimality_tol: float = 1e-7
    pivot_floor: float = 1e-11
    pivot_zero: float = 1e-9
    iteration_factor: int = 50
    bland_factor: int = 3

    # --- Модель и границы ---
    positivity_margin: float = 1e-7

    # --- Отсечения ---
    cut_tol: float = 1e-6
    max_rounds: int = 200
    cut_pool_size: int = 500

    # --- Иерархия k-term ---
    kterm_column_cap: int = 20_000
    kterm_max_n: int = 14

    # --- Оракулы ---
    oracle_max_binary: int = 22
    vertex_max_n: int = 6
    vertex_max_rows: int = 12
    univariate_grid: int = 2000
    golden_tol: float = 1e-9
    local_search_starts: int = 64

    # --- Моментные оболочки ---
    jacobi_tol: float = 1e-12
    jacobi_max_sweeps: int = 100
    moment_tol: float = 1e-9
    condition_cap: float = 1e12

    @field_validator("threads", mode="before")
    @classmethod
    def _clamp_threads(cls, value: object) -> object:
        if isinstance(value, str):
            value = value.strip().strip("'\"")
            if not value:
                return 1
        try:
            return max(1, int(value))  # type: ignore[arg-type]
        except (TypeError, ValueError):
            raise ValueError("FRACX_THREADS должен быть целым числом") from None

    @field_validator("lp_backend", mode="before")
    @classmethod
    def _normalize_backend(cls, value: object) -> object:
        if isinstance(value, str):
            return value.strip().strip("'\"").lower()
        return value


def _load_settings() -> Settings:
    try:
        return Settings()
    except ValidationError as exc:
        env_file_path = Path(".env").resolve()
        logging.basicConfig(
            level=logging.ERROR,
            format="%(asctime)s | %(levelname)s | %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S",
        )
        logger = logging.getLogger(__name__)
        logger.error(
            "Проверка .env: path=%s exists=%s cwd=%s",
            env_file_path,
            env_file_path.exists(),
            Path.cwd(),
        )
        broken = [
            "FRACX_" + ".".join(map(str, err.get("loc", []))).upper()
            for err in exc.errors()
        ]
        if broken:
            logger.error("Некорректные переменные окружения: %s", ", ".join(broken))
        logger.error("Ошибка конфигурации: %s", exc)
        raise SystemExit(1) from exc


settings = _load_settings()
