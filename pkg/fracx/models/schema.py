"""Pydantic-модели данных: экземпляры задач, отчёты валидации и строки отчёта прогона."""

from __future__ import annotations

from enum import Enum
from pathlib import Path
from typing import Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..constants import EXPERIMENT_RELAXATIONS, validate_relaxation


class Sense(str, Enum):
    MAXIMIZE = "maximize"
    MINIMIZE = "minimize"


class VarKind(str, Enum):
    BINARY = "binary"
    CONTINUOUS = "continuous"


class Ratio(BaseModel):
    """Дробь (b0 + b⊺x) / (a0 + a⊺x)."""
    model_config = ConfigDict(frozen=True)

    a0: float
    a: list[float]
    b0: float = 0.0
    b: list[float]


class FractionalProgram(BaseModel):
    """Сумма m дробей плюс c⊺x над {x | Cx ≤ d} с бинарными/непрерывными переменными.

    Размерности здесь не проверяются: это делает `validate_program`, чтобы
    вернуть все несоответствия одним отчётом.
    """
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=0)
    m: int = Field(ge=0)
    ratios: list[Ratio] = Field(default_factory=list)
    c: list[float] = Field(default_factory=list)
    C: list[list[float]] = Field(default_factory=list)
    d: list[float] = Field(default_factory=list)
    var_kind: list[VarKind] = Field(default_factory=list)
    # Границы непрерывных переменных; для бинарных всегда [0, 1]
    lo: list[float] | None = None
    hi: list[float] | None = None
    sense: Sense = Sense.MAXIMIZE
    name: str = ""

    @model_validator(mode="before")
    @classmethod
    def _fill_defaults(cls, data: object) -> object:
        if not isinstance(data, dict):
            return data
        n = data.get("n")
        if isinstance(n, int):
            if not data.get("var_kind"):
                data = {**data, "var_kind": [VarKind.BINARY.value] * n}
            if not data.get("c"):
                data = {**data, "c": [0.0] * n}
        return data

    # --- numpy-представления ---

    def denominators(self) -> tuple[np.ndarray, np.ndarray]:
        a0 = np.array([r.a0 for r in self.ratios], dtype=float)
        a = np.array([r.a for r in self.ratios], dtype=float).reshape(len(self.ratios), self.n)
        return a0, a

    def numerators(self) -> tuple[np.ndarray, np.ndarray]:
        b0 = np.array([r.b0 for r in self.ratios], dtype=float)
        b = np.array([r.b for r in self.ratios], dtype=float).reshape(len(self.ratios), self.n)
        return b0, b

    def linear(self) -> np.ndarray:
        return np.asarray(self.c, dtype=float).reshape(self.n)

    def constraints(self) -> tuple[np.ndarray, np.ndarray]:
        C = np.asarray(self.C, dtype=float).reshape(len(self.C), self.n)
        d = np.asarray(self.d, dtype=float).reshape(len(self.d))
        return C, d

    def binary_mask(self) -> np.ndarray:
        return np.array([k == VarKind.BINARY for k in self.var_kind], dtype=bool)

    @property
    def all_binary(self) -> bool:
        return all(k == VarKind.BINARY for k in self.var_kind)

    def var_bounds(self) -> tuple[np.ndarray, np.ndarray]:
        """Собственные границы переменных (до LP-ужесточения)."""
        lo = np.zeros(self.n)
        hi = np.full(self.n, np.inf)
        if self.lo is not None:
            lo = np.asarray(self.lo, dtype=float).copy()
        if self.hi is not None:
            hi = np.asarray(self.hi, dtype=float).copy()
        binary = self.binary_mask()
        lo[binary] = 0.0
        hi[binary] = 1.0
        return lo, hi

    def evaluate(self, x: np.ndarray) -> float:
        """Значение целевой функции в точке x."""
        x = np.asarray(x, dtype=float)
        a0, a = self.denominators()
        b0, b = self.numerators()
        value = float(self.linear() @ x)
        if len(self.ratios):
            value += float(np.sum((b0 + b @ x) / (a0 + a @ x)))
        return value


class UnivariateInstance(BaseModel):
    """max −a·x − b⊺y + c⊺z, z_i = y_i/(x − r_i), x ∈ [x_lo, x_hi], y ∈ [y_lo, y_hi]."""
    model_config = ConfigDict(frozen=True)

    a: float
    b: list[float]
    c: list[float]
    r: list[float]
    x_lo: float = 0.0
    x_hi: float = 1.0
    y_lo: list[float] = Field(default_factory=list)
    y_hi: list[float] = Field(default_factory=list)
    name: str = ""

    @model_validator(mode="before")
    @classmethod
    def _fill_boxes(cls, data: object) -> object:
        if not isinstance(data, dict):
            return data
        m = len(data.get("r") or [])
        if not data.get("y_lo"):
            data = {**data, "y_lo": [1.0] * m}
        if not data.get("y_hi"):
            data = {**data, "y_hi": [2.0] * m}
        return data

    @property
    def m(self) -> int:
        return len(self.r)

    def objective(self, x: float, y: np.ndarray) -> float:
        y = np.asarray(y, dtype=float)
        r = np.asarray(self.r)
        z = y / (x - r)
        return float(-self.a * x - np.dot(self.b, y) + np.dot(self.c, z))


class BilinearFractionalProgram(BaseModel):
    """(Σ b_e x_i x_j + d⊺x + d0) / (Σ a_e x_i x_j + c⊺x + c0) над {0,1}^|V| по рёбрам графа."""
    model_config = ConfigDict(frozen=True)

    n_nodes: int = Field(ge=0)
    edges: list[tuple[int, int]] = Field(default_factory=list)
    a_edges: list[float] = Field(default_factory=list)
    b_edges: list[float] = Field(default_factory=list)
    c: list[float] = Field(default_factory=list)
    d: list[float] = Field(default_factory=list)
    c0: float = 1.0
    d0: float = 0.0
    sense: Sense = Sense.MINIMIZE
    name: str = ""

    @field_validator("edges", mode="before")
    @classmethod
    def _canonical_edges(cls, value: object) -> object:
        if isinstance(value, list):
            return [tuple(sorted((int(u), int(v)))) for u, v in value]
        return value

    def _forms(self, X: np.ndarray, weights: list[float], lin: list[float], const: float) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        value = np.full(X.shape[0], const) + X @ np.asarray(lin, dtype=float).reshape(self.n_nodes)
        for (u, v), w in zip(self.edges, weights):
            value += w * X[:, u] * X[:, v]
        return value

    def denominator(self, X: np.ndarray) -> np.ndarray:
        return self._forms(X, self.a_edges, self.c, self.c0)

    def numerator(self, X: np.ndarray) -> np.ndarray:
        return self._forms(X, self.b_edges, self.d, self.d0)


class ValidationIssue(BaseModel):
    """Запись о проблеме, найденной при валидации задачи."""
    code: Literal["dimension_mismatch", "non_positive_denominator", "empty_region", "lp_failure"]
    ratio: int | None = None
    details: str = ""
    witness: list[float] | None = None


class ValidationReport(BaseModel):
    issues: list[ValidationIssue] = Field(default_factory=list)
    denom_min: list[float] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues


class SuiteConfig(BaseModel):
    """Параметры прогона набора экспериментов."""
    experiment: Literal["uniform-gap", "assortment", "univariate"]
    sizes: list[tuple[int, int]]
    seeds: list[int] = Field(default_factory=list)
    relaxations: list[str] = Field(default_factory=list)
    k: list[int] = Field(default_factory=lambda: [1])
    out: Path = Path("reports/report.csv")
    tol: float | None = None
    max_rounds: int | None = None
    threads: int | None = None

    @field_validator("relaxations", mode="before")
    @classmethod
    def _upper_relaxations(cls, value: object) -> object:
        if isinstance(value, str):
            value = value.split(",")
        if isinstance(value, list):
            return [str(v).strip().upper() for v in value if str(v).strip()]
        return value

    @model_validator(mode="after")
    def _check_relaxations(self) -> "SuiteConfig":
        bad = [r for r in self.relaxations if not validate_relaxation(self.experiment, r)]
        if bad:
            allowed = ", ".join(EXPERIMENT_RELAXATIONS[self.experiment])
            raise ValueError(f"релаксации {bad} недопустимы для {self.experiment}; есть: {allowed}")
        for n, m in self.sizes:
            if n < 1 or m < 1:
                raise ValueError(f"размер ({n}, {m}) должен быть положительным")
        if any(k < 1 for k in self.k):
            raise ValueError("k должен быть ≥ 1")
        return self


class ReportRow(BaseModel):
    """Одна строка отчёта: экземпляр × релаксация."""
    experiment: str
    n: int
    m: int
    seed: int
    relaxation: str
    k: int | None = None
    status: Literal["ok", "error"] = "ok"
    value: float | None = None
    oracle: float | None = None
    oracle_method: str = ""
    v_lef: float | None = None
    closed_lef_gap: float | None = None
    remaining_gap: float | None = None
    rounds: int = 0
    cuts: int = 0
    time_us: int = 0
    error: str = ""


class SummaryRow(BaseModel):
    experiment: str
    n: int
    m: int
    relaxation: str
    metric: str
    count: int
    avg: float | None = None
    min: float | None = None
    max: float | None = None
    std: float | None = None
