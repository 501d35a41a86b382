"""LinearModel, решение LP и цикл отсечений.

Почему: все релаксации собираются в одну и ту же модель с реестром имён
поднятых переменных; решатель выбирается по размеру (плотный симплекс или HiGHS),
а конические и моментные ограничения добавляются только отсечениями.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Mapping, Sequence, Union

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from ..config import settings
from ..errors import (
    Infeasible,
    IterationLimit,
    ModelError,
    NumericalBreakdown,
    Unbounded,
)
from ..models import Sense
from .lifted import LiftedIndex
from .simplex import EQ, GE, LE, solve_dense

logger = logging.getLogger(__name__)

Key = Union[str, LiftedIndex, int]


class Relation(str, Enum):
    LE = "<="
    EQ = "="
    GE = ">="


_RELATION_CODE = {Relation.LE: LE, Relation.EQ: EQ, Relation.GE: GE}


@dataclass(slots=True)
class Row:
    coeffs: dict[int, float]
    relation: Relation
    rhs: float
    name: str = ""

    def activity(self, x: np.ndarray) -> float:
        return float(sum(v * x[j] for j, v in self.coeffs.items()))

    def violation(self, x: np.ndarray) -> float:
        """Положительная величина нарушения строки в точке x (0, если выполнена)."""
        act = self.activity(x)
        if self.relation == Relation.LE:
            return max(0.0, act - self.rhs)
        if self.relation == Relation.GE:
            return max(0.0, self.rhs - act)
        return abs(act - self.rhs)

    def slack(self, x: np.ndarray) -> float:
        act = self.activity(x)
        if self.relation == Relation.LE:
            return self.rhs - act
        if self.relation == Relation.GE:
            return act - self.rhs
        return -abs(act - self.rhs)


class LinearModel:
    """Разреженная LP-модель с реестром имён столбцов."""

    def __init__(self, name: str = "", sense: Sense = Sense.MAXIMIZE) -> None:
        self.name = name
        self.sense = sense
        self.columns: list[str] = []
        self.index: dict[str, int] = {}
        self.lo: list[float] = []
        self.hi: list[float] = []
        self.obj: list[float] = []
        self.binary: list[bool] = []
        self.obj_const = 0.0
        self.rows: list[Row] = []
        self._row_names: set[str] = set()

    # --- столбцы ---

    @property
    def n_cols(self) -> int:
        return len(self.columns)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def add_var(
        self,
        key: str | LiftedIndex,
        lo: float = 0.0,
        hi: float = math.inf,
        obj: float = 0.0,
        binary: bool = False,
    ) -> int:
        name = str(key)
        if name in self.index:
            raise ModelError(f"переменная {name} уже есть в модели {self.name!r}")
        if lo > hi:
            raise ModelError(f"пустой интервал для {name}: [{lo}, {hi}]")
        col = len(self.columns)
        self.columns.append(name)
        self.index[name] = col
        self.lo.append(float(lo))
        self.hi.append(float(hi))
        self.obj.append(float(obj))
        self.binary.append(binary)
        return col

    def has(self, key: str | LiftedIndex) -> bool:
        return str(key) in self.index

    def col(self, key: Key) -> int:
        if isinstance(key, int):
            if not 0 <= key < len(self.columns):
                raise ModelError(f"нет столбца с номером {key}")
            return key
        name = str(key)
        try:
            return self.index[name]
        except KeyError:
            raise ModelError(f"неизвестная переменная {name} в модели {self.name!r}") from None

    def set_bounds(self, key: Key, lo: float | None = None, hi: float | None = None) -> None:
        j = self.col(key)
        if lo is not None:
            self.lo[j] = float(lo)
        if hi is not None:
            self.hi[j] = float(hi)

    def fix(self, key: Key, value: float) -> None:
        j = self.col(key)
        self.lo[j] = self.hi[j] = float(value)

    # --- строки ---

    def _coeffs(self, coeffs: Mapping[Key, float]) -> dict[int, float]:
        merged: dict[int, float] = {}
        for key, value in coeffs.items():
            j = self.col(key)
            merged[j] = merged.get(j, 0.0) + float(value)
        return {j: v for j, v in sorted(merged.items()) if v != 0.0}

    def add_row(
        self,
        coeffs: Mapping[Key, float],
        relation: Relation | str,
        rhs: float,
        name: str = "",
    ) -> int:
        row = Row(self._coeffs(coeffs), Relation(relation), float(rhs), name)
        self.rows.append(row)
        if name:
            self._row_names.add(name)
        return len(self.rows) - 1

    def has_row(self, name: str) -> bool:
        return name in self._row_names

    def remove_rows(self, names: set[str]) -> int:
        before = len(self.rows)
        self.rows = [r for r in self.rows if r.name not in names]
        self._row_names -= names
        return before - len(self.rows)

    def set_objective(self, coeffs: Mapping[Key, float], const: float = 0.0) -> None:
        self.obj = [0.0] * len(self.columns)
        for j, v in self._coeffs(coeffs).items():
            self.obj[j] = v
        self.obj_const = float(const)

    def copy(self) -> "LinearModel":
        other = LinearModel(self.name, self.sense)
        other.columns = list(self.columns)
        other.index = dict(self.index)
        other.lo = list(self.lo)
        other.hi = list(self.hi)
        other.obj = list(self.obj)
        other.binary = list(self.binary)
        other.obj_const = self.obj_const
        other.rows = [Row(dict(r.coeffs), r.relation, r.rhs, r.name) for r in self.rows]
        other._row_names = set(self._row_names)
        return other

    # --- вычисления в точке ---

    def to_arrays(self) -> tuple[np.ndarray, sparse.csr_matrix, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(c, A, relations, b, lo, hi) с разреженной матрицей A."""
        data, ri, ci = [], [], []
        for i, row in enumerate(self.rows):
            for j, v in row.coeffs.items():
                ri.append(i)
                ci.append(j)
                data.append(v)
        A = sparse.csr_matrix((data, (ri, ci)), shape=(len(self.rows), len(self.columns)))
        rel = np.array([_RELATION_CODE[r.relation] for r in self.rows], dtype=int)
        b = np.array([r.rhs for r in self.rows], dtype=float)
        return (
            np.array(self.obj, dtype=float), A, rel, b,
            np.array(self.lo, dtype=float), np.array(self.hi, dtype=float),
        )

    def objective_value(self, x: np.ndarray) -> float:
        return float(np.dot(self.obj, x)) + self.obj_const

    def row_violations(self, x: np.ndarray) -> np.ndarray:
        return np.array([r.violation(x) for r in self.rows])

    def is_feasible(self, x: np.ndarray, tol: float | None = None, bound_tol: float = 1e-9) -> bool:
        tol = settings.feasibility_tol if tol is None else tol
        x = np.asarray(x, dtype=float)
        if np.any(x < np.array(self.lo) - bound_tol) or np.any(x > np.array(self.hi) + bound_tol):
            return False
        return not self.rows or float(np.max(self.row_violations(x))) <= tol

    def point(self, assignment: Mapping[Key, float], default: float = 0.0, strict: bool = True) -> np.ndarray:
        """Собрать вектор столбцов из словаря имя → значение.

        strict=False пропускает имена, которых в модели нет.
        """
        x = np.full(len(self.columns), default)
        for key, value in assignment.items():
            if not strict and isinstance(key, (str, LiftedIndex)) and not self.has(key):
                continue
            x[self.col(key)] = value
        return x


@dataclass(slots=True)
class LpSolution:
    status: str
    primal: np.ndarray
    objective: float
    iterations: int
    basis: tuple[int, ...] = ()
    rounds: int = 0
    cuts_added: int = 0
    index: Mapping[str, int] = field(default_factory=dict)

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"

    def value(self, key: str | LiftedIndex) -> float:
        return float(self.primal[self.index[str(key)]])

    def require_optimal(self) -> "LpSolution":
        if self.status == "optimal":
            return self
        if self.status == "infeasible":
            raise Infeasible("LP-релаксация несовместна")
        if self.status == "unbounded":
            raise Unbounded("LP-релаксация неограниченна")
        raise IterationLimit(f"превышен лимит итераций ({self.iterations})")


def _pick_backend(model: LinearModel, backend: str | None) -> str:
    backend = (backend or settings.lp_backend).lower()
    if backend == "auto":
        cells = max(1, model.n_rows) * max(1, model.n_cols)
        return "dense" if cells <= settings.dense_cell_limit else "highs"
    return backend


def _solve_highs(model: LinearModel, c: np.ndarray) -> tuple[str, np.ndarray, int]:
    _, A, rel, b, lo, hi = model.to_arrays()
    n = model.n_cols
    le = np.flatnonzero(rel == LE)
    ge = np.flatnonzero(rel == GE)
    eq = np.flatnonzero(rel == EQ)
    A_ub = sparse.vstack([A[le], -A[ge]]).tocsr() if (le.size or ge.size) else None
    b_ub = np.concatenate([b[le], -b[ge]]) if A_ub is not None else None
    A_eq = A[eq] if eq.size else None
    b_eq = b[eq] if eq.size else None
    bounds = [(None if not np.isfinite(l) else l, None if not np.isfinite(u) else u) for l, u in zip(lo, hi)]
    res = linprog(
        c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=bounds or None,
        method="highs-ds",
        options={
            "primal_feasibility_tolerance": settings.feasibility_tol,
            "dual_feasibility_tolerance": settings.optimality_tol,
            "maxiter": settings.iteration_factor * (model.n_rows + n),
        },
    )
    status_map = {0: "optimal", 1: "iteration_limit", 2: "infeasible", 3: "unbounded"}
    if res.status not in status_map:
        raise NumericalBreakdown(f"HiGHS: {res.message}")
    x = np.asarray(res.x, dtype=float) if res.x is not None else np.zeros(n)
    return status_map[res.status], x, int(getattr(res, "nit", 0) or 0)


def solve(model: LinearModel, backend: str | None = None) -> LpSolution:
    """Решить LP. Статус не бросается: его переводит в ошибку `require_optimal`."""
    sign = -1.0 if model.sense == Sense.MAXIMIZE else 1.0
    c = sign * np.array(model.obj, dtype=float)
    chosen = _pick_backend(model, backend)
    if chosen == "highs":
        status, x, iterations = _solve_highs(model, c)
        basis = tuple(
            j for j in range(model.n_cols)
            if model.lo[j] + 1e-9 < x[j] < model.hi[j] - 1e-9
        )
    else:
        _, A, rel, b, lo, hi = model.to_arrays()
        result = solve_dense(
            c, A.toarray(), rel, b, lo, hi,
            feasibility_tol=settings.feasibility_tol,
            optimality_tol=settings.optimality_tol,
            pivot_floor=settings.pivot_floor,
            pivot_zero=settings.pivot_zero,
            iteration_factor=settings.iteration_factor,
            bland_factor=settings.bland_factor,
        )
        status, x, iterations, basis = result.status, result.x, result.iterations, result.basis
    objective = model.objective_value(x) if status == "optimal" else float("nan")
    logger.debug(
        "LP %s [%s]: %d×%d, статус=%s, итераций=%d, цель=%.10g",
        model.name, chosen, model.n_rows, model.n_cols, status, iterations, objective,
    )
    if status == "iteration_limit":
        logger.warning("LP %s: достигнут лимит итераций (%d)", model.name, iterations)
    return LpSolution(status, x, objective, iterations, basis, index=dict(model.index))


@dataclass(slots=True)
class Cut:
    """Линейное отсечение; pool: ключ пула (например, номер дроби)."""
    coeffs: dict[Key, float]
    relation: Relation
    rhs: float
    name: str
    pool: str = "default"
    violation: float = 0.0


Separator = Callable[[np.ndarray, LinearModel], Sequence[Cut]]


def cut_violation(model: LinearModel, cut: Cut, point: np.ndarray) -> float:
    act = sum(v * point[model.col(k)] for k, v in cut.coeffs.items())
    if cut.relation == Relation.LE:
        return act - cut.rhs
    if cut.relation == Relation.GE:
        return cut.rhs - act
    return abs(act - cut.rhs)


def _evict(model: LinearModel, names: list[str], point: np.ndarray, limit: int) -> list[str]:
    """Оставить в пуле не больше limit отсечений, выбрасывая неактивные с наибольшим запасом."""
    if len(names) <= limit:
        return names
    by_name = {r.name: r for r in model.rows if r.name in set(names)}
    slack = {name: by_name[name].slack(point) for name in names if name in by_name}
    inactive = sorted(
        (name for name, s in slack.items() if s > settings.feasibility_tol),
        key=lambda name: (-slack[name], name),
    )
    drop = set(inactive[: len(names) - limit])
    if drop:
        model.remove_rows(drop)
    return [name for name in names if name not in drop]


def cutting_loop(
    model: LinearModel,
    separators: Sequence[Separator] = (),
    max_rounds: int | None = None,
    tol: float | None = None,
    backend: str | None = None,
) -> LpSolution:
    """Решать LP, добавляя нарушенные отсечения, пока они находятся.

    Исходная модель не меняется: отсечения копятся в копии.
    """
    max_rounds = settings.max_rounds if max_rounds is None else max_rounds
    tol = settings.cut_tol if tol is None else tol
    work = model.copy()
    pools: dict[str, list[str]] = {}
    total = 0
    rounds = 0
    solution = solve(work, backend)
    pending = False
    while separators and solution.optimal:
        point = solution.primal
        fresh: list[Cut] = []
        seen: set[str] = set()
        for separator in separators:
            for cut in separator(point, work):
                if cut.name in seen or work.has_row(cut.name):
                    continue
                cut.violation = cut_violation(work, cut, point)
                if cut.violation >= tol:
                    fresh.append(cut)
                    seen.add(cut.name)
        if not fresh:
            pending = False
            break
        if rounds >= max_rounds:
            pending = True
            break
        for cut in fresh:
            work.add_row(cut.coeffs, cut.relation, cut.rhs, cut.name)
            pools.setdefault(cut.pool, []).append(cut.name)
        total += len(fresh)
        for key in list(pools):
            pools[key] = _evict(work, pools[key], point, settings.cut_pool_size)
        rounds += 1
        logger.debug(
            "Отсечения %s: раунд %d, добавлено %d, цель до=%.10g",
            model.name, rounds, len(fresh), solution.objective,
        )
        solution = solve(work, backend)
    if pending:
        logger.warning("Цикл отсечений %s: остановлен после %d раундов", model.name, rounds)
    solution.rounds = rounds
    solution.cuts_added = total
    return solution


def point_feasible(
    model: LinearModel,
    assignment: Mapping[Key, float],
    tol: float | None = None,
) -> bool:
    """Совместна ли модель при закреплённых значениях перечисленных столбцов."""
    work = model.copy()
    for key, value in assignment.items():
        j = work.col(key)
        tol_b = 1e-9
        if value < work.lo[j] - tol_b or value > work.hi[j] + tol_b:
            return False
        work.fix(j, value)
    work.set_objective({})
    solution = solve(work)
    if solution.status == "infeasible":
        return False
    if not solution.optimal:
        solution.require_optimal()
    limit = settings.feasibility_tol if tol is None else tol
    return not work.rows or float(np.max(work.row_violations(solution.primal))) <= limit
