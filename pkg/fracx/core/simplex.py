"""Плотный симплекс-метод с ограниченными переменными.

Задача: min c⊺x, A x (≤|=|≥) b, lo ≤ x ≤ hi. Переменные сдвигаются/расщепляются
к виду 0 ≤ x' ≤ u, строки получают слаки, правые части делаются
неотрицательными. Фаза I минимизирует сумму искусственных переменных, затем
они закрепляются на [0, 0] и фаза II идёт по исходной цели.

Ценообразование Данцига; после bland_factor·(rows+cols) вырожденных шагов
навсегда включается правило Бленда. Результат детерминирован для одного входа.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ..errors import NumericalBreakdown

logger = logging.getLogger(__name__)

LE, EQ, GE = -1, 0, 1


@dataclass(slots=True)
class SimplexResult:
    status: str
    x: np.ndarray
    objective: float
    iterations: int
    basis: tuple[int, ...]


@dataclass(slots=True)
class _Column:
    """Как исходная переменная выражается через столбцы стандартной формы."""
    kind: str  # shift | mirror | split | fixed
    offset: float
    first: int
    second: int = -1


class _Tableau:
    """Полная таблица B⁻¹A с текущими значениями базиса и приведёнными ценами."""

    def __init__(
        self,
        A: np.ndarray,
        b: np.ndarray,
        upper: np.ndarray,
        basis: np.ndarray,
        *,
        pivot_zero: float,
        pivot_floor: float,
        optimality_tol: float,
        degenerate_cap: int,
    ) -> None:
        self.A = A
        self.b = b
        self.upper = upper
        self.basis = basis
        self.T = A.copy()
        self.beta = b.copy()
        self.at_upper = np.zeros(A.shape[1], dtype=bool)
        self.d = np.zeros(A.shape[1])
        self.pivot_zero = pivot_zero
        self.pivot_floor = pivot_floor
        self.optimality_tol = optimality_tol
        self.degenerate_cap = degenerate_cap
        self.degenerate = 0
        self.bland = False
        self.iterations = 0

    # --- служебное ---

    def price(self, cost: np.ndarray) -> None:
        self.d = cost - cost[self.basis] @ self.T
        self.d[self.basis] = 0.0

    def nonbasic_values(self) -> np.ndarray:
        values = np.zeros(self.A.shape[1])
        values[self.at_upper] = self.upper[self.at_upper]
        values[self.basis] = 0.0
        return values

    def reinvert(self) -> None:
        """Пересчитать B⁻¹A и значения базиса по исходной матрице."""
        if len(self.basis) == 0:
            return
        B = self.A[:, self.basis]
        x_n = self.nonbasic_values()
        try:
            self.T = np.linalg.solve(B, self.A)
            self.beta = np.linalg.solve(B, self.b - self.A @ x_n)
        except np.linalg.LinAlgError as exc:
            raise NumericalBreakdown("вырожденная базисная матрица при переобращении") from exc
        # единичные столбцы базиса точно
        self.T[:, self.basis] = np.eye(len(self.basis))

    def values(self) -> np.ndarray:
        full = self.nonbasic_values()
        full[self.basis] = self.beta
        return full

    # --- шаг симплекса ---

    def _entering(self, allowed: np.ndarray) -> tuple[int, float]:
        tol = self.optimality_tol
        improve_up = (~self.at_upper) & (self.d < -tol) & (self.upper > 0)
        improve_down = self.at_upper & (self.d > tol)
        candidates = (improve_up | improve_down) & allowed
        candidates[self.basis] = False
        idx = np.flatnonzero(candidates)
        if idx.size == 0:
            return -1, 0.0
        if self.bland:
            j = int(idx[0])
        else:
            j = int(idx[np.argmax(np.abs(self.d[idx]))])
        return j, (1.0 if improve_up[j] else -1.0)

    def _ratio(self, j: int, direction: float) -> tuple[int, float]:
        alpha = self.T[:, j] * direction
        best_row, best_t = -1, np.inf
        rows = np.flatnonzero(np.abs(alpha) > self.pivot_zero)
        for r in rows:
            a = alpha[r]
            if a > 0:
                t = max(self.beta[r], 0.0) / a
            else:
                u_b = self.upper[self.basis[r]]
                if not np.isfinite(u_b):
                    continue
                t = max(u_b - self.beta[r], 0.0) / -a
            if best_row < 0 or t < best_t - 1e-12:
                best_row, best_t = int(r), t
            elif abs(t - best_t) <= 1e-12:
                if self.bland:
                    if self.basis[r] < self.basis[best_row]:
                        best_row = int(r)
                elif abs(a) > abs(alpha[best_row]):
                    best_row = int(r)
        return best_row, best_t

    def _pivot(self, r: int, j: int) -> None:
        pivot = self.T[r, j]
        if abs(pivot) < self.pivot_floor:
            raise NumericalBreakdown(f"ведущий элемент {pivot:.3g} меньше порога {self.pivot_floor:g}")
        self.T[r] /= pivot
        col = self.T[:, j].copy()
        col[r] = 0.0
        nz = np.flatnonzero(col)
        if nz.size:
            self.T[nz] -= np.outer(col[nz], self.T[r])
        self.d -= self.d[j] * self.T[r]
        self.d[j] = 0.0

    def run(self, cost: np.ndarray, allowed: np.ndarray, cap: int) -> str:
        """Оптимизировать cost; вернуть optimal | unbounded | iteration_limit."""
        self.price(cost)
        while True:
            if self.iterations >= cap:
                return "iteration_limit"
            j, direction = self._entering(allowed)
            if j < 0:
                return "optimal"
            r, t = self._ratio(j, direction)
            t_flip = self.upper[j]
            if r < 0 and not np.isfinite(t_flip):
                return "unbounded"
            self.iterations += 1
            step = min(t, t_flip)
            if step <= 1e-12:
                self.degenerate += 1
                if not self.bland and self.degenerate >= self.degenerate_cap:
                    logger.debug("Симплекс: %d вырожденных шагов, переход на правило Бленда", self.degenerate)
                    self.bland = True
            self.beta -= direction * step * self.T[:, j]
            if r < 0 or t_flip <= t:
                # смена границы без смены базиса
                self.at_upper[j] = not self.at_upper[j]
                continue
            leaving = self.basis[r]
            leaving_to_upper = self.T[r, j] * direction < 0
            entering_value = step if direction > 0 else self.upper[j] - step
            self._pivot(r, j)
            self.beta[r] = entering_value
            self.basis[r] = j
            self.at_upper[j] = False
            self.at_upper[leaving] = bool(leaving_to_upper)


def solve_dense(
    c: np.ndarray,
    A: np.ndarray,
    relations: np.ndarray,
    b: np.ndarray,
    lo: np.ndarray,
    hi: np.ndarray,
    *,
    feasibility_tol: float,
    optimality_tol: float,
    pivot_floor: float,
    pivot_zero: float,
    iteration_factor: int,
    bland_factor: int,
) -> SimplexResult:
    """Минимизировать c⊺x; relations кодируются LE/EQ/GE."""
    m, n = A.shape
    if np.any(hi < lo - feasibility_tol):
        return SimplexResult("infeasible", np.clip(lo, -1e300, 1e300), float("nan"), 0, ())
    columns: list[_Column] = []
    std_cols: list[np.ndarray] = []
    std_upper: list[float] = []
    std_cost: list[float] = []
    shift = np.zeros(m)

    for j in range(n):
        a_j, c_j = A[:, j], c[j]
        lo_j, hi_j = lo[j], hi[j]
        if np.isfinite(lo_j) and np.isfinite(hi_j) and hi_j - lo_j <= 0.0:
            columns.append(_Column("fixed", lo_j, -1))
            shift += a_j * lo_j
        elif np.isfinite(lo_j):
            columns.append(_Column("shift", lo_j, len(std_cols)))
            shift += a_j * lo_j
            std_cols.append(a_j)
            std_upper.append(hi_j - lo_j)
            std_cost.append(c_j)
        elif np.isfinite(hi_j):
            columns.append(_Column("mirror", hi_j, len(std_cols)))
            shift += a_j * hi_j
            std_cols.append(-a_j)
            std_upper.append(np.inf)
            std_cost.append(-c_j)
        else:
            columns.append(_Column("split", 0.0, len(std_cols), len(std_cols) + 1))
            std_cols.extend([a_j, -a_j])
            std_upper.extend([np.inf, np.inf])
            std_cost.extend([c_j, -c_j])

    rhs = b - shift
    n_struct = len(std_cols)
    slack_of_row = np.full(m, -1)
    for i in range(m):
        if relations[i] == EQ:
            continue
        col = np.zeros(m)
        col[i] = 1.0 if relations[i] == LE else -1.0
        slack_of_row[i] = len(std_cols)
        std_cols.append(col)
        std_upper.append(np.inf)
        std_cost.append(0.0)

    M = np.column_stack(std_cols) if std_cols else np.zeros((m, 0))
    flip = rhs < 0
    M[flip] *= -1.0
    rhs = np.where(flip, -rhs, rhs)

    basis = np.full(m, -1)
    artificial: list[int] = []
    extra: list[np.ndarray] = []
    for i in range(m):
        s = slack_of_row[i]
        if s >= 0 and M[i, s] > 0:
            basis[i] = s
            continue
        col = np.zeros(m)
        col[i] = 1.0
        basis[i] = M.shape[1] + len(extra)
        artificial.append(int(basis[i]))
        extra.append(col)
    if extra:
        M = np.hstack([M, np.column_stack(extra)])
    upper = np.array(std_upper + [np.inf] * len(extra))
    cost = np.array(std_cost + [0.0] * len(extra))
    total = M.shape[1]
    cap = iteration_factor * (m + n)

    tab = _Tableau(
        M, rhs, upper, basis,
        pivot_zero=pivot_zero,
        pivot_floor=pivot_floor,
        optimality_tol=optimality_tol,
        degenerate_cap=bland_factor * (m + n),
    )
    allowed = np.ones(total, dtype=bool)

    if artificial:
        phase1 = np.zeros(total)
        phase1[artificial] = 1.0
        status = tab.run(phase1, allowed, cap)
        if status == "iteration_limit":
            return _result(status, tab, columns, c, n)
        tab.reinvert()
        infeasibility = float(np.sum(tab.values()[artificial]))
        if infeasibility > feasibility_tol * (1.0 + float(np.max(np.abs(rhs), initial=0.0))):
            logger.debug("Симплекс: фаза I закончилась с невязкой %.3g", infeasibility)
            return _result("infeasible", tab, columns, c, n)
        tab.upper[artificial] = 0.0
        allowed[artificial] = False

    status = tab.run(cost, allowed, cap)
    if status == "optimal":
        tab.reinvert()
    return _result(status, tab, columns, c, n)


def _result(status: str, tab: _Tableau, columns: list[_Column], c: np.ndarray, n: int) -> SimplexResult:
    std = tab.values()
    x = np.zeros(n)
    for j, col in enumerate(columns):
        if col.kind == "fixed":
            x[j] = col.offset
        elif col.kind == "shift":
            x[j] = col.offset + std[col.first]
        elif col.kind == "mirror":
            x[j] = col.offset - std[col.first]
        else:
            x[j] = std[col.first] - std[col.second]
    objective = float(c @ x) if status == "optimal" else float("nan")
    return SimplexResult(
        status=status,
        x=x,
        objective=objective,
        iterations=tab.iterations,
        basis=tuple(int(v) for v in tab.basis),
    )
