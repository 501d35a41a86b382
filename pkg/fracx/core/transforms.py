"""Проективные преобразования: Φ(ρ, x) = (1/ρ, x/ρ), гомогенизация строк, Чарнс–Купер.

Почему: выпуклая оболочка множества S ⊂ R++ × Rⁿ связана с оболочкой Φ(S)
масштабированием, поэтому релаксации дробей получаются из релаксаций
числителей гомогенизацией (константа строки умножается на ρ).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from ..errors import DomainError, NotSingleRatio
from ..models import FractionalProgram, Sense
from .lifted import rho, y
from .lp import Key, LinearModel, LpSolution, Relation, solve

logger = logging.getLogger(__name__)

MEMBERSHIP_TOL = 1e-7


def phi(point: Sequence[float]) -> np.ndarray:
    """(ρ, x) → (1/ρ, x/ρ)."""
    p = np.asarray(point, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise DomainError("точка должна быть вектором (ρ, x)")
    if not p[0] > 0:
        raise DomainError(f"Φ определено только при ρ > 0, получено ρ={p[0]:g}")
    return np.concatenate(([1.0 / p[0]], p[1:] / p[0]))


@dataclass(frozen=True, slots=True)
class LabeledPointSet:
    """Конечное множество точек (ρ, x) с ρ > 0."""
    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if pts.shape[0] == 0:
            raise DomainError("пустое множество точек")
        if np.any(pts[:, 0] <= 0):
            raise DomainError("первая координата каждой точки должна быть > 0")
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return self.points.shape[1] - 1

    def image(self) -> np.ndarray:
        return np.array([phi(p) for p in self.points])


@dataclass(frozen=True, slots=True)
class HullVerdict:
    in_conv_S: bool
    in_conv_PhiS_of_image: bool
    residual_S: float
    residual_PhiS: float

    @property
    def agree(self) -> bool:
        return self.in_conv_S == self.in_conv_PhiS_of_image


def _l1_residual(points: np.ndarray, target: np.ndarray, weight_sum: float) -> float:
    """min ‖Σλ_k p_k − target‖₁ при λ ≥ 0, Σλ = weight_sum."""
    k, dim = points.shape
    model = LinearModel("hull", Sense.MINIMIZE)
    for t in range(k):
        model.add_var(f"lam[{t}]")
    for r in range(dim):
        model.add_var(f"sp[{r}]", obj=1.0)
        model.add_var(f"sm[{r}]", obj=1.0)
    for r in range(dim):
        coeffs: dict[Key, float] = {f"lam[{t}]": points[t, r] for t in range(k)}
        coeffs[f"sp[{r}]"] = 1.0
        coeffs[f"sm[{r}]"] = -1.0
        model.add_row(coeffs, Relation.EQ, target[r], f"coord[{r}]")
    model.add_row({f"lam[{t}]": 1.0 for t in range(k)}, Relation.EQ, weight_sum, "weights")
    return float(solve(model).require_optimal().objective)


def hull_distance(points: Sequence[Sequence[float]], query: Sequence[float]) -> float:
    """L1-расстояние от query до conv(points)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    return _l1_residual(pts, np.asarray(query, dtype=float), 1.0)


def hull_correspondence(S: LabeledPointSet, query: Sequence[float]) -> HullVerdict:
    """Проверить query ∈ conv(S) напрямую и через (1, x) ∈ ρ·conv(Φ(S))."""
    q = np.asarray(query, dtype=float)
    if q.shape != (S.dim + 1,):
        raise DomainError(f"размерность запроса {q.shape}, ожидалось {(S.dim + 1,)}")
    if not q[0] > 0:
        raise DomainError("запрос должен иметь ρ > 0")
    tol = MEMBERSHIP_TOL * (1.0 + float(np.max(np.abs(q))))

    direct = _l1_residual(S.points, q, 1.0)
    target = np.concatenate(([1.0], q[1:]))
    projective = _l1_residual(S.image(), target, float(q[0]))
    return HullVerdict(
        in_conv_S=direct <= tol,
        in_conv_PhiS_of_image=projective <= tol,
        residual_S=direct,
        residual_PhiS=projective,
    )


# --- гомогенизация ---


@dataclass(slots=True)
class AffineRow:
    """Строка Σ coeffs·v (rel) rhs над произвольными ключами."""
    coeffs: dict[Key, float]
    relation: Relation
    rhs: float
    name: str = ""


ColumnMap = Mapping[Key, Key] | Callable[[Key], Key]


def homogenize_rows(
    rows: Sequence[AffineRow],
    scale: Key,
    column_map: ColumnMap | None = None,
) -> list[AffineRow]:
    """a⊺f (rel) β  →  a⊺g − β·scale (rel) 0, с переименованием f → g через column_map."""
    if column_map is None:
        rename: Callable[[Key], Key] = lambda k: k
    elif callable(column_map):
        rename = column_map
    else:
        mapping = column_map
        rename = lambda k: mapping.get(k, k)

    out: list[AffineRow] = []
    for row in rows:
        coeffs: dict[Key, float] = {}
        for key, value in row.coeffs.items():
            target = rename(key)
            coeffs[target] = coeffs.get(target, 0.0) + value
        if row.rhs != 0.0:
            coeffs[scale] = coeffs.get(scale, 0.0) - row.rhs
        out.append(AffineRow(coeffs, row.relation, 0.0, row.name))
    return out


def add_rows(model: LinearModel, rows: Sequence[AffineRow], prefix: str = "") -> None:
    for row in rows:
        model.add_row(row.coeffs, row.relation, row.rhs, f"{prefix}{row.name}" if row.name else "")


# --- Чарнс–Купер ---


def charnes_cooper(fp: FractionalProgram, sense: Sense | None = None, check: bool = True) -> LinearModel:
    """LP в переменных (ρ, y) = (1, x)/(a0 + a⊺x) для одной дроби; бинарные ослабляются до [0,1]."""
    from .program import extended_system, validate_program

    if fp.m != 1 or len(fp.ratios) != 1:
        raise NotSingleRatio(f"преобразование Чарнса–Купера требует m=1, получено m={fp.m}")
    if np.any(fp.linear() != 0.0):
        raise NotSingleRatio("преобразование Чарнса–Купера не переносит линейное слагаемое c⊺x")
    if check:
        validate_program(fp)
    sense = fp.sense if sense is None else sense
    ratio = fp.ratios[0]
    Cbar, dbar = extended_system(fp)

    model = LinearModel(f"charnes-cooper-{sense.value}", sense)
    model.add_var(rho(0), 0.0, np.inf, obj=ratio.b0)
    for j in range(fp.n):
        model.add_var(y(0, j), -np.inf, np.inf, obj=ratio.b[j])

    rows = [
        AffineRow({j: Cbar[r, j] for j in range(fp.n)}, Relation.LE, dbar[r], f"Cbar[{r}]")
        for r in range(len(dbar))
    ]
    add_rows(model, homogenize_rows(rows, rho(0), lambda j: y(0, j)))
    norm = {y(0, j): ratio.a[j] for j in range(fp.n)}
    norm[rho(0)] = ratio.a0
    model.add_row(norm, Relation.EQ, 1.0, "normalization")
    return model


def recover_x(solution: LpSolution, n: int) -> np.ndarray:
    """x = y/ρ по решению модели Чарнса–Купера."""
    r = solution.value(rho(0))
    if not r > 0:
        raise DomainError(f"ρ={r:g} не положителен, x не восстанавливается")
    return np.array([solution.value(y(0, j)) for j in range(n)]) / r
