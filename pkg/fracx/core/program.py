"""Валидация FractionalProgram и вычисление границ для построителей релаксаций."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..config import settings
from ..errors import DimensionMismatch, Infeasible, IterationLimit, NonPositiveDenominator, UnboundedPolyhedron
from ..models import FractionalProgram, Sense, ValidationIssue, ValidationReport, VarKind
from .lifted import x as x_var
from .lp import LinearModel, Relation, solve

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class VariableBounds:
    x_lo: np.ndarray
    x_hi: np.ndarray
    denom_lo: np.ndarray
    denom_hi: np.ndarray
    rho_lo: np.ndarray
    rho_hi: np.ndarray
    ratio_lo: np.ndarray
    ratio_hi: np.ndarray


def extended_system(fp: FractionalProgram) -> tuple[np.ndarray, np.ndarray]:
    """C̄x ≤ d̄: строки Cx ≤ d плюс конечные границы переменных (для бинарных x_j ∈ [0,1])."""
    C, d = fp.constraints()
    lo, hi = fp.var_bounds()
    rows = [C]
    rhs = [d]
    eye = np.eye(fp.n)
    for j in range(fp.n):
        if np.isfinite(hi[j]):
            rows.append(eye[j:j + 1])
            rhs.append(np.array([hi[j]]))
        if np.isfinite(lo[j]):
            rows.append(-eye[j:j + 1])
            rhs.append(np.array([-lo[j]]))
    return np.vstack(rows), np.concatenate(rhs)


def relaxation_model(fp: FractionalProgram, name: str = "relaxation") -> LinearModel:
    """LP-релаксация области: x_j в своих границах (бинарные ослаблены) и Cx ≤ d."""
    lo, hi = fp.var_bounds()
    C, d = fp.constraints()
    model = LinearModel(name, Sense.MINIMIZE)
    for j in range(fp.n):
        model.add_var(x_var(j), lo[j], hi[j])
    for r in range(len(d)):
        model.add_row({x_var(j): C[r, j] for j in range(fp.n)}, Relation.LE, d[r], f"C[{r}]")
    return model


def _extremize(model: LinearModel, coeffs: np.ndarray, const: float, sense: Sense) -> tuple[str, float, np.ndarray]:
    model.sense = sense
    model.set_objective({x_var(j): coeffs[j] for j in range(len(coeffs))}, const)
    sol = solve(model)
    return sol.status, sol.objective, sol.primal


def _box_range(coeffs: np.ndarray, const: float, lo: np.ndarray, hi: np.ndarray) -> tuple[float, float]:
    low = high = const
    for a, l, u in zip(coeffs, lo, hi):
        if a == 0.0:
            continue
        ends = (a * l, a * u)
        low += min(ends)
        high += max(ends)
    return low, high


def _dimension_issues(fp: FractionalProgram) -> list[ValidationIssue]:
    issues: list[ValidationIssue] = []

    def mismatch(details: str, ratio: int | None = None) -> None:
        issues.append(ValidationIssue(code="dimension_mismatch", ratio=ratio, details=details))

    if len(fp.ratios) != fp.m:
        mismatch(f"m={fp.m}, а дробей {len(fp.ratios)}")
    for i, r in enumerate(fp.ratios):
        if len(r.a) != fp.n or len(r.b) != fp.n:
            mismatch(f"len(a)={len(r.a)}, len(b)={len(r.b)}, n={fp.n}", i)
    if len(fp.c) != fp.n:
        mismatch(f"len(c)={len(fp.c)}, n={fp.n}")
    if len(fp.C) != len(fp.d):
        mismatch(f"строк C {len(fp.C)}, элементов d {len(fp.d)}")
    for row_no, row in enumerate(fp.C):
        if len(row) != fp.n:
            mismatch(f"строка C[{row_no}] длины {len(row)}, n={fp.n}")
    if len(fp.var_kind) != fp.n:
        mismatch(f"len(var_kind)={len(fp.var_kind)}, n={fp.n}")
    for label, values in (("lo", fp.lo), ("hi", fp.hi)):
        if values is not None and len(values) != fp.n:
            mismatch(f"len({label})={len(values)}, n={fp.n}")
    return issues


def validate_program(fp: FractionalProgram, strict: bool = True) -> ValidationReport:
    """Проверить размерности и положительность знаменателей на LP-релаксации.

    strict=True бросает первую найденную ошибку, иначе возвращает отчёт.
    """
    issues = _dimension_issues(fp)
    if issues:
        if strict:
            raise DimensionMismatch("; ".join(i.details for i in issues))
        return ValidationReport(issues=issues)

    model = relaxation_model(fp, "positivity")
    a0, a = fp.denominators()
    denom_min: list[float] = []

    if len(fp.d):
        status, _, _ = _extremize(model, np.zeros(fp.n), 0.0, Sense.MINIMIZE)
        if status == "infeasible":
            issues.append(ValidationIssue(code="empty_region", details="Cx ≤ d без точек в границах"))
            if strict:
                raise Infeasible("допустимая область пуста")
            return ValidationReport(issues=issues)

    for i in range(fp.m):
        status, value, point = _extremize(model, a[i], a0[i], Sense.MINIMIZE)
        if status == "unbounded":
            value, point = -math.inf, None
        elif status != "optimal":
            issues.append(ValidationIssue(
                code="lp_failure", ratio=i, details=f"минимум знаменателя не найден: LP {status}",
            ))
            if strict:
                if status == "infeasible":
                    raise Infeasible(f"дробь {i}: LP минимума знаменателя несовместна")
                raise IterationLimit(f"дробь {i}: LP минимума знаменателя остановлена ({status})")
            denom_min.append(math.nan)
            continue
        denom_min.append(float(value))
        if value <= settings.positivity_margin:
            witness = None if point is None else [float(v) for v in point]
            issues.append(ValidationIssue(
                code="non_positive_denominator", ratio=i,
                details=f"min знаменателя {value:.6g} ≤ {settings.positivity_margin:g}",
                witness=witness,
            ))
            if strict:
                raise NonPositiveDenominator(i, witness, float(value))

    if issues:
        logger.debug("Валидация %s: %d проблем", fp.name or "fp", len(issues))
    return ValidationReport(issues=issues, denom_min=denom_min)


def compute_bounds(fp: FractionalProgram) -> VariableBounds:
    """Границы x, знаменателей, ρ и значений дробей по LP-релаксации."""
    from .transforms import charnes_cooper

    lo, hi = fp.var_bounds()
    _, d = fp.constraints()
    a0, a = fp.denominators()
    model = relaxation_model(fp, "bounds")

    def extreme(coeffs: np.ndarray, const: float, sense: Sense, what: str) -> float:
        status, value, _ = _extremize(model, coeffs, const, sense)
        if status == "unbounded":
            raise UnboundedPolyhedron(f"{what}: LP по границам неограниченна")
        if status != "optimal":
            raise UnboundedPolyhedron(f"{what}: LP по границам завершилась со статусом {status}")
        return float(value)

    if len(d):
        x_lo = np.array([extreme(np.eye(fp.n)[j], 0.0, Sense.MINIMIZE, f"x[{j}]") for j in range(fp.n)])
        x_hi = np.array([extreme(np.eye(fp.n)[j], 0.0, Sense.MAXIMIZE, f"x[{j}]") for j in range(fp.n)])
    else:
        x_lo, x_hi = lo.copy(), hi.copy()

    denom_lo = np.empty(fp.m)
    denom_hi = np.empty(fp.m)
    for i in range(fp.m):
        if not len(d):
            denom_lo[i], denom_hi[i] = _box_range(a[i], a0[i], lo, hi)
        else:
            denom_lo[i] = extreme(a[i], a0[i], Sense.MINIMIZE, f"знаменатель {i}")
            denom_hi[i] = extreme(a[i], a0[i], Sense.MAXIMIZE, f"знаменатель {i}")
        if not np.isfinite(denom_lo[i]) or not np.isfinite(denom_hi[i]):
            raise UnboundedPolyhedron(f"знаменатель {i} неограничен на области")
        if denom_lo[i] <= settings.positivity_margin:
            raise NonPositiveDenominator(i, None, float(denom_lo[i]))

    rho_lo = 1.0 / denom_hi
    rho_hi = 1.0 / denom_lo

    ratio_lo = np.empty(fp.m)
    ratio_hi = np.empty(fp.m)
    for i in range(fp.m):
        single = fp.model_copy(update={
            "m": 1,
            "ratios": [fp.ratios[i]],
            "var_kind": [VarKind.CONTINUOUS] * fp.n,
            "lo": list(lo),
            "hi": list(hi),
            "c": [0.0] * fp.n,
        })
        for sense, target in ((Sense.MINIMIZE, ratio_lo), (Sense.MAXIMIZE, ratio_hi)):
            sol = solve(charnes_cooper(single, sense))
            if sol.status == "unbounded":
                raise UnboundedPolyhedron(f"дробь {i}: LP Чарнса–Купера неограниченна")
            target[i] = sol.require_optimal().objective

    logger.debug(
        "Границы %s: знаменатели [%s .. %s]",
        fp.name or "fp", np.round(denom_lo, 6), np.round(denom_hi, 6),
    )
    return VariableBounds(
        x_lo=x_lo, x_hi=x_hi,
        denom_lo=denom_lo, denom_hi=denom_hi,
        rho_lo=rho_lo, rho_hi=rho_hi,
        ratio_lo=ratio_lo, ratio_hi=ratio_hi,
    )
