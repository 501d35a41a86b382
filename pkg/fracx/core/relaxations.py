"""Построители LP-релаксаций суммы дробей: LEF, 1-Term, R_QP, эталонные McCormick-модели.

Обозначения столбцов: ρ^i = 1/(a_i0 + a_i⊺x), y^i_j = ρ^i x_j, W^i_jk = ρ^i x_j x_k.
Конические варианты (CEF, 1Term-Conic): те же модели плюс сепаратор отсечений.
"""

from __future__ import annotations

import logging
from typing import Callable, Mapping

import numpy as np

from ..errors import MissingBounds
from ..models import FractionalProgram
from .lifted import W, h, rho, x, y, z
from .lp import Key, LinearModel, Relation, Separator
from .program import VariableBounds, extended_system
from .transforms import AffineRow, add_rows, homogenize_rows

logger = logging.getLogger(__name__)

Affine = tuple[Mapping[Key, float], float]


def term(key: Key, coef: float = 1.0) -> Affine:
    return {key: coef}, 0.0


def _combine(*parts: tuple[float, Affine]) -> tuple[dict[Key, float], float]:
    coeffs: dict[Key, float] = {}
    const = 0.0
    for scale, (c, k) in parts:
        for key, value in c.items():
            coeffs[key] = coeffs.get(key, 0.0) + scale * value
        const += scale * k
    return coeffs, const


def mccormick_rows(
    prod: Affine,
    a: Affine,
    b: Affine,
    a_lo: float,
    a_hi: float,
    b_lo: float,
    b_hi: float,
    name: str,
) -> list[AffineRow]:
    """Четыре неравенства McCormick для prod = a·b над [a_lo,a_hi]×[b_lo,b_hi].

    Аргументы: аффинные выражения (коэффициенты, константа). Для квадрата
    (a is b) верхние оценки совпадают, поэтому строк три.
    """
    envelope = [
        (Relation.GE, a_lo, b_lo, "lo-lo"),
        (Relation.GE, a_hi, b_hi, "hi-hi"),
        (Relation.LE, a_hi, b_lo, "hi-lo"),
        (Relation.LE, a_lo, b_hi, "lo-hi"),
    ]
    if a is b:
        envelope = envelope[:3]
    rows: list[AffineRow] = []
    for relation, ca, cb, tag in envelope:
        # prod (rel) cb·a + ca·b − ca·cb
        coeffs, const = _combine((1.0, prod), (-cb, a), (-ca, b))
        rows.append(AffineRow(coeffs, relation, -const - ca * cb, f"{name}:{tag}"))
    return rows


def _require_bounds(fp: FractionalProgram, bounds: VariableBounds | None) -> VariableBounds:
    if bounds is None:
        raise MissingBounds("границы не вычислены: вызовите compute_bounds")
    finite = np.isfinite
    if fp.n and not (finite(bounds.x_lo).all() and finite(bounds.x_hi).all()):
        raise MissingBounds("нужны конечные границы всех x_j")
    if fp.m and not (finite(bounds.rho_lo).all() and finite(bounds.rho_hi).all()):
        raise MissingBounds("нужны конечные границы ρ")
    return bounds


def corner_range(lo1: float, hi1: float, lo2: float, hi2: float) -> tuple[float, float]:
    corners = (lo1 * lo2, lo1 * hi2, hi1 * lo2, hi1 * hi2)
    return min(corners), max(corners)


def _base_model(fp: FractionalProgram, bounds: VariableBounds, name: str) -> LinearModel:
    """Столбцы x, ρ, y; цель Σ(b_i0 ρ^i + b_i⊺y^i) + c⊺x; строки Cx ≤ d."""
    model = LinearModel(name, fp.sense)
    binary = fp.binary_mask()
    c = fp.linear()
    for j in range(fp.n):
        model.add_var(x(j), bounds.x_lo[j], bounds.x_hi[j], obj=c[j], binary=bool(binary[j]))
    b0, b = fp.numerators()
    for i in range(fp.m):
        model.add_var(rho(i), bounds.rho_lo[i], bounds.rho_hi[i], obj=b0[i])
        for j in range(fp.n):
            lo, hi = corner_range(bounds.rho_lo[i], bounds.rho_hi[i], bounds.x_lo[j], bounds.x_hi[j])
            model.add_var(y(i, j), lo, hi, obj=b[i, j])
    C, d = fp.constraints()
    for r in range(len(d)):
        model.add_row({x(j): C[r, j] for j in range(fp.n)}, Relation.LE, d[r], f"C[{r}]")
    return model


def _add_normalization(model: LinearModel, fp: FractionalProgram) -> None:
    a0, a = fp.denominators()
    for i in range(fp.m):
        coeffs: dict[Key, float] = {y(i, j): a[i, j] for j in range(fp.n)}
        coeffs[rho(i)] = a0[i]
        model.add_row(coeffs, Relation.EQ, 1.0, f"norm[{i}]")


def _add_lef_rows(model: LinearModel, fp: FractionalProgram, bounds: VariableBounds) -> None:
    for i in range(fp.m):
        for j in range(fp.n):
            rows = mccormick_rows(
                term(y(i, j)), term(rho(i)), term(x(j)),
                bounds.rho_lo[i], bounds.rho_hi[i], bounds.x_lo[j], bounds.x_hi[j],
                f"lef[{i},{j}]",
            )
            add_rows(model, rows)


def build_lef(fp: FractionalProgram, bounds: VariableBounds | None) -> LinearModel:
    """McCormick для y^i_j = ρ^i x_j, нормировка, Cx ≤ d."""
    bounds = _require_bounds(fp, bounds)
    model = _base_model(fp, bounds, "LEF")
    _add_lef_rows(model, fp, bounds)
    _add_normalization(model, fp)
    return model


def _lift_map(i: int, binary: np.ndarray) -> Callable[[Key], Key]:
    """Мономы (j,) → y^i_j, (j,k) → W^i_jk, для бинарного j диагональ W_jj = y_j."""
    def rename(key: Key) -> Key:
        if isinstance(key, tuple):
            if len(key) == 1:
                return y(i, key[0])
            j, k = key
            return W(i, j, k, diagonal_alias=bool(binary[j]))
        return key
    return rename


def _add_w_columns(model: LinearModel, fp: FractionalProgram, bounds: VariableBounds, i: int) -> None:
    binary = fp.binary_mask()
    for j in range(fp.n):
        for k in range(j, fp.n):
            if j == k and binary[j]:
                continue
            key = W(i, j, k, diagonal_alias=False)
            lo, hi = corner_range(bounds.x_lo[j], bounds.x_hi[j], bounds.x_lo[k], bounds.x_hi[k])
            r_lo, r_hi = corner_range(bounds.rho_lo[i], bounds.rho_hi[i], lo, hi)
            model.add_var(key, r_lo, r_hi)


def _add_linking(model: LinearModel, fp: FractionalProgram, i: int) -> None:
    """x_j = a_i0 y^i_j + Σ_k a_ik W^i_jk."""
    binary = fp.binary_mask()
    a0, a = fp.denominators()
    for j in range(fp.n):
        coeffs: dict[Key, float] = {x(j): -1.0}
        coeffs[y(i, j)] = a0[i]
        for k in range(fp.n):
            if a[i, k] == 0.0:
                continue
            key = W(i, j, k, diagonal_alias=bool(binary[j]))
            coeffs[key] = coeffs.get(key, 0.0) + a[i, k]
        model.add_row(coeffs, Relation.EQ, 0.0, f"link[{i},{j}]")


def _add_homogenized_system(model: LinearModel, fp: FractionalProgram, i: int) -> None:
    """C̄y^i ≤ ρ^i d̄."""
    Cbar, dbar = extended_system(fp)
    rows = [
        AffineRow({(j,): Cbar[r, j] for j in range(fp.n) if Cbar[r, j] != 0.0}, Relation.LE, dbar[r], f"hom[{i},{r}]")
        for r in range(len(dbar))
    ]
    add_rows(model, homogenize_rows(rows, rho(i), _lift_map(i, fp.binary_mask())))


def build_1term(fp: FractionalProgram, bounds: VariableBounds | None) -> LinearModel:
    """LEF плюс гомогенизированный McCormick на W^i_jk и связь x_j = a_i0 y_j + Σ a_ik W_jk."""
    bounds = _require_bounds(fp, bounds)
    model = _base_model(fp, bounds, "1TERM")
    _add_lef_rows(model, fp, bounds)
    _add_normalization(model, fp)
    for i in range(fp.m):
        _add_w_columns(model, fp, bounds, i)
    binary = fp.binary_mask()
    for i in range(fp.m):
        rename = _lift_map(i, binary)
        for j in range(fp.n):
            for k in range(j, fp.n):
                if j == k and binary[j]:
                    continue
                a_expr = term((j,))
                b_expr = a_expr if j == k else term((k,))
                rows = mccormick_rows(
                    term((j, k)), a_expr, b_expr,
                    bounds.x_lo[j], bounds.x_hi[j], bounds.x_lo[k], bounds.x_hi[k],
                    f"mc[{i},{j},{k}]",
                )
                add_rows(model, homogenize_rows(rows, rho(i), rename))
        _add_linking(model, fp, i)
        _add_homogenized_system(model, fp, i)
    logger.debug("1-Term: %d строк, %d столбцов", model.n_rows, model.n_cols)
    return model


def build_rqp(fp: FractionalProgram, bounds: VariableBounds | None) -> LinearModel:
    """Гомогенизированный первый уровень RLT по всем парам строк C̄x ≤ d̄."""
    bounds = _require_bounds(fp, bounds)
    model = _base_model(fp, bounds, "RQP")
    _add_normalization(model, fp)
    for i in range(fp.m):
        _add_w_columns(model, fp, bounds, i)
    Cbar, dbar = extended_system(fp)
    binary = fp.binary_mask()
    n_rows = len(dbar)
    for i in range(fp.m):
        rename = _lift_map(i, binary)
        rows: list[AffineRow] = []
        for p in range(n_rows):
            for q in range(p, n_rows):
                # (d_p − C_p x)(d_q − C_q x) ≥ 0
                coeffs: dict[Key, float] = {}
                for j in range(fp.n):
                    lin = -dbar[p] * Cbar[q, j] - dbar[q] * Cbar[p, j]
                    if lin != 0.0:
                        coeffs[(j,)] = coeffs.get((j,), 0.0) + lin
                    if Cbar[p, j] == 0.0 and Cbar[q, j] == 0.0:
                        continue
                    for k in range(fp.n):
                        quad = Cbar[p, j] * Cbar[q, k]
                        if quad != 0.0:
                            key = (min(j, k), max(j, k))
                            coeffs[key] = coeffs.get(key, 0.0) + quad
                const = dbar[p] * dbar[q]
                lifted = homogenize_rows(
                    [AffineRow(coeffs, Relation.GE, -const, f"rqp[{i},{p},{q}]")], rho(i), rename,
                )[0]
                lifted.coeffs = {k: v for k, v in lifted.coeffs.items() if abs(v) > 1e-15}
                if not lifted.coeffs:
                    continue
                rows.append(lifted)
        add_rows(model, rows)
        _add_linking(model, fp, i)
        _add_homogenized_system(model, fp, i)
    logger.debug("R_QP: %d строк, %d столбцов", model.n_rows, model.n_cols)
    return model


def build_ratio_mccormick(
    fp: FractionalProgram,
    bounds: VariableBounds | None,
    disaggregate: bool = False,
) -> LinearModel:
    """Эталон: z_i·d_i = b_i0 + b_i⊺x, произведение ослаблено McCormick по [z^L,z^U]×[d^L,d^U].

    При disaggregate добавляются h^i_j = z_i x_j со своими оболочками и
    равенство a_i0 z_i + a_i⊺h^i = b_i0 + b_i⊺x.
    """
    bounds = _require_bounds(fp, bounds)
    model = LinearModel("ZMC-D" if disaggregate else "ZMC", fp.sense)
    binary = fp.binary_mask()
    c = fp.linear()
    for j in range(fp.n):
        model.add_var(x(j), bounds.x_lo[j], bounds.x_hi[j], obj=c[j], binary=bool(binary[j]))
    a0, a = fp.denominators()
    b0, b = fp.numerators()
    C, d = fp.constraints()
    for r in range(len(d)):
        model.add_row({x(j): C[r, j] for j in range(fp.n)}, Relation.LE, d[r], f"C[{r}]")
    for i in range(fp.m):
        model.add_var(z(i), bounds.ratio_lo[i], bounds.ratio_hi[i], obj=1.0)
        numerator: Affine = ({x(j): b[i, j] for j in range(fp.n)}, b0[i])
        denominator: Affine = ({x(j): a[i, j] for j in range(fp.n)}, a0[i])
        add_rows(model, mccormick_rows(
            numerator, term(z(i)), denominator,
            bounds.ratio_lo[i], bounds.ratio_hi[i], bounds.denom_lo[i], bounds.denom_hi[i],
            f"zmc[{i}]",
        ))
        if not disaggregate:
            continue
        for j in range(fp.n):
            lo, hi = corner_range(bounds.ratio_lo[i], bounds.ratio_hi[i], bounds.x_lo[j], bounds.x_hi[j])
            model.add_var(h(i, j), lo, hi)
            add_rows(model, mccormick_rows(
                term(h(i, j)), term(z(i)), term(x(j)),
                bounds.ratio_lo[i], bounds.ratio_hi[i], bounds.x_lo[j], bounds.x_hi[j],
                f"h[{i},{j}]",
            ))
        coeffs: dict[Key, float] = {h(i, j): a[i, j] for j in range(fp.n)}
        coeffs[z(i)] = a0[i]
        for j in range(fp.n):
            coeffs[x(j)] = coeffs.get(x(j), 0.0) - b[i, j]
        model.add_row(coeffs, Relation.EQ, b0[i], f"disagg[{i}]")
    return model


def build_cef(fp: FractionalProgram, bounds: VariableBounds | None) -> tuple[LinearModel, list[Separator]]:
    """LEF плюс отсечения ρ^i·d_i(x) ≥ 1 и y^i_j·d_i(x) ≥ x_j²."""
    from .separators import ConicSeparator

    bounds = _require_bounds(fp, bounds)
    model = build_lef(fp, bounds)
    model.name = "CEF"
    return model, [ConicSeparator(fp, bounds)]


def build_1term_conic(fp: FractionalProgram, bounds: VariableBounds | None) -> tuple[LinearModel, list[Separator]]:
    """1-Term (вместе со строками LEF) плюс те же конические отсечения."""
    from .separators import ConicSeparator

    bounds = _require_bounds(fp, bounds)
    model = build_1term(fp, bounds)
    model.name = "1TERM-CONIC"
    return model, [ConicSeparator(fp, bounds)]
