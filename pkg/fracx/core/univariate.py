"""Релаксации Uni-MC и Uni-MH задачи max −ax − b⊺y + c⊺z, z_i = y_i/(x − r_i)."""

from __future__ import annotations

import logging

import numpy as np

from ..errors import PoleInRange, UnsupportedBox
from ..models import Sense, UnivariateInstance
from .lp import LinearModel, Separator
from .moments import MomentSeparator, ShiftVector
from .relaxations import mccormick_rows, term
from .transforms import add_rows

logger = logging.getLogger(__name__)

X = "x"


def y_key(i: int) -> str:
    return f"y[{i}]"


def z_key(i: int) -> str:
    return f"z[{i}]"


def nu_key(i: int) -> str:
    return f"nu[{i}]"


def check_poles(inst: UnivariateInstance) -> None:
    inside = [r for r in inst.r if inst.x_lo <= r <= inst.x_hi]
    if inside:
        raise PoleInRange(f"полюсы {inside} внутри [{inst.x_lo}, {inst.x_hi}]")


def ratio_range(inst: UnivariateInstance, i: int) -> tuple[float, float]:
    """Границы y_i/(x − r_i) по четырём углам: функция монотонна по каждому аргументу."""
    r = inst.r[i]
    values = [
        yv / (xv - r)
        for xv in (inst.x_lo, inst.x_hi)
        for yv in (inst.y_lo[i], inst.y_hi[i])
    ]
    return min(values), max(values)


def _base(inst: UnivariateInstance, name: str) -> LinearModel:
    model = LinearModel(name, Sense.MAXIMIZE)
    model.add_var(X, inst.x_lo, inst.x_hi, obj=-inst.a)
    for i in range(inst.m):
        model.add_var(y_key(i), inst.y_lo[i], inst.y_hi[i], obj=-inst.b[i])
    for i in range(inst.m):
        lo, hi = ratio_range(inst, i)
        model.add_var(z_key(i), lo, hi, obj=inst.c[i])
    return model


def _add_product_rows(model: LinearModel, inst: UnivariateInstance) -> None:
    """McCormick для y_i = z_i·(x − r_i)."""
    for i in range(inst.m):
        r = inst.r[i]
        z_lo, z_hi = ratio_range(inst, i)
        add_rows(model, mccormick_rows(
            term(y_key(i)), term(z_key(i)), ({X: 1.0}, -r),
            z_lo, z_hi, inst.x_lo - r, inst.x_hi - r,
            f"mc[{i}]",
        ))


def build_uni_mc(inst: UnivariateInstance) -> LinearModel:
    check_poles(inst)
    model = _base(inst, "UNI-MC")
    _add_product_rows(model, inst)
    return model


def nu_range(r: float, x_lo: float, x_hi: float) -> tuple[float, float]:
    ends = sorted((1.0 / (x_hi - r), 1.0 / (x_lo - r)))
    return ends[0], ends[1]


def build_uni_mh(inst: UnivariateInstance, strengthen: bool = True) -> tuple[LinearModel, list[Separator]]:
    """(1, ν, x) ∈ conv(G) отсечениями по ганкелевым блокам и McCormick для z_i = y_i ν_i.

    Оболочки z записаны для x ∈ [0, 1], y ∈ [1, 2]; strengthen добавляет строки Uni-MC.
    """
    if (inst.x_lo, inst.x_hi) != (0.0, 1.0) or any(
        (lo, hi) != (1.0, 2.0) for lo, hi in zip(inst.y_lo, inst.y_hi)
    ):
        raise UnsupportedBox("Uni-MH поддерживает только x ∈ [0, 1] и y ∈ [1, 2]")
    check_poles(inst)
    model = _base(inst, "UNI-MH")
    for i in range(inst.m):
        lo, hi = nu_range(inst.r[i], inst.x_lo, inst.x_hi)
        model.add_var(nu_key(i), lo, hi)
    for i in range(inst.m):
        nu_lo, nu_hi = nu_range(inst.r[i], inst.x_lo, inst.x_hi)
        add_rows(model, mccormick_rows(
            term(z_key(i)), term(y_key(i)), term(nu_key(i)),
            inst.y_lo[i], inst.y_hi[i], nu_lo, nu_hi,
            f"mh[{i}]",
        ))
    if strengthen:
        _add_product_rows(model, inst)
    shifts = ShiftVector.build(inst.r, inst.x_lo, inst.x_hi, r0=0.0)
    separator = MomentSeparator(shifts, [nu_key(i) for i in range(inst.m)], X)
    logger.debug("Uni-MH: m=%d, знак f_0=%+.0f", inst.m, shifts.sign())
    return model, [separator]


def exact_point(inst: UnivariateInstance, x: float, y: np.ndarray) -> dict[str, float]:
    """Точная подстановка (x, y, ν, z) для проверки допустимости."""
    point: dict[str, float] = {X: float(x)}
    for i in range(inst.m):
        nu = 1.0 / (x - inst.r[i])
        point[y_key(i)] = float(y[i])
        point[nu_key(i)] = nu
        point[z_key(i)] = float(y[i]) * nu
    return point
