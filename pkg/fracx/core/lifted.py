"""Имена поднятых переменных (ρ^i, y^i_j, W^i_jk, w^i_S, u_S, x_j, z_i, h^i_j).

Почему: одна и та же величина не должна попасть в модель двумя столбцами.
Канонизация делается здесь, до регистрации имени в LinearModel.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

KINDS = frozenset({"rho", "y", "W", "w", "u", "x", "z", "h"})


@dataclass(frozen=True, slots=True)
class LiftedIndex:
    kind: str
    ratio: int | None = None
    subset: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"неизвестный вид переменной: {self.kind}")

    @property
    def name(self) -> str:
        body = ",".join(str(v) for v in self.subset)
        if self.kind == "rho" or self.kind == "z":
            return f"{self.kind}[{self.ratio}]"
        if self.kind == "x":
            return f"x[{body}]"
        if self.kind == "u":
            return f"u[{{{body}}}]"
        if self.kind == "w":
            return f"w[{self.ratio},{{{body}}}]"
        return f"{self.kind}[{self.ratio},{body}]"

    def __str__(self) -> str:
        return self.name


def rho(i: int) -> LiftedIndex:
    return LiftedIndex("rho", i)


def y(i: int, j: int) -> LiftedIndex:
    return LiftedIndex("y", i, (j,))


def W(i: int, j: int, k: int, *, diagonal_alias: bool = True) -> LiftedIndex:
    """W^i_jk с W_jk = W_kj; при diagonal_alias диагональ совпадает с y^i_j (бинарный x_j)."""
    if j == k and diagonal_alias:
        return y(i, j)
    return LiftedIndex("W", i, (min(j, k), max(j, k)))


def w(i: int, subset: Iterable[int]) -> LiftedIndex:
    """w^i_S для бинарных переменных: ∅ → ρ^i, {j} → y^i_j, {j,k} → W^i_jk."""
    s = tuple(sorted(set(subset)))
    if not s:
        return rho(i)
    if len(s) == 1:
        return y(i, s[0])
    if len(s) == 2:
        return W(i, s[0], s[1])
    return LiftedIndex("w", i, s)


def u(subset: Iterable[int]) -> LiftedIndex:
    """u_S = Π_{j∈S} x_j, общая для всех дробей; u_{j} совпадает с x_j."""
    s = tuple(sorted(set(subset)))
    if len(s) == 1:
        return x(s[0])
    return LiftedIndex("u", None, s)


def x(j: int) -> LiftedIndex:
    return LiftedIndex("x", None, (j,))


def z(i: int) -> LiftedIndex:
    return LiftedIndex("z", i)


def h(i: int, j: int) -> LiftedIndex:
    return LiftedIndex("h", i, (j,))
