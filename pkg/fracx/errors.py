"""Иерархия ошибок fracx.

Все ошибки наследуют `FracxError`, поэтому прогон набора может ловить их
построчно и продолжать работу.
"""

from __future__ import annotations

from typing import Sequence


class FracxError(Exception):
    """Базовая ошибка пакета."""


class ModelError(FracxError):
    """Некорректное обращение к LinearModel: неизвестный столбец, дубль имени."""


class DimensionMismatch(FracxError):
    pass


class NonPositiveDenominator(FracxError):
    """Знаменатель не положителен на LP-релаксации (или на вершинах куба)."""

    def __init__(
        self,
        ratio: int,
        witness: Sequence[float] | None = None,
        value: float | None = None,
    ) -> None:
        self.ratio = ratio
        self.witness = None if witness is None else [float(v) for v in witness]
        self.value = value
        detail = f"знаменатель {ratio} не положителен"
        if value is not None:
            detail += f": минимум {value:.6g}"
        if self.witness is not None:
            detail += f" в точке {self.witness}"
        super().__init__(detail)


class UnboundedPolyhedron(FracxError):
    pass


class MissingBounds(FracxError):
    pass


class IterationLimit(FracxError):
    pass


class NumericalBreakdown(FracxError):
    pass


class Infeasible(FracxError):
    pass


class Unbounded(FracxError):
    pass


class DomainError(FracxError):
    pass


class NotSingleRatio(FracxError):
    pass


class SizeGuard(FracxError):
    pass


class NegativeWeight(FracxError):
    pass


class DuplicatePoles(FracxError):
    pass


class IllConditioned(FracxError):
    pass


class SignAssumptionViolated(FracxError):
    pass


class PoleInRange(FracxError):
    pass


class UnsupportedBox(FracxError):
    pass


class TooLarge(FracxError):
    pass


class DegenerateGap(FracxError):
    pass
