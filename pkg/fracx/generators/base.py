"""Базовый интерфейс генератора экземпляров."""

from __future__ import annotations

import abc

from pydantic import BaseModel


class BaseGenerator(abc.ABC):
    """Абстрактный генератор: одинаковые (n, m, seed) дают одинаковый экземпляр."""

    name: str = "base"

    @abc.abstractmethod
    def generate(self, n: int, m: int, seed: int) -> BaseModel:
        """Построить экземпляр размера (n, m) по зерну seed."""
        ...
