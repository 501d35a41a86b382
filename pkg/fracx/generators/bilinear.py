"""Билинейные дроби на последовательно-параллельных графах и гаджет суммы подмножества."""

from __future__ import annotations

import logging
from itertools import combinations
from typing import Sequence

import numpy as np

from ..errors import DomainError
from ..models import BilinearFractionalProgram, Sense
from .base import BaseGenerator
from .rng import make_rng

logger = logging.getLogger(__name__)


def series_parallel_edges(n_nodes: int, rng: np.random.Generator) -> list[tuple[int, int]]:
    """Случайный граф без минора K4: растёт из ребра (0, 1) подразбиением,
    параллельным путём длины 2 и висячей вершиной."""
    if n_nodes < 2:
        return []
    edges: list[tuple[int, int]] = [(0, 1)]
    for v in range(2, n_nodes):
        step = int(rng.integers(3))
        k = int(rng.integers(len(edges)))
        a, b = edges[k]
        if step == 0:
            edges[k] = (a, v)
            edges.append((b, v))
        elif step == 1:
            edges += [(a, v), (b, v)]
        else:
            edges.append((int(rng.integers(v)), v))
    return sorted(tuple(sorted(e)) for e in edges)


class BilinearGenerator(BaseGenerator):
    """Знаменатель с неотрицательными весами и c0 ∈ [1, 2]; числитель с весами из U[−1, 1].

    n: число вершин; m не используется (одна дробь).
    """

    name = "bilinear"

    def generate(self, n: int, m: int, seed: int) -> BilinearFractionalProgram:
        if n < 1:
            raise DomainError(f"n={n} должно быть положительным")
        rng = make_rng(seed)
        edges = series_parallel_edges(n, rng)
        k = len(edges)
        logger.debug("bilinear: |V|=%d, |E|=%d, seed=%d", n, k, seed)
        return BilinearFractionalProgram(
            n_nodes=n, edges=edges,
            a_edges=rng.uniform(0.0, 1.0, size=k).tolist(),
            b_edges=rng.uniform(-1.0, 1.0, size=k).tolist(),
            c=rng.uniform(0.0, 1.0, size=n).tolist(),
            d=rng.uniform(-1.0, 1.0, size=n).tolist(),
            c0=float(rng.uniform(1.0, 2.0)), d0=0.0,
            sense=Sense.MINIMIZE, name=f"bilinear-{n}-{seed}",
        )


def gen_bilinear(n_nodes: int, seed: int) -> BilinearFractionalProgram:
    return BilinearGenerator().generate(n_nodes, 1, seed)


def subset_sum_gadget(weights: Sequence[float], target: float) -> BilinearFractionalProgram:
    """min (w⊺x − K)² − K² на полном графе: минимум −K² ровно тогда, когда есть подмножество с суммой K."""
    w = [float(v) for v in weights]
    if any(v < 0 for v in w):
        raise DomainError("веса гаджета должны быть неотрицательными")
    n = len(w)
    edges = list(combinations(range(n), 2))
    return BilinearFractionalProgram(
        n_nodes=n, edges=edges,
        a_edges=[0.0] * len(edges),
        b_edges=[2.0 * w[i] * w[j] for i, j in edges],
        c=[0.0] * n,
        d=[v * v - 2.0 * target * v for v in w],
        c0=1.0, d0=0.0,
        sense=Sense.MINIMIZE, name=f"subset-sum-{n}",
    )
