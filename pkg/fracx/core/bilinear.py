"""Релаксация билинейной дроби по графу носителя: ρ·QP_G с нормировкой и нечётными циклами."""

from __future__ import annotations

import logging

import numpy as np

from ..config import settings
from ..errors import DimensionMismatch, NonPositiveDenominator
from ..models import BilinearFractionalProgram
from .graphs import SupportGraph
from .lifted import W, rho, y
from .lp import Key, LinearModel, Relation, Separator
from .oracle import cube_chunks
from .relaxations import mccormick_rows, term
from .separators import OddCycleSeparator
from .transforms import add_rows, homogenize_rows

logger = logging.getLogger(__name__)


def support_graph(qfp: BilinearFractionalProgram) -> SupportGraph:
    n_edges = len(qfp.edges)
    if len(qfp.a_edges) != n_edges or len(qfp.b_edges) != n_edges:
        raise DimensionMismatch(f"рёбер {n_edges}, весов a {len(qfp.a_edges)}, весов b {len(qfp.b_edges)}")
    if len(qfp.c) != qfp.n_nodes or len(qfp.d) != qfp.n_nodes:
        raise DimensionMismatch(f"вершин {qfp.n_nodes}, len(c)={len(qfp.c)}, len(d)={len(qfp.d)}")
    return SupportGraph.from_edges(qfp.n_nodes, qfp.edges)


def denominator_range(qfp: BilinearFractionalProgram) -> tuple[float, float]:
    """min/max знаменателя по вершинам куба: мультилинейная функция достигает их в вершинах."""
    low, high = np.inf, -np.inf
    witness = None
    for X in cube_chunks(qfp.n_nodes):
        values = qfp.denominator(X)
        k = int(np.argmin(values))
        if values[k] < low:
            low, witness = float(values[k]), X[k]
        high = max(high, float(np.max(values)))
    if low <= settings.positivity_margin:
        raise NonPositiveDenominator(0, None if witness is None else witness.tolist(), low)
    return low, high


def build_bilinear_frac(qfp: BilinearFractionalProgram) -> tuple[LinearModel, list[Separator]]:
    """Переменные (ρ, y, W на рёбрах); гомогенизированный McCormick и отсечения нечётных циклов."""
    graph = support_graph(qfp)
    d_lo, d_hi = denominator_range(qfp)
    rho_lo, rho_hi = 1.0 / d_hi, 1.0 / d_lo

    model = LinearModel("BILINEAR", qfp.sense)
    model.add_var(rho(0), rho_lo, rho_hi, obj=qfp.d0)
    for v in range(qfp.n_nodes):
        model.add_var(y(0, v), 0.0, rho_hi, obj=qfp.d[v])
    for (u, v), weight in zip(graph.edges, _edge_weights(qfp, graph, "b")):
        model.add_var(W(0, u, v), 0.0, rho_hi, obj=weight)

    norm: dict[Key, float] = {y(0, v): qfp.c[v] for v in range(qfp.n_nodes)}
    for (u, v), weight in zip(graph.edges, _edge_weights(qfp, graph, "a")):
        norm[W(0, u, v)] = weight
    norm[rho(0)] = qfp.c0
    model.add_row(norm, Relation.EQ, 1.0, "norm[0]")

    for v in range(qfp.n_nodes):
        model.add_row({y(0, v): 1.0, rho(0): -1.0}, Relation.LE, 0.0, f"box[{v}]")

    def rename(key: Key) -> Key:
        if isinstance(key, tuple):
            return y(0, key[0]) if len(key) == 1 else W(0, *key)
        return key

    for u, v in graph.edges:
        rows = mccormick_rows(term((u, v)), term((u,)), term((v,)), 0.0, 1.0, 0.0, 1.0, f"mc[{u},{v}]")
        add_rows(model, homogenize_rows(rows, rho(0), rename))

    logger.debug(
        "Билинейная дробь: |V|=%d, |E|=%d, последовательно-параллельный=%s",
        qfp.n_nodes, len(graph.edges), graph.series_parallel,
    )
    return model, [OddCycleSeparator(graph)]


def _edge_weights(qfp: BilinearFractionalProgram, graph: SupportGraph, which: str) -> list[float]:
    """Веса в порядке graph.edges (рёбра там отсортированы)."""
    source = qfp.a_edges if which == "a" else qfp.b_edges
    by_edge = {tuple(sorted(e)): wgt for e, wgt in zip(qfp.edges, source)}
    return [by_edge[e] for e in graph.edges]
