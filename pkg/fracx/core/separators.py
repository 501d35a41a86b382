"""Сепараторы для cutting_loop: касательные конических ограничений, треугольники, нечётные циклы."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import networkx as nx
import numpy as np

from ..config import settings
from ..errors import DomainError, NegativeWeight
from ..models import FractionalProgram
from .graphs import SupportGraph
from .lifted import W, rho, x, y
from .lp import Cut, Key, LinearModel, Relation
from .program import VariableBounds

logger = logging.getLogger(__name__)


def point_tag(values: np.ndarray) -> str:
    return format(hash(tuple(np.round(values, 10).tolist())) & 0xFFFFFFFFFFFF, "012x")


# --- конические ограничения ---


def conic_oa_cuts(
    point: np.ndarray,
    model: LinearModel,
    fp: FractionalProgram,
    bounds: VariableBounds,
    families: tuple[str, ...] = ("rho", "perspective"),
) -> list[Cut]:
    """Касательные к ρ^i ≥ 1/d_i(x) и y^i_j ≥ x_j²/d_i(x) в точке, где они нарушены."""
    a0, a = fp.denominators()
    xs = np.array([point[model.col(x(j))] for j in range(fp.n)])
    cuts: list[Cut] = []
    for i in range(fp.m):
        D = float(a0[i] + a[i] @ xs)
        if D <= 0:
            raise DomainError(f"знаменатель {i} в точке равен {D:.6g}")
        if D < bounds.denom_lo[i] / 2:
            continue
        tag = point_tag(xs)
        pool = f"conic:{i}"
        if "rho" in families:
            r = point[model.col(rho(i))]
            if 1.0 / D - r > 0:
                coeffs: dict[Key, float] = {x(j): a[i, j] / D**2 for j in range(fp.n) if a[i, j] != 0.0}
                coeffs[rho(i)] = 1.0
                cuts.append(Cut(
                    coeffs, Relation.GE, (2.0 * D - a0[i]) / D**2,
                    f"conic-rho[{i}]:{tag}", pool, 1.0 / D - r,
                ))
        if "perspective" in families:
            for j in range(fp.n):
                f = xs[j] ** 2 / D
                yv = point[model.col(y(i, j))]
                if f - yv <= 0:
                    continue
                grad = -xs[j] ** 2 * a[i] / D**2
                grad[j] += 2.0 * xs[j] / D
                coeffs = {x(k): -grad[k] for k in range(fp.n) if grad[k] != 0.0}
                coeffs[y(i, j)] = 1.0
                cuts.append(Cut(
                    coeffs, Relation.GE, f - float(grad @ xs),
                    f"conic-y[{i},{j}]:{tag}", pool, f - yv,
                ))
    return cuts


class ConicSeparator:
    """Сепаратор для cutting_loop с обоими семействами конических касательных."""

    def __init__(self, fp: FractionalProgram, bounds: VariableBounds, families: tuple[str, ...] = ("rho", "perspective")) -> None:
        self.fp = fp
        self.bounds = bounds
        self.families = families

    def __call__(self, point: np.ndarray, model: LinearModel) -> list[Cut]:
        return conic_oa_cuts(point, model, self.fp, self.bounds, self.families)


# --- треугольные неравенства ---


def _lifted_arrays(point: np.ndarray, model: LinearModel, i: int, n: int) -> tuple[float, np.ndarray, np.ndarray]:
    """ρ^i, y^i и симметричная матрица W^i (диагональ = y) из точки модели."""
    r = float(point[model.col(rho(i))])
    yv = np.array([point[model.col(y(i, j))] for j in range(n)])
    Wm = np.diag(yv)
    for j, k in combinations(range(n), 2):
        key = W(i, j, k)
        if model.has(key):
            Wm[j, k] = Wm[k, j] = point[model.col(key)]
    return r, yv, Wm


def triangle_cuts(
    point: np.ndarray,
    model: LinearModel,
    fp: FractionalProgram,
    tol: float | None = None,
) -> list[Cut]:
    """Все гомогенизированные треугольные неравенства, нарушенные больше чем на tol.

    Для тройки j<k<l четыре формы:
      y_j + y_k + y_l − W_jk − W_jl − W_kl ≤ ρ
      −y_j + W_jk + W_jl − W_kl ≤ 0 и перестановки вершины.
    """
    tol = settings.cut_tol if tol is None else tol
    binary = np.flatnonzero(fp.binary_mask())
    if binary.size < 3:
        return []
    triples = np.array(list(combinations(binary.tolist(), 3)))
    J, K, L = triples[:, 0], triples[:, 1], triples[:, 2]
    cuts: list[Cut] = []
    for i in range(fp.m):
        if not all(model.has(W(i, j, k)) for j, k in combinations(binary.tolist(), 2)):
            continue
        r, yv, Wm = _lifted_arrays(point, model, i, fp.n)
        wjk, wjl, wkl = Wm[J, K], Wm[J, L], Wm[K, L]
        forms = np.stack([
            yv[J] + yv[K] + yv[L] - wjk - wjl - wkl - r,
            -yv[J] + wjk + wjl - wkl,
            -yv[K] + wjk + wkl - wjl,
            -yv[L] + wjl + wkl - wjk,
        ], axis=1)
        for t, form in zip(*np.nonzero(forms > tol)):
            j, k, l = (int(v) for v in triples[t])
            if form == 0:
                coeffs: dict[Key, float] = {
                    y(i, j): 1.0, y(i, k): 1.0, y(i, l): 1.0,
                    W(i, j, k): -1.0, W(i, j, l): -1.0, W(i, k, l): -1.0, rho(i): -1.0,
                }
            else:
                apex, p, q = ((j, k, l), (k, j, l), (l, j, k))[form - 1]
                coeffs = {y(i, apex): -1.0, W(i, apex, p): 1.0, W(i, apex, q): 1.0, W(i, p, q): -1.0}
            cuts.append(Cut(
                coeffs, Relation.LE, 0.0, f"tri[{i},{j},{k},{l}]:{form}",
                f"triangle:{i}", float(forms[t, form]),
            ))
    return cuts


class TriangleSeparator:
    def __init__(self, fp: FractionalProgram) -> None:
        self.fp = fp

    def __call__(self, point: np.ndarray, model: LinearModel) -> list[Cut]:
        return triangle_cuts(point, model, self.fp)


# --- нечётные циклы ---


@dataclass(frozen=True, slots=True)
class OddCycle:
    """Цикл (рёбра по порядку обхода) и нечётное подмножество D его рёбер."""
    cycle: tuple[tuple[int, int], ...]
    odd: frozenset[tuple[int, int]]
    violation: float

    @property
    def key(self) -> tuple[frozenset[tuple[int, int]], frozenset[tuple[int, int]]]:
        return frozenset(self.cycle), self.odd


def cut_values(
    rho_value: float,
    y_values: np.ndarray,
    w_values: dict[tuple[int, int], float],
    graph: SupportGraph,
) -> dict[tuple[int, int], float]:
    """s_e = (y_u + y_v − 2w_e)/ρ для каждого ребра; в [0,1] при выполненном McCormick."""
    if not rho_value > 0:
        raise DomainError(f"ρ={rho_value:g} должен быть > 0")
    s: dict[tuple[int, int], float] = {}
    for u, v in graph.edges:
        value = (y_values[u] + y_values[v] - 2.0 * w_values[(u, v)]) / rho_value
        if value < -1e-7 or value > 1.0 + 1e-7:
            raise NegativeWeight(f"ребро ({u}, {v}): отрицательный вес, s={value:.3g}")
        s[(u, v)] = min(1.0, max(0.0, value))
    return s


def _simple_odd_part(nodes: list[int], flags: list[bool]) -> tuple[list[int], list[bool]]:
    """Вырезать из замкнутого обхода простой цикл с нечётным числом рёбер из D.

    nodes[0] == nodes[-1]; flags[t]: принадлежит ли ребро (nodes[t], nodes[t+1]) множеству D.
    При неотрицательных весах нечётная часть не дороже всего обхода.
    """
    while True:
        first_seen: dict[int, int] = {}
        split = None
        for pos, v in enumerate(nodes[:-1]):
            if v in first_seen:
                split = (first_seen[v], pos)
                break
            first_seen[v] = pos
        if split is None:
            return nodes, flags
        a, b = split
        inner = (nodes[a:b + 1], flags[a:b])
        outer = (nodes[:a + 1] + nodes[b + 1:], flags[:a] + flags[b:])
        nodes, flags = inner if sum(inner[1]) % 2 == 1 else outer


def separate_odd_cycles(
    rho_value: float,
    y_values: np.ndarray,
    w_values: dict[tuple[int, int], float],
    graph: SupportGraph,
    tol: float | None = None,
) -> list[OddCycle]:
    """Точная сепарация по кратчайшему нечётному замкнутому обходу в двухслойном графе.

    Нарушение в масштабе s: 1 − (Σ_D (1 − s_e) + Σ_{C∖D} s_e). Для каждой вершины
    возвращается самый нарушенный цикл, повторы отбрасываются.
    """
    tol = settings.cut_tol if tol is None else tol
    s = cut_values(rho_value, y_values, w_values, graph)
    aux = nx.Graph()
    for (u, v), se in s.items():
        aux.add_edge((u, 0), (v, 0), weight=se)
        aux.add_edge((u, 1), (v, 1), weight=se)
        aux.add_edge((u, 0), (v, 1), weight=1.0 - se)
        aux.add_edge((u, 1), (v, 0), weight=1.0 - se)

    found: dict[tuple, OddCycle] = {}
    for root in sorted({v for e in graph.edges for v in e}):
        try:
            cost, path = nx.single_source_dijkstra(aux, (root, 0), target=(root, 1), weight="weight")
        except nx.NetworkXNoPath:
            continue
        if 1.0 - cost < tol:
            continue
        nodes = [v for v, _ in path]
        flags = [lp != lq for (_, lp), (_, lq) in zip(path, path[1:])]
        nodes, flags = _simple_odd_part(nodes, flags)
        if len(nodes) < 4:
            continue
        cycle: list[tuple[int, int]] = []
        odd: set[tuple[int, int]] = set()
        for p, q, switched in zip(nodes, nodes[1:], flags):
            e = (min(p, q), max(p, q))
            cycle.append(e)
            if switched:
                odd.add(e)
        if len(set(cycle)) != len(cycle):
            continue
        violation = 1.0 - sum((1.0 - s[e]) if e in odd else s[e] for e in cycle)
        if violation < tol:
            continue
        item = OddCycle(tuple(cycle), frozenset(odd), violation)
        if item.key not in found or found[item.key].violation < violation:
            found[item.key] = item
    return sorted(found.values(), key=lambda c: (-c.violation, sorted(c.cycle)))


def oddcycle_cut(item: OddCycle, i: int, scale: float = 1.0) -> Cut:
    """Σ_D (y_u + y_v − 2W)/2 − Σ_{C∖D} (y_u + y_v − 2W)/2 ≤ (|D| − 1)/2 · ρ."""
    coeffs: dict[Key, float] = {}
    for u, v in item.cycle:
        sign = 0.5 if (u, v) in item.odd else -0.5
        for key, value in ((y(i, u), sign), (y(i, v), sign), (W(i, u, v), -2.0 * sign)):
            coeffs[key] = coeffs.get(key, 0.0) + value
    coeffs[rho(i)] = -(len(item.odd) - 1) / 2.0
    nodes = "-".join(str(e) for e in sorted(item.cycle))
    odd = "-".join(str(e) for e in sorted(item.odd))
    return Cut(coeffs, Relation.LE, 0.0, f"odd[{i}]:{nodes}|{odd}", f"oddcycle:{i}", scale * item.violation / 2.0)


def oddcycle_separate(
    point: np.ndarray,
    model: LinearModel,
    graph: SupportGraph,
    i: int = 0,
    tol: float | None = None,
) -> list[Cut]:
    """Нечётно-цикловые отсечения для дроби i по значениям (ρ, y, W) точки модели."""
    rho_value = float(point[model.col(rho(i))])
    y_values = np.array([point[model.col(y(i, v))] for v in range(graph.n_nodes)])
    w_values = {e: float(point[model.col(W(i, *e))]) for e in graph.edges}
    return [
        oddcycle_cut(item, i, rho_value)
        for item in separate_odd_cycles(rho_value, y_values, w_values, graph, tol)
    ]


class OddCycleSeparator:
    def __init__(self, graph: SupportGraph, ratios: Sequence[int] = (0,)) -> None:
        self.graph = graph
        self.ratios = tuple(ratios)

    def __call__(self, point: np.ndarray, model: LinearModel) -> list[Cut]:
        cuts: list[Cut] = []
        for i in self.ratios:
            cuts.extend(oddcycle_separate(point, model, self.graph, i))
        return cuts
