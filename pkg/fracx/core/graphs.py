"""Граф носителя билинейных членов и проверка последовательно-параллельности."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import networkx as nx

from ..errors import DomainError


@dataclass(frozen=True, slots=True)
class SupportGraph:
    n_nodes: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        canon: list[tuple[int, int]] = []
        seen: set[tuple[int, int]] = set()
        for u, v in self.edges:
            if u == v:
                raise DomainError(f"петля в вершине {u}")
            if not (0 <= u < self.n_nodes and 0 <= v < self.n_nodes):
                raise DomainError(f"ребро ({u}, {v}) вне вершин 0..{self.n_nodes - 1}")
            e = (min(u, v), max(u, v))
            if e in seen:
                raise DomainError(f"повтор ребра {e}")
            seen.add(e)
            canon.append(e)
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    @classmethod
    def from_edges(cls, n_nodes: int, edges: Iterable[tuple[int, int]]) -> "SupportGraph":
        return cls(n_nodes, tuple((int(u), int(v)) for u, v in edges))

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n_nodes))
        g.add_edges_from(self.edges)
        return g

    @property
    def series_parallel(self) -> bool:
        return is_series_parallel(self)


def is_series_parallel(graph: SupportGraph | nx.Graph) -> bool:
    """Нет минора K4: граф сводится к пустому удалением вершин степени ≤ 1 и стягиванием вершин степени 2."""
    g = graph.to_networkx() if isinstance(graph, SupportGraph) else nx.Graph(graph)
    changed = True
    while changed and g.number_of_nodes():
        changed = False
        for v in sorted(g.nodes):
            deg = g.degree(v)
            if deg <= 1:
                g.remove_node(v)
                changed = True
            elif deg == 2:
                a, b = sorted(g.neighbors(v))
                g.remove_node(v)
                g.add_edge(a, b)
                changed = True
    return g.number_of_nodes() == 0
