"""Точные решатели: перебор куба, поднятия G, вершины, v̂ локальным поиском."""

from __future__ import annotations

import numpy as np
import pytest

from fracx.config import settings
from fracx.core.oracle import (
    best_integer_value,
    brute_force_binary,
    cube_chunks,
    enumerate_liftings,
    enumerate_vertices,
    vertex_optimum,
)
from fracx.errors import DomainError, Infeasible, TooLarge
from fracx.generators import gen_assortment, gen_uniform
from fracx.models import FractionalProgram, Ratio, Sense, VarKind


def test_cube_order_is_lexicographic() -> None:
    (X,) = list(cube_chunks(2))
    assert X.tolist() == [[0, 0], [0, 1], [1, 0], [1, 1]]
    chunks = list(cube_chunks(5, chunk=8))
    assert len(chunks) == 4
    assert np.vstack(chunks).shape == (32, 5)


def test_worked_example_liftings(worked_example: FractionalProgram) -> None:
    G = enumerate_liftings(worked_example)
    expected = np.array([
        [1.0, 0.0, 0.0, 1.0, 0.0, 0.0],
        [1 / 3, 1 / 3, 0.0, 1 / 4, 1 / 4, 0.0],
        [1 / 5, 0.0, 1 / 5, 1 / 6, 0.0, 1 / 6],
        [1 / 7, 1 / 7, 1 / 7, 1 / 9, 1 / 9, 1 / 9],
    ])
    assert G.shape == (4, 6)
    got = sorted(map(tuple, np.round(G, 12)))
    want = sorted(map(tuple, np.round(expected, 12)))
    assert got == want


def test_brute_force_ties_take_first(worked_example: FractionalProgram) -> None:
    result = brute_force_binary(worked_example)
    assert result.value == pytest.approx(1.0)
    assert result.argmax == (0.0, 0.0)
    assert result.enumerated == 4


def test_brute_force_respects_constraints() -> None:
    fp = gen_assortment(8, 2, seed=0)
    result = brute_force_binary(fp)
    assert sum(result.argmax) <= 1
    assert result.value == pytest.approx(fp.evaluate(np.array(result.argmax)))


def test_brute_force_guards() -> None:
    with pytest.raises(TooLarge):
        brute_force_binary(FractionalProgram(n=settings.oracle_max_binary + 1, m=0))
    continuous = FractionalProgram(n=1, m=0, var_kind=[VarKind.CONTINUOUS], lo=[0.0], hi=[1.0])
    with pytest.raises(DomainError):
        brute_force_binary(continuous)
    empty = FractionalProgram(n=1, m=0, C=[[-1.0]], d=[-2.0])
    with pytest.raises(Infeasible):
        brute_force_binary(empty)


def test_vertices_of_square_and_guard() -> None:
    vertices = enumerate_vertices(np.zeros((0, 2)), np.zeros(0), lo=[0.0, 0.0], hi=[1.0, 1.0])
    assert [v.tolist() for v in vertices] == [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]]
    with pytest.raises(TooLarge):
        enumerate_vertices(np.zeros((0, 7)), np.zeros(0), lo=[0.0] * 7, hi=[1.0] * 7)


def test_vertex_optimum_on_box(continuous_box: FractionalProgram) -> None:
    assert vertex_optimum(continuous_box).value == pytest.approx(2.0 / 3.0)
    assert vertex_optimum(continuous_box, Sense.MINIMIZE).value == pytest.approx(0.0)


def test_best_integer_value_exact_for_small_n() -> None:
    fp = gen_uniform(6, 2, seed=3)
    result = best_integer_value(fp)
    assert result.method == "binary-enumeration"
    assert result.value == pytest.approx(brute_force_binary(fp).value)


def test_local_search_is_a_lower_bound(monkeypatch: pytest.MonkeyPatch) -> None:
    fp = gen_uniform(10, 3, seed=1)
    exact = brute_force_binary(fp).value
    monkeypatch.setattr(settings, "oracle_max_binary", 4)
    result = best_integer_value(fp, hints=[[0.9] * 10], seed=7)
    assert result.method == "local-search"
    assert result.value <= exact + 1e-12
    assert result.value == pytest.approx(fp.evaluate(np.array(result.argmax)))


def test_evaluate_matches_definition() -> None:
    fp = FractionalProgram(n=2, m=1, ratios=[Ratio(a0=1.0, a=[1.0, 2.0], b0=3.0, b=[1.0, 0.0])], c=[1.0, -1.0])
    assert fp.evaluate(np.array([1.0, 1.0])) == pytest.approx(0.0 + 4.0 / 4.0)
