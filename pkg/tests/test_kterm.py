"""Иерархия k-term: точность при k = n, монотонность, пример с разрывом 9 → 1."""

from __future__ import annotations

from itertools import product

import numpy as np
import pytest

from fracx.core.kterm import bound_factor_expansion, build_kterm, kterm_columns
from fracx.core.lp import solve
from fracx.core.oracle import brute_force_binary, exact_lifting
from fracx.core.program import compute_bounds
from fracx.core.relaxations import build_1term
from fracx.errors import DomainError, SizeGuard
from fracx.generators import gen_assortment, gen_uniform
from fracx.models import FractionalProgram, Ratio, VarKind


def _kterm_value(fp: FractionalProgram, k: int) -> float:
    return solve(build_kterm(fp, k)).require_optimal().objective


def test_worked_example_gap_closes_at_k2(worked_example: FractionalProgram) -> None:
    assert _kterm_value(worked_example, 1) == pytest.approx(9.0, abs=1e-6)
    assert _kterm_value(worked_example, 2) == pytest.approx(1.0, abs=1e-6)
    assert brute_force_binary(worked_example).value == pytest.approx(1.0, abs=1e-9)


def test_1term_on_worked_example_not_tighter_than_k1(worked_example: FractionalProgram) -> None:
    value = solve(build_1term(worked_example, compute_bounds(worked_example))).require_optimal().objective
    assert value >= 9.0 - 1e-6


def test_bound_factor_expansion() -> None:
    assert bound_factor_expansion((0,), (1,)) == {(0,): 1.0, (0, 1): -1.0}
    assert bound_factor_expansion((), (0, 1)) == {(): 1.0, (0,): -1.0, (1,): -1.0, (0, 1): 1.0}
    assert bound_factor_expansion((0, 2), ()) == {(0, 2): 1.0}


@pytest.mark.parametrize(("n", "m", "k"), [(3, 1, 1), (4, 2, 2), (5, 1, 3)])
def test_column_count(n: int, m: int, k: int) -> None:
    fp = gen_uniform(n, m, seed=0)
    assert build_kterm(fp, k).n_cols == kterm_columns(n, m, k)


@pytest.mark.parametrize("seed", range(4))
def test_exact_at_k_equal_n(seed: int) -> None:
    fp = gen_uniform(4, 2, seed)
    assert _kterm_value(fp, fp.n) == pytest.approx(brute_force_binary(fp).value, abs=1e-6)


def test_exact_with_constraints() -> None:
    fp = gen_assortment(5, 2, seed=4)
    assert _kterm_value(fp, fp.n) == pytest.approx(brute_force_binary(fp).value, abs=1e-6)


@pytest.mark.parametrize("seed", range(3))
def test_values_monotone_in_k(seed: int) -> None:
    fp = gen_uniform(5, 2, seed)
    values = [_kterm_value(fp, k) for k in range(1, fp.n + 1)]
    for weaker, stronger in zip(values, values[1:]):
        assert stronger <= weaker + 1e-7 * (1.0 + abs(weaker))
    assert values[-1] >= brute_force_binary(fp).value - 1e-6


def test_exact_liftings_feasible_for_each_k() -> None:
    fp = gen_assortment(5, 1, seed=1)
    C, d = fp.constraints()
    for k in (1, 2, 3):
        model = build_kterm(fp, k)
        for point in product((0.0, 1.0), repeat=fp.n):
            xs = np.array(point)
            if np.any(C @ xs > d + 1e-9):
                continue
            vec = model.point(exact_lifting(fp, xs, max_degree=k + 1), strict=False)
            assert model.is_feasible(vec, tol=1e-7, bound_tol=1e-7), (k, point)


def test_domain_errors(worked_example: FractionalProgram) -> None:
    with pytest.raises(DomainError):
        build_kterm(worked_example, 0)
    with pytest.raises(DomainError):
        build_kterm(worked_example, 3)
    continuous = worked_example.model_copy(update={
        "var_kind": [VarKind.CONTINUOUS] * 2, "lo": [0.0, 0.0], "hi": [1.0, 1.0],
    })
    with pytest.raises(DomainError):
        build_kterm(continuous, 1)


def test_size_guard() -> None:
    fp = FractionalProgram(n=15, m=1, ratios=[Ratio(a0=1.0, a=[1.0] * 15, b=[1.0] * 15)])
    with pytest.raises(SizeGuard):
        build_kterm(fp, 1)
