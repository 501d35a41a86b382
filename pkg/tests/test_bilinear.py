"""Билинейные дроби: точность на последовательно-параллельных графах и гаджет суммы подмножества."""

from __future__ import annotations

import pytest

from fracx.core.bilinear import build_bilinear_frac, denominator_range
from fracx.core.lp import cutting_loop, solve
from fracx.core.oracle import brute_force_bilinear
from fracx.core.transforms import charnes_cooper
from fracx.errors import DimensionMismatch, DomainError, NonPositiveDenominator
from fracx.generators import gen_bilinear, subset_sum_gadget
from fracx.models import BilinearFractionalProgram, FractionalProgram, Ratio, Sense, VarKind


def test_subset_sum_gadget_minimum() -> None:
    qfp = subset_sum_gadget([1.0, 2.0], 3.0)
    assert qfp.edges == [(0, 1)]
    assert brute_force_bilinear(qfp).value == pytest.approx(-9.0)
    assert brute_force_bilinear(subset_sum_gadget([2.0, 2.0], 3.0)).value > -9.0


def test_gadget_rejects_negative_weights() -> None:
    with pytest.raises(DomainError):
        subset_sum_gadget([1.0, -2.0], 3.0)


def test_edgeless_matches_charnes_cooper() -> None:
    qfp = BilinearFractionalProgram(n_nodes=3, c=[0.5, 1.0, 0.2], d=[-1.0, 0.3, 2.0], c0=1.5, d0=0.2)
    model, _ = build_bilinear_frac(qfp)
    value = solve(model).require_optimal().objective
    fp = FractionalProgram(
        n=3, m=1, ratios=[Ratio(a0=qfp.c0, a=qfp.c, b0=qfp.d0, b=qfp.d)],
        var_kind=[VarKind.CONTINUOUS] * 3, lo=[0.0] * 3, hi=[1.0] * 3, sense=Sense.MINIMIZE,
    )
    expected = solve(charnes_cooper(fp)).require_optimal().objective
    assert value == pytest.approx(expected, abs=1e-8)


@pytest.mark.parametrize("seed", range(5))
def test_series_parallel_exact(seed: int) -> None:
    qfp = gen_bilinear(3 + seed, seed)
    model, seps = build_bilinear_frac(qfp)
    value = cutting_loop(model, seps).require_optimal().objective
    assert value == pytest.approx(brute_force_bilinear(qfp).value, abs=1e-5)


def test_relaxation_bounds_minimum_from_below() -> None:
    qfp = gen_bilinear(6, seed=11)
    model, _ = build_bilinear_frac(qfp)
    assert solve(model).require_optimal().objective <= brute_force_bilinear(qfp).value + 1e-9


def test_denominator_checks() -> None:
    qfp = BilinearFractionalProgram(
        n_nodes=2, edges=[(0, 1)], a_edges=[-2.0], b_edges=[0.0], c=[0.0, 0.0], d=[0.0, 0.0], c0=1.0,
    )
    with pytest.raises(NonPositiveDenominator):
        denominator_range(qfp)
    broken = BilinearFractionalProgram(n_nodes=2, edges=[(0, 1)], a_edges=[], b_edges=[1.0], c=[0.0, 0.0], d=[0.0, 0.0])
    with pytest.raises(DimensionMismatch):
        build_bilinear_frac(broken)
