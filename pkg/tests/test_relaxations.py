"""Построители релаксаций: допустимость точных поднятий, доминирование, отсечения."""

from __future__ import annotations

from itertools import product

import numpy as np
import pytest

from fracx.core.kterm import build_kterm
from fracx.core.lifted import W, rho, x, y
from fracx.core.lp import Relation, cut_violation, cutting_loop, point_feasible, solve
from fracx.core.oracle import brute_force_binary, exact_lifting
from fracx.core.program import compute_bounds
from fracx.core.relaxations import (
    build_1term,
    build_1term_conic,
    build_cef,
    build_lef,
    build_ratio_mccormick,
    build_rqp,
    mccormick_rows,
    term,
)
from fracx.core.separators import TriangleSeparator, conic_oa_cuts, triangle_cuts
from fracx.errors import MissingBounds
from fracx.generators import gen_assortment, gen_uniform
from fracx.models import FractionalProgram, Ratio

DOMINANCE_TOL = 1e-4


def _value(model, separators=()) -> float:
    return cutting_loop(model, list(separators)).require_optimal().objective


def _all_models(fp: FractionalProgram):
    bounds = compute_bounds(fp)
    return {
        "LEF": build_lef(fp, bounds),
        "1TERM": build_1term(fp, bounds),
        "RQP": build_rqp(fp, bounds),
        "ZMC": build_ratio_mccormick(fp, bounds, disaggregate=False),
        "ZMC-D": build_ratio_mccormick(fp, bounds, disaggregate=True),
    }


def test_mccormick_square_has_three_rows() -> None:
    a = term("a")
    assert len(mccormick_rows(term("p"), a, a, 0.0, 1.0, 0.0, 1.0, "sq")) == 3
    assert len(mccormick_rows(term("p"), a, term("b"), 0.0, 1.0, 0.0, 1.0, "pr")) == 4


def test_missing_bounds(witness_program: FractionalProgram) -> None:
    with pytest.raises(MissingBounds):
        build_lef(witness_program, None)


def test_lef_shapes(witness_program: FractionalProgram) -> None:
    model = build_lef(witness_program, compute_bounds(witness_program))
    assert model.name == "LEF"
    # x0, x1, ρ, y0, y1
    assert model.n_cols == 5
    # 4 McCormick на каждую y плюс нормировка
    assert model.n_rows == 9


def test_witness_point_separates_lef_from_1term(witness_program: FractionalProgram) -> None:
    """(ρ, y₁, y₂, x₁, x₂) = (½, ¼, ¼, ¼, ¼)."""
    bounds = compute_bounds(witness_program)
    assert bounds.rho_lo[0] == pytest.approx(1.0 / 3.0)
    assert bounds.rho_hi[0] == pytest.approx(1.0)
    point = {rho(0): 0.5, y(0, 0): 0.25, y(0, 1): 0.25, x(0): 0.25, x(1): 0.25}
    assert point_feasible(build_lef(witness_program, bounds), point, tol=1e-7)
    assert not point_feasible(build_1term(witness_program, bounds), point, tol=1e-7)


@pytest.mark.parametrize("seed", [0, 1])
def test_exact_liftings_are_feasible(seed: int) -> None:
    fp = gen_assortment(6, 2, seed)
    models = _all_models(fp)
    C, d = fp.constraints()
    for point in product((0.0, 1.0), repeat=fp.n):
        xs = np.array(point)
        if np.any(C @ xs > d + 1e-9):
            continue
        lifting = exact_lifting(fp, xs, max_degree=2)
        for name, model in models.items():
            vec = model.point(lifting, strict=False)
            assert model.is_feasible(vec, tol=1e-7, bound_tol=1e-7), (name, point)


def test_exact_lifting_continuous(continuous_box: FractionalProgram) -> None:
    models = _all_models(continuous_box)
    for xs in ([0.3, 0.7], [1.0, 0.0], [0.5, 0.5]):
        lifting = exact_lifting(continuous_box, xs)
        for name, model in models.items():
            assert model.is_feasible(model.point(lifting, strict=False), tol=1e-7, bound_tol=1e-7), name


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_dominance_chain_uniform(seed: int) -> None:
    fp = gen_uniform(6, 2, seed)
    bounds = compute_bounds(fp)
    v_hat = brute_force_binary(fp).value
    v = {
        "LEF": _value(build_lef(fp, bounds)),
        "RQP": _value(build_rqp(fp, bounds)),
        "1TERM": _value(build_1term(fp, bounds)),
        "ZMC": _value(build_ratio_mccormick(fp, bounds)),
        "ZMC-D": _value(build_ratio_mccormick(fp, bounds, disaggregate=True)),
    }
    model, seps = build_cef(fp, bounds)
    v["CEF"] = _value(model, seps)
    model, seps = build_1term_conic(fp, bounds)
    v["1TERM-CONIC"] = _value(model, seps)

    scale = 1.0 + abs(v["LEF"])
    for name, value in v.items():
        assert value >= v_hat - 1e-6 * scale, name
    assert v["RQP"] <= v["LEF"] + 1e-6 * scale
    assert v["1TERM"] <= v["LEF"] + 1e-6 * scale
    assert v["CEF"] <= v["LEF"] + DOMINANCE_TOL * scale
    assert v["1TERM-CONIC"] <= v["CEF"] + DOMINANCE_TOL * scale
    assert v["1TERM-CONIC"] <= v["1TERM"] + DOMINANCE_TOL * scale
    assert v["ZMC-D"] <= v["ZMC"] + 1e-6 * scale
    assert v["RQP"] <= v["ZMC-D"] + 1e-6 * scale
    assert v["RQP"] <= v["ZMC"] + 1e-6 * scale


def test_cef_keeps_lef_rows(witness_program: FractionalProgram) -> None:
    bounds = compute_bounds(witness_program)
    model, seps = build_cef(witness_program, bounds)
    assert model.name == "CEF"
    assert model.n_rows == build_lef(witness_program, bounds).n_rows
    assert len(seps) == 1


def test_conic_tangent_on_scalar_ratio() -> None:
    """1/(1 + x) в x̄ = 1: ρ ≥ ½ − ¼(x − 1), нарушение ½ при ρ̄ = 0."""
    fp = FractionalProgram(n=1, m=1, ratios=[Ratio(a0=1.0, a=[1.0], b=[0.0])])
    bounds = compute_bounds(fp)
    model = build_lef(fp, bounds)
    point = model.point({x(0): 1.0, rho(0): 0.0, y(0, 0): 0.0})
    cuts = [c for c in conic_oa_cuts(point, model, fp, bounds) if c.name.startswith("conic-rho")]
    assert len(cuts) == 1
    cut = cuts[0]
    assert cut.relation == Relation.GE
    assert cut.coeffs[rho(0)] == pytest.approx(1.0)
    assert cut.coeffs[x(0)] == pytest.approx(0.25)
    assert cut.rhs == pytest.approx(0.75)
    assert cut.violation == pytest.approx(0.5)


def test_conic_cuts_valid_at_liftings() -> None:
    fp = gen_uniform(4, 2, seed=5)
    bounds = compute_bounds(fp)
    model = build_lef(fp, bounds)
    rng = np.random.default_rng(0)
    cuts = []
    for _ in range(10):
        probe = {x(j): float(rng.uniform()) for j in range(fp.n)}
        cuts += conic_oa_cuts(model.point(probe), model, fp, bounds)
    assert cuts
    for point in product((0.0, 1.0), repeat=fp.n):
        vec = model.point(exact_lifting(fp, point), strict=False)
        for cut in cuts:
            assert cut_violation(model, cut, vec) <= 1e-9


def test_triangle_form_violated_by_half() -> None:
    fp = FractionalProgram(n=3, m=1, ratios=[Ratio(a0=1.0, a=[0.0, 0.0, 0.0], b=[1.0, 1.0, 1.0])])
    model = build_1term(fp, compute_bounds(fp))
    point = model.point({rho(0): 1.0, y(0, 0): 0.5, y(0, 1): 0.5, y(0, 2): 0.5})
    cuts = triangle_cuts(point, model, fp)
    first = [c for c in cuts if c.name.endswith(":0")]
    assert len(first) == 1
    assert first[0].violation == pytest.approx(0.5)
    assert first[0].coeffs[W(0, 0, 1)] == -1.0


def test_triangle_cuts_hold_at_liftings() -> None:
    fp = gen_uniform(4, 1, seed=2)
    model = build_1term(fp, compute_bounds(fp))
    for point in product((0.0, 1.0), repeat=fp.n):
        vec = model.point(exact_lifting(fp, point), strict=False)
        assert triangle_cuts(vec, model, fp, tol=1e-9) == []


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_triangle_cuts_close_1term_to_2term(seed: int) -> None:
    """При n = 3 цикл 1-Term с треугольниками даёт оптимум модели k = 2."""
    fp = gen_uniform(3, 1, seed)
    solution = cutting_loop(build_1term(fp, compute_bounds(fp)), [TriangleSeparator(fp)]).require_optimal()
    two_term = solve(build_kterm(fp, 2)).require_optimal().objective
    scale = 1.0 + abs(two_term)
    assert solution.objective == pytest.approx(two_term, abs=1e-5 * scale)
    assert two_term == pytest.approx(brute_force_binary(fp).value, abs=1e-6 * scale)


def test_lp_backends_agree_on_1term() -> None:
    fp = gen_uniform(4, 2, seed=9)
    model = build_1term(fp, compute_bounds(fp))
    dense = solve(model, "dense").require_optimal().objective
    highs = solve(model, "highs").require_optimal().objective
    assert dense == pytest.approx(highs, abs=1e-6 * (1.0 + abs(highs)))
