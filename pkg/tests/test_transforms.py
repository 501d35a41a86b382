"""Проективное отображение, соответствие оболочек и Чарнс–Купер."""

from __future__ import annotations

import numpy as np
import pytest

from fracx.core.lifted import rho, y
from fracx.core.lp import LinearModel, Relation, solve
from fracx.core.oracle import vertex_optimum
from fracx.core.transforms import (
    AffineRow,
    LabeledPointSet,
    add_rows,
    charnes_cooper,
    homogenize_rows,
    hull_correspondence,
    hull_distance,
    phi,
    recover_x,
)
from fracx.errors import DomainError, NotSingleRatio
from fracx.generators import make_rng
from fracx.models import FractionalProgram, Ratio, Sense, VarKind

from .conftest import acceptance


def test_phi_is_an_involution() -> None:
    rng = make_rng(0)
    for _ in range(50):
        p = np.concatenate(([rng.uniform(0.1, 5.0)], rng.uniform(-3.0, 3.0, size=3)))
        assert np.allclose(phi(phi(p)), p, atol=1e-12)


def test_phi_rejects_non_positive_scale() -> None:
    with pytest.raises(DomainError):
        phi([0.0, 1.0])
    with pytest.raises(DomainError):
        LabeledPointSet(np.array([[1.0, 0.0], [-1.0, 2.0]]))


def _random_agreement(sets: int, queries: int, seed: int) -> None:
    rng = make_rng(seed)
    for _ in range(sets):
        n = int(rng.integers(1, 5))
        k = int(rng.integers(2, 13))
        pts = np.column_stack([rng.uniform(0.2, 3.0, size=k), rng.uniform(-2.0, 2.0, size=(k, n))])
        S = LabeledPointSet(pts)
        for _ in range(queries):
            if rng.random() < 0.5:
                lam = rng.dirichlet(np.ones(k))
                q = lam @ pts
            else:
                q = np.concatenate(([rng.uniform(0.2, 3.0)], rng.uniform(-2.0, 2.0, size=n)))
            verdict = hull_correspondence(S, q)
            assert verdict.agree, (pts, q, verdict)


def test_hull_correspondence_agrees_on_random_sets() -> None:
    _random_agreement(sets=10, queries=20, seed=11)


@acceptance
def test_hull_correspondence_full_scale() -> None:
    _random_agreement(sets=100, queries=1000, seed=2024)


def test_convex_combination_is_inside_both_ways() -> None:
    S = LabeledPointSet(np.array([[1.0, 0.0], [0.5, 1.0], [0.25, 3.0]]))
    verdict = hull_correspondence(S, [0.75, 0.5])
    assert verdict.in_conv_S and verdict.in_conv_PhiS_of_image


def test_truncation_distance_shrinks() -> None:
    """{(1, x)/(1 + x) | x = 0..N} и точка (0, 1): расстояние 2/(N + 1)."""
    previous = np.inf
    for N in (1, 2, 4, 8, 16):
        points = [[1.0 / (1 + x), x / (1 + x)] for x in range(N + 1)]
        dist = hull_distance(points, [0.0, 1.0])
        assert dist == pytest.approx(2.0 / (N + 1), abs=1e-9)
        assert 0.0 < dist < previous
        previous = dist


def test_homogenize_rows_scales_constant() -> None:
    rows = [AffineRow({"x": 2.0}, Relation.LE, 3.0, "r")]
    out = homogenize_rows(rows, "rho", {"x": "y"})
    assert out[0].coeffs == {"y": 2.0, "rho": -3.0}
    assert out[0].rhs == 0.0
    model = LinearModel("h")
    model.add_var("y")
    model.add_var("rho")
    add_rows(model, out, prefix="hom:")
    assert model.has_row("hom:r")


def test_charnes_cooper_on_box(continuous_box: FractionalProgram) -> None:
    top = solve(charnes_cooper(continuous_box, Sense.MAXIMIZE)).require_optimal()
    low = solve(charnes_cooper(continuous_box, Sense.MINIMIZE)).require_optimal()
    assert top.objective == pytest.approx(2.0 / 3.0, abs=1e-7)
    assert low.objective == pytest.approx(0.0, abs=1e-7)
    assert recover_x(top, 2) == pytest.approx([1.0, 0.0], abs=1e-7)
    assert top.value(rho(0)) + top.value(y(0, 0)) + top.value(y(0, 1)) > 0


def test_charnes_cooper_needs_single_ratio(worked_example: FractionalProgram) -> None:
    with pytest.raises(NotSingleRatio):
        charnes_cooper(worked_example)


def test_charnes_cooper_rejects_linear_term(continuous_box: FractionalProgram) -> None:
    """Слагаемое c⊺x не переносится в LP, поэтому задача отклоняется."""
    fp = continuous_box.model_copy(update={"c": [0.0, 1.0]})
    with pytest.raises(NotSingleRatio):
        charnes_cooper(fp)


def _random_single_ratio(rng: np.random.Generator) -> FractionalProgram:
    n = int(rng.integers(1, 4))
    rows = int(rng.integers(0, 4))
    return FractionalProgram(
        n=n, m=1,
        ratios=[Ratio(
            a0=float(rng.uniform(1.0, 2.0)), a=rng.uniform(0.0, 1.0, size=n).tolist(),
            b0=float(rng.uniform(-1.0, 1.0)), b=rng.uniform(-1.0, 1.0, size=n).tolist(),
        )],
        C=rng.uniform(-1.0, 1.0, size=(rows, n)).tolist(),
        d=rng.uniform(0.5, 1.5, size=rows).tolist(),
        var_kind=[VarKind.CONTINUOUS] * n, lo=[0.0] * n, hi=[1.0] * n,
    )


def test_charnes_cooper_matches_vertex_enumeration() -> None:
    rng = make_rng(7)
    for _ in range(50):
        fp = _random_single_ratio(rng)
        for sense in (Sense.MAXIMIZE, Sense.MINIMIZE):
            value = solve(charnes_cooper(fp, sense)).require_optimal().objective
            assert value == pytest.approx(vertex_optimum(fp, sense).value, abs=1e-6)


def test_midpoint_identity_through_projective_image() -> None:
    """(25/8, 1, 1/2) = ½(5, 1, 1/5) + ½(5/4, 1, 4/5)."""
    S = LabeledPointSet(np.array([[5.0, 1.0, 0.2], [1.25, 1.0, 0.8]]))
    verdict = hull_correspondence(S, [25.0 / 8.0, 1.0, 0.5])
    assert verdict.in_conv_S
    assert verdict.agree
