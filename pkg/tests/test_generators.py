"""Генераторы экземпляров: детерминизм по зерну, диапазоны коэффициентов."""

from __future__ import annotations

import numpy as np
import pytest

from fracx.core.program import validate_program
from fracx.errors import DomainError
from fracx.generators import (
    GENERATORS,
    PRNG_NAME,
    capacity,
    gen_assortment,
    gen_bilinear,
    gen_uniform,
    gen_univariate,
    gradient,
    make_rng,
)


def test_registry_names() -> None:
    assert sorted(GENERATORS) == ["assortment", "bilinear", "uniform", "univariate"]
    assert PRNG_NAME == "philox4x64-10"


def test_same_seed_same_instance() -> None:
    assert gen_uniform(5, 3, 7) == gen_uniform(5, 3, 7)
    assert gen_uniform(5, 3, 7) != gen_uniform(5, 3, 8)
    assert make_rng(3).random() == make_rng(3).random()


def test_negative_seed_rejected() -> None:
    with pytest.raises(DomainError):
        make_rng(-1)


def test_uniform_ranges() -> None:
    fp = gen_uniform(20, 4, seed=0)
    a0, a = fp.denominators()
    b0, b = fp.numerators()
    assert np.all((a0 >= 1.0) & (a0 <= 20.0))
    assert np.all((a >= 0.0) & (a <= 20.0))
    assert np.all((b0 >= -20.0) & (b0 <= 0.0))
    assert np.all((b >= -20.0) & (b <= 0.0))
    assert fp.all_binary and not fp.C
    validate_program(fp)


@pytest.mark.parametrize(("n", "kappa"), [(4, 0), (5, 1), (10, 2), (29, 5), (30, 6)])
def test_capacity_is_floor(n: int, kappa: int) -> None:
    assert capacity(n) == kappa


def test_assortment_structure() -> None:
    fp = gen_assortment(10, 3, seed=2)
    a0, a = fp.denominators()
    b0, b = fp.numerators()
    assert np.allclose(a0, 1.0)
    assert np.allclose(b0, 0.0)
    prices = b / np.where(a > 0, a, 1.0)
    for i in range(fp.m):
        row = prices[i][a[i] > 0]
        assert np.allclose(row, row[0])
        assert 1.0 <= row[0] <= 3.0
    assert fp.C == [[1.0] * 10]
    assert fp.d == [2.0]


def test_univariate_poles_outside_unit_interval() -> None:
    inst = gen_univariate(5, seed=4)
    r = np.asarray(inst.r)
    assert np.all((r[:3] >= -1.0) & (r[:3] <= -0.1))
    assert np.all((r[3:] >= 1.1) & (r[3:] <= 2.0))
    assert np.all((np.asarray(inst.c) >= -1.0) & (np.asarray(inst.c) <= 1.0))


def test_gradient_matches_finite_difference() -> None:
    c = np.array([0.5, -0.3])
    r = np.array([-0.5, 1.5])
    y = np.array([1.2, 1.7])
    f = lambda t: float(np.sum(c * y / (t - r)))
    gx, gy = gradient(c, r, 0.4, y)
    h = 1e-6
    assert gx == pytest.approx((f(0.4 + h) - f(0.4 - h)) / (2 * h), rel=1e-6)
    assert np.allclose(gy, c / (0.4 - r))


def test_bilinear_instance_is_valid() -> None:
    qfp = gen_bilinear(8, seed=3)
    assert qfp.n_nodes == 8
    assert len(qfp.a_edges) == len(qfp.b_edges) == len(qfp.edges)
    assert all(u < v for u, v in qfp.edges)
    assert 1.0 <= qfp.c0 <= 2.0
    assert all(w >= 0 for w in qfp.a_edges)
