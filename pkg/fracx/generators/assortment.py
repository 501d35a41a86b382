"""Задачи ассортимента: выручка по MNL-подобным дробям с ограничением мощности."""

from __future__ import annotations

import logging
import math

from ..errors import DomainError
from ..models import FractionalProgram, Ratio, Sense
from .base import BaseGenerator
from .rng import make_rng

logger = logging.getLogger(__name__)

CAPACITY_SHARE = 0.2
NO_PURCHASE_SHARE = 0.1


def capacity(n: int) -> int:
    """κ = ⌊0.2·n⌋."""
    return math.floor(CAPACITY_SHARE * n)


class AssortmentGenerator(BaseGenerator):
    """a_ij ~ U[0,1], r_i ~ U[1,3], b_ij = a_ij·r_i, a_i0 = 0.1n, b_i0 = 0, Σx ≤ κ."""

    name = "assortment"

    def generate(self, n: int, m: int, seed: int) -> FractionalProgram:
        if n < 1 or m < 1:
            raise DomainError(f"размер ({n}, {m}) должен быть положительным")
        rng = make_rng(seed)
        ratios = []
        for _ in range(m):
            a = rng.uniform(0.0, 1.0, size=n)
            r = float(rng.uniform(1.0, 3.0))
            ratios.append(Ratio(a0=NO_PURCHASE_SHARE * n, a=a.tolist(), b0=0.0, b=(a * r).tolist()))
        kappa = capacity(n)
        logger.debug("assortment: n=%d, m=%d, seed=%d, κ=%d", n, m, seed, kappa)
        return FractionalProgram(
            n=n, m=m, ratios=ratios, c=[0.0] * n,
            C=[[1.0] * n], d=[float(kappa)],
            sense=Sense.MAXIMIZE, name=f"assortment-{n}-{m}-{seed}",
        )


def gen_assortment(n: int, m: int, seed: int) -> FractionalProgram:
    return AssortmentGenerator().generate(n, m, seed)
