"""Неограниченная бинарная сумма дробей с равномерными коэффициентами."""

from __future__ import annotations

import logging

from ..errors import DomainError
from ..models import FractionalProgram, Ratio, Sense
from .base import BaseGenerator
from .rng import make_rng

logger = logging.getLogger(__name__)

A0_RANGE = (1.0, 20.0)
A_RANGE = (0.0, 20.0)
B_RANGE = (-20.0, 0.0)


class UniformGenerator(BaseGenerator):
    """a_i0 ~ U[1,20], a_ij ~ U[0,20], b_ij ~ U[−20,0] (включая b_i0), c = 0, без ограничений."""

    name = "uniform"

    def generate(self, n: int, m: int, seed: int) -> FractionalProgram:
        if n < 1 or m < 1:
            raise DomainError(f"размер ({n}, {m}) должен быть положительным")
        rng = make_rng(seed)
        ratios = []
        for _ in range(m):
            a0 = float(rng.uniform(*A0_RANGE))
            a = rng.uniform(*A_RANGE, size=n)
            b0 = float(rng.uniform(*B_RANGE))
            b = rng.uniform(*B_RANGE, size=n)
            ratios.append(Ratio(a0=a0, a=a.tolist(), b0=b0, b=b.tolist()))
        logger.debug("uniform: n=%d, m=%d, seed=%d", n, m, seed)
        return FractionalProgram(
            n=n, m=m, ratios=ratios, c=[0.0] * n,
            sense=Sense.MAXIMIZE, name=f"uniform-{n}-{m}-{seed}",
        )


def gen_uniform(n: int, m: int, seed: int) -> FractionalProgram:
    return UniformGenerator().generate(n, m, seed)
