"""Одномерные дроби y_i/(x − r_i): полюсы вне [0, 1], (a, b) = градиент в случайной точке."""

from __future__ import annotations

import logging

import numpy as np

from ..errors import DomainError
from ..models import UnivariateInstance
from .base import BaseGenerator
from .rng import make_rng

logger = logging.getLogger(__name__)

LEFT_POLES = (-1.0, -0.1)
RIGHT_POLES = (1.1, 2.0)


def gradient(c: np.ndarray, r: np.ndarray, x: float, y: np.ndarray) -> tuple[float, np.ndarray]:
    """Градиент Σ c_i y_i/(x − r_i) по (x, y)."""
    shift = x - r
    return float(-np.sum(c * y / shift**2)), c / shift


class UnivariateGenerator(BaseGenerator):
    """Первые ⌈m/2⌉ полюсов из U[−1,−0.1], остальные из U[1.1,2]; n не используется (x скаляр)."""

    name = "univariate"

    def generate(self, n: int, m: int, seed: int) -> UnivariateInstance:
        if m < 1:
            raise DomainError(f"m={m} должно быть положительным")
        rng = make_rng(seed)
        c = rng.uniform(-1.0, 1.0, size=m)
        left = (m + 1) // 2
        r = np.concatenate([
            rng.uniform(*LEFT_POLES, size=left),
            rng.uniform(*RIGHT_POLES, size=m - left),
        ])
        x = float(rng.uniform(0.0, 1.0))
        y = rng.uniform(1.0, 2.0, size=m)
        a, b = gradient(c, r, x, y)
        logger.debug("univariate: m=%d, seed=%d, точка x=%.6f", m, seed, x)
        return UnivariateInstance(
            a=a, b=b.tolist(), c=c.tolist(), r=r.tolist(),
            x_lo=0.0, x_hi=1.0, y_lo=[1.0] * m, y_hi=[2.0] * m,
            name=f"univariate-{m}-{seed}",
        )


def gen_univariate(m: int, seed: int) -> UnivariateInstance:
    return UnivariateGenerator().generate(1, m, seed)
