"""Детерминированный ГПСЧ: Philox4x64-10 из numpy, ключ = зерно."""

from __future__ import annotations

import numpy as np

from ..errors import DomainError

PRNG_NAME = "philox4x64-10"


def make_rng(seed: int) -> np.random.Generator:
    if seed < 0:
        raise DomainError(f"зерно должно быть неотрицательным, получено {seed}")
    return np.random.Generator(np.random.Philox(key=int(seed)))
