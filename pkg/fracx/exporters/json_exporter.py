"""Сохранение и загрузка экземпляров задач в JSON."""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Union

from ..models import BilinearFractionalProgram, FractionalProgram, UnivariateInstance

logger = logging.getLogger(__name__)

Instance = Union[FractionalProgram, UnivariateInstance, BilinearFractionalProgram]


def save_instance(instance: Instance, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        json.dumps(instance.model_dump(mode="json"), ensure_ascii=False, indent=2),
        encoding="utf-8",
    )
    logger.info("JSON: экземпляр %s -> %s", instance.name or type(instance).__name__, path)


def parse_instance(data: dict) -> Instance:
    """Тип экземпляра определяется по полям: ratios, n_nodes или r."""
    if "n_nodes" in data:
        return BilinearFractionalProgram.model_validate(data)
    if "r" in data and "ratios" not in data:
        return UnivariateInstance.model_validate(data)
    return FractionalProgram.model_validate(data)


def load_instance(path: Path) -> Instance:
    data = json.loads(path.read_text(encoding="utf-8"))
    instance = parse_instance(data)
    logger.debug("JSON: загружен %s из %s", type(instance).__name__, path)
    return instance
