"""Запись LinearModel в текстовый LP-формат (CPLEX LP)."""

from __future__ import annotations

import logging
import math
from pathlib import Path

from ..core.lp import LinearModel, Relation
from ..models import Sense

logger = logging.getLogger(__name__)

_NAME_TABLE = str.maketrans({
    "[": "(", "]": ")", ":": ".", " ": "_", "=": "_", "<": "_", ">": "_",
    "+": "p", "-": "_", "*": "_", "^": "_",
})
_RELATION = {Relation.LE: "<=", Relation.EQ: "=", Relation.GE: ">="}
TERMS_PER_LINE = 6


def sanitize(name: str) -> str:
    return name.translate(_NAME_TABLE)


def _num(value: float) -> str:
    return format(value, ".17g")


def _terms(coeffs: list[tuple[float, str]]) -> list[str]:
    """Слагаемые «± v name», по TERMS_PER_LINE на строку; coeffs не пуст."""
    parts = []
    for k, (v, name) in enumerate(coeffs):
        body = f"{_num(abs(v))} {name}"
        if k == 0:
            parts.append(f"- {body}" if v < 0 else body)
        else:
            parts.append(f"{'-' if v < 0 else '+'} {body}")
    return [" ".join(parts[i:i + TERMS_PER_LINE]) for i in range(0, len(parts), TERMS_PER_LINE)]


def export_lp(model: LinearModel) -> str:
    names = [sanitize(c) for c in model.columns]
    if len(set(names)) != len(names):
        names = [f"{n}_{j}" for j, n in enumerate(names)]
    out = [f"\\ fracx model {model.name}"]
    out.append("Maximize" if model.sense == Sense.MAXIMIZE else "Minimize")
    if not names:
        # пустая модель: без секций
        out.append("End")
        return "\n".join(out) + "\n"
    obj = [(v, names[j]) for j, v in enumerate(model.obj) if v != 0.0]
    lines = _terms(obj) if obj else [f"0 {names[0]}"]
    if model.obj_const:
        lines[-1] += f" {'-' if model.obj_const < 0 else '+'} {_num(abs(model.obj_const))}"
    out.append(" obj: " + lines[0])
    out += ["   " + line for line in lines[1:]]

    out.append("Subject To")
    seen: set[str] = set()
    for i, row in enumerate(model.rows):
        label = sanitize(row.name) if row.name else f"r{i}"
        if label in seen:
            label = f"{label}_{i}"
        seen.add(label)
        coeffs = [(v, names[j]) for j, v in row.coeffs.items()]
        lines = _terms(coeffs) if coeffs else [f"0 {names[0]}"]
        lines[-1] += f" {_RELATION[row.relation]} {_num(row.rhs)}"
        out.append(f" {label}: " + lines[0])
        out += ["   " + line for line in lines[1:]]

    out.append("Bounds")
    for name, lo, hi in zip(names, model.lo, model.hi):
        if math.isinf(lo) and math.isinf(hi):
            out.append(f" {name} free")
        elif lo == hi:
            out.append(f" {name} = {_num(lo)}")
        elif math.isinf(hi):
            out.append(f" {name} >= {_num(lo)}")
        elif math.isinf(lo):
            out.append(f" -inf <= {name} <= {_num(hi)}")
        else:
            out.append(f" {_num(lo)} <= {name} <= {_num(hi)}")

    binaries = [name for name, flag in zip(names, model.binary) if flag]
    if binaries:
        out.append("Binary")
        out += [" " + " ".join(binaries[i:i + 10]) for i in range(0, len(binaries), 10)]
    out.append("End")
    return "\n".join(out) + "\n"


def write_lp(model: LinearModel, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(export_lp(model), encoding="utf-8")
    logger.info("LP: модель %s (%d×%d) -> %s", model.name, model.n_rows, model.n_cols, path)
