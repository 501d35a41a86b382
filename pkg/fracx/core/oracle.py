"""Точные решатели для сравнения: перебор {0,1}^n, вершины многогранника, одномерная задача.

Почему: все утверждения о доминировании и точности релаксаций проверяются
против полного перебора; на настольном масштабе он точен и детерминирован.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

import networkx as nx
import numpy as np

from ..config import settings
from ..errors import DomainError, Infeasible, NonPositiveDenominator, TooLarge
from ..models import BilinearFractionalProgram, FractionalProgram, Sense, UnivariateInstance
from .graphs import SupportGraph
from .lifted import W, h, rho, u, w, x, y, z
from .separators import OddCycle, cut_values

logger = logging.getLogger(__name__)

BINARY_SLACK = 1e-9
CHUNK = 1 << 16


@dataclass(slots=True)
class OracleResult:
    value: float
    argmax: tuple[float, ...]
    enumerated: int
    method: str


def cube_chunks(n: int, chunk: int = CHUNK) -> Iterator[np.ndarray]:
    """Точки {0,1}^n в лексикографическом порядке (x_0: старший разряд), блоками."""
    total = 1 << n
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        yield ((idx[:, None] >> shifts[None, :]) & 1).astype(float)


def _sign(sense: Sense) -> float:
    return 1.0 if sense == Sense.MAXIMIZE else -1.0


def _program_values(fp: FractionalProgram, X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Значения цели и маска допустимости для строк X."""
    C, d = fp.constraints()
    feasible = np.all(X @ C.T <= d + BINARY_SLACK, axis=1) if len(d) else np.ones(X.shape[0], dtype=bool)
    a0, a = fp.denominators()
    b0, b = fp.numerators()
    values = X @ fp.linear()
    if fp.m:
        denom = a0[None, :] + X @ a.T
        bad = feasible[:, None] & (denom <= 0.0)
        if bad.any():
            row, ratio = np.argwhere(bad)[0]
            raise NonPositiveDenominator(int(ratio), X[row].tolist(), float(denom[row, ratio]))
        values = values + np.sum((b0[None, :] + X @ b.T) / denom, axis=1)
    return values, feasible


def brute_force_binary(fp: FractionalProgram) -> OracleResult:
    """Оптимум по всем допустимым x ∈ {0,1}^n; при равенстве: лексикографически первый."""
    if not fp.all_binary:
        raise DomainError("перебор определён только для бинарных переменных")
    if fp.n > settings.oracle_max_binary:
        raise TooLarge(f"n={fp.n} больше предела перебора {settings.oracle_max_binary}")
    sign = _sign(fp.sense)
    best = -np.inf
    best_x: np.ndarray | None = None
    count = 0
    for X in cube_chunks(fp.n):
        count += X.shape[0]
        values, feasible = _program_values(fp, X)
        if not feasible.any():
            continue
        scored = np.where(feasible, sign * values, -np.inf)
        k = int(np.argmax(scored))
        if scored[k] > best:
            best = float(scored[k])
            best_x = X[k]
    if best_x is None:
        raise Infeasible("ни одна бинарная точка не удовлетворяет Cx ≤ d")
    return OracleResult(sign * best, tuple(best_x.tolist()), count, "binary-enumeration")


def enumerate_liftings(fp: FractionalProgram) -> np.ndarray:
    """Точки G: для каждого допустимого x строка (ρ^1, y^1, …, ρ^m, y^m)."""
    if fp.n > settings.oracle_max_binary:
        raise TooLarge(f"n={fp.n} больше предела перебора {settings.oracle_max_binary}")
    a0, a = fp.denominators()
    rows: list[np.ndarray] = []
    for X in cube_chunks(fp.n):
        _, feasible = _program_values(fp, X)
        X = X[feasible]
        rho_values = 1.0 / (a0[None, :] + X @ a.T)
        parts = []
        for i in range(fp.m):
            parts.append(rho_values[:, i:i + 1])
            parts.append(rho_values[:, i:i + 1] * X)
        rows.append(np.hstack(parts) if parts else np.zeros((X.shape[0], 0)))
    return np.vstack(rows)


def exact_lifting(fp: FractionalProgram, point: Sequence[float], max_degree: int = 2) -> dict[str, float]:
    """Значения всех поднятых переменных в точке x: ρ, y, W, w_S, u_S, z, h.

    Ключи: строковые имена; модель берёт нужные через LinearModel.point(..., strict=False).
    """
    xs = np.asarray(point, dtype=float)
    a0, a = fp.denominators()
    b0, b = fp.numerators()
    binary = fp.binary_mask()
    values: dict[str, float] = {str(x(j)): float(xs[j]) for j in range(fp.n)}
    for size in range(2, max(1, max_degree - 1) + 1):
        for S in combinations(range(fp.n), size):
            values[str(u(S))] = float(np.prod(xs[list(S)]))
    for i in range(fp.m):
        r = 1.0 / float(a0[i] + a[i] @ xs)
        ratio = float(b0[i] + b[i] @ xs) * r
        values[str(rho(i))] = r
        values[str(z(i))] = ratio
        for j in range(fp.n):
            values[str(y(i, j))] = r * xs[j]
            values[str(h(i, j))] = ratio * xs[j]
            if not binary[j]:
                values[str(W(i, j, j, diagonal_alias=False))] = r * xs[j] ** 2
        for size in range(2, max_degree + 1):
            for S in combinations(range(fp.n), size):
                values[str(w(i, S))] = r * float(np.prod(xs[list(S)]))
    return values


def enumerate_vertices(
    C: np.ndarray,
    d: np.ndarray,
    lo: Sequence[float] | None = None,
    hi: Sequence[float] | None = None,
    tol: float = 1e-8,
) -> list[np.ndarray]:
    """Все базисные допустимые решения {Cx ≤ d, lo ≤ x ≤ hi} перебором n-подмножеств строк."""
    C = np.atleast_2d(np.asarray(C, dtype=float))
    d = np.asarray(d, dtype=float).reshape(-1)
    n = C.shape[1]
    rows = [C]
    rhs = [d]
    eye = np.eye(n)
    for j in range(n):
        if hi is not None and np.isfinite(hi[j]):
            rows.append(eye[j:j + 1])
            rhs.append(np.array([hi[j]]))
        if lo is not None and np.isfinite(lo[j]):
            rows.append(-eye[j:j + 1])
            rhs.append(np.array([-lo[j]]))
    A = np.vstack(rows)
    b = np.concatenate(rhs)
    if n > settings.vertex_max_n or A.shape[0] > settings.vertex_max_rows:
        raise TooLarge(f"перебор вершин: n={n}, строк {A.shape[0]} больше пределов")

    vertices: list[np.ndarray] = []
    for active in combinations(range(A.shape[0]), n):
        sub = A[list(active)]
        if abs(np.linalg.det(sub)) < 1e-12:
            continue
        v = np.linalg.solve(sub, b[list(active)])
        if np.any(A @ v > b + tol):
            continue
        if any(np.max(np.abs(v - other)) <= tol for other in vertices):
            continue
        vertices.append(v)
    vertices.sort(key=lambda v: tuple(v.tolist()))
    return vertices


def vertex_optimum(fp: FractionalProgram, sense: Sense | None = None) -> OracleResult:
    """Оптимум одной дроби по вершинам LP-релаксации (непрерывный случай)."""
    from .program import extended_system

    sense = fp.sense if sense is None else sense
    Cbar, dbar = extended_system(fp)
    vertices = enumerate_vertices(Cbar, dbar)
    if not vertices:
        raise Infeasible("у многогранника нет вершин")
    sign = _sign(sense)
    values = [fp.evaluate(v) for v in vertices]
    k = int(np.argmax([sign * v for v in values]))
    return OracleResult(values[k], tuple(vertices[k].tolist()), len(vertices), "vertex-enumeration")


# --- одномерная задача ---


def _univariate_profile(inst: UnivariateInstance, xs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Лучшее y при фиксированном x и значение цели: y_i на конце, выбранном знаком c_i/(x − r_i) − b_i."""
    r = np.asarray(inst.r)
    slope = np.asarray(inst.c)[None, :] / (xs[:, None] - r[None, :]) - np.asarray(inst.b)[None, :]
    ys = np.where(slope > 0.0, np.asarray(inst.y_hi)[None, :], np.asarray(inst.y_lo)[None, :])
    return -inst.a * xs + np.sum(slope * ys, axis=1), ys


def univariate_exact(inst: UnivariateInstance, grid: int | None = None, tol: float | None = None) -> OracleResult:
    """Сетка по x плюс золотое сечение на трёх лучших отрезках."""
    from .univariate import check_poles

    check_poles(inst)
    grid = settings.univariate_grid if grid is None else grid
    tol = settings.golden_tol if tol is None else tol
    xs = np.linspace(inst.x_lo, inst.x_hi, grid)
    values, _ = _univariate_profile(inst, xs)

    def f(t: float) -> float:
        return float(_univariate_profile(inst, np.array([t]))[0][0])

    best_x = float(xs[int(np.argmax(values))])
    best = float(np.max(values))
    ratio = (np.sqrt(5.0) - 1.0) / 2.0
    for k in np.argsort(-values, kind="stable")[:3]:
        lo = float(xs[max(0, k - 1)])
        hi = float(xs[min(grid - 1, k + 1)])
        p = hi - ratio * (hi - lo)
        q = lo + ratio * (hi - lo)
        fp_, fq = f(p), f(q)
        while hi - lo > tol:
            if fp_ >= fq:
                hi, q, fq = q, p, fp_
                p = hi - ratio * (hi - lo)
                fp_ = f(p)
            else:
                lo, p, fp_ = p, q, fq
                q = lo + ratio * (hi - lo)
                fq = f(q)
        t = (lo + hi) / 2.0
        value = f(t)
        if value > best:
            best, best_x = value, t
    _, ys = _univariate_profile(inst, np.array([best_x]))
    return OracleResult(best, (best_x, *ys[0].tolist()), grid, "grid-golden")


# --- билинейные дроби ---


def brute_force_bilinear(qfp: BilinearFractionalProgram) -> OracleResult:
    if qfp.n_nodes > settings.oracle_max_binary:
        raise TooLarge(f"|V|={qfp.n_nodes} больше предела перебора {settings.oracle_max_binary}")
    sign = _sign(qfp.sense)
    best = -np.inf
    best_x: np.ndarray | None = None
    count = 0
    for X in cube_chunks(qfp.n_nodes):
        count += X.shape[0]
        denom = qfp.denominator(X)
        if np.any(denom <= 0.0):
            k = int(np.argmin(denom))
            raise NonPositiveDenominator(0, X[k].tolist(), float(denom[k]))
        scored = sign * qfp.numerator(X) / denom
        k = int(np.argmax(scored))
        if scored[k] > best:
            best = float(scored[k])
            best_x = X[k]
    assert best_x is not None
    return OracleResult(sign * best, tuple(best_x.tolist()), count, "binary-enumeration")


def oddcycle_exhaustive(
    rho_value: float,
    y_values: np.ndarray,
    w_values: dict[tuple[int, int], float],
    graph: SupportGraph,
    max_len: int = 7,
) -> OddCycle | None:
    """Самое нарушенное (C, нечётное D) перебором простых циклов длины ≤ max_len."""
    s = cut_values(rho_value, y_values, w_values, graph)
    best: OddCycle | None = None
    for nodes in nx.simple_cycles(graph.to_networkx(), length_bound=max_len):
        if len(nodes) < 3:
            continue
        cycle = tuple(
            (min(p, q), max(p, q)) for p, q in zip(nodes, nodes[1:] + nodes[:1])
        )
        gain = {e: 2.0 * s[e] - 1.0 for e in cycle}
        odd = {e for e in cycle if gain[e] > 0.0}
        if len(odd) % 2 == 0:
            flip = min(cycle, key=lambda e: (abs(gain[e]), e))
            odd ^= {flip}
        violation = 1.0 - sum(s[e] for e in cycle) - sum(1.0 - 2.0 * s[e] for e in odd)
        if best is None or violation > best.violation:
            best = OddCycle(cycle, frozenset(odd), violation)
    return best


# --- лучшее целочисленное значение ---


def _local_search(fp: FractionalProgram, start: np.ndarray, sign: float) -> tuple[float, np.ndarray] | None:
    values, feasible = _program_values(fp, start[None, :])
    if not feasible[0]:
        return None
    current, xs = sign * float(values[0]), start.copy()
    while True:
        flips = np.repeat(xs[None, :], fp.n, axis=0)
        idx = np.arange(fp.n)
        flips[idx, idx] = 1.0 - flips[idx, idx]
        values, feasible = _program_values(fp, flips)
        scored = np.where(feasible, sign * values, -np.inf)
        k = int(np.argmax(scored))
        if scored[k] <= current + 1e-12:
            return current, xs
        current, xs = float(scored[k]), flips[k]


def best_integer_value(fp: FractionalProgram, hints: Sequence[Sequence[float]] = (), seed: int = 0) -> OracleResult:
    """v̂: точный перебор при n ≤ предела, иначе локальный поиск 1-flip из нескольких стартов."""
    if not fp.all_binary:
        raise DomainError("v̂ считается только для бинарных задач")
    if fp.n <= settings.oracle_max_binary:
        return brute_force_binary(fp)
    sign = _sign(fp.sense)
    rng = np.random.Generator(np.random.Philox(key=seed))
    starts = [np.zeros(fp.n)]
    starts += [np.round(np.clip(np.asarray(hint, dtype=float), 0.0, 1.0)) for hint in hints]
    while len(starts) < settings.local_search_starts:
        starts.append((rng.random(fp.n) < 0.5).astype(float))
    best: tuple[float, np.ndarray] | None = None
    for start in starts:
        found = _local_search(fp, start, sign)
        if found is not None and (best is None or found[0] > best[0]):
            best = found
    if best is None:
        raise Infeasible("локальный поиск не нашёл допустимой точки")
    logger.debug("v̂ локальным поиском: %d стартов, значение %.10g", len(starts), sign * best[0])
    return OracleResult(sign * best[0], tuple(best[1].tolist()), len(starts), "local-search")
