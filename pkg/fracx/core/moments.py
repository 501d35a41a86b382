"""Моментные оболочки на отрезке: разложение на простые дроби, матрица T, ганкелевы блоки.

Почему: выпуклая оболочка кривой (1, 1/(x−r_1), …, 1/(x−r_n), x−r_0) линейно
изоморфна конусу моментной кривой M_{n+1}; принадлежность конусу проверяется
положительной полуопределённостью ганкелевых блоков, а нарушенный блок даёт
линейное отсечение v⊺Block(μ)v ≥ 0. SDP-решатель не нужен: блоки не больше
16×16, собственные числа считает циклический Якоби.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from ..config import settings
from ..errors import DomainError, DuplicatePoles, IllConditioned, SignAssumptionViolated
from .lp import Cut, LinearModel, Relation
from .separators import point_tag

logger = logging.getLogger(__name__)


# --- собственные числа ---


def jacobi_eigh(
    A: np.ndarray,
    tol: float | None = None,
    max_sweeps: int | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Собственные числа (по возрастанию) и ортонормированные собственные векторы (столбцы)."""
    tol = settings.jacobi_tol if tol is None else tol
    max_sweeps = settings.jacobi_max_sweeps if max_sweeps is None else max_sweeps
    M = np.array(A, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DomainError(f"нужна квадратная матрица, получено {M.shape}")
    n = M.shape[0]
    scale = max(1.0, float(np.max(np.abs(M)))) if M.size else 1.0
    if not np.allclose(M, M.T, rtol=0.0, atol=1e-10 * scale):
        raise DomainError("матрица не симметрична")
    M = (M + M.T) / 2.0
    V = np.eye(n)

    for sweep in range(max_sweeps):
        off = float(np.sqrt(np.sum(np.tril(M, -1) ** 2)))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = M[p, q]
                if abs(apq) <= tol * scale * 1e-3:
                    continue
                theta = (M[q, q] - M[p, p]) / (2.0 * apq)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                col_p = M[:, p].copy()
                col_q = M[:, q].copy()
                M[:, p] = c * col_p - s * col_q
                M[:, q] = s * col_p + c * col_q
                row_p = M[p, :].copy()
                row_q = M[q, :].copy()
                M[p, :] = c * row_p - s * row_q
                M[q, :] = s * row_p + c * row_q
                vp = V[:, p].copy()
                V[:, p] = c * vp - s * V[:, q]
                V[:, q] = s * vp + c * V[:, q]
    else:
        logger.warning("Якоби: не сошёлся за %d проходов", max_sweeps)

    values = np.diag(M).copy()
    order = np.argsort(values, kind="stable")
    return values[order], V[:, order]


# --- сдвиги и базис ---


def partial_fractions(poles: Sequence[float]) -> np.ndarray:
    """α_i = 1/Π_{j≠i}(r_i − r_j): 1/Π(x − r_j) = Σ α_i/(x − r_i)."""
    r = np.asarray(poles, dtype=float)
    if r.ndim != 1 or r.size == 0:
        raise DomainError("нужен непустой вектор полюсов")
    diff = r[:, None] - r[None, :]
    np.fill_diagonal(diff, 1.0)
    if np.any(diff == 0.0):
        raise DuplicatePoles(f"повторяющиеся полюсы: {r.tolist()}")
    return 1.0 / np.prod(diff, axis=1)


@dataclass(frozen=True, slots=True)
class ShiftVector:
    """r_0 (сдвиг последней координаты), полюсы r_1..r_n, вспомогательный узел r_{n+1}, носитель [a, b]."""
    r0: float
    poles: tuple[float, ...]
    r_aux: float
    a: float
    b: float

    def __post_init__(self) -> None:
        if not self.a < self.b:
            raise DomainError(f"носитель [{self.a}, {self.b}] пуст")
        nodes = self.nodes
        if len(set(nodes.tolist())) != len(nodes):
            raise DuplicatePoles(f"узлы не различны: {nodes.tolist()}")
        inside = [r for r in self.poles if self.a <= r <= self.b]
        if inside:
            raise SignAssumptionViolated(f"полюсы {inside} внутри [{self.a}, {self.b}]")

    @classmethod
    def build(
        cls,
        poles: Sequence[float],
        a: float,
        b: float,
        r0: float = 0.0,
        r_aux: float | None = None,
    ) -> "ShiftVector":
        poles = tuple(float(r) for r in poles)
        if r_aux is None:
            r_aux = b + 1.0 + max(abs(v) for v in (r0, *poles))
        return cls(float(r0), poles, float(r_aux), float(a), float(b))

    @property
    def n(self) -> int:
        return len(self.poles)

    @property
    def nodes(self) -> np.ndarray:
        return np.array((self.r0, *self.poles, self.r_aux))

    def basis(self, x: float | np.ndarray) -> np.ndarray:
        """(f_0, f_1, …, f_{n+1})(x); для массива x: по строке на точку."""
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        r = np.asarray(self.poles)
        factors = xs[:, None] - r[None, :]
        f0 = np.prod(factors, axis=1)
        out = np.empty((xs.size, self.n + 2))
        out[:, 0] = f0
        for i in range(self.n):
            out[:, i + 1] = np.prod(np.delete(factors, i, axis=1), axis=1)
        out[:, self.n + 1] = (xs - self.r0) * f0
        return out[0] if np.ndim(x) == 0 else out

    def curve(self, x: float | np.ndarray) -> np.ndarray:
        """Точки кривой G_r: (1, 1/(x − r_1), …, 1/(x − r_n), x − r_0)."""
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        r = np.asarray(self.poles)
        out = np.column_stack([np.ones_like(xs), 1.0 / (xs[:, None] - r[None, :]), xs - self.r0])
        return out[0] if np.ndim(x) == 0 else out

    def sign(self) -> float:
        """Знак f_0 на [a, b]; полюсы вне отрезка, поэтому он постоянен."""
        return float(np.sign(self.basis(self.a)[0]))


def basis_matrix_T(shifts: ShiftVector) -> tuple[np.ndarray, np.ndarray]:
    """Матрица T с T·(f_0, …, f_{n+1})(x) = (1, x, …, x^{n+1}) и её обратная.

    Столбцы j ∈ [n] интерполируют x^i в полюсах, затем столбцы 0 и n+1: в r_0 и r_{n+1}.
    """
    n = shifts.n
    size = n + 2
    T = np.zeros((size, size))
    f_r0 = shifts.basis(shifts.r0)
    f_aux = shifts.basis(shifts.r_aux)
    f_poles = [shifts.basis(r) for r in shifts.poles]
    for i in range(size):
        for j in range(1, n + 1):
            r = shifts.poles[j - 1]
            T[i, j] = r**i / f_poles[j - 1][j]
        T[i, 0] = (shifts.r0**i - T[i, 1:n + 1] @ f_r0[1:n + 1]) / f_r0[0]
        T[i, n + 1] = (shifts.r_aux**i - T[i, :n + 1] @ f_aux[:n + 1]) / f_aux[n + 1]
    cond = float(np.linalg.cond(T))
    if not np.isfinite(cond) or cond > settings.condition_cap:
        raise IllConditioned(f"число обусловленности T {cond:.3g} больше {settings.condition_cap:g}")
    return T, np.linalg.inv(T)


# --- ганкелевы блоки ---


def _hankel_tensor(length: int, size: int, offset: int) -> np.ndarray:
    """L[t] с H(μ_offset, …)[i, j] = μ_{offset+i+j}."""
    L = np.zeros((length, size, size))
    for i in range(size):
        for j in range(size):
            L[offset + i + j, i, j] = 1.0
    return L


def hankel_operators(a: float, b: float, d: int) -> list[np.ndarray]:
    """Линейные операторы блоков: Block_k(μ) = Σ_t μ_t L_k[t], μ = (μ_0, …, μ_d).

    Нечётное d: H(μ_1..μ_d) − aH(μ_0..μ_{d−1}) и bH(μ_0..μ_{d−1}) − H(μ_1..μ_d).
    Чётное d: H(μ_0..μ_d) и −H(μ_2..μ_d) + (a+b)H(μ_1..μ_{d−1}) − abH(μ_0..μ_{d−2}).
    """
    if d < 1:
        raise DomainError(f"степень d={d} должна быть ≥ 1")
    if not a < b:
        raise DomainError(f"отрезок [{a}, {b}] пуст")
    length = d + 1
    if d % 2 == 1:
        size = (d - 1) // 2 + 1
        low = _hankel_tensor(length, size, 0)
        high = _hankel_tensor(length, size, 1)
        return [high - a * low, b * low - high]
    size = d // 2 + 1
    top = _hankel_tensor(length, size, 0)
    loc = d // 2
    localizing = (
        -_hankel_tensor(length, loc, 2)
        + (a + b) * _hankel_tensor(length, loc, 1)
        - a * b * _hankel_tensor(length, loc, 0)
    )
    return [top, localizing]


def hankel_blocks(mu: Sequence[float], a: float, b: float, d: int | None = None) -> list[np.ndarray]:
    mu = np.asarray(mu, dtype=float)
    d = mu.size - 1 if d is None else d
    if mu.size != d + 1:
        raise DomainError(f"ожидалось {d + 1} моментов, получено {mu.size}")
    return [np.tensordot(mu, L, axes=1) for L in hankel_operators(a, b, d)]


@dataclass(slots=True)
class MomentVerdict:
    inside: bool
    min_eig: float
    witness: np.ndarray
    block: int
    eigenvalues: list[np.ndarray] = field(default_factory=list)


def moment_membership(
    mu: Sequence[float],
    a: float,
    b: float,
    d: int | None = None,
    cone: bool = False,
    tol: float | None = None,
) -> MomentVerdict:
    """μ ∈ conv(M_d) (или cone(M_d) при cone=True) на [a, b]."""
    tol = settings.moment_tol if tol is None else tol
    mu = np.asarray(mu, dtype=float)
    blocks = hankel_blocks(mu, a, b, d)
    worst = np.inf
    witness = np.zeros(0)
    where = 0
    spectra: list[np.ndarray] = []
    for k, block in enumerate(blocks):
        values, vectors = jacobi_eigh(block)
        spectra.append(values)
        if values[0] < worst:
            worst = float(values[0])
            witness = vectors[:, 0]
            where = k
    inside = worst >= -tol
    if not cone and abs(mu[0] - 1.0) > tol:
        inside = False
    return MomentVerdict(inside, worst, witness, where, spectra)


@dataclass(slots=True)
class MomentCut:
    """Σ_t coeffs_t μ_t ≥ 0."""
    coeffs: np.ndarray
    block: int
    violation: float

    def value(self, mu: Sequence[float]) -> float:
        return float(self.coeffs @ np.asarray(mu, dtype=float))


def moment_cut(
    mu: Sequence[float],
    a: float,
    b: float,
    block: int,
    witness: np.ndarray,
    d: int | None = None,
    tol: float | None = None,
) -> MomentCut | None:
    """Отсечение v⊺Block(μ)v ≥ 0; None, если в точке оно выполнено."""
    tol = settings.moment_tol if tol is None else tol
    mu = np.asarray(mu, dtype=float)
    d = mu.size - 1 if d is None else d
    L = hankel_operators(a, b, d)[block]
    v = np.asarray(witness, dtype=float)
    coeffs = np.einsum("i,tij,j->t", v, L, v)
    value = float(coeffs @ mu)
    if value >= -tol:
        return None
    return MomentCut(coeffs, block, -value)


def conv_G_membership(
    nu: Sequence[float],
    shifts: ShiftVector | None = None,
    kind: Literal["G_r", "G_pq"] = "G_r",
    p: int = 0,
    q: int = 0,
    support: tuple[float, float] | None = None,
    tol: float | None = None,
) -> MomentVerdict:
    """Принадлежность ν выпуклой оболочке G_r или G_{p,q}.

    G_r: ν = (1, ν_1..ν_n, ν_{n+1}), проверяется s·Tν ∈ cone(M_{n+1}), s: знак f_0.
    G_{p,q}: ν = (x^{−p}, …, 1, …, x^q), проверяется ν ∈ cone(M_{p+q}) и ν_p = 1.
    """
    tol = settings.moment_tol if tol is None else tol
    v = np.asarray(nu, dtype=float)
    if kind == "G_r":
        if shifts is None:
            raise DomainError("для G_r нужен ShiftVector")
        if v.size != shifts.n + 2:
            raise DomainError(f"ожидалось {shifts.n + 2} координат, получено {v.size}")
        T, _ = basis_matrix_T(shifts)
        verdict = moment_membership(shifts.sign() * (T @ v), shifts.a, shifts.b, cone=True, tol=tol)
        if abs(v[0] - 1.0) > tol:
            verdict.inside = False
        return verdict

    if support is None:
        raise DomainError("для G_{p,q} нужен носитель [a, b]")
    a, b = support
    if p > 0 and ((p % 2 == 1 and a <= 0.0) or (p % 2 == 0 and a <= 0.0 <= b)):
        raise SignAssumptionViolated(f"x^{p} не положителен на [{a}, {b}]")
    if v.size != p + q + 1:
        raise DomainError(f"ожидалось {p + q + 1} координат, получено {v.size}")
    verdict = moment_membership(v, a, b, cone=True, tol=tol)
    if abs(v[p] - 1.0) > tol:
        verdict.inside = False
    return verdict


class MomentSeparator:
    """Отсечения (1, ν, x − r_0) ∈ conv(G_r) для модели с переменными nu_keys и x_key."""

    def __init__(self, shifts: ShiftVector, nu_keys: Sequence[str], x_key: str = "x", tol: float | None = None) -> None:
        if len(nu_keys) != shifts.n:
            raise DomainError(f"переменных ν {len(nu_keys)}, полюсов {shifts.n}")
        self.shifts = shifts
        self.nu_keys = list(nu_keys)
        self.x_key = x_key
        self.tol = settings.moment_tol if tol is None else tol
        self.T, _ = basis_matrix_T(shifts)
        self.sign = shifts.sign()
        self.operators = hankel_operators(shifts.a, shifts.b, shifts.n + 1)

    def moments(self, point: np.ndarray, model: LinearModel) -> np.ndarray:
        nu = np.array([point[model.col(k)] for k in self.nu_keys])
        full = np.concatenate(([1.0], nu, [point[model.col(self.x_key)] - self.shifts.r0]))
        return self.sign * (self.T @ full)

    def __call__(self, point: np.ndarray, model: LinearModel) -> list[Cut]:
        mu = self.moments(point, model)
        n = self.shifts.n
        cuts: list[Cut] = []
        tag = point_tag(mu)
        for k, L in enumerate(self.operators):
            values, vectors = jacobi_eigh(np.tensordot(mu, L, axes=1))
            for e in np.flatnonzero(values < -self.tol):
                v = vectors[:, e]
                g = np.einsum("i,tij,j->t", v, L, v)
                # μ = s·Tν: переносим коэффициенты на ν
                h = self.sign * (self.T.T @ g)
                coeffs = {key: h[i + 1] for i, key in enumerate(self.nu_keys) if h[i + 1] != 0.0}
                coeffs[self.x_key] = coeffs.get(self.x_key, 0.0) + h[n + 1]
                rhs = -h[0] + h[n + 1] * self.shifts.r0
                cuts.append(Cut(coeffs, Relation.GE, rhs, f"moment[{k},{e}]:{tag}", "moment", float(-values[e])))
        return cuts
