"""Иерархия k-term: гомогенизированный RLT_k для каждой дроби и общие u_S.

w^i_S = ρ^i Π_{j∈S} x_j (|S| ≤ k+1), u_S = Π_{j∈S} x_j (1 ≤ |S| ≤ k).
Произведения множителей границ Π_S x Π_T (1 − x) с |S ∪ T| = k+1 раскрываются
с учётом x_j² = x_j; при наличии Cx ≤ d строки домножаются на произведения
из k множителей. При k = n проекция на (ρ, y) совпадает с conv(G).
"""

from __future__ import annotations

import logging
from itertools import combinations
from math import comb

import numpy as np

from ..config import settings
from ..errors import DomainError, SizeGuard
from ..models import FractionalProgram
from .lifted import rho, u, w, x
from .lp import Key, LinearModel, Relation

logger = logging.getLogger(__name__)


def _subsets(items: tuple[int, ...]) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []
    for size in range(len(items) + 1):
        out.extend(combinations(items, size))
    return out


def bound_factor_expansion(S: tuple[int, ...], T: tuple[int, ...]) -> dict[tuple[int, ...], float]:
    """Π_S x Π_T (1 − x) = Σ_{R⊆T} (−1)^|R| x^{S∪R}, мономы как отсортированные кортежи."""
    terms: dict[tuple[int, ...], float] = {}
    for R in _subsets(T):
        mono = tuple(sorted(set(S) | set(R)))
        terms[mono] = terms.get(mono, 0.0) + (-1.0) ** len(R)
    return terms


def kterm_columns(n: int, m: int, k: int) -> int:
    D = min(k + 1, n)
    per_ratio = sum(comb(n, t) for t in range(D + 1))
    shared = sum(comb(n, t) for t in range(1, k + 1))
    return m * per_ratio + shared


def build_kterm(fp: FractionalProgram, k: int) -> LinearModel:
    """Релаксация k-term для бинарной задачи."""
    if not fp.all_binary:
        raise DomainError("k-term определён только для бинарных переменных")
    n, m = fp.n, fp.m
    if not 1 <= k <= n:
        raise DomainError(f"k={k} вне диапазона 1..{n}")
    if n > settings.kterm_max_n:
        raise SizeGuard(f"n={n} больше предела {settings.kterm_max_n} для k-term")
    columns = kterm_columns(n, m, k)
    if columns > settings.kterm_column_cap:
        raise SizeGuard(f"k-term: {columns} столбцов больше предела {settings.kterm_column_cap}")

    D = min(k + 1, n)
    F = min(k, n)
    a0, a = fp.denominators()
    b0, b = fp.numerators()
    c = fp.linear()
    C, d = fp.constraints()

    model = LinearModel(f"KTERM{k}", fp.sense)
    for size in range(1, k + 1):
        for S in combinations(range(n), size):
            model.add_var(u(S), 0.0, 1.0, obj=c[S[0]] if size == 1 else 0.0, binary=size == 1)
    for i in range(m):
        for size in range(D + 1):
            for S in combinations(range(n), size):
                if size == 0:
                    obj = b0[i]
                elif size == 1:
                    obj = b[i, S[0]]
                else:
                    obj = 0.0
                model.add_var(w(i, S), 0.0, np.inf, obj=obj)

    for r in range(len(d)):
        model.add_row({x(j): C[r, j] for j in range(n)}, Relation.LE, d[r], f"C[{r}]")

    for i in range(m):
        # множители границ
        for J in combinations(range(n), D):
            for T in _subsets(J):
                S = tuple(v for v in J if v not in T)
                terms = bound_factor_expansion(S, T)
                coeffs: dict[Key, float] = {w(i, mono): coef for mono, coef in terms.items()}
                model.add_row(coeffs, Relation.GE, 0.0, f"rlt[{i}]:{S}|{T}")
        # (d_r − C_r x)·Π_S x Π_T (1 − x) ≥ 0
        for r in range(len(d)):
            for J in combinations(range(n), F):
                for T in _subsets(J):
                    S = tuple(v for v in J if v not in T)
                    coeffs = {}
                    for mono, coef in bound_factor_expansion(S, T).items():
                        key = w(i, mono)
                        coeffs[key] = coeffs.get(key, 0.0) + coef * d[r]
                        for j in range(n):
                            if C[r, j] == 0.0:
                                continue
                            key = w(i, tuple(sorted(set(mono) | {j})))
                            coeffs[key] = coeffs.get(key, 0.0) - coef * C[r, j]
                    model.add_row(coeffs, Relation.GE, 0.0, f"rlt-side[{i},{r}]:{S}|{T}")
        # нормировка
        norm: dict[Key, float] = {w(i, (j,)): a[i, j] for j in range(n)}
        norm[rho(i)] = a0[i]
        model.add_row(norm, Relation.EQ, 1.0, f"norm[{i}]")
        # связь u_S = (a0 + Σ_{j∈S} a_j) w_S + Σ_{r∉S} a_r w_{S∪{r}}
        for size in range(1, k + 1):
            for S in combinations(range(n), size):
                link: dict[Key, float] = {u(S): -1.0}
                link[w(i, S)] = a0[i] + float(sum(a[i, j] for j in S))
                for r_ in range(n):
                    if r_ in S or a[i, r_] == 0.0:
                        continue
                    key = w(i, S + (r_,))
                    link[key] = link.get(key, 0.0) + a[i, r_]
                model.add_row(link, Relation.EQ, 0.0, f"link[{i}]:{S}")

    logger.debug("k-term k=%d: %d строк, %d столбцов", k, model.n_rows, model.n_cols)
    return model
