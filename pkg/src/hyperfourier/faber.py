"""Schwarz triangle polynomials as exact Faber polynomials of 1/lambda_D.

With ``lambda_D(u) = 16 u theta2(u)^4 / theta3(u)^4`` the reciprocal has the
Laurent form ``1/lambda_D(u) = u^-1 A(u) / 16`` where ``A = theta3^4/theta2^4``
is an integer power series with ``A(0) = 1``.  The n-th polynomial is the
unique ``S_n`` without constant term for which ``S_n(1/lambda_D(u)) - u^-n``
is holomorphic at ``u = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .modular import DEFAULT_CONFIG, EvalConfig, modular_lambda

__all__ = [
    "IntSeries",
    "LaurentTable",
    "RationalPoly",
    "theta_int_series",
    "laurent_table",
    "r4",
    "schwarz_poly",
    "schwarz_constant_term",
    "delta_n_at_zero",
    "eval_R_triangle",
    "eval_R_triangle_inverted",
]

DEFAULT_ORDER = 64
MAX_DEGREE = 32


class IntSeries:
    """Truncated power series with integer coefficients."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = tuple(int(v) for v in coeffs)

    @property
    def order(self) -> int:
        return len(self.c) - 1

    def __mul__(self, other: "IntSeries") -> "IntSeries":
        n = min(self.order, other.order)
        a, b = self.c, other.c
        out = [0] * (n + 1)
        for i in range(n + 1):
            ai = a[i]
            if ai:
                for j in range(n + 1 - i):
                    out[i + j] += ai * b[j]
        return IntSeries(out)

    def inverse(self) -> "IntSeries":
        """Series inverse; requires a unit constant term."""
        if self.c[0] not in (1, -1):
            raise DomainError("constant term must be a unit")
        a = self.c
        n = self.order
        inv = [0] * (n + 1)
        inv[0] = a[0]
        for k in range(1, n + 1):
            s = sum(a[j] * inv[k - j] for j in range(1, k + 1))
            inv[k] = -s * a[0]
        return IntSeries(inv)

    def power(self, k: int) -> "IntSeries":
        out = IntSeries([1] + [0] * self.order)
        for _ in range(k):
            out = out * self
        return out

    def alternate(self) -> "IntSeries":
        """Coefficients of ``f(-u)``."""
        return IntSeries([v if i % 2 == 0 else -v for i, v in enumerate(self.c)])

    def __getitem__(self, i):
        return self.c[i]


@lru_cache(maxsize=None)
def theta_int_series(kind: int, order: int) -> IntSeries:
    """Integer series of ``theta2``, ``theta3`` or ``theta4`` in the nome."""
    c = [0] * (order + 1)
    if kind == 2:
        n = 0
        while n * (n + 1) <= order:
            c[n * (n + 1)] += 1
            n += 1
    elif kind in (3, 4):
        n = 0
        while n * n <= order:
            v = 1 if n == 0 else 2
            c[n * n] += v if kind == 3 or n % 2 == 0 else -v
            n += 1
    else:
        raise DomainError("kind must be 2, 3 or 4")
    return IntSeries(c)


@dataclass(frozen=True)
class LaurentTable:
    """Coefficients of ``1/lambda_D(u) = (1/16) u^-1 (1 + c1 u + c2 u^2 + ...)``.

    ``a`` holds the integer series ``A = 1 + c1 u + ...``; ``inv_lambda_d``
    gives the exact rationals ``a_k / 16`` multiplying ``u^(k-1)``.
    """

    order: int
    a: IntSeries

    @property
    def inv_lambda_d(self):
        return tuple(Fraction(v, 16) for v in self.a.c)


@lru_cache(maxsize=None)
def laurent_table(order: int = DEFAULT_ORDER) -> LaurentTable:
    t2 = theta_int_series(2, order)
    t3 = theta_int_series(3, order)
    t2_4 = t2.power(4)
    t3_4 = t3.power(4)
    return LaurentTable(order, t3_4 * t2_4.inverse())


@lru_cache(maxsize=None)
def _a_powers(order: int):
    tab = laurent_table(order)
    pw = [IntSeries([1] + [0] * order)]
    for _ in range(order):
        pw.append(pw[-1] * tab.a)
    return pw


def r4(n: int) -> int:
    """Representations of ``n`` as an ordered sum of four squares, from ``theta3^4``."""
    if n < 1:
        raise DomainError("n must be positive")
    order = max(n, 8)
    return theta_int_series(3, order).power(4)[n]


@dataclass(frozen=True)
class RationalPoly:
    """Polynomial ``sum_{k=1}^{n} s_k z^k`` with exact rational coefficients."""

    n: int
    coeffs: tuple  # coeffs[k-1] = s_{n,k}

    def coeff(self, k: int) -> Fraction:
        if k == 0:
            return Fraction(0)
        return self.coeffs[k - 1]

    def __call__(self, z):
        if isinstance(z, (int, Fraction)):
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = (acc + c) * z
            return acc
        z = np.asarray(z, dtype=complex)
        acc = np.zeros_like(z)
        for c in reversed(self.coeffs):
            acc = (acc + float(c)) * z
        return acc

    def compose_shift(self) -> "RationalPoly":
        """Coefficients of ``S(1 - z) - S(1)`` as a polynomial without constant term."""
        n = self.n
        out = [Fraction(0)] * (n + 1)
        for k in range(1, n + 1):
            s = self.coeffs[k - 1]
            for j in range(k + 1):
                out[j] += s * math.comb(k, j) * (-1) ** j
        s1 = self(Fraction(1))
        out[0] -= s1
        if out[0] != 0:
            raise ArithmeticError("shifted polynomial has a constant term")
        return RationalPoly(n, tuple(out[1:]))

    def as_pairs(self):
        """``[(k, "num/den"), ...]`` from the leading coefficient down."""
        return [(k, f"{c.numerator}/{c.denominator}") for k, c in zip(range(self.n, 0, -1), reversed(self.coeffs))]


@lru_cache(maxsize=None)
def _faber_integers(n: int, order: int):
    # t_k = s_k 16^-k; t_n = 1, t_j = -sum_{k>j} t_k [A^k]_{k-j}
    pw = _a_powers(order)
    t = [0] * (n + 1)
    t[n] = 1
    for j in range(n - 1, 0, -1):
        t[j] = -sum(t[k] * pw[k][k - j] for k in range(j + 1, n + 1))
    const = sum(t[k] * pw[k][k] for k in range(1, n + 1))
    return tuple(t), const


def schwarz_poly(n: int, order: int = DEFAULT_ORDER) -> RationalPoly:
    """The n-th Schwarz triangle polynomial, computed exactly."""
    if n < 1:
        raise DomainError("n must be positive")
    if order < n:
        raise DomainError("Laurent table order must be at least n")
    t, _ = _faber_integers(n, order)
    return RationalPoly(n, tuple(Fraction(t[k] * 16**k) for k in range(1, n + 1)))


def schwarz_constant_term(n: int, order: int = DEFAULT_ORDER) -> int:
    """Constant term of ``S_n(1/lambda_D(u))`` in its Laurent expansion."""
    if order < n:
        raise DomainError("Laurent table order must be at least n")
    return _faber_integers(n, order)[1]


def delta_n_at_zero(n: int) -> int:
    """``(-1)^n r4(n)``, cross-checked against the Laurent constant term."""
    value = (-1) ** n * r4(n)
    if -schwarz_constant_term(n, max(n, 8)) != value:
        raise ArithmeticError("Laurent constant term disagrees with r4")
    return value


@lru_cache(maxsize=None)
def _float_coeffs(n: int):
    p = schwarz_poly(n)
    return tuple(float(c) for c in p.coeffs)


def _horner(n, w):
    acc = np.zeros_like(w)
    for c in reversed(_float_coeffs(n)):
        acc = (acc + c) * w
    return acc


def eval_R_triangle(n: int, z, config: EvalConfig = DEFAULT_CONFIG):
    """``R_n(z) = S_n(1/lambda(z))`` by Horner's rule in ``1/lambda``."""
    lam = np.asarray(modular_lambda(z, config), dtype=complex)
    if np.any(lam == 0):
        raise DomainError("lambda underflows at this argument")
    out = _horner(n, 1 / lam)
    return out[()] if out.ndim == 0 else out


def eval_R_triangle_inverted(n: int, inv_lambda):
    """``S_n`` evaluated at precomputed values of ``1/lambda``."""
    w = np.asarray(inv_lambda, dtype=complex)
    return _horner(n, w)
