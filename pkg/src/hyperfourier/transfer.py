"""Transfer operators of the even Gauss map on grid functions over ``[-1, 1]``.

``T_{m+1}[f](x) = sum_{k != 0} f(1/(2k - x)) / (2k - x)^(m + 2)``; ``m = 0``
gives the Perron-Frobenius-Ruelle operator ``T_1`` of ``x -> {-1/x}_2``.
The biorthogonal functions satisfy the fixed relations::

    (I + T_1)[2 H_0] = 1,    (I +- T_1)[2 H_n +- 2 M_n] = e^{i pi n x}

on ``[-1, 1]``, which ``fixed_relation_residual`` measures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import zeta as hurwitz_zeta

from .biortho import BiorthoEvaluator, default_evaluator
from .errors import DomainError, NumericalFailure

__all__ = [
    "GridFunction",
    "chebyshev_nodes",
    "transfer_apply",
    "transfer_iterate",
    "fixed_relation_residual",
    "contraction_check",
    "CONTRACTION_BOUND",
]

DEFAULT_NODES = 257
DEFAULT_K = 1024
CONTRACTION_BOUND = math.pi**2 / 4 - 1


def chebyshev_nodes(n: int = DEFAULT_NODES) -> np.ndarray:
    """``-cos(pi j / (n - 1))``, increasing from -1 to 1."""
    if n < 9:
        raise DomainError("need at least 9 nodes")
    x = -np.cos(math.pi * np.arange(n) / (n - 1))
    x[0], x[-1] = -1.0, 1.0
    x[(n - 1) // 2] = 0.0 if n % 2 else x[(n - 1) // 2]
    return x


@dataclass(frozen=True)
class GridFunction:
    """Complex samples on increasing nodes in ``[-1, 1]`` with a cubic spline.

    ``err`` carries an accumulated bound on the sample error; ``interp_err``
    is the spline error estimate ``(5/384) h^4 max |f''''|`` with the fourth
    derivative taken from jumps of the spline's third derivative.
    """

    nodes: np.ndarray
    values: np.ndarray
    err: float = 0.0
    _spline: CubicSpline = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        x = np.asarray(self.nodes, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if x.ndim != 1 or x.size < 9 or v.shape != x.shape:
            raise DomainError("need at least 9 nodes with one value each")
        if np.any(np.diff(x) <= 0) or x[0] < -1 or x[-1] > 1:
            raise DomainError("nodes must increase strictly inside [-1, 1]")
        if not np.all(np.isfinite(v)):
            raise NumericalFailure("non-finite grid values")
        object.__setattr__(self, "nodes", x)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "_spline", CubicSpline(x, v, bc_type="not-a-knot"))

    @classmethod
    def from_callable(cls, f, n: int = DEFAULT_NODES, err: float = 0.0) -> "GridFunction":
        x = chebyshev_nodes(n)
        return cls(x, np.asarray(f(x), dtype=complex) * np.ones_like(x), err)

    @classmethod
    def constant(cls, c: complex = 1.0, n: int = DEFAULT_NODES) -> "GridFunction":
        x = chebyshev_nodes(n)
        return cls(x, np.full(x.shape, complex(c)))

    def __call__(self, x, nu: int = 0):
        x = np.asarray(x, dtype=float)
        if np.any(np.abs(x) > 1 + 1e-12):
            raise DomainError("grid functions live on [-1, 1]")
        return self._spline(x, nu)

    @property
    def value_at_zero(self) -> complex:
        return complex(self._spline(0.0))

    @property
    def interp_err(self) -> float:
        h = np.diff(self.nodes)
        d3 = self._spline.c[0] * 6  # third derivative per interval
        if d3.size < 2:
            return 0.0
        d4 = np.abs(np.diff(d3)) / (0.5 * (h[1:] + h[:-1]))
        hmax = np.maximum(h[1:], h[:-1])
        return float(np.max(5 / 384 * hmax**4 * d4))

    def integral(self) -> complex:
        return complex(self._spline.integrate(self.nodes[0], self.nodes[-1]))

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def __add__(self, other: "GridFunction") -> "GridFunction":
        return GridFunction(self.nodes, self.values + other.values, self.err + other.err)

    def __sub__(self, other: "GridFunction") -> "GridFunction":
        return GridFunction(self.nodes, self.values - other.values, self.err + other.err)

    def scale(self, c: complex) -> "GridFunction":
        return GridFunction(self.nodes, c * self.values, abs(c) * self.err)


def _tail_sum(p: int, x, K: int):
    """``sum_{|k| > K} (2k - x)^-p`` via Hurwitz zeta values."""
    x = np.asarray(x, dtype=float)
    s = hurwitz_zeta(p, K + 1 - x / 2) + (-1) ** p * hurwitz_zeta(p, K + 1 + x / 2)
    return s / 2.0**p


def transfer_apply(f: GridFunction, m: int = 0, K: int = DEFAULT_K, tol: float | None = None) -> GridFunction:
    """``T_{m+1}[f]`` on the nodes of ``f``.

    The terms ``0 < |k| <= K`` are summed directly; the rest use the Taylor
    expansion of ``f`` at the accumulation point 0 through second order,
    ``sum_j f^(j)(0)/j! * sum_{|k| > K} (2k - x)^-(m + 2 + j)``, with the
    third-order remainder bounded by the spline's third derivative near 0.
    """
    if K < 1:
        raise DomainError("K must be at least 1")
    if m < 0:
        raise DomainError("order must be nonnegative")
    x = f.nodes
    p = m + 2
    acc = np.zeros(x.shape, dtype=complex)
    for sgn in (1, -1):
        for start in range(1, K + 1, 256):
            k = sgn * np.arange(start, min(start + 256, K + 1))
            d = 2.0 * k[:, None] - x[None, :]
            acc += np.sum(f(1 / d) / d**p, axis=0)
    taylor = [f.value_at_zero, complex(f(0.0, 1)), complex(f(0.0, 2)) / 2]
    for j, c in enumerate(taylor):
        acc += c * _tail_sum(p + j, x, K)
    umax = 1 / (2 * K + 1)
    probe = np.linspace(-umax, umax, 33)
    d3 = float(np.max(np.abs(f(probe, 3))))
    tail_err = d3 / 6 * float(np.max(np.abs(_tail_sum(p + 3, x, K)) + 2 * _tail_sum(p + 3, np.abs(x), K)))
    # |T_{m+1} g| <= sup|g| sum_k |2k - x|^-2 <= (pi^2/4 - 1) sup|g|, the maximum sitting at x = +-1
    err = CONTRACTION_BOUND * (f.err + f.interp_err) + tail_err
    if tol is not None and tail_err > tol:
        raise NumericalFailure(f"truncation K={K} leaves tail {tail_err:.2e} above tol {tol:.2e}")
    return GridFunction(x, acc, err)


def transfer_iterate(f: GridFunction, N: int, m: int = 0, K: int = DEFAULT_K) -> list[GridFunction]:
    """``[f, T f, ..., T^N f]``."""
    out = [f]
    for _ in range(N):
        out.append(transfer_apply(out[-1], m, K))
    return out


def _biortho_grid(which: str, n: int, ev: BiorthoEvaluator, nodes: int) -> GridFunction:
    x = chebyshev_nodes(nodes)
    v, e = ev.h0(x) if which == "h0" else ev.value(which, n, x)
    return GridFunction(x, np.asarray(v, dtype=complex), float(np.max(e)))


def fixed_relation_residual(n: int, evaluator: BiorthoEvaluator | None = None, nodes: int = DEFAULT_NODES,
                            K: int = DEFAULT_K):
    """Maximum grid residual of the fixed relations for index ``n``.

    Returns a float for ``n = 0`` and a dict ``{"+": r_plus, "-": r_minus}``
    otherwise.
    """
    ev = evaluator or default_evaluator()
    if abs(n) > ev.max_n:
        raise DomainError(f"|n| exceeds the evaluator cap {ev.max_n}")
    x = chebyshev_nodes(nodes)
    if n == 0:
        f = _biortho_grid("h0", 0, ev, nodes).scale(2)
        r = f + transfer_apply(f, 0, K)
        return float(np.max(np.abs(r.values - 1)))
    H = _biortho_grid("H", n, ev, nodes)
    M = _biortho_grid("M", n, ev, nodes)
    target = np.exp(1j * math.pi * n * x)
    out = {}
    for key, sgn in (("+", 1), ("-", -1)):
        f = (H + M.scale(sgn)).scale(2)
        r = f + transfer_apply(f, 0, K).scale(sgn)
        out[key] = float(np.max(np.abs(r.values - target)))
    return out


def contraction_check(N: int, nodes: int = DEFAULT_NODES, K: int = DEFAULT_K) -> float:
    """``T_1^N[1](0) / T_1^(N-1)[1](0)``; the bound ``pi^2/4 - 1`` must hold."""
    if N < 2:
        raise DomainError("N must be at least 2")
    its = transfer_iterate(GridFunction.constant(1.0, nodes), N, 0, K)
    a, b = its[N].value_at_zero, its[N - 1].value_at_zero
    if not (a.real > 0 and b.real > 0):
        raise NumericalFailure("iterates lost positivity at 0")
    return a.real / b.real
