"""Hyperbolic Fourier analysis and the conjugate series.

A function ``f`` integrable against ``(1 + x^2)^-1 dx`` has coefficients
``h_n(f) = int f H_{-n}`` and ``m_n(f) = int f M_{-n}`` and the partial sums::

    F_N[f](x) = h_0 + sum_{0 < |n| <= N} (h_n e^{i pi n x} + m_n e^{-i pi n / x})

An integrable ``phi`` has conjugate coefficients ``h*_n = int phi e^{-i pi n t}``
and ``m*_n = int phi e^{i pi n / t}`` and is rebuilt from them by the series
``h*_0 H_0 + sum (h*_n H_n + m*_n M_n)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .biortho import BiorthoEvaluator, default_evaluator
from .errors import DomainError, NumericalFailure

__all__ = [
    "PERIODIC2",
    "PERIODIC2_INVERTED",
    "TestFunction",
    "bump",
    "log_bump",
    "HFSCoeffs",
    "analyze",
    "synthesize",
    "conj_analyze",
    "conj_synthesize",
    "poisson_coeffs",
    "poisson_kernel",
    "oscillatory_integral",
]

PERIODIC2 = "PERIODIC2"
PERIODIC2_INVERTED = "PERIODIC2_INVERTED"


@dataclass(frozen=True)
class TestFunction:
    """A function on the line with a support descriptor.

    Parameters
    ----------
    evaluator : callable
        Vectorized map from real arrays to complex arrays.
    support : tuple or str
        A finite interval ``(a, b)`` outside of which the function vanishes,
        ``PERIODIC2`` (``f(x + 2) = f(x)``) or ``PERIODIC2_INVERTED``
        (``f(-1/x)`` is 2-periodic).
    tail_bound : float
        A constant ``C`` with ``|f| <= C``; it bounds the truncated tails of
        the inverted-variable integrals.
    """

    __test__ = False  # not a pytest class

    evaluator: Callable
    support: object
    tail_bound: float = 1.0

    def __post_init__(self):
        s = self.support
        if isinstance(s, str):
            if s not in (PERIODIC2, PERIODIC2_INVERTED):
                raise DomainError(f"unsupported support descriptor {s!r}")
        else:
            try:
                a, b = (float(v) for v in s)
            except (TypeError, ValueError):
                raise DomainError("support must be an interval or a periodic descriptor") from None
            if not (math.isfinite(a) and math.isfinite(b) and a < b):
                raise DomainError("support interval must be finite and nonempty")
            object.__setattr__(self, "support", (a, b))
        if not self.tail_bound > 0:
            raise DomainError("tail_bound must be positive")

    @property
    def interval(self):
        return None if isinstance(self.support, str) else self.support

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.asarray(self.evaluator(x), dtype=complex) * np.ones_like(x)


def bump(a: float, b: float) -> TestFunction:
    """``exp(-1/(1 - u^2))`` with ``u`` the affine map of ``[a, b]`` onto ``[-1, 1]``."""
    if not a < b:
        raise DomainError("bump needs a < b")

    def f(t):
        u = (2 * np.asarray(t, dtype=float) - (a + b)) / (b - a)
        out = np.zeros(u.shape)
        inside = np.abs(u) < 1
        out[inside] = np.exp(-1 / (1 - u[inside] ** 2))
        return out

    return TestFunction(f, (a, b), tail_bound=math.exp(-1))


def log_bump(half_width: float = 1.5, sharpness: float = 20.0) -> TestFunction:
    """``exp(c - c/(1 - u^2))`` with ``u = log(t)/L`` on ``[e^-L, e^L]``.

    Invariant under ``t -> 1/t`` up to the measure; for large ``c`` both
    ``int phi e^{-i pi n t}`` and ``int phi e^{i pi n / t}`` decay nearly like
    Gaussians in ``n``, which makes it the standard smooth test datum.
    """
    L, c = float(half_width), float(sharpness)
    if not (L > 0 and c > 0):
        raise DomainError("half_width and sharpness must be positive")

    def f(t):
        t = np.asarray(t, dtype=float)
        out = np.zeros(t.shape)
        inside = (t > math.exp(-L)) & (t < math.exp(L))
        u = np.log(t[inside]) / L
        out[inside] = np.exp(c - c / (1 - u**2))
        return out

    return TestFunction(f, (math.exp(-L), math.exp(L)), tail_bound=1.0)


@dataclass(frozen=True)
class HFSCoeffs:
    """Coefficients indexed ``-N..N``; ``m[N]`` (index 0) is always zero.

    ``starred`` marks conjugate coefficients.  ``err`` bounds the per-entry
    quadrature error.
    """

    N: int
    h: np.ndarray
    m: np.ndarray
    starred: bool = False
    err: float = 0.0

    def __post_init__(self):
        for a in (self.h, self.m):
            if a.shape != (2 * self.N + 1,):
                raise DomainError("coefficient arrays must have length 2N + 1")
            if not np.all(np.isfinite(a)):
                raise NumericalFailure("non-finite coefficient")
        if self.m[self.N] != 0:
            raise DomainError("m has no index 0")

    def h_at(self, n: int) -> complex:
        return complex(self.h[n + self.N])

    def m_at(self, n: int) -> complex:
        if n == 0:
            raise DomainError("m has no index 0")
        return complex(self.m[n + self.N])

    @classmethod
    def zeros(cls, N: int, starred: bool = False) -> "HFSCoeffs":
        return cls(N, np.zeros(2 * N + 1, complex), np.zeros(2 * N + 1, complex), starred)

    def to_json(self):
        rows = lambda a, skip0: [  # noqa: E731
            {"n": n, "re": float(a[n + self.N].real), "im": float(a[n + self.N].imag)}
            for n in range(-self.N, self.N + 1)
            if not (skip0 and n == 0)
        ]
        return {"N": self.N, "h": rows(self.h, False), "m": rows(self.m, True), "error_estimate": self.err}


# quadrature -------------------------------------------------------------

_GL = np.polynomial.legendre.leggauss(16)


def _panel_rule(a: float, b: float, width: float, rule):
    m = max(1, math.ceil((b - a) / width))
    edges = np.linspace(a, b, m + 1)
    x, w = rule
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    half = 0.5 * (edges[1:] - edges[:-1])[:, None]
    return (mid + half * x).ravel(), (half * w).ravel()


def oscillatory_integral(g, a: float, b: float, freqs, max_width: float = 0.0625):
    """``int_a^b g(t) e^{-i pi k t} dt`` for every ``k`` in ``freqs``.

    Gauss-Legendre panels no wider than half a period of the fastest
    oscillation.  The value comes from the rule with halved panels and the
    error estimate is its distance to the unhalved one.  Returns
    ``(values, error)``.
    """
    freqs = np.asarray(freqs, dtype=float)
    kmax = float(np.max(np.abs(freqs))) if freqs.size else 0.0
    width = min(max_width, 1.0 / kmax) if kmax > 0 else max_width
    out = []
    for wd in (width / 2, width):
        t, w = _panel_rule(a, b, wd, _GL)
        gv = np.asarray(g(t), dtype=complex)
        out.append(np.exp(-1j * math.pi * np.outer(freqs, t)) @ (w * gv))
    return out[0], float(np.max(np.abs(out[0] - out[1]))) if freqs.size else 0.0


def _fourier_period(g, N: int, npts: int | None = None):
    """``(1/2) int_{-1}^{1} g e^{-i pi n t} dt`` for ``n = -N..N`` by the midpoint rule.

    The nodes avoid ``t = 0`` and ``t = +-1``.  Exact for trigonometric
    polynomials of degree below ``npts - N``; the error is estimated against
    the rule with half the nodes.
    """
    npts = npts or max(256, 8 * N)
    ns = np.arange(-N, N + 1)
    out = []
    for m in (npts, npts // 2):
        t = -1 + (2.0 * np.arange(m) + 1) / m
        gv = np.asarray(g(t), dtype=complex) * np.ones_like(t)
        out.append(np.exp(-1j * math.pi * np.outer(ns, t)) @ gv / m)
    return out[0], float(np.max(np.abs(out[0] - out[1])))


# analysis ---------------------------------------------------------------

def analyze(f: TestFunction, N: int, evaluator: BiorthoEvaluator | None = None, tol: float = 1e-6) -> HFSCoeffs:
    """Hyperbolic Fourier coefficients ``h_n(f)``, ``m_n(f)`` for ``|n| <= N``.

    Periodic inputs use the exact reduction to classical Fourier
    coefficients: for 2-periodic ``f`` the periodized system gives
    ``h_n = (1/2) int_{-1}^{1} f e^{-i pi n x}`` and ``m_n = 0``; when
    ``g(t) = f(-1/t)`` is 2-periodic, ``m_n = g_n``, ``h_0 = g_0`` and the other
    ``h_n`` vanish.  Interval inputs are integrated against the system
    directly.
    """
    ev = evaluator or default_evaluator()
    if N < 0 or N > ev.max_n:
        raise DomainError(f"N must lie in 0..{ev.max_n}")
    zeros = np.zeros(2 * N + 1, dtype=complex)
    if f.support == PERIODIC2:
        h, err = _fourier_period(f, N)
        return HFSCoeffs(N, h, zeros.copy(), False, err)
    if f.support == PERIODIC2_INVERTED:

        def g(t):
            return f(-1 / t)

        gh, err = _fourier_period(g, N)
        h = zeros.copy()
        h[N] = gh[N]
        m = gh.copy()
        m[N] = 0
        return HFSCoeffs(N, h, m, False, err)
    a, b = f.interval
    results = []
    for width in (0.0625, 0.125):
        t, w = _panel_rule(a, b, width, _GL)
        fw = w * f(t)
        h = zeros.copy()
        m = zeros.copy()
        h0v, h0e = ev.h0(t)
        h[N] = np.sum(fw * h0v)
        be = float(np.sum(np.abs(fw) * h0e))
        for n in range(-N, N + 1):
            if n == 0:
                continue
            hv, he = ev.hn(-n, t)
            mv, me = ev.mn(-n, t)
            h[n + N] = np.sum(fw * hv)
            m[n + N] = np.sum(fw * mv)
            be = max(be, float(np.sum(np.abs(fw) * (he + me))))
        results.append((h, m, be))
    (h, m, be), (h2, m2, _) = results
    err = float(max(np.max(np.abs(h - h2)), np.max(np.abs(m - m2)))) + be
    if err > tol:
        raise NumericalFailure(f"coefficient error {err:.2e} exceeds tol {tol:.2e}")
    return HFSCoeffs(N, h, m, False, err)


def synthesize(c: HFSCoeffs, x):
    """Partial sum ``h_0 + sum (h_n e^{i pi n x} + m_n e^{-i pi n / x})``.

    The m-terms are evaluated in ``w = -1/x`` reduced modulo 2, which keeps
    the phase accurate near ``x = 0``; at ``x = 0`` itself they are only
    allowed to be absent.
    """
    if c.starred:
        raise DomainError("use conj_synthesize for starred coefficients")
    x = np.asarray(x, dtype=float)
    N = c.N
    ns = np.arange(-N, N + 1)
    xf = x.ravel()
    zero = xf == 0
    has_m = np.any(c.m != 0)
    if np.any(zero) and has_m:
        raise DomainError("the m-terms are singular at x = 0")
    out = np.exp(1j * math.pi * np.outer(xf - 2 * np.round(xf / 2), ns)) @ c.h
    if has_m:
        w = -1 / np.where(zero, 1.0, xf)
        w = w - 2 * np.round(w / 2)
        out = out + np.exp(1j * math.pi * np.outer(w, ns)) @ c.m
    out = out.reshape(x.shape)
    return out[()] if out.ndim == 0 else out


def conj_analyze(phi: TestFunction, N: int, tol: float = 1e-6, s_cap: float = 4096.0) -> HFSCoeffs:
    """Conjugate coefficients ``h*_n = int phi e^{-i pi n t}`` and ``m*_n = int phi e^{i pi n / t}``.

    ``phi`` must have interval support.  The m-side substitutes ``t = -1/s``,
    giving ``int phi(-1/s) s^-2 e^{-i pi n s} ds``, so both sides share one
    oscillatory rule.  If the support contains 0 the substituted range is
    unbounded; it is cut at ``|s| = S`` where the integration-by-parts bound
    ``4 C / (pi S^2)`` of the two remainders drops below ``tol / 2``.
    """
    if phi.interval is None:
        raise DomainError("conj_analyze needs interval support")
    if N < 0:
        raise DomainError("N must be nonnegative")
    a, b = phi.interval
    ns = np.arange(-N, N + 1)
    h, eh = oscillatory_integral(phi, a, b, ns)

    def g(s):
        return phi(-1 / s) / s**2

    m = np.zeros(2 * N + 1, dtype=complex)
    em = 0.0
    if N > 0:
        pos = ns[ns != 0]
        if a > 0 or b < 0:
            ranges = [(-1 / a, -1 / b)]
            tail = 0.0
        else:
            S = min(max(1.0, math.sqrt(8 * phi.tail_bound / (math.pi * tol))), s_cap)
            tail = 4 * phi.tail_bound / (math.pi * S * S)
            ranges = []
            if b > 0:
                ranges.append((-S, -1 / b))
            if a < 0:
                ranges.append((-1 / a, S))
        vals = np.zeros(pos.size, dtype=complex)
        for lo, hi in ranges:
            v, e = oscillatory_integral(g, lo, hi, pos)
            vals += v
            em += e
        em += tail
        # e^{i pi n / t} = e^{-i pi n s}: the s-frequency is n itself
        m[ns != 0] = vals
    err = eh + em
    if err > tol:
        raise NumericalFailure(f"conjugate coefficient error {err:.2e} exceeds tol {tol:.2e}")
    return HFSCoeffs(N, h, m, True, err)


def conj_synthesize(c: HFSCoeffs, x, evaluator: BiorthoEvaluator | None = None):
    """``h*_0 H_0(x) + sum (h*_n H_n(x) + m*_n M_n(x))``; returns ``(value, error)``."""
    if not c.starred:
        raise DomainError("conj_synthesize needs starred coefficients")
    ev = evaluator or default_evaluator()
    if c.N > ev.max_n:
        raise DomainError("N exceeds the evaluator's max_n")
    x = np.asarray(x, dtype=float)
    v, e = ev.h0(x)
    val = c.h_at(0) * v
    err = abs(c.h_at(0)) * e
    for n in range(-c.N, c.N + 1):
        if n == 0:
            continue
        hn, he = ev.hn(n, x)
        mn, me = ev.mn(n, x)
        val = val + c.h_at(n) * hn + c.m_at(n) * mn
        err = err + abs(c.h_at(n)) * he + abs(c.m_at(n)) * me
    return val, err


def poisson_coeffs(z: complex, N: int) -> HFSCoeffs:
    """Conjugate coefficients of the Poisson kernel ``P_z(t) = y / (pi ((t - x)^2 + y^2))``.

    With ``z = x + iy``: ``h*_0 = 1``, ``h*_n = e^{-pi n (y + ix)}``,
    ``h*_{-n} = e^{-pi n (y - ix)}``, ``m*_n = e^{-pi n / (y + ix)}`` and
    ``m*_{-n} = e^{-pi n / (y - ix)}`` for ``n >= 1``.
    """
    z = complex(z)
    if not z.imag > 0:
        raise DomainError("z must lie in the upper half-plane")
    x, y = z.real, z.imag
    h = np.zeros(2 * N + 1, dtype=complex)
    m = np.zeros(2 * N + 1, dtype=complex)
    h[N] = 1.0
    for n in range(1, N + 1):
        h[N + n] = np.exp(-math.pi * n * (y + 1j * x))
        h[N - n] = np.exp(-math.pi * n * (y - 1j * x))
        m[N + n] = np.exp(-math.pi * n / (y + 1j * x))
        m[N - n] = np.exp(-math.pi * n / (y - 1j * x))
    return HFSCoeffs(N, h, m, True)


def poisson_kernel(z: complex, t):
    z = complex(z)
    t = np.asarray(t, dtype=float)
    return z.imag / (math.pi * ((t - z.real) ** 2 + z.imag**2))
