"""The biorthogonal system H_0, H_n, M_n.

Two independent evaluation paths are provided for ``n != 0``:

DIRECT
    ``H_n(x) = -1/(4 pi^2 n) int_arc R_n(z) / (x + z)^2 dz`` and
    ``M_n(x) =  1/(4 pi^2 n) int_arc R_n(-1/z) / (x + z)^2 dz`` with
    ``R_n = S_n(1/lambda)``.  The integrand is of size ``exp(2 pi n)`` while
    the result is O(n^2), so double precision caps this path at small ``n``.

LOW_CONTOUR
    ``4 pi^2 n H_n(x) = int_{-1+i/n}^{1+i/n} exp(-i pi n z) Phi^0(x; z) dz``
    (``Phi^1`` for ``M_n``) with the continued generating function.  The
    integrand is 2-periodic and analytic, so the trapezoidal rule converges
    geometrically and nothing cancels.

Negative indices use ``H_{-n}(x) = H_n(-x)`` and ``M_{-n}(x) = M_n(-x)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import zeta as hurwitz_zeta

from .contours import arc_rule
from .errors import DomainError, NumericalFailure
from .faber import eval_R_triangle_inverted
from .genfun import DEFAULT_QUAD, QuadConfig, StripPlan, weight_kernel

__all__ = [
    "low_contour_integral",
    "DIRECT",
    "LOW_CONTOUR",
    "AUTO",
    "BiorthoEvaluator",
    "h0",
    "hn",
    "mn",
    "periodize",
    "biortho_pairing",
    "envelope",
    "default_evaluator",
]

DIRECT = "DIRECT"
LOW_CONTOUR = "LOW_CONTOUR"
AUTO = "AUTO"
_EPS = np.finfo(float).eps
_CHUNK = 2048


def envelope(n: int, x):
    """Pointwise envelopes: ``min(3/2, 3/(1+x^2))`` for n = 0, else ``min(pi^6 n^2/4, pi^6 n^2/(2(1+x^2)))``."""
    x = np.asarray(x, dtype=float)
    if n == 0:
        return np.minimum(1.5, 3 / (1 + x * x))
    c = math.pi**6 * n * n
    return np.minimum(c / 4, c / (2 * (1 + x * x)))


@lru_cache(maxsize=64)
def _low_plan(n: int, npts: int):
    z = -1 + 1j / n + 2.0 * np.arange(npts) / npts
    return z, StripPlan(z, strict=False)


def low_contour_integral(n: int, kernel, quad: QuadConfig = DEFAULT_QUAD, npts: int | None = None):
    """``int_{-1+i/n}^{1+i/n} exp(-i pi n z) Phi[K](z) dz`` for a kernel pair ``K``.

    ``Phi[K]`` is the continued transform of :class:`~hyperfourier.genfun.StripPlan`.
    The integrand is 2-periodic and analytic, so the trapezoidal rule is
    used; the error adds the rule-halving difference to the propagated
    transform errors.  Returns ``(values, errors)`` of shape ``(nb,)``.
    """
    npts = npts or max(64, 48 * n)
    z, plan = _low_plan(n, npts)
    vals, errs = plan.evaluate(kernel, quad)
    ph = np.exp(-1j * math.pi * n * z)[:, None]
    integrand = ph * vals
    scale = 2.0 / npts
    val = scale * integrand.sum(axis=0)
    half = 2 * scale * integrand[::2].sum(axis=0)
    err = np.abs(val - half) + scale * (np.abs(ph) * errs).sum(axis=0)
    return val, err


@dataclass(frozen=True)
class BiorthoEvaluator:
    """Evaluate H_0, H_n, M_n with a chosen path policy.

    Methods return ``(values, error_estimates)`` as arrays shaped like ``x``.
    """

    max_n: int = 32
    quad: QuadConfig = field(default_factory=QuadConfig)
    path_policy: str = AUTO
    direct_cap: int = 4
    low_points_per_n: int = 48

    def __post_init__(self):
        if self.path_policy not in (DIRECT, LOW_CONTOUR, AUTO):
            raise DomainError("unknown path policy")

    # arc data ---------------------------------------------------------
    def _rule(self):
        return arc_rule(self.quad.arc_step, self.quad.s_max)

    def _r_values(self, n: int, inverted: bool):
        rule = self._rule()
        lam = np.conj(rule.lam) if inverted else rule.lam  # 1 - lambda = conj(lambda) on the arc
        return eval_R_triangle_inverted(n, 1 / lam)

    # paths ------------------------------------------------------------
    def _path(self, n: int, path):
        path = path or self.path_policy
        if path == AUTO:
            path = DIRECT if abs(n) <= self.direct_cap else LOW_CONTOUR
        if path == DIRECT and abs(n) > self.direct_cap:
            raise NumericalFailure(f"DIRECT path is capped at |n| <= {self.direct_cap}")
        return path

    def h0(self, x):
        x = np.asarray(x, dtype=float)
        flat = x.ravel()
        if flat.size > _CHUNK:
            parts = [self.h0(flat[i : i + _CHUNK]) for i in range(0, flat.size, _CHUNK)]
            val = np.concatenate([v for v, _ in parts]).reshape(x.shape)
            err = np.concatenate([e for _, e in parts]).reshape(x.shape)
            return val, err
        rule = self._rule()
        f = rule.weight * rule.zeta * rule.theta3_4
        den = x.ravel()[:, None] ** 2 - rule.zeta[None, :] ** 2
        terms = f[None, :] / den
        val = terms.sum(axis=1) / (2j * math.pi)
        idx, fac = rule.coarse()
        coarse = fac * terms[:, idx].sum(axis=1) / (2j * math.pi)
        err = np.abs(val - coarse) + 64 * _EPS * np.abs(terms).sum(axis=1) / (2 * math.pi)
        return val.real.reshape(x.shape), err.reshape(x.shape)

    def _direct(self, n: int, x, which: str):
        rule = self._rule()
        r = self._r_values(n, which == "M")
        sign = -1.0 if which == "H" else 1.0
        f = sign * rule.weight * r / (4 * math.pi**2 * n)
        terms = f[None, :] / (x.ravel()[:, None] + rule.zeta[None, :]) ** 2
        val = terms.sum(axis=1)
        idx, fac = rule.coarse()
        coarse = fac * terms[:, idx].sum(axis=1)
        err = np.abs(val - coarse) + 64 * _EPS * np.abs(terms).sum(axis=1)
        return val.reshape(x.shape), err.reshape(x.shape)

    def _low(self, n: int, x, which: str):
        npts = max(64, self.low_points_per_n * n)
        delta = 0 if which == "H" else 1
        val, err = low_contour_integral(n, weight_kernel(delta, x.ravel()), self.quad, npts)
        c = 4 * math.pi**2 * n
        return (val / c).reshape(x.shape), (err / c).reshape(x.shape)

    def _eval(self, which: str, n: int, x, path=None):
        if n == 0:
            raise DomainError("use h0 for index 0")
        if abs(n) > self.max_n:
            raise DomainError(f"|n| exceeds max_n = {self.max_n}")
        x = np.asarray(x, dtype=float)
        if n < 0:
            x = -x
            n = -n
        p = self._path(n, path)
        fn = self._direct if p == DIRECT else self._low
        flat = x.ravel()
        if flat.size <= _CHUNK:
            return fn(n, x, which)
        parts = [fn(n, flat[i : i + _CHUNK], which) for i in range(0, flat.size, _CHUNK)]
        val = np.concatenate([v for v, _ in parts]).reshape(x.shape)
        err = np.concatenate([e for _, e in parts]).reshape(x.shape)
        return val, err

    def hn(self, n: int, x, path=None):
        return self._eval("H", n, x, path)

    def mn(self, n: int, x, path=None):
        return self._eval("M", n, x, path)

    def value(self, which: str, n: int, x, path=None):
        """Dispatch on ``which`` in {"H0", "H", "M"}."""
        if which == "H0" or (which == "H" and n == 0):
            return self.h0(x)
        if which == "H":
            return self.hn(n, x, path)
        if which == "M":
            return self.mn(n, x, path)
        raise DomainError("which must be H0, H or M")

    # large-|x| expansion ------------------------------------------------
    def _moments(self, which: str, n: int, jmax: int, inverted: bool = False):
        """Expansion at infinity and contour mass.

        Returns ``(a, mass)`` with ``f(y) = sum_m a_m y^-m`` for ``|y| > 1``
        (``f(-1/y)/y^2`` when ``inverted``) and ``mass = int |g| |dz|`` for
        the contour density ``g``; each coefficient obeys
        ``|a_{j+2}| <= (j + 1) mass``.  Indices above ``direct_cap`` cancel
        like ``exp(2 pi n)`` on the arc and are computed in extended
        precision.
        """
        if which == "H0":
            # H0(-1/y)/y^2 = H0(y)
            rule = self._rule()
            a = np.zeros(jmax + 3, dtype=complex)
            g = rule.weight * rule.zeta * rule.theta3_4 / (2j * math.pi)
            for j in range(0, (jmax + 2) // 2):
                a[2 * j + 2] = np.sum(g * rule.zeta ** (2 * j))
            return a, float(np.sum(np.abs(g)))
        if n > self.direct_cap:
            return _mp_moments(which, n, jmax, inverted)
        rule = self._rule()
        a = np.zeros(jmax + 3, dtype=complex)
        r = self._r_values(n, which == "M")
        sign = -1.0 if which == "H" else 1.0
        g = sign * rule.weight * r / (4 * math.pi**2 * n)
        for j in range(jmax + 1):
            if inverted:
                a[j + 2] = (j + 1) * np.sum(g * rule.zeta ** (-j - 2))
            else:
                a[j + 2] = (-1) ** j * (j + 1) * np.sum(g * rule.zeta**j)
        return a, float(np.sum(np.abs(g)))


@lru_cache(maxsize=128)
def _mp_moments(which: str, n: int, jmax: int, inverted: bool):
    """Arc moments of ``R_n`` in extended precision; see ``BiorthoEvaluator._moments``."""
    import mpmath

    from .faber import schwarz_poly

    ctx = mpmath.mp.clone()
    ctx.dps = 30 + math.ceil(2 * math.pi * n / math.log(10))
    step = ctx.mpf(1) / 64
    s_max = math.log((2 * math.pi * n + 60) * 2 / math.pi)
    m = math.ceil(s_max * 64)
    coeffs = [ctx.mpf(c.numerator) / c.denominator for c in schwarz_poly(n).coeffs]

    def lam_iT(T):
        q = ctx.exp(-ctx.pi * T)
        t3 = ctx.jtheta(3, 0, q) ** 4
        return ctx.jtheta(2, 0, q) ** 4 / t3, ctx.jtheta(4, 0, q) ** 4 / t3

    a = [ctx.mpc(0)] * (jmax + 3)
    mass = ctx.mpf(0)
    scale = (-1 if which == "H" else 1) / (4 * ctx.pi**2 * n)
    for k in range(-m, m + 1):
        t = ctx.exp(k * step)
        small, comp = lam_iT(t if t >= 1 else 1 / t)
        l1 = comp - small if t >= 1 else small - comp
        lam = ctx.mpf(1) / 2 + ctx.mpc(0, 1) * l1 / (4 * ctx.sqrt(small * comp))
        if which == "M":
            lam = ctx.conj(lam)  # 1 - lambda on the arc
        w = 1 / lam
        r = ctx.mpc(0)
        for c in reversed(coeffs):
            r = (r + c) * w
        zeta = (t + ctx.mpc(0, 1)) / (t - ctx.mpc(0, 1))
        dz = ctx.mpc(0, -2) * t / (t - ctx.mpc(0, 1)) ** 2
        g = scale * step * dz * r
        mass += abs(g)
        if inverted:
            p = 1 / zeta**2
            for j in range(jmax + 1):
                a[j + 2] += (j + 1) * g * p
                p /= zeta
        else:
            p = ctx.mpc(1)
            for j in range(jmax + 1):
                a[j + 2] += (-1) ** j * (j + 1) * g * p
                p *= zeta
    return np.array([complex(v) for v in a]), float(mass)


def _tail_power_sums(x: float, K: int, mmax: int):
    """``T_m = sum_{|k| > K} (x + 2k)^-m`` for ``m = 0..mmax`` via the Hurwitz zeta function."""
    out = np.zeros(mmax + 1)
    for m in range(2, mmax + 1):
        right = 2.0**-m * hurwitz_zeta(m, K + 1 + x / 2)
        left = (-1) ** m * 2.0**-m * hurwitz_zeta(m, K + 1 - x / 2)
        out[m] = right + left
    return out


def _normalize(which: str, n: int):
    if which == "H" and n == 0:
        return "H0", 0
    if which not in ("H0", "H", "M"):
        raise DomainError("which must be H0, H or M")
    if which == "M" and n == 0:
        raise DomainError("M index must be nonzero")
    return which, (0 if which == "H0" else n)


def _tail_order(mass: float, ymin: float, tol: float):
    # remainder of the 1/y expansion after order jmax, summed over both tails
    jmax = 2
    while True:
        rem = 2 * mass * sum((j + 1) / ymin ** (j + 2) for j in range(jmax + 1, jmax + 80)) * (1 + ymin / 2)
        if rem < tol * 1e-2 or jmax >= 60:
            return jmax, rem
        jmax += 2


def _periodized(which: str, n: int, x, tol: float, ev: BiorthoEvaluator, K: int, path, inverted: bool):
    """Vectorized core of :func:`periodize`; ``inverted`` sums ``f(-1/t)/t^2`` instead of ``f``."""
    which, n = _normalize(which, n)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if which != "H0" and n < 0:
        # f_{-n}(x) = f_n(-x); the inverted sum inherits the reflection
        return _periodized(which, -n, -x, tol, ev, K, path, inverted)
    if which == "H0" and inverted:
        # H0(-1/t)/t^2 = H0(t)
        inverted = False
    x0 = x - 2 * np.round(x / 2)
    pts = x0[:, None] + 2 * np.arange(-K, K + 1)[None, :]
    ymin = float(np.min(2 * K + 2 - np.abs(x0)))
    _, mass = ev._moments(which, n, 0, inverted)
    jmax, rem = _tail_order(mass, ymin, tol)
    coef, _ = ev._moments(which, n, jmax, inverted)
    if not inverted:
        if which == "H0":
            vals, errs = ev.h0(pts)
        else:
            vals, errs = ev.value(which, n, pts, path)
    else:
        zero = pts == 0
        safe = np.where(zero, 1.0, pts)
        vals, errs = ev.value(which, n, -1 / safe, path)
        # the limit at t = 0 is the leading coefficient of f at infinity
        a, _ = ev._moments(which, n, 0)
        vals = np.where(zero, a[2], vals / safe**2)
        errs = np.where(zero, 0.0, errs / np.abs(safe) ** 2)
    tail = np.array([np.sum(coef * _tail_power_sums(xi, K, jmax + 2)) for xi in x0])
    total = vals.sum(axis=1) + tail
    err = errs.sum(axis=1) + rem
    if which == "H0":
        total = total.real
    return total, err


def periodize(which: str, n: int, x, tol: float = 1e-8, evaluator: BiorthoEvaluator | None = None,
              K: int = 8, path=None):
    """``sum_k f(x + 2k)`` for ``f`` in {H0, H_n, M_n}; returns ``(value, certified_error)``.

    Terms with ``|k| <= K`` are summed directly.  The rest use the expansion
    of ``f`` in powers of ``1/y`` (valid for ``|y| > 1`` because the contour
    is the unit semicircle), summed with the Hurwitz zeta function; the
    truncation of that expansion is bounded by the contour mass of the
    integrand.  Direct term errors are the evaluator's estimates.  ``x`` may
    be a scalar or an array.
    """
    ev = evaluator or default_evaluator()
    if not tol > 0:
        raise DomainError("tol must be positive")
    val, err = _periodized(which, n, x, tol, ev, K, path, False)
    if np.max(err) > tol:
        raise NumericalFailure(f"periodization error {np.max(err):.2e} exceeds tol {tol:.2e}")
    if np.ndim(x) == 0:
        return val[0], float(err[0])
    return val, err


def biortho_pairing(m: int, which: str, n: int, tol: float = 1e-6, evaluator: BiorthoEvaluator | None = None,
                    npts: int = 64, path=None, against: str | None = None):
    """Pair a system function with the hyperbolic trigonometric system.

    ``against="e"`` integrates ``e^{-i pi m x} f(x)`` over the line and
    ``against="e_inv"`` integrates ``e^{i pi m / x} f(x)``, which the
    substitution ``x = -1/t`` turns into ``int e^{-i pi m t} f(-1/t) t^-2 dt``.
    Either way the line integral folds onto ``[-1, 1]`` against the
    periodization, and the trapezoidal rule on the period is exact up to
    aliasing.  By default H (``n = 0`` meaning H_0) pairs with ``"e"`` and M
    with ``"e_inv"``.  Returns ``(value, error)``.
    """
    ev = evaluator or default_evaluator()
    which, n = _normalize(which, n)
    if max(abs(m), abs(n)) > ev.max_n:
        raise DomainError("index exceeds max_n")
    if against is None:
        against = "e_inv" if which == "M" else "e"
    if against not in ("e", "e_inv"):
        raise DomainError("against must be 'e' or 'e_inv'")
    t = -1 + 2.0 * np.arange(npts) / npts
    v, e = _periodized(which, n, t, tol / 4, ev, 8, path, against == "e_inv")
    w = np.exp(-1j * math.pi * m * t) * 2 / npts
    total = complex(np.sum(w * v))
    err = float(np.sum(np.abs(w) * e))
    if err > tol:
        raise NumericalFailure(f"pairing error {err:.2e} exceeds tol {tol:.2e}")
    return total, err


@lru_cache(maxsize=1)
def default_evaluator() -> BiorthoEvaluator:
    return BiorthoEvaluator()


def h0(x):
    return default_evaluator().h0(x)[0]


def hn(n: int, x, path=None):
    return default_evaluator().hn(n, x, path)[0]


def mn(n: int, x, path=None):
    return default_evaluator().mn(n, x, path)[0]
