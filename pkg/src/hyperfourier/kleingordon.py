"""Klein-Gordon solutions ``U_phi`` and the interpolating functions ``R_n``.

``U_phi(x, y) = int e^{ixt + iy/t} phi(t) dt`` solves ``u_xy + u = 0``, and
``R_n(x, y) = int e^{ixt + iy/t} H_{-n}(t) dt``.  On the quadrant
``x >= 0, y <= 0`` (written ``(a, -b)`` with ``a, b >= 0``)::

    R_n(a, -b) = 1/(2 pi n) int_arc (a + b/z^2) e^{iaz - ib/z} S_n(1/lambda(z)) dz
    R_0(a, -b) = 1/2 int_arc Theta_3(z)^4 e^{iaz - ib/z} dz

The first form cancels like ``exp(2 pi n)``.  For larger ``n`` the same
quantity is ``-1/(2 pi n) int exp(-i pi n z) Phi[K](z) dz`` along
``Im z = 1/n``, where ``K`` is the kernel pair
``K0 = (a + b/z^2) e^{iaz - ib/z}``, ``K1 = (b + a/z^2) e^{ibz - ia/z}``.
For ``n >= 1``, ``R_n(-a, b) = 0``.  ``R_0`` is symmetric under
``(a, -b) -> (b, -a) -> (-a, b)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .biortho import DIRECT, LOW_CONTOUR, AUTO, low_contour_integral
from .contours import arc_rule
from .errors import DomainError, NumericalFailure
from .faber import eval_R_triangle_inverted
from .genfun import DEFAULT_QUAD, QuadConfig
from .hfs import TestFunction

__all__ = [
    "KGSamples",
    "u_phi",
    "r_interp",
    "r_quadrant",
    "kg_reconstruct",
    "kg_residual",
    "bessel_k0",
    "bessel_k1",
    "r0_envelope",
    "r0_integral_envelope",
    "rn_envelope",
]

DIRECT_CAP = 4
_GL = np.polynomial.legendre.leggauss(16)


# modified Hankel functions -----------------------------------------------

def _k_integral(x, weight):
    # int_0^inf exp(-x cosh s) weight(s) ds by the trapezoidal rule; the
    # integrand is analytic and decays double exponentially
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x <= 0):
        raise DomainError("argument must be positive")
    out = np.empty_like(x)
    for i, xi in enumerate(x):
        s_max = math.acosh(max(1.0, 760.0 / xi)) + 1.0
        h = min(0.05, 0.5 / math.sqrt(xi + 1))
        s = np.arange(0.0, s_max + h, h)
        f = np.exp(-xi * np.cosh(s)) * weight(s)
        out[i] = h * (f.sum() - 0.5 * f[0])
    return out


def bessel_k0(x):
    """``K_0(x) = int_1^inf (t^2 - 1)^-1/2 e^{-xt} dt``, through ``t = cosh s``."""
    out = _k_integral(x, lambda s: 1.0)
    return out[0] if np.ndim(x) == 0 else out


def bessel_k1(x):
    """``K_1(x) = int_0^inf exp(-x sqrt(t^2 + 1)) dt``, through ``t = sinh s``."""
    out = _k_integral(x, np.cosh)
    return out[0] if np.ndim(x) == 0 else out


def r0_envelope(a, b):
    """``5 K_0(sqrt(2 pi (a + b + 1)))`` bounding ``|R_0(a, -b)|``."""
    return 5 * bessel_k0(np.sqrt(2 * math.pi * (np.asarray(a) + np.asarray(b) + 1)))


def r0_integral_envelope(a, b):
    """``5 int_0^inf exp(-(pi/4)(t + 1/t) - 2 t (a + b)/(t^2 + 1)) dt/t``.

    The arc bound ``|Theta_3^4| <= 5 (t + 1/t) e^{-(pi/4)(t + 1/t)}`` integrated
    against ``|e^{iaz - ib/z}| = e^{-2t(a + b)/(t^2 + 1)}``; it bounds
    ``|R_0(a, -b)|`` without the closed-form step of :func:`r0_envelope`.
    Trapezoidal rule in ``s = log t``.
    """
    sab = np.atleast_1d(np.asarray(a, dtype=float) + np.asarray(b, dtype=float))
    h = 1 / 32
    s = np.arange(-7.0, 7.0 + h, h)
    t = np.exp(s)
    c = t + 1 / t
    f = np.exp(-(math.pi / 4) * c[None, :] - 2 * sab[:, None] / c[None, :])
    out = 5 * h * f.sum(axis=1)
    return out[0] if np.ndim(a) == 0 and np.ndim(b) == 0 else out.reshape(np.shape(sab))


def rn_envelope(n: int, a, b):
    """``2 pi^3 e^{2 pi n} (a + b) / sqrt(a + b + 1) K_1(2 sqrt(pi (a + b + 1)))``."""
    s = np.asarray(a, dtype=float) + np.asarray(b, dtype=float)
    return 2 * math.pi**3 * math.exp(2 * math.pi * n) * s / np.sqrt(s + 1) * bessel_k1(2 * np.sqrt(math.pi * (s + 1)))


# U_phi --------------------------------------------------------------------

def _panels(a, b, width):
    m = max(1, math.ceil((b - a) / width))
    edges = np.linspace(a, b, m + 1)
    x, w = _GL
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    half = 0.5 * (edges[1:] - edges[:-1])[:, None]
    return (mid + half * x).ravel(), (half * w).ravel()


def u_phi(phi: TestFunction, x, y, with_error: bool = False):
    """``U_phi(x, y) = int e^{ixt + iy/t} phi(t) dt`` for ``phi`` supported away from 0.

    Gauss-Legendre panels are sized to the largest phase derivative
    ``|x| + |y|/t^2`` on the support; the error estimate compares against
    panels twice as wide.
    """
    sup = phi.interval
    if sup is None:
        raise DomainError("u_phi needs interval support")
    a, b = sup
    if a <= 0 <= b:
        raise DomainError("support must not touch 0")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x, y = np.broadcast_arrays(x, y)
    tmin = min(abs(a), abs(b))
    freq = float(np.max(np.abs(x), initial=0.0)) + float(np.max(np.abs(y), initial=0.0)) / tmin**2
    width = min(0.0625, 1.0 / max(freq, 1e-300))
    out = []
    for wd in (width / 2, width):
        t, w = _panels(a, b, wd)
        fw = w * phi(t)
        out.append(np.exp(1j * (np.outer(x.ravel(), t) + np.outer(y.ravel(), 1 / t))) @ fw)
    val = out[0].reshape(x.shape)
    err = np.abs(out[0] - out[1]).reshape(x.shape)
    if val.ndim == 0:
        val, err = complex(val), float(err)
    return (val, err) if with_error else val


# R_n ----------------------------------------------------------------------

def _exp_kernel(a, b):
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))

    def kernel(parity, zeta):
        z = np.asarray(zeta, dtype=complex)[..., None]
        p, q = (a, b) if parity == 0 else (b, a)
        return (p + q / z**2) * np.exp(1j * p * z - 1j * q / z)

    return kernel


def _arc_step(a, b):
    # resolve the oscillation of e^{iaz - ib/z} along the arc
    f = 1.0 + float(np.max(a, initial=0.0)) + float(np.max(b, initial=0.0))
    step = 1 / 32
    while f * step > 0.5:
        step /= 2
    return step


def _r0_arc(a, b):
    rule = arc_rule(_arc_step(a, b), 4.75)
    E = np.exp(1j * np.outer(a, rule.zeta) - 1j * np.outer(b, 1 / rule.zeta))
    terms = 0.5 * E * (rule.weight * rule.theta3_4)[None, :]
    val = terms.sum(axis=1)
    idx, fac = rule.coarse()
    err = np.abs(val - fac * terms[:, idx].sum(axis=1)) + 64 * np.finfo(float).eps * np.abs(terms).sum(axis=1)
    return val, err


def _rn_arc(n, a, b):
    rule = arc_rule(_arc_step(a, b), 4.75)
    r = eval_R_triangle_inverted(n, 1 / rule.lam)
    z = rule.zeta
    K = (a[:, None] + b[:, None] / z[None, :] ** 2) * np.exp(1j * np.outer(a, z) - 1j * np.outer(b, 1 / z))
    terms = K * (rule.weight * r)[None, :] / (2 * math.pi * n)
    val = terms.sum(axis=1)
    idx, fac = rule.coarse()
    err = np.abs(val - fac * terms[:, idx].sum(axis=1)) + 64 * np.finfo(float).eps * np.abs(terms).sum(axis=1)
    return val, err


def _rn_low(n, a, b, quad):
    npts = max(64, 48 * n, int(8 * (1 + float(np.max(a, initial=0)) + float(np.max(b, initial=0)))))
    val, err = low_contour_integral(n, _exp_kernel(a, b), quad, npts)
    c = -1 / (2 * math.pi * n)
    return c * val, abs(c) * err


def r_quadrant(n: int, a, b, path: str = AUTO, quad: QuadConfig = DEFAULT_QUAD):
    """``R_n(a, -b)`` for ``a, b >= 0`` (arrays broadcast); returns ``(values, errors)``."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a, b = np.broadcast_arrays(a, b)
    if np.any(a < 0) or np.any(b < 0):
        raise DomainError("quadrant arguments must be nonnegative")
    shape = a.shape
    a, b = a.ravel(), b.ravel()
    if n == 0:
        val, err = _r0_arc(a, b)
    else:
        if path == AUTO:
            path = DIRECT if n <= DIRECT_CAP else LOW_CONTOUR
        if path == DIRECT:
            if n > DIRECT_CAP:
                raise NumericalFailure(f"direct contour is capped at n <= {DIRECT_CAP}")
            val, err = _rn_arc(n, a, b)
        elif path == LOW_CONTOUR:
            val, err = _rn_low(n, a, b, quad)
        else:
            raise DomainError("unknown path")
    return val.reshape(shape), err.reshape(shape)


def r_interp(n: int, x: float, y: float, path: str = AUTO, quad: QuadConfig = DEFAULT_QUAD):
    """``R_n(x, y)`` wherever a contour formula or a vanishing identity applies.

    Covered: the quadrant ``x >= 0, y <= 0``; for ``n >= 1`` the vanishing
    quadrant ``x <= 0, y >= 0``; for ``n = 0`` every point reachable through
    its symmetries.  Returns ``(value, error)``.
    """
    x, y = float(x), float(y)
    if x >= 0 and y <= 0:
        v, e = r_quadrant(n, x, -y, path, quad)
        return complex(v), float(e)
    if x <= 0 and y >= 0:
        if n >= 1:
            return 0j, 0.0
        v, e = r_quadrant(0, -x, y, path, quad)
        return complex(v), float(e)
    raise DomainError("no evaluation route for this sign pattern")


# reconstruction -----------------------------------------------------------

@dataclass(frozen=True)
class KGSamples:
    """Samples ``U(pi n, 0)`` (``u_x``) and ``U(0, pi n)`` (``u_y``) for ``|n| <= N``.

    Arrays are indexed ``n + N``; ``u_y[N]`` duplicates ``U(0, 0)`` and is
    ignored.
    """

    N: int
    u_x: np.ndarray
    u_y: np.ndarray
    decay: tuple | None = field(default=None)  # (A, r): |samples at n| <= A r^n beyond N

    def __post_init__(self):
        for arr in (self.u_x, self.u_y):
            if np.shape(arr) != (2 * self.N + 1,):
                raise DomainError("sample arrays must have length 2N + 1")

    def x_at(self, n):
        return complex(self.u_x[n + self.N])

    def y_at(self, n):
        return complex(self.u_y[n + self.N])

    @classmethod
    def from_solution(cls, U: Callable, N: int) -> "KGSamples":
        n = np.arange(-N, N + 1)
        ux = np.asarray(U(math.pi * n, np.zeros(n.shape)), dtype=complex)
        uy = np.asarray(U(np.zeros(n.shape), math.pi * n), dtype=complex)
        return cls(N, ux, uy)

    def to_json(self):
        rows = lambda arr, skip0: [  # noqa: E731
            {"n": n, "re": float(arr[n + self.N].real), "im": float(arr[n + self.N].imag)}
            for n in range(-self.N, self.N + 1)
            if not (skip0 and n == 0)
        ]
        return {"N": self.N, "ux": rows(self.u_x, False), "uy": rows(self.u_y, True)}

    @classmethod
    def from_json(cls, data) -> "KGSamples":
        N = int(data["N"])
        ux = np.zeros(2 * N + 1, dtype=complex)
        uy = np.zeros(2 * N + 1, dtype=complex)
        for key, arr in (("ux", ux), ("uy", uy)):
            for row in data.get(key, []):
                n = int(row["n"])
                if abs(n) > N:
                    raise DomainError("sample index exceeds N")
                arr[n + N] = complex(float(row["re"]), float(row.get("im", 0.0)))
        return cls(N, ux, uy)

    def tail_model(self):
        """``(A, r)`` with ``|U(pi n, 0)| + |U(0, -pi n)| <= A r^n`` assumed for ``n > N``.

        Uses the declared decay when present, else a geometric fit through
        the last four samples.
        """
        if self.decay is not None:
            return self.decay
        if self.N < 4:
            return (0.0, 0.0)
        ns = np.arange(self.N - 3, self.N + 1)
        mags = np.array([abs(self.x_at(n)) + abs(self.y_at(-n)) for n in ns])
        if np.all(mags == 0):
            return (0.0, 0.0)
        mags = np.maximum(mags, 1e-300)
        slope, icept = np.polyfit(ns, np.log(mags), 1)
        r = math.exp(slope)
        A = float(np.max(mags / r**ns))
        return (A, r)


def kg_reconstruct(s: KGSamples, x, y, tol: float | None = None, quad: QuadConfig = DEFAULT_QUAD):
    """Rebuild ``U`` at quadrant points from its samples on the axes.

    ``U(x, y) = U(0,0) R_0(x, y) + sum_n [U(pi n, 0) R_n(x, y) + U(0, -pi n) R_n(-y, -x)]``;
    the two other families of terms vanish on the quadrant ``x >= 0``,
    ``y <= 0``.  The tail estimate multiplies the sample decay model by the
    envelope ``pi^7 n^2 / 2``.  Returns ``(values, quadrature_error, tail_estimate)``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    x, y = np.broadcast_arrays(x, y)
    if np.any(x < 0) or np.any(y > 0):
        raise DomainError("reconstruction points must satisfy x >= 0, y <= 0")
    a, b = x.ravel(), -y.ravel()
    v0, e0 = r_quadrant(0, a, b, quad=quad)
    val = s.x_at(0) * v0
    err = abs(s.x_at(0)) * e0
    for n in range(1, s.N + 1):
        cx, cy = s.x_at(n), s.y_at(-n)
        if cx != 0:
            v, e = r_quadrant(n, a, b, quad=quad)
            val = val + cx * v
            err = err + abs(cx) * e
        if cy != 0:
            # R_n(-y, -x) = R_n(b, -a)
            v, e = r_quadrant(n, b, a, quad=quad)
            val = val + cy * v
            err = err + abs(cy) * e
    A, r = s.tail_model()
    if A == 0:
        tail = 0.0
    elif r >= 1:
        tail = math.inf
    else:
        tail = sum(A * r**n * math.pi**7 * n * n / 2 for n in range(s.N + 1, s.N + 2000))
    if tol is not None and tail > tol:
        raise NumericalFailure(f"sample decay gives tail estimate {tail:.2e} above tol {tol:.2e}")
    return val.reshape(x.shape), err.reshape(x.shape), tail


def kg_residual(U: Callable, rect, quad: QuadConfig = DEFAULT_QUAD, order: int = 24):
    """``U(b,d) - U(b,c) - U(a,d) + U(a,c) + int_c^d int_a^b U``.

    ``U`` takes broadcast arrays ``(x, y)``.  The double integral uses a
    tensor Gauss-Legendre rule; the error estimate compares orders
    ``order`` and ``order - 8``.  Returns ``(residual, error_estimate)``.
    """
    a, b, c, d = (float(v) for v in rect)
    if not (a < b and c < d):
        raise DomainError("rectangle must be nondegenerate")
    corners = U(np.array([b, b, a, a]), np.array([d, c, d, c]))
    corner = complex(corners[0] - corners[1] - corners[2] + corners[3])
    vals = []
    for m in (order, order - 8):
        t, w = np.polynomial.legendre.leggauss(m)
        xs = 0.5 * (b - a) * t + 0.5 * (a + b)
        ys = 0.5 * (d - c) * t + 0.5 * (c + d)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        W = np.outer(w, w) * 0.25 * (b - a) * (d - c)
        vals.append(complex(np.sum(W * np.asarray(U(X, Y)))))
    err = abs(vals[0] - vals[1])
    if err > max(quad.abs_tol, 1e-14) * 1e4:
        raise NumericalFailure(f"area integral did not converge (estimate {err:.2e})")
    return corner + vals[0], err
