"""Generating functions of the biorthogonal system and their continuation.

For ``delta`` in {0, 1} and real ``x`` the weight is
``w_delta(x; zeta) = (x^delta zeta - (-x)^(1 - delta))^-2`` with the literal
convention ``x^0 = 1``.  The generating function is::

    Phi(x; z) = 1/(2 pi i) * int lambda'(z) w(zeta) / (lambda(z) - lambda(zeta)) dzeta

taken over the unit semicircle (``phi_inf``) or the rectangle
-1 -> -1+2i -> 1+2i -> 1 (``phi_pi``).  ``phi_strip`` continues ``phi_inf``
from the exterior of the disks to the whole strip ``|Re z| <= 1`` by
walking the even Gauss map orbit of ``z``.

The continuation only uses how the weight transforms under ``zeta -> -1/zeta``
(``w_delta(-1/zeta)/zeta^2 = w_{1-delta}(zeta)``), so the same machinery
serves any kernel pair with that property.  A kernel is a callable
``kernel(parity, zeta)`` returning an array of shape ``zeta.shape + (nb,)``;
parity 0 is the base kernel and parity 1 its partner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cfrac import E_INF, classify_point, inverse_derivative
from .contours import arc_rule, rect_rule
from .errors import DomainError, NumericalFailure
from .modular import modular_lambda, lambda_prime

__all__ = [
    "QuadConfig",
    "weight_kernel",
    "phi_inf",
    "phi_pi",
    "phi_strip",
    "StripPlan",
    "arc_transform",
    "rect_transform",
    "strip_bound",
]


@dataclass(frozen=True)
class QuadConfig:
    abs_tol: float = 1e-10
    arc_step: float = 1 / 32
    s_max: float = 4.75
    rect_per_unit: int = 10
    max_subdiv: int = 4

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError("abs_tol must be positive")
        # lambda(i e^s) underflows beyond s ~ 5.4; the integrand is below e^-180 from s = 4.75 on
        if not 1.0 <= self.s_max <= 5.25:
            raise DomainError("s_max must lie in [1, 5.25]")
        if not (self.arc_step > 0 and self.max_subdiv >= 0 and self.rect_per_unit >= 8):
            raise DomainError("invalid quadrature parameters")


DEFAULT_QUAD = QuadConfig()


def weight_kernel(delta: int, x):
    """Kernel family for ``Phi^delta``; ``x`` may be a scalar or 1-d array."""
    if delta not in (0, 1):
        raise DomainError("delta must be 0 or 1")
    xs = np.atleast_1d(np.asarray(x, dtype=float))

    def kernel(parity, zeta):
        d = delta if parity == 0 else 1 - delta
        zeta = np.asarray(zeta, dtype=complex)[..., None]
        if d == 0:
            den = zeta + xs
        else:
            den = xs * zeta - 1.0
        return 1.0 / den**2

    return kernel


def _arc_pass(kernel, lz, dlz, step, s_max, parity):
    rule = arc_rule(step, s_max)
    gap = np.abs(lz[:, None] - rule.lam[None, :])
    if np.any(gap.min(axis=1) < 1e-8):
        raise NumericalFailure("lambda(z) is too close to the image of the contour")
    A = dlz[:, None] * rule.weight[None, :] / (lz[:, None] - rule.lam[None, :]) / (2j * math.pi)
    K = kernel(parity, rule.zeta)
    fine = A @ K
    idx, fac = rule.coarse()
    coarse = fac * (A[:, idx] @ K[idx])
    return fine, np.abs(fine - coarse)


def arc_transform(kernel, z, quad: QuadConfig = DEFAULT_QUAD, parity: int = 0):
    """``1/(2 pi i) int_arc lambda'(z) K(zeta)/(lambda(z) - lambda(zeta))`` with a step-doubling error estimate.

    Points whose estimate exceeds ``abs_tol`` (those near the contour image)
    are recomputed with the step halved, at most ``max_subdiv`` times.
    """
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    lz = modular_lambda(z)
    dlz = lambda_prime(z)
    val, err = _arc_pass(kernel, lz, dlz, quad.arc_step, quad.s_max, parity)
    step = quad.arc_step
    for _ in range(quad.max_subdiv):
        redo = np.flatnonzero(np.max(err, axis=1) > quad.abs_tol)
        if redo.size == 0:
            break
        step /= 2
        v, e = _arc_pass(kernel, lz[redo], dlz[redo], step, quad.s_max, parity)
        val[redo], err[redo] = v, e
    return val, err


def _rect_u_max(lz):
    # the leg integrand switches off once |lambda(zeta)| >> |lambda(z)|
    ustar = max(1.0, float(np.max(np.log(np.maximum(16 * np.abs(lz), 1.0)))) / math.pi)
    return ustar + 14.0


def rect_transform(kernel, w, parities, quad: QuadConfig = DEFAULT_QUAD):
    """Rectangle-contour transform at points ``w`` (in the bottom cell); per-point parity.

    Returns ``(value, error)`` with the error from a second, coarser rule.
    """
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    parities = np.broadcast_to(np.asarray(parities, dtype=int), w.shape)
    if w.size == 0:
        return np.zeros((0, 1), dtype=complex), np.zeros((0, 1))
    lw = modular_lambda(w)
    dlw = lambda_prime(w)
    u_max = _rect_u_max(lw)
    out = []
    for per_unit, top in ((quad.rect_per_unit, 20), (max(quad.rect_per_unit - 3, 5), 14)):
        rule = rect_rule(u_max, per_unit, 4, top)
        A = dlw[:, None] * rule.weight[None, :] / (lw[:, None] - rule.lam[None, :]) / (2j * math.pi)
        K0 = kernel(0, rule.zeta)
        K1 = kernel(1, rule.zeta)
        v0 = A @ K0
        v1 = A @ K1
        out.append(np.where(parities[:, None] == 0, v0, v1))
    return out[0], np.abs(out[0] - out[1])


def phi_inf(delta: int, x: float, z: complex, quad: QuadConfig = DEFAULT_QUAD):
    """Generating function over the unit semicircle; returns ``(value, error_estimate)``."""
    if not complex(z).imag > 0:
        raise DomainError("z must lie in the upper half-plane")
    v, e = arc_transform(weight_kernel(delta, x), [z], quad)
    return complex(v[0, 0]), float(e[0, 0])


def phi_pi(delta: int, x: float, z: complex, quad: QuadConfig = DEFAULT_QUAD, check: bool = True):
    """Generating function over the rectangle contour, for ``z`` in the bottom cell."""
    z = complex(z)
    if check:
        cell = classify_point(z, strict=False)
        if cell.kind == E_INF or len(cell.word) != 0 or cell.shift != 0:
            raise DomainError("phi_pi needs z in the bottom cell of the unit disk")
    v, e = rect_transform(weight_kernel(delta, x), [z], [0], quad)
    return complex(v[0, 0]), float(e[0, 0])


class StripPlan:
    """Continuation recipe for a batch of points in the strip.

    For each point the value is a sum of kernel evaluations at orbit points
    (the rational terms) plus one rectangle transform at the final orbit
    point.  The recipe depends only on the points, so it is built once and
    reused for every kernel (every ``x``).
    """

    def __init__(self, z, strict: bool = False, boundary_eps: float = 1e-9):
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        self.z = z
        r_idx, r_coef, r_pt, r_par = [], [], [], []
        p_coef, p_pt, p_par = [], [], []
        heights = []
        for i, zi in enumerate(z):
            cell = classify_point(complex(zi), boundary_eps=boundary_eps, strict=strict)
            w0 = cell.orbit[0]
            heights.append(cell.height)
            if cell.kind == E_INF:
                p_coef.append(-1.0 / w0**2)
                p_pt.append(-1.0 / w0)
                p_par.append(1)
                continue
            word = cell.word
            N = len(word)
            r_idx.append(i)
            r_coef.append(-1.0)
            r_pt.append(w0)
            r_par.append(0)
            for k in range(N):
                dpsi = inverse_derivative(word.prefix(k + 1), w0)
                r_idx.append(i)
                r_coef.append((-1) ** k * dpsi)
                r_pt.append(cell.orbit[k + 1])
                r_par.append((k + 1) % 2)
            dpsi_last = inverse_derivative(word, w0) if N else 1.0
            p_coef.append((-1) ** N * dpsi_last)
            p_pt.append(cell.orbit[N])
            p_par.append(N % 2)
        self.heights = np.array(heights)
        self.r_idx = np.array(r_idx, dtype=int)
        self.r_coef = np.array(r_coef, dtype=complex)
        self.r_pt = np.array(r_pt, dtype=complex)
        self.r_par = np.array(r_par, dtype=int)
        self.p_coef = np.array(p_coef, dtype=complex)
        self.p_pt = np.array(p_pt, dtype=complex)
        self.p_par = np.array(p_par, dtype=int)

    def evaluate(self, kernel, quad: QuadConfig = DEFAULT_QUAD):
        """Values of the continued transform, shape ``(len(z), nb)``, and error estimates."""
        rv, re = rect_transform(kernel, self.p_pt, self.p_par, quad)
        val = self.p_coef[:, None] * rv
        err = np.abs(self.p_coef)[:, None] * re
        if self.r_idx.size:
            k0 = kernel(0, self.r_pt)
            k1 = kernel(1, self.r_pt)
            terms = self.r_coef[:, None] * np.where(self.r_par[:, None] == 0, k0, k1)
            np.add.at(val, self.r_idx, terms)
        return val, err


def phi_strip(delta: int, x: float, z: complex, quad: QuadConfig = DEFAULT_QUAD, strict: bool = True):
    """Continued generating function on ``|Re z| <= 1``; returns ``(value, error_estimate)``."""
    z = complex(z)
    if abs(z.real) > 1 or not z.imag > 0:
        raise DomainError("phi_strip needs |Re z| <= 1 and Im z > 0")
    plan = StripPlan([z], strict=strict)
    v, e = plan.evaluate(weight_kernel(delta, x), quad)
    return complex(v[0, 0]), float(e[0, 0])


def strip_bound(im: float) -> float:
    """Envelope ``20 pi^2 / Im^3`` for ``Im <= 1`` and ``20 pi^2 / Im^2`` above."""
    return 20 * math.pi**2 / (im**3 if im <= 1 else im**2)
