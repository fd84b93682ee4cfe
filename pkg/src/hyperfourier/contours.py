"""Fixed quadrature rules on the two contours used throughout.

``ArcRule`` discretizes the upper unit semicircle from -1 to 1, written as
``zeta = (t + i)/(t - i)`` with ``t = exp(s)``; the trapezoidal rule in ``s``
converges geometrically because every integrand decays like
``exp(-c cosh s)`` at both ends.

``RectRule`` discretizes the path -1 -> -1+2i -> 1+2i -> 1.  On the vertical
sides ``zeta = +-1 + i/u`` and Gauss-Legendre panels of unit width in ``u``
resolve the logistic transition of ``1/(lambda(w) - lambda(zeta))``; the top
side uses plain Gauss-Legendre panels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .modular import lambda_on_unit_arc, theta_triple

__all__ = ["ArcRule", "arc_rule", "RectRule", "rect_rule"]


@dataclass(frozen=True)
class ArcRule:
    s: np.ndarray
    zeta: np.ndarray
    weight: np.ndarray  # h * dzeta/ds
    lam: np.ndarray
    theta3_4: np.ndarray
    step: float

    def coarse(self):
        """Index set and weight factor of the rule with twice the step."""
        idx = np.arange(0, self.s.size, 2)
        return idx, 2.0


@lru_cache(maxsize=8)
def arc_rule(step: float = 1 / 32, s_max: float = 4.75) -> ArcRule:
    m = int(round(s_max / step))
    s = step * np.arange(-m, m + 1)
    t = np.exp(s)
    zeta = (t + 1j) / (t - 1j)
    dz = -2j * t / (t - 1j) ** 2
    lam = lambda_on_unit_arc(t)
    _, t3, _ = theta_triple(zeta)
    for a in (s, zeta, dz, lam, t3):
        a.setflags(write=False)
    th4 = t3**4
    th4.setflags(write=False)
    w = step * dz
    w.setflags(write=False)
    return ArcRule(s, zeta, w, lam, th4, step)


@dataclass(frozen=True)
class RectRule:
    zeta: np.ndarray
    weight: np.ndarray
    lam: np.ndarray
    u_max: float


def _gl_panels(edges, npts):
    x, w = np.polynomial.legendre.leggauss(npts)
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        nodes.append(0.5 * (b - a) * x + 0.5 * (a + b))
        weights.append(0.5 * (b - a) * w)
    return np.concatenate(nodes), np.concatenate(weights)


def _lambda_side(t):
    # lambda(+-1 + it) = -lambda(it)/lambda(i/t), real and negative
    big = np.maximum(t, 1 / t)
    t2, t3, t4 = theta_triple(1j * big)
    small = ((t2 / t3) ** 4).real
    comp = ((t4 / t3) ** 4).real
    return np.where(t <= 1, -comp / small, -small / comp) + 0j


@lru_cache(maxsize=32)
def rect_rule(u_max: float = 16.0, per_unit: int = 10, top_panels: int = 4, top_pts: int = 20) -> RectRule:
    """Nodes and weights on the rectangle, legs truncated at ``Im zeta = 1/u_max``."""
    u_max = float(math.ceil(u_max))
    edges = np.concatenate([[0.5], np.arange(1.0, u_max + 1.0)])
    u, wu = _gl_panels(edges, per_unit)
    t = 1 / u
    lam_leg = _lambda_side(t)
    # left side upward: zeta = -1 + i t, dzeta = i dt = -i du / u^2 ; reverse for t increasing
    zl = -1 + 1j * t
    wl = wu * (1j / u**2)  # dt = du/u^2 with orientation t: 0 -> 2
    zr = 1 + 1j * t
    wr = -wl
    xs, ws = _gl_panels(np.linspace(-1, 1, top_panels + 1), top_pts)
    zt = xs + 2j
    t2, t3, _ = theta_triple(zt)
    lam_top = (t2 / t3) ** 4
    zeta = np.concatenate([zl, zt, zr])
    weight = np.concatenate([wl, ws + 0j, wr])
    lam = np.concatenate([lam_leg, lam_top, lam_leg])
    for a in (zeta, weight, lam):
        a.setflags(write=False)
    return RectRule(zeta, weight, lam, u_max)
