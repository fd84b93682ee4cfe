"""Theta functions, the modular lambda function and its inverse.

Conventions
-----------
With the nome ``q = exp(i*pi*z)``::

    theta3(q) = 1 + 2 sum_{n>=1} q^(n^2)
    theta4(q) = theta3(-q)
    theta2(q) = sum_{n>=0} q^(n(n+1))

and on the upper half-plane::

    Theta3(z) = theta3(q),  Theta4(z) = theta4(q),
    Theta2(z) = 2 exp(i*pi*z/4) theta2(q),
    lambda(z) = Theta2(z)^4 / Theta3(z)^4.

All functions accept scalars or numpy arrays.  Arguments with a small
imaginary part are first moved into ``Im z >= min_im`` with ``z -> z + m``
and ``z -> -1/z``; the bookkeeping of which theta function and which
multiplier results from each step is tracked per element.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, NumericalFailure

__all__ = [
    "EvalConfig",
    "NomeSeriesTable",
    "DEFAULT_CONFIG",
    "theta",
    "big_theta",
    "theta_triple",
    "modular_lambda",
    "lambda_complement",
    "lambda_prime",
    "lambda_on_unit_arc",
    "hyp_half",
    "hyp_half_critical",
    "schwarz_tau",
    "delta_ratio",
    "r4_bruteforce",
]


@dataclass(frozen=True)
class EvalConfig:
    """Accuracy controls for theta and lambda evaluation.

    ``min_im`` must not exceed sqrt(3)/2, otherwise the modular reduction
    is not guaranteed to terminate.
    """

    abs_tol: float = 1e-16
    series_tail_bound: float = 1e-18
    min_im: float = 0.5
    nome_margin: float = 1e-3

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise DomainError("abs_tol must be positive")
        if not 0 < self.min_im <= math.sqrt(3) / 2:
            raise DomainError("min_im must lie in (0, sqrt(3)/2]")


DEFAULT_CONFIG = EvalConfig()


class NomeSeriesTable:
    """Exponent tables for the theta q-series and the r4 counts they imply."""

    def __init__(self, order: int):
        if order < 1:
            raise DomainError("order must be positive")
        self.order = order
        n = np.arange(order + 1)
        self.theta3_exps = n * n
        self.theta2_exps = n * (n + 1)
        self.theta4_terms = tuple((int(k * k), 1 if k == 0 else 2 * (-1) ** int(k)) for k in n)
        # r4 from theta3^4 as an integer series
        t3 = [0] * (order + 1)
        for k in range(int(math.isqrt(order)) + 1):
            t3[k * k] += 1 if k == 0 else 2
        sq = _int_series_mul(t3, t3, order)
        self.r4 = tuple(_int_series_mul(sq, sq, order)[1:])
        self.theta3_exps.setflags(write=False)
        self.theta2_exps.setflags(write=False)


def _int_series_mul(a, b, order):
    out = [0] * (order + 1)
    for i, ai in enumerate(a[: order + 1]):
        if ai:
            for j, bj in enumerate(b[: order + 1 - i]):
                if bj:
                    out[i + j] += ai * bj
    return out


def r4_bruteforce(n: int) -> int:
    """Number of ordered integer 4-tuples whose squares sum to n."""
    m = math.isqrt(n)
    rng = range(-m, m + 1)
    count = 0
    for a in rng:
        for b in rng:
            r = n - a * a - b * b
            if r < 0:
                continue
            for c in rng:
                d2 = r - c * c
                if d2 < 0:
                    continue
                d = math.isqrt(d2)
                if d * d == d2:
                    count += 1 if d == 0 else 2
    return count


def theta(kind: int, q, config: EvalConfig = DEFAULT_CONFIG):
    """Theta q-series ``theta2``, ``theta3`` or ``theta4`` at nome ``q``.

    The sum stops once the next term is below ``abs_tol * max(1, |partial|)``.
    """
    if kind not in (2, 3, 4):
        raise DomainError("kind must be 2, 3 or 4")
    q = np.asarray(q, dtype=complex)
    aq = np.abs(q)
    if np.any(aq > 1 - config.nome_margin):
        raise DomainError("nome outside the disk |q| <= 1 - margin")
    qmax = float(aq.max()) if aq.size else 0.0
    if qmax == 0.0:
        out = np.ones_like(q)
        return out[()] if out.ndim == 0 else out
    # number of terms needed for the worst nome in the batch
    nterms = 1
    log_q = math.log(qmax)
    target = math.log(config.abs_tol * 1e-2)
    while nterms * nterms * log_q > target:
        nterms += 1
        if nterms > 4000:
            raise NumericalFailure("nome too close to the unit circle for the requested tolerance")
    out = _theta_series(kind, q, nterms + 1)
    return out[()] if out.ndim == 0 else out


def _theta_series(kind, q, nterms):
    if kind == 3:
        s = np.zeros_like(q)
        for n in range(nterms, 0, -1):
            s += q ** (n * n)
        return 1 + 2 * s
    if kind == 4:
        s = np.zeros_like(q)
        for n in range(nterms, 0, -1):
            s += (-1) ** n * q ** (n * n)
        return 1 + 2 * s
    s = np.zeros_like(q)
    for n in range(nterms, 0, -1):
        s += q ** (n * (n + 1))
    return 1 + s


@lru_cache(maxsize=8)
def _reduced_terms(min_im: float) -> int:
    # |q| <= exp(-pi min_im) after reduction; enough terms for 1e-18
    return int(math.ceil(math.sqrt(42.0 / (math.pi * min_im)))) + 2


def theta_triple(z, config: EvalConfig = DEFAULT_CONFIG):
    """Return ``(Theta2(z), Theta3(z), Theta4(z))`` as complex arrays."""
    z = np.asarray(z, dtype=complex)
    shape = z.shape
    w = z.ravel().copy()
    if np.any(~(w.imag > 0)) or not np.all(np.isfinite(w)):
        raise DomainError("argument must lie in the upper half-plane")
    npts = w.size
    idx = np.tile(np.array([0, 1, 2]), (npts, 1))
    mult = np.ones((npts, 3), dtype=complex)
    active = w.imag < config.min_im
    guard = 0
    while active.any():
        guard += 1
        if guard > 400:
            raise NumericalFailure("modular reduction did not terminate")
        m = np.where(active, np.round(w.real), 0.0)
        w = w - m
        odd = (np.abs(m) % 2) == 1
        phase = np.exp(0.25j * np.pi * m)
        for c in range(3):
            col = idx[:, c]
            mult[:, c] *= np.where(col == 0, phase, 1.0)
            idx[:, c] = np.where(odd & (col == 1), 2, np.where(odd & (col == 2), 1, col))
        inv = active & (w.imag < config.min_im)
        wp = np.where(inv, -1.0 / np.where(inv, w, 1j), w)
        root = np.sqrt(wp / 1j)
        for c in range(3):
            col = idx[:, c]
            mult[:, c] *= np.where(inv, root, 1.0)
            idx[:, c] = np.where(inv & (col == 0), 2, np.where(inv & (col == 2), 0, col))
        w = wp
        active = w.imag < config.min_im
    q = np.exp(1j * np.pi * w)
    nterms = _reduced_terms(config.min_im)
    vals = np.empty((npts, 3), dtype=complex)
    vals[:, 0] = 2 * np.exp(0.25j * np.pi * w) * _theta_series(2, q, nterms)
    vals[:, 1] = _theta_series(3, q, nterms)
    vals[:, 2] = _theta_series(4, q, nterms)
    rows = np.arange(npts)
    out = [mult[:, c] * vals[rows, idx[:, c]] for c in range(3)]
    return tuple(o.reshape(shape)[()] if o.reshape(shape).ndim == 0 else o.reshape(shape) for o in out)


def big_theta(kind: int, z, config: EvalConfig = DEFAULT_CONFIG):
    """``Theta_kind(z)`` for ``kind`` in {2, 3, 4} and ``Im z > 0``."""
    if kind not in (2, 3, 4):
        raise DomainError("kind must be 2, 3 or 4")
    return theta_triple(z, config)[kind - 2]


def modular_lambda(z, config: EvalConfig = DEFAULT_CONFIG):
    """The modular function ``lambda(z) = Theta2^4 / Theta3^4``."""
    t2, t3, _ = theta_triple(z, config)
    return (t2 / t3) ** 4


def lambda_complement(z, config: EvalConfig = DEFAULT_CONFIG):
    """``1 - lambda(z)`` computed as ``Theta4^4 / Theta3^4`` without cancellation."""
    _, t3, t4 = theta_triple(z, config)
    return (t4 / t3) ** 4


def lambda_prime(z, config: EvalConfig = DEFAULT_CONFIG):
    """Derivative ``i*pi*lambda*(1 - lambda)*Theta3^4``, evaluated as ``i*pi*lambda*Theta4^4``."""
    t2, t3, t4 = theta_triple(z, config)
    return 1j * np.pi * (t2 / t3) ** 4 * t4**4


def lambda_on_unit_arc(t, config: EvalConfig = DEFAULT_CONFIG):
    """lambda at ``(t + i)/(t - i)``, ``t > 0``, from lambda on the imaginary axis.

    Uses ``lambda(zeta) = 1/2 + i*l1/(4*sqrt(l2))`` with ``l1 = 1 - 2 lambda(it)``
    and ``l2 = lambda(it)(1 - lambda(it))``.  Both are formed from the small
    value ``lambda(i*max(t, 1/t))`` so no digits are lost near the endpoints.
    """
    t = np.asarray(t, dtype=float)
    if np.any(~(t > 0)):
        raise DomainError("t must be positive")
    big = np.maximum(t, 1.0 / t)
    t2, t3, t4 = theta_triple(1j * big, config)
    small = ((t2 / t3) ** 4).real
    comp = ((t4 / t3) ** 4).real
    l1 = np.where(t >= 1, comp - small, small - comp)
    l2 = small * comp
    return 0.5 + 1j * l1 / (4 * np.sqrt(l2))


# hypergeometric F(1/2, 1/2; 1; z)

_SWITCH_RADIUS = 0.7
_NSER = 160


@lru_cache(maxsize=1)
def _hyp_coeffs():
    c = [1.0]
    h = [0.0]
    for n in range(1, _NSER + 1):
        c.append(c[-1] * ((n - 0.5) / n) ** 2)
        h.append(h[-1] + 1.0 / ((2 * n - 1) * n))
    return c, h


def _power_series(z: complex) -> complex:
    c, _ = _hyp_coeffs()
    s = 0j
    zn = 1 + 0j
    for n in range(_NSER + 1):
        term = c[n] * zn
        s += term
        if abs(term) < 1e-18 * abs(s):
            break
        zn *= z
    return s


def _barnes(z: complex) -> complex:
    # F(z) = [F(s) log(16/s) - 2 sum c_n h_n s^n] / pi,  s = 1 - z
    c, h = _hyp_coeffs()
    s = 1 - z
    fs = 0j
    corr = 0j
    sn = 1 + 0j
    for n in range(_NSER + 1):
        fs += c[n] * sn
        corr += c[n] * h[n] * sn
        if n > 2 and abs(c[n] * sn) < 1e-19:
            break
        sn *= s
    return (fs * cmath.log(16 / s) - 2 * corr) / math.pi


def _agm_inverse(z: complex) -> complex:
    # F(z) = 1 / AGM(1, sqrt(1 - z)) with the right choice of roots
    a = 1 + 0j
    b = cmath.sqrt(1 - z)
    for _ in range(60):
        an = 0.5 * (a + b)
        bn = cmath.sqrt(a * b)
        if abs(an - bn) > abs(an + bn):
            bn = -bn
        a, b = an, bn
        if abs(a - b) <= 1e-17 * abs(a):
            break
    return 1 / a


def _hyp_half_scalar(z: complex) -> complex:
    z = complex(z)
    if z.imag == 0 and z.real >= 1:
        raise DomainError("argument on the branch cut [1, inf)")
    r = _SWITCH_RADIUS
    if abs(z) <= r:
        return _power_series(z)
    if abs(1 - z) <= r:
        return _barnes(z)
    # Pfaff: F(z) = (1 - z)^(-1/2) F(z/(z - 1))
    w = z / (z - 1)
    pref = 1 / cmath.sqrt(1 - z)
    if abs(w) <= r:
        return pref * _power_series(w)
    if abs(1 - w) <= r:
        return pref * _barnes(w)
    return _agm_inverse(z)


def hyp_half(z):
    """Gauss hypergeometric ``F(1/2, 1/2; 1; z)`` off the cut ``[1, inf)``.

    Power series for ``|z| <= 0.7``, the logarithmic expansion at ``z = 1``
    for ``|1 - z| <= 0.7``, the Pfaff map ``z -> z/(z - 1)`` elsewhere, and
    an arithmetic-geometric mean for the small lens around ``exp(+-i pi/3)``
    that none of those reach.
    """
    z = np.asarray(z, dtype=complex)
    if z.ndim == 0:
        return _hyp_half_scalar(complex(z))
    out = np.array([_hyp_half_scalar(v) for v in z.ravel()], dtype=complex)
    return out.reshape(z.shape)


def hyp_half_critical(t: float) -> complex:
    """``F(1/2 + it)`` from real values of ``F`` on ``(0, 1)`` only.

    ``F(1/2 + it) = (F(1/2 + a) - i F(1/2 - a)) / ((1 - i)(4t^2 + 1)^(1/4))``
    with ``a = t / sqrt(4t^2 + 1)``.
    """
    t = float(t)
    r = math.sqrt(4 * t * t + 1)
    a = t / r
    num = _hyp_half_scalar(0.5 + a).real - 1j * _hyp_half_scalar(0.5 - a).real
    return num / ((1 - 1j) * r**0.5)


def schwarz_tau(z):
    """Triangle map ``tau(z) = i F(1 - z) / F(z)``, the inverse of lambda on its fundamental quadrilateral."""
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    bad = (flat.imag == 0) & ((flat.real <= 0) | (flat.real >= 1))
    if np.any(bad):
        raise DomainError("tau is defined on (0, 1) and off the real axis")
    out = 1j * hyp_half(1 - z) / hyp_half(z)
    return out


def delta_ratio(x: float) -> float:
    """``Delta(x) = F(1/(1 + x)) / F(x/(1 + x))`` for ``x > 0``."""
    if not x > 0:
        raise DomainError("x must be positive")
    return (_hyp_half_scalar(1 / (1 + x)) / _hyp_half_scalar(x / (1 + x))).real
