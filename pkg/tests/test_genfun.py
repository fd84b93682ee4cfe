import cmath
import math

import mpmath
import numpy as np
import pytest

from hyperfourier import biortho, genfun
from hyperfourier.errors import DomainError

# reference values from an mpmath quadrature of the semicircle integral (20 digits)
PHI_INF_REF = {
    0: -0.0729964462786166 + 0.0668648009796538j,
    1: 0.0059112599642591815 - 0.07198307189738427j,
}


def _mp_lambda(z):
    q = mpmath.exp(1j * mpmath.pi * z)
    t3 = mpmath.jtheta(3, 0, q)
    return (mpmath.jtheta(2, 0, q) / t3) ** 4


def _mp_phi_inf(delta, x, z):
    mpmath.mp.dps = 20
    z = mpmath.mpc(z)
    lz = _mp_lambda(z)
    dl = mpmath.diff(_mp_lambda, z)

    def g(s):
        t = mpmath.exp(s)
        zeta = (t + 1j) / (t - 1j)
        w = 1 / (zeta + x) ** 2 if delta == 0 else 1 / (x * zeta - 1) ** 2
        return dl * w / (lz - _mp_lambda(zeta)) * (-2j * t / (t - 1j) ** 2)

    return complex(mpmath.quad(g, [-4.5, -2, 0, 2, 4.5]) / (2j * mpmath.pi))


@pytest.mark.parametrize("delta", [0, 1])
def test_phi_inf_against_frozen_quadrature(delta):
    v, e = genfun.phi_inf(delta, 0.7, 0.3 + 1.5j)
    assert abs(v - PHI_INF_REF[delta]) < 1e-13
    assert e < 1e-10


def test_phi_inf_against_live_oracle():
    z = -0.6 + 1.1j
    v, _ = genfun.phi_inf(0, -1.2, z)
    assert abs(v - _mp_phi_inf(0, -1.2, z)) < 1e-11


def test_weight_kernel_swap_rule():
    # w_delta(-1/zeta) / zeta^2 = w_{1 - delta}(zeta)
    zeta = np.array([0.3 + 0.8j, -0.5 + 0.2j])
    x = np.array([0.0, 0.7, -2.0])
    for delta in (0, 1):
        k = genfun.weight_kernel(delta, x)
        lhs = k(0, -1 / zeta) / zeta[:, None] ** 2
        assert np.allclose(lhs, k(1, zeta), rtol=1e-13)


def test_weight_at_zero_uses_unit_power():
    k = genfun.weight_kernel(1, 0.0)
    zeta = np.array([0.2 + 0.9j])
    assert np.allclose(k(0, zeta)[:, 0], 1.0)  # (0 * zeta - 1)^-2


@pytest.mark.parametrize("z", [0.9 + 0.5j, -0.3 + 1.05j, 1.0 + 0.3j, 0.1 + 3j])
def test_continuation_matches_exterior_transform(z):
    for delta in (0, 1):
        a = genfun.phi_strip(delta, 0.7, z, strict=False)[0]
        b = genfun.phi_inf(delta, 0.7, z)[0]
        assert abs(a - b) < 1e-8


@pytest.mark.parametrize("theta", [0.4, 1.2, 2.0, 2.8])
def test_continuation_is_continuous_across_the_unit_circle(theta):
    u = cmath.exp(1j * theta)
    inner = genfun.phi_strip(0, 0.3, u * (1 - 1e-7), strict=False)[0]
    outer = genfun.phi_strip(0, 0.3, u * (1 + 1e-7), strict=False)[0]
    assert abs(inner - outer) < 1e-5 * max(1, abs(outer))


def test_continuation_is_two_periodic_in_the_strip_sense():
    # on Re z = +-1 the continued function agrees through z -> z + 2
    for y in (0.3, 0.8):
        a = genfun.phi_strip(1, 0.4, -1 + 1j * y, strict=False)[0]
        b = genfun.phi_strip(1, 0.4, 1 + 1j * y, strict=False)[0]
        assert abs(a - b) < 1e-8 * max(1, abs(a))


def test_generating_identity():
    ev = biortho.default_evaluator()
    y = 0.3 + 1.2j
    for delta, fn in ((0, ev.hn), (1, ev.mn)):
        series = sum(n * fn(n, 0.7)[0] * cmath.exp(1j * math.pi * n * y) for n in range(1, 15))
        assert abs(series - genfun.phi_inf(delta, 0.7, y)[0] / (2 * math.pi**2)) < 1e-6


def test_strip_bound_holds_on_grid():
    re = np.linspace(-1, 1, 7)
    im = np.geomspace(0.15, 2.5, 6)
    Z = (re[:, None] + 1j * im[None, :]).ravel()
    plan = genfun.StripPlan(Z)
    v, _ = plan.evaluate(genfun.weight_kernel(0, np.array([0.0, 1.5])))
    bound = np.array([genfun.strip_bound(t) for t in Z.imag])
    assert np.all(np.abs(v) <= bound[:, None])


def test_strip_plan_heights():
    plan = genfun.StripPlan([0.1 + 2j, 0.45 + 0.6j, 0.38 + 0.05j])
    assert plan.heights[0] == 0 and plan.heights[1] == 1 and plan.heights[2] >= 2


def test_phi_pi_domain_and_config():
    with pytest.raises(DomainError):
        genfun.phi_pi(0, 0.5, 0.1 + 2j)
    with pytest.raises(DomainError):
        genfun.QuadConfig(s_max=6.0)
    with pytest.raises(DomainError):
        genfun.QuadConfig(abs_tol=0)
    with pytest.raises(DomainError):
        genfun.phi_strip(0, 0.5, 1.5 + 1j)
    with pytest.raises(DomainError):
        genfun.phi_inf(0, 0.5, -1j)


def test_bottom_cell_rectangle_transform_is_continuation():
    # in the bottom cell the continued value is the rectangle transform minus the kernel at z
    z = 0.45 + 0.6j
    k = genfun.weight_kernel(0, 0.3)
    rect = genfun.phi_pi(0, 0.3, z)[0]
    assert abs(genfun.phi_strip(0, 0.3, z)[0] - (rect - k(0, np.array([z]))[0, 0])) < 1e-12


def test_arc_refinement_near_contour_image():
    # points hugging the semicircle need the halved step; error estimate stays honest
    z = 0.9 + 0.5j
    coarse = genfun.QuadConfig(max_subdiv=0)
    v0, e0 = genfun.phi_inf(0, 0.7, z, coarse)
    v1, e1 = genfun.phi_inf(0, 0.7, z)
    assert e1 < e0
    assert abs(v0 - v1) <= e0
