import json
import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import k0, k1

from hyperfourier import biortho, hfs, kleingordon
from hyperfourier.errors import DomainError, NumericalFailure

# mpmath quadrature of the arc integral for R_0(1, -2) at 20 digits
R0_REF = 0.066132759785715080399
# published value of the interpolating function R_3 at (1, -2)
R3_PUBLISHED = -1.9194077


def r0_on_line(a, b):
    """R_0(a, -b) as the real-line integral against H_0, folded onto [1, inf)."""
    h0 = lambda s: float(biortho.h0(s))  # noqa: E731
    tot = 0.0
    for p, q in ((a, b), (b, a)):
        tot += quad(lambda s: math.cos(q / s) * h0(s), 1, np.inf, weight="cos", wvar=p)[0]
        tot += quad(lambda s: math.sin(q / s) * h0(s), 1, np.inf, weight="sin", wvar=p)[0]
    return 2 * tot


def test_bessel_against_scipy():
    x = np.geomspace(1e-3, 600, 40)
    assert np.max(np.abs(kleingordon.bessel_k0(x) - k0(x)) / k0(x)) < 1e-13
    assert np.max(np.abs(kleingordon.bessel_k1(x) - k1(x)) / k1(x)) < 1e-13
    with pytest.raises(DomainError):
        kleingordon.bessel_k0(0.0)


def test_r0_against_frozen_arc_quadrature():
    v, e = kleingordon.r_quadrant(0, 1.0, 2.0)
    assert abs(v - R0_REF) < 1e-14 and e < 1e-12


@pytest.mark.parametrize("a,b", [(1.0, 2.0), (3.0, 2.0), (0.5, 0.2)])
def test_r0_against_line_integral(a, b):
    assert abs(kleingordon.r_quadrant(0, a, b)[0] - r0_on_line(a, b)) < 1e-8


def test_r0_symmetry():
    a, b = np.array([0.3, 2.0, 5.0]), np.array([1.1, 0.0, 4.0])
    assert np.allclose(kleingordon.r_quadrant(0, a, b)[0], kleingordon.r_quadrant(0, b, a)[0], atol=1e-14)
    assert kleingordon.r_interp(0, -2.0, 1.1)[0] == pytest.approx(kleingordon.r_interp(0, 1.1, -2.0)[0], abs=1e-14)


def test_r3_value():
    v, _ = kleingordon.r_interp(3, 1.0, -2.0)
    assert abs(v - R3_PUBLISHED) < 1e-7


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_r_direct_and_low_agree(n):
    a, b = np.array([0.0, 1.0, 3.0]), np.array([2.0, 0.5, 1.0])
    d = kleingordon.r_quadrant(n, a, b, path=biortho.DIRECT)[0]
    low = kleingordon.r_quadrant(n, a, b, path=biortho.LOW_CONTOUR)[0]
    assert np.max(np.abs(d - low)) < 1e-6


def test_interpolation_delta():
    for n in range(0, 6):
        for m in range(0, 6):
            v, _ = kleingordon.r_interp(n, math.pi * m, 0.0)
            assert abs(v - (n == m)) < 1e-6
            v, _ = kleingordon.r_interp(n, 0.0, -math.pi * m)
            assert abs(v - (n == 0 and m == 0)) < 1e-6


def test_vanishing_quadrant_and_routes():
    assert kleingordon.r_interp(2, -1.0, 3.0) == (0j, 0.0)
    with pytest.raises(DomainError):
        kleingordon.r_interp(1, 1.0, 1.0)
    with pytest.raises(DomainError):
        kleingordon.r_quadrant(1, -1.0, 0.0)
    with pytest.raises(NumericalFailure):
        kleingordon.r_quadrant(6, 1.0, 1.0, path=biortho.DIRECT)


def test_envelopes():
    g = np.geomspace(0.05, 30, 6)
    A, B = (v.ravel() for v in np.meshgrid(g, g))
    r0 = np.abs(kleingordon.r_quadrant(0, A, B)[0])
    assert np.all(r0 <= kleingordon.r0_integral_envelope(A, B))
    for n in (1, 2, 5):
        assert np.all(np.abs(kleingordon.r_quadrant(n, A, B)[0]) <= kleingordon.rn_envelope(n, A, B))


def test_closed_form_r0_envelope_fails_near_the_origin():
    # the closed-form evaluation of the integral envelope is too small here
    r0 = abs(kleingordon.r_quadrant(0, 3.0, 2.0)[0])
    assert r0 == pytest.approx(0.0129893279, abs=1e-9)
    assert kleingordon.r0_envelope(3.0, 2.0) == pytest.approx(0.005348, abs=1e-6)
    assert kleingordon.r0_integral_envelope(3.0, 2.0) > r0


def test_integral_envelope_against_quad():
    for a, b in ((3.0, 2.0), (0.1, 0.0), (10.0, 4.0)):
        f = lambda t: math.exp(-math.pi / 4 * (t + 1 / t) - 2 * t * (a + b) / (t * t + 1)) / t  # noqa: E731
        ref = 5 * (quad(f, 0, 1)[0] + quad(f, 1, np.inf)[0])
        assert abs(kleingordon.r0_integral_envelope(a, b) - ref) < 1e-12


def test_integral_envelope_at_zero_is_bessel():
    # with a + b = 0 the integral is 2 K_0(pi / 2)
    assert abs(kleingordon.r0_integral_envelope(0.0, 0.0) - 10 * k0(math.pi / 2)) < 1e-13


def test_u_phi_against_quad():
    phi = hfs.bump(0.5, 2.0)
    x, y = 1.3, -0.7
    re = quad(lambda t: float(phi(t).real) * math.cos(x * t + y / t), 0.5, 2.0, epsabs=1e-14)[0]
    im = quad(lambda t: float(phi(t).real) * math.sin(x * t + y / t), 0.5, 2.0, epsabs=1e-14)[0]
    assert abs(kleingordon.u_phi(phi, x, y) - (re + 1j * im)) < 1e-12
    with pytest.raises(DomainError):
        kleingordon.u_phi(hfs.bump(-1, 1), x, y)


def test_u_phi_solves_the_equation():
    phi = hfs.log_bump()
    U = lambda x, y: kleingordon.u_phi(phi, x, y)  # noqa: E731
    for rect in [(0, 1, -1, 0), (-2, 0.5, 0.2, 1.5)]:
        res, _ = kleingordon.kg_residual(U, rect)
        assert abs(res) < 1e-10
    # a function that does not solve it leaves a residual
    bad = lambda x, y: np.exp(x + y) + 0j  # noqa: E731
    assert abs(kleingordon.kg_residual(bad, (0, 1, 0, 1))[0]) > 0.1


def test_reconstruction_of_smooth_solution():
    phi = hfs.log_bump()
    U = lambda x, y: kleingordon.u_phi(phi, x, y)  # noqa: E731
    s = kleingordon.KGSamples.from_solution(U, 16)
    X, Y = np.meshgrid(np.linspace(0, 4, 5), np.linspace(-4, 0, 5))
    rec, err, tail = kleingordon.kg_reconstruct(s, X, Y)
    actual = np.max(np.abs(rec - U(X, Y)))
    assert actual < 1e-3
    # quadrature error is small; the tail model is a conservative bound
    assert np.max(err) < 1e-6 and actual <= tail


def test_samples_json_round_trip():
    phi = hfs.log_bump()
    s = kleingordon.KGSamples.from_solution(lambda x, y: kleingordon.u_phi(phi, x, y), 3)
    back = kleingordon.KGSamples.from_json(json.loads(json.dumps(s.to_json())))
    assert np.allclose(back.u_x, s.u_x) and np.allclose(back.u_y[:3], s.u_y[:3]) and np.allclose(back.u_y[4:], s.u_y[4:])


def test_reconstruction_rejects_slow_decay():
    s = kleingordon.KGSamples(4, np.ones(9, complex), np.ones(9, complex))
    with pytest.raises(NumericalFailure):
        kleingordon.kg_reconstruct(s, 1.0, -1.0, tol=1e-3)
    with pytest.raises(DomainError):
        kleingordon.kg_reconstruct(s, -1.0, -1.0)
