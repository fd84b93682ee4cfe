"""Invariants checked on generated inputs."""

import math
from fractions import Fraction

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from hyperfourier import biortho, cfrac, faber, genfun, modular, transfer

re_part = st.floats(-3, 3, allow_nan=False)
im_part = st.floats(0.05, 5, allow_nan=False)
upper = st.builds(complex, re_part, im_part)
nonzero = st.integers(-4, 4).filter(bool)


@given(upper)
def test_jacobi_identity(z):
    t2, t3, t4 = modular.theta_triple(z)
    # near the cusps of Theta3 the terms cancel, so scale by the largest one
    scale = max(abs(t2) ** 4, abs(t3) ** 4, abs(t4) ** 4)
    assert abs(t3**4 - t2**4 - t4**4) <= 1e-12 * scale


@given(upper)
def test_lambda_modular_relations(z):
    lam = complex(modular.modular_lambda(z))
    assert abs(modular.modular_lambda(z + 2) - lam) <= 1e-9 * max(1, abs(lam))
    # lambda(-1/z) = 1 - lambda(z)
    inv = complex(modular.modular_lambda(-1 / z))
    assert abs(inv - complex(modular.lambda_complement(z))) <= 1e-9 * max(1, abs(inv))


@given(st.floats(0.05, 0.95), st.floats(-0.9, 0.9))
def test_hyp_half_pfaff(x, y):
    z = complex(x, y)
    assume(abs(z - 1) > 0.05)
    # F(z) = (1 - z)^{-1/2} F(z/(z - 1))
    lhs = modular.hyp_half(z)
    rhs = (1 - z) ** -0.5 * modular.hyp_half(z / (z - 1))
    assert abs(lhs - rhs) <= 1e-12 * abs(lhs)


@given(st.integers(1, 16))
def test_schwarz_symmetry(n):
    p = faber.schwarz_poly(n)
    sh = p.compose_shift()
    assert all(sh.coeff(k) == (-1) ** n * p.coeff(k) for k in range(1, n + 1))


@given(st.integers(2, 400), st.integers(-399, 399))
def test_even_rational_round_trip(q, p):
    assume(0 < abs(p) < q and math.gcd(p, q) == 1 and (p * q) % 2 == 0)
    w = cfrac.even_rational_decompose(p, q)
    assert cfrac.phi_apply(w, Fraction(0)) == Fraction(p, q)
    assert cfrac.roof_diameter(w) <= Fraction(1, len(w))


@given(st.fractions(-50, 50))
def test_even_parts_remainder(x):
    e, r = cfrac.even_parts(x)
    assert e % 2 == 0 and -1 <= r <= 1 and e + r == x


@given(st.lists(nonzero, min_size=1, max_size=5), st.floats(-0.9, 0.9), st.floats(0.3, 0.99))
def test_classification_recovers_word(word, re, r):
    w0 = complex(re, math.sqrt(max(r**2 - re**2, 0.0)) if abs(re) < r else 0.0)
    assume(w0.imag > 0.05 and cfrac.in_zero_cell(w0))
    z = cfrac.phi_apply(word, w0)
    assume(z.imag > 1e-6)
    try:
        cell = cfrac.classify_point(z, boundary_eps=1e-7)
    except cfrac.BoundaryAmbiguous:
        assume(False)
    assert cell.word.entries == tuple(word)
    assert cell.height == 1 + len(word)


@given(st.lists(nonzero, min_size=1, max_size=10))
def test_convergent_determinant(word):
    cv = cfrac.convergents(word)
    for k in range(cv.N + 1):
        assert cv.pk(k - 1) * cv.qk(k) - cv.pk(k) * cv.qk(k - 1) == 1


@given(st.builds(complex, st.floats(-2, 2), st.floats(0.05, 2)), st.floats(-5, 5))
def test_weight_swap_rule(zeta, x):
    for delta in (0, 1):
        k = genfun.weight_kernel(delta, x)
        lhs = k(0, np.array([-1 / zeta]))[0, 0] / zeta**2
        rhs = k(1, np.array([zeta]))[0, 0]
        assert abs(lhs - rhs) <= 1e-9 * max(1, abs(rhs))


@settings(max_examples=25, deadline=None)
@given(st.floats(-20, 20), st.integers(1, 4))
def test_biortho_reflection_and_inversion(x, n):
    assume(abs(x) > 1e-3)
    ev = biortho.default_evaluator()
    assert abs(ev.hn(-n, x)[0] - ev.hn(n, -x)[0]) < 1e-14
    assert abs(ev.mn(n, x)[0] - ev.hn(n, -1 / x)[0] / x**2) < 1e-10 * max(1, abs(ev.mn(n, x)[0]))
    assert abs(ev.h0(x)[0]) <= biortho.envelope(0, x)


@settings(max_examples=20, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(0.1, 3))
def test_transfer_linear_and_positive(a, b, c):
    f = transfer.GridFunction.from_callable(lambda x: np.exp(c * x), n=65)
    g = transfer.GridFunction.from_callable(np.cos, n=65)
    lhs = transfer.transfer_apply(f.scale(a) + g.scale(b), K=128)
    rhs = transfer.transfer_apply(f, K=128).scale(a) + transfer.transfer_apply(g, K=128).scale(b)
    assert np.max(np.abs(lhs.values - rhs.values)) < 1e-12 * (1 + abs(a) * math.exp(c) + abs(b))
    assert np.all(transfer.transfer_apply(f, K=128).values.real > 0)
