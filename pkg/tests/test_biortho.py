import math

import numpy as np
import pytest

from hyperfourier import biortho
from hyperfourier.errors import DomainError, NumericalFailure

# mpmath quadrature of the semicircle integrals at 20 digits
H0_REF = {0.3: 0.2731783751338117335, 2.0: 0.064684313484329162519}
H1_REF = {0.5: 0.3344006717376893797 + 0.59937695153429595308j, -1.5: -0.1414195921068105616 - 0.11820090237123020488j}


@pytest.fixture(scope="module")
def ev():
    return biortho.default_evaluator()


def test_h0_against_quadrature(ev):
    for x, ref in H0_REF.items():
        v, e = ev.h0(x)
        assert abs(v - ref) < 1e-14 and e < 1e-12


def test_h1_against_quadrature(ev):
    for x, ref in H1_REF.items():
        v, e = ev.hn(1, x)
        assert abs(v - ref) < 1e-14 and e < 1e-12


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_direct_and_low_paths_agree(ev, n):
    x = np.linspace(-3, 3, 7)
    for which in ("H", "M"):
        a = ev.value(which, n, x, biortho.DIRECT)[0]
        b = ev.value(which, n, x, biortho.LOW_CONTOUR)[0]
        assert np.max(np.abs(a - b)) < 1e-8


def test_direct_path_is_capped(ev):
    with pytest.raises(NumericalFailure):
        ev.hn(7, 0.3, biortho.DIRECT)


def test_negative_index_reflection(ev):
    x = np.array([-0.8, 0.1, 1.7])
    assert np.allclose(ev.hn(-2, x)[0], ev.hn(2, -x)[0], atol=1e-15)
    assert np.allclose(ev.mn(-3, x)[0], ev.mn(3, -x)[0], atol=1e-15)


def test_inversion_relations(ev):
    x = np.array([0.7, -1.3, 2.5])
    assert np.max(np.abs(ev.h0(-1 / x)[0] / x**2 - ev.h0(x)[0])) < 1e-14
    for n in (1, 2):
        assert np.max(np.abs(ev.mn(n, x)[0] - ev.hn(n, -1 / x)[0] / x**2)) < 1e-13


def test_m_at_zero_is_leading_coefficient_at_infinity(ev):
    # M_1(0) = lim y^2 H_1(y) = -4/pi^2
    assert abs(ev.mn(1, 0.0)[0] - (-4 / math.pi**2)) < 1e-13
    y = 1e4
    assert abs(y * y * ev.hn(1, -y)[0] - ev.mn(1, 0.0)[0]) < 1e-3


def test_h0_is_real_even_positive(ev):
    x = np.linspace(0, 6, 13)
    v = ev.h0(x)[0]
    assert np.allclose(v, ev.h0(-x)[0], atol=1e-16)
    assert np.all(v > 0)


def test_envelopes(ev):
    x = np.linspace(-8, 8, 41)
    assert np.all(np.abs(ev.h0(x)[0]) <= biortho.envelope(0, x))
    for n in (-2, 1, 3):
        env = biortho.envelope(n, x)
        assert np.all(np.abs(ev.hn(n, x)[0]) <= env)
        assert np.all(np.abs(ev.mn(n, x)[0]) <= env)


def test_periodization_small_index(ev):
    x = np.array([-0.9, -0.2, 0.35, 0.8])
    v, e = biortho.periodize("H0", 0, x, 1e-8, ev)
    assert np.max(np.abs(2 * v - 1)) < 1e-9
    v, _ = biortho.periodize("H", 2, x, 1e-8, ev)
    assert np.max(np.abs(2 * v - np.exp(2j * math.pi * x))) < 1e-9
    v, _ = biortho.periodize("M", -1, x, 1e-8, ev)
    assert np.max(np.abs(v)) < 1e-9


def test_periodization_extended_precision_index(ev):
    x = np.array([0.1, 0.55])
    v, _ = biortho.periodize("H", 6, x, 1e-6, ev)
    assert np.max(np.abs(2 * v - np.exp(6j * math.pi * x))) < 1e-8


def test_periodization_refuses_unreachable_tolerance(ev):
    with pytest.raises(NumericalFailure):
        biortho.periodize("H", 6, np.array([0.1, 0.55]), 1e-12, ev)


@pytest.mark.parametrize("m,n", [(0, 0), (1, 1), (2, 1), (-1, 3), (3, 3)])
def test_pairing(ev, m, n):
    v, _ = biortho.biortho_pairing(m, "H", n, evaluator=ev)
    assert abs(v - (m == n)) < 1e-8
    if n:
        v, _ = biortho.biortho_pairing(m, "M", n, evaluator=ev)
        assert abs(v - (m == n)) < 1e-8
        v, _ = biortho.biortho_pairing(m, "M", n, evaluator=ev, against="e")
        assert abs(v) < 1e-8


def test_pairing_high_index(ev):
    v, _ = biortho.biortho_pairing(6, "H", 6, evaluator=ev)
    assert abs(v - 1) < 1e-8
    v, _ = biortho.biortho_pairing(5, "M", 6, evaluator=ev)
    assert abs(v) < 1e-8


def test_errors(ev):
    with pytest.raises(DomainError):
        ev.hn(0, 0.1)
    with pytest.raises(DomainError):
        ev.hn(40, 0.1)
    with pytest.raises(DomainError):
        biortho.biortho_pairing(0, "M", 0)
    with pytest.raises(DomainError):
        biortho.BiorthoEvaluator(path_policy="FAST")
