import math

import mpmath
import numpy as np
import pytest

from hyperfourier import modular
from hyperfourier.errors import DomainError


def mp_thetas(z):
    q = mpmath.exp(1j * mpmath.pi * z)
    t2 = 2 * mpmath.exp(0.25j * mpmath.pi * z) * sum(q ** (n * (n + 1)) for n in range(60))
    return t2, mpmath.jtheta(3, 0, q), mpmath.jtheta(4, 0, q)


@pytest.mark.parametrize("z", [0.3 + 0.9j, -0.7 + 0.2j, 0.05 + 0.06j, 1.9 + 1.5j, -3.2 + 0.4j])
def test_theta_triple_against_mpmath(z):
    mpmath.mp.dps = 25
    ref = mp_thetas(mpmath.mpc(z))
    got = modular.theta_triple(z)
    for g, r in zip(got, ref):
        assert abs(g - complex(r)) <= 1e-12 * max(1.0, abs(complex(r)))


def test_theta_series_nome():
    q = 0.3 + 0.2j
    assert abs(modular.theta(3, q) - complex(mpmath.jtheta(3, 0, q))) < 1e-14
    assert abs(modular.theta(4, q) - complex(mpmath.jtheta(4, 0, q))) < 1e-14
    with pytest.raises(DomainError):
        modular.theta(3, 0.9999999)
    with pytest.raises(DomainError):
        modular.theta(5, 0.1)


def test_theta3_fourth_power_closed_form():
    # theta3(e^{-pi/2})^4 = pi (1 + sqrt 2)^2 / (2 Gamma(3/4)^4)
    mpmath.mp.dps = 30
    closed = mpmath.pi * (1 + mpmath.sqrt(2)) ** 2 / (2 * mpmath.gamma(0.75) ** 4)
    got = complex(modular.theta(3, math.exp(-math.pi / 2))) ** 4
    assert abs(got - float(closed)) < 1e-13
    assert abs(float(closed) - 4.06009378704149138832) < 1e-18


def test_lambda_special_values():
    assert abs(modular.modular_lambda(1j) - 0.5) < 1e-15
    assert abs(modular.modular_lambda(2j) - (17 - 12 * math.sqrt(2))) < 1e-14
    # lambda(1 + i) = -1 follows from lambda(z + 1) = lambda/(lambda - 1)
    assert abs(modular.modular_lambda(1 + 1j) + 1) < 1e-13


def test_lambda_complement_and_derivative():
    z = np.array([0.2 + 0.7j, -0.4 + 1.3j, 0.9 + 0.1j])
    lam = modular.modular_lambda(z)
    assert np.max(np.abs(lam + modular.lambda_complement(z) - 1) / np.maximum(1, np.abs(lam))) < 1e-14
    mpmath.mp.dps = 25

    def lam(w):
        t2, t3, _ = mp_thetas(w)
        return (t2 / t3) ** 4

    ref = np.array([complex(mpmath.diff(lam, mpmath.mpc(v))) for v in z])
    assert np.max(np.abs(ref - modular.lambda_prime(z)) / np.abs(ref)) < 1e-11


def test_lambda_on_unit_arc_matches_direct():
    t = np.array([0.5, 1.0, 2.0, 3.0])
    direct = modular.modular_lambda((t + 1j) / (t - 1j))
    assert np.max(np.abs(modular.lambda_on_unit_arc(t) - direct)) < 1e-12
    # real part is 1/2 on the arc
    assert np.max(np.abs(modular.lambda_on_unit_arc(np.geomspace(1e-2, 1e2, 9)).real - 0.5)) < 1e-13


def test_reduction_rejects_lower_half_plane():
    with pytest.raises(DomainError):
        modular.theta_triple(0.3 - 0.1j)
    with pytest.raises(DomainError):
        modular.EvalConfig(min_im=0.9)


@pytest.mark.parametrize("z", [0.3, 0.3 + 0.4j, -2.5 + 0.1j, 0.9 - 0.2j, 0.5 + 0.5j,
                               complex(0.5, math.sqrt(3) / 2), 1.8 + 0.3j, 0.95 + 0.01j])
def test_hyp_half_against_mpmath(z):
    ref = complex(mpmath.hyp2f1(0.5, 0.5, 1, z))
    assert abs(modular.hyp_half(z) - ref) < 1e-13 * max(1.0, abs(ref))


@pytest.mark.parametrize("t", [0.5, -0.5, 2.0, 0.01])
def test_hyp_half_on_critical_line(t):
    ref = complex(mpmath.hyp2f1(0.5, 0.5, 1, 0.5 + 1j * t))
    assert abs(modular.hyp_half_critical(t) - ref) < 1e-14
    assert abs(modular.hyp_half_critical(t) - modular.hyp_half(0.5 + 1j * t)) < 1e-14


@pytest.mark.parametrize("z", [0.3 + 0.9j, -0.4 + 1.5j, 0.8 + 0.7j, 0.1 + 3j])
def test_tau_inverts_lambda(z):
    # z inside the fundamental quadrilateral 0 < Re + 1 < 2, |2 z +- 1| > 1
    assert abs(modular.schwarz_tau(modular.modular_lambda(z)) - z) < 1e-11


def test_tau_domain():
    with pytest.raises(DomainError):
        modular.schwarz_tau(1.5)


def test_delta_ratio():
    # Delta(1) = 1 by symmetry; Delta(x) Delta(1/x) = 1
    assert abs(modular.delta_ratio(1.0) - 1) < 1e-15
    assert abs(modular.delta_ratio(3.0) * modular.delta_ratio(1 / 3) - 1) < 1e-13


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 12, 24])
def test_r4_bruteforce_jacobi(n):
    # Jacobi: r4(n) = 8 * sum of divisors not divisible by 4
    assert modular.r4_bruteforce(n) == 8 * sum(d for d in range(1, n + 1) if n % d == 0 and d % 4)
