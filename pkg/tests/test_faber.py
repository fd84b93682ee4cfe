from fractions import Fraction

import numpy as np
import pytest

from hyperfourier import faber, modular
from hyperfourier.errors import DomainError


def _mul(a, b, order):
    out = [Fraction(0)] * order
    for i, x in enumerate(a[:order]):
        if x:
            for j, y in enumerate(b[: order - i]):
                out[i + j] += x * y
    return out


def _inv(a, order):
    out = [Fraction(0)] * order
    out[0] = 1 / Fraction(a[0])
    for k in range(1, order):
        out[k] = -sum(a[j] * out[k - j] for j in range(1, min(k, len(a) - 1) + 1)) / a[0]
    return out


def _faber_oracle(n, order=40):
    """Faber polynomial by greedy cancellation of the principal part of powers of 1/lambda_D."""
    # theta series in u with theta2 = sum u^{n(n+1)}, theta3 = 1 + 2 sum u^{n^2}
    t2 = [Fraction(0)] * order
    t3 = [Fraction(0)] * order
    for k in range(order):
        if k * (k + 1) < order:
            t2[k * (k + 1)] += 1
        if 0 < k * k < order:
            t3[k * k] += 2
    t3[0] = Fraction(1)
    p2 = _mul(_mul(t2, t2, order), _mul(t2, t2, order), order)
    p3 = _mul(_mul(t3, t3, order), _mul(t3, t3, order), order)
    A = _mul(p3, _inv(p2, order), order)  # 1/lambda_D = A / (16 u)
    # w^k = A^k / (16^k u^k); track the Laurent coefficient of u^-j
    powers = {0: [Fraction(1)] + [Fraction(0)] * (order - 1)}
    for k in range(1, n + 1):
        powers[k] = _mul(powers[k - 1], A, order)
    coeffs = {}
    residual = {-n: Fraction(1)}  # target principal part u^-n
    for k in range(n, 0, -1):
        c = residual.get(-k, Fraction(0)) * 16**k
        coeffs[k] = c
        for j in range(k + 1):
            residual[j - k] = residual.get(j - k, Fraction(0)) - c * powers[k][j] / 16**k
    return [coeffs[k] for k in range(1, n + 1)]


@pytest.mark.parametrize("n", range(1, 11))
def test_schwarz_poly_against_greedy_oracle(n):
    assert list(faber.schwarz_poly(n).coeffs) == _faber_oracle(n)


def test_low_degree_values():
    assert faber.schwarz_poly(1).coeffs == (Fraction(16),)
    assert faber.schwarz_poly(2).coeffs == (Fraction(-256), Fraction(256))


@pytest.mark.parametrize("n", range(1, 25))
def test_structure(n):
    p = faber.schwarz_poly(n)
    assert p.coeff(n) == 16**n
    assert p.coeff(0) == 0
    if n >= 2:
        assert p.coeff(n - 1) == -8 * n * 16 ** (n - 1)
    assert p(Fraction(1)) == (1 - (-1) ** n) * modular.r4_bruteforce(n)
    sh = p.compose_shift()
    assert all(sh.coeff(k) == (-1) ** n * p.coeff(k) for k in range(1, n + 1))
    assert all(c.denominator == 1 for c in p.coeffs)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 7, 10])
def test_r4_and_constant_term(n):
    assert faber.r4(n) == modular.r4_bruteforce(n)
    assert faber.delta_n_at_zero(n) == (-1) ** n * modular.r4_bruteforce(n)


def test_int_series_inverse():
    t3 = faber.theta_int_series(3, 20)
    one = t3 * t3.inverse()
    assert list(one.c)[:20] == [1] + [0] * 19


def test_eval_R_triangle_matches_polynomial():
    z = np.array([0.2 + 1.1j, -0.5 + 0.8j])
    lam = modular.modular_lambda(z)
    for n in (1, 2, 5):
        p = faber.schwarz_poly(n)
        ref = sum(float(c) * lam ** (-k) for k, c in enumerate(p.coeffs, start=1))
        assert np.allclose(faber.eval_R_triangle(n, z), ref, rtol=1e-12)


def test_eval_R_triangle_periodic():
    # S_n(1/lambda) is 2-periodic and holomorphic; check the period
    z = 0.3 + 0.8j
    for n in (1, 3):
        assert abs(faber.eval_R_triangle(n, z) - faber.eval_R_triangle(n, z + 2)) < 1e-9 * abs(
            faber.eval_R_triangle(n, z))


def test_as_pairs_and_errors():
    assert faber.schwarz_poly(2).as_pairs() == [(2, "256/1"), (1, "-256/1")]
    with pytest.raises(DomainError):
        faber.schwarz_poly(0)
    with pytest.raises(DomainError):
        faber.schwarz_poly(10, order=5)
