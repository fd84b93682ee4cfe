"""Acceptance checks, one function per criterion.

Each ``criterion_k(quick)`` returns a list of :class:`Check` records.  The
full suite uses the acceptance sizes and tolerances; ``quick=True`` shrinks
the samples for a smoke run.  The CLI ``selftest`` command and the
acceptance tests both run these functions.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import biortho, cfrac, faber, genfun, hfs, kleingordon, modular, transfer

__all__ = ["Check", "CRITERIA", "run_suite", "format_report"]


@dataclass(frozen=True)
class Check:
    criterion: int
    name: str
    ok: bool
    value: float
    tol: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        return f"[{status}] {self.criterion}.{self.name}: {self.value:.3e} (tol {self.tol:.1e}) {self.detail}".rstrip()


def _check(c, name, value, tol, detail="", le=True):
    value = float(value)
    ok = bool(value <= tol) if le else bool(value >= tol)
    return Check(c, name, ok, value, tol, detail)


# 1. modular identities ------------------------------------------------------

THETA3_DECIMAL = 4.0600937869433563


def criterion_1(quick: bool = False):
    rng = np.random.default_rng(1)
    npts = 40 if quick else 200
    z = rng.uniform(-1, 1, npts) + 1j * rng.uniform(0.05, 5, npts)
    t2, t3, t4 = modular.theta_triple(z)
    jac = np.max(np.abs(t3**4 - t2**4 - t4**4) / np.abs(t3) ** 4)
    s2, s3, s4 = modular.theta_triple(2 * z)
    scale = np.abs(t3) ** 2
    landen = max(
        np.max(np.abs(2 * s2**2 - (t3**2 - t4**2)) / scale),
        np.max(np.abs(2 * s3**2 - (t3**2 + t4**2)) / scale),
        np.max(np.abs(s4**2 - t3 * t4) / scale),
    )
    li = abs(complex(modular.modular_lambda(1j)) - 0.5)
    l2 = abs(complex(modular.modular_lambda(2j)) - (17 - 12 * math.sqrt(2)))
    q = math.exp(-math.pi / 2)
    th = complex(modular.theta(3, q)) ** 4
    out = [
        _check(1, "jacobi", jac, 1e-10, f"{npts} points"),
        _check(1, "landen", landen, 1e-10, f"{npts} points"),
        _check(1, "lambda(i)", li, 1e-12),
        _check(1, "lambda(2i)", l2, 1e-12),
    ]
    if not quick:
        out.append(_check(1, "theta3^4 decimal", abs(th - THETA3_DECIMAL), 1e-12, f"value {th.real:.16f}"))
    return out


# 2. triangle polynomials ----------------------------------------------------

def _series_equal(lhs, rhs, order):
    return all(Fraction(lhs[k]) == Fraction(rhs[k]) for k in range(order))


def criterion_2(quick: bool = False):
    nmax = 12 if quick else 24
    bad = []
    for n in range(1, nmax + 1):
        p = faber.schwarz_poly(n)
        if p.coeff(n) != 16**n:
            bad.append(f"lead {n}")
        if n >= 2 and p.coeff(n - 1) != -8 * n * 16 ** (n - 1):
            bad.append(f"sub-lead {n}")
        if p(Fraction(1)) != (1 - (-1) ** n) * faber.r4(n):
            bad.append(f"S_n(1) {n}")
        sh = p.compose_shift()
        if any(sh.coeff(k) != (-1) ** n * p.coeff(k) for k in range(1, n + 1)):
            bad.append(f"symmetry {n}")
    order = 16
    t2 = faber.theta_int_series(2, order)
    t3 = faber.theta_int_series(3, order)
    gen1 = [16 * c for c in t2.power(4).c]
    low = (t2.power(4) * t3.alternate().power(4) * t3.power(4).inverse()).c
    gen2 = [16 * c for c in low]
    s1 = [faber.schwarz_poly(n)(Fraction(1)) for n in range(1, order + 1)]
    sn1 = [faber.schwarz_poly(n).coeff(1) for n in range(1, order + 1)]
    if not _series_equal(s1, gen1, order):
        bad.append("generating S_n(1)")
    if not _series_equal(sn1, gen2, order):
        bad.append("generating s_n1")
    return [_check(2, "exact identities", len(bad), 0, ", ".join(bad) or f"n <= {nmax}, series order {order}")]


# 3. biorthogonality ---------------------------------------------------------

def criterion_3(quick: bool = False):
    ev = biortho.default_evaluator()
    rng = range(-2, 3) if quick else range(-4, 5)
    dev = 0.0
    for n in rng:
        for m in rng:
            v, _ = biortho.biortho_pairing(m, "H", n, tol=1e-6, evaluator=ev)
            dev = max(dev, abs(v - (m == n)))
            if n != 0 and m != 0:
                v, _ = biortho.biortho_pairing(m, "M", n, tol=1e-6, evaluator=ev)
                dev = max(dev, abs(v - (m == n)))
                v, _ = biortho.biortho_pairing(m, "M", n, tol=1e-6, evaluator=ev, against="e")
                dev = max(dev, abs(v))
            if n != 0 or m != 0:
                v, _ = biortho.biortho_pairing(m, "H", n, tol=1e-6, evaluator=ev, against="e_inv")
                dev = max(dev, abs(v))
    xs = np.linspace(-1, 1, 8 if quick else 16, endpoint=False) + 1 / 32
    per = 0.0
    v, _ = biortho.periodize("H0", 0, xs, 1e-8, ev)
    per = max(per, np.max(np.abs(2 * v - 1)))
    for n in [k for k in rng if k != 0]:
        v, _ = biortho.periodize("H", n, xs, 1e-8, ev)
        per = max(per, np.max(np.abs(2 * v - np.exp(1j * math.pi * n * xs))))
        v, _ = biortho.periodize("M", n, xs, 1e-8, ev)
        per = max(per, np.max(np.abs(v)))
    size = len(rng)
    return [
        _check(3, "pairing delta matrix", dev, 1e-5, f"{size}x{size}, H/M against e and e_inv"),
        _check(3, "periodization identities", per, 1e-5, f"{xs.size} x-points"),
    ]


# 4. envelopes ---------------------------------------------------------------

def criterion_4(quick: bool = False):
    ev = biortho.default_evaluator()
    x = np.linspace(-10, 10, 50 if quick else 200)
    h0 = ev.h0(x)[0]
    r0 = np.max(np.abs(h0) * (1 + x**2) / 3)
    worst = 0.0
    for n in (-4, -3, -2, -1, 1, 2, 3, 4):
        env = biortho.envelope(n, x)
        worst = max(worst, np.max(np.abs(ev.hn(n, x)[0]) / env), np.max(np.abs(ev.mn(n, x)[0]) / env))
    return [
        _check(4, "H0 envelope ratio", r0, 1.0, "|H0|(1+x^2)/3"),
        _check(4, "Hn/Mn envelope ratio", worst, 1.0, "|n| <= 4"),
    ]


# 5. generating functions and continuation -----------------------------------

def criterion_5(quick: bool = False):
    ev = biortho.default_evaluator()
    other = genfun.QuadConfig(arc_step=1 / 24, s_max=4.5)
    ident = 0.0
    N = 14
    for x in (0.0, 0.7, -2.3):
        for y in (0.3 + 1.2j, 0.3 + 2.0j):
            e = np.exp(1j * math.pi * np.arange(1, N + 1) * y)
            sh = sum(n * ev.hn(n, x)[0] * e[n - 1] for n in range(1, N + 1))
            sm = sum(n * ev.mn(n, x)[0] * e[n - 1] for n in range(1, N + 1))
            ident = max(ident, abs(sh - genfun.phi_inf(0, x, y, other)[0] / (2 * math.pi**2)))
            ident = max(ident, abs(sm - genfun.phi_inf(1, x, y, other)[0] / (2 * math.pi**2)))
    pts = [0.1 + 3j, -0.5 + 1.5j, 0.9 + 0.5j, -0.9 + 0.6j, 0.6 + 0.9j, -0.3 + 1.05j,
           1.0 + 0.3j, 0.0 + 1.2j, 0.75 + 0.75j, -0.7 + 0.8j]
    if quick:
        pts = pts[:4]
    cont = 0.0
    for z in pts:
        for delta in (0, 1):
            a = genfun.phi_strip(delta, 0.7, z, strict=False)[0]
            b = genfun.phi_inf(delta, 0.7, z)[0]
            cont = max(cont, abs(a - b))
    m = 8 if quick else 20
    re = np.linspace(-1, 1, m)
    im = np.geomspace(0.1, 3, m)
    Z = (re[:, None] + 1j * im[None, :]).ravel()
    plan = genfun.StripPlan(Z, strict=False)
    ratio = 0.0
    for delta in (0, 1):
        v, _ = plan.evaluate(genfun.weight_kernel(delta, np.array([-2.3, 0.0, 0.7])))
        bound = np.array([genfun.strip_bound(t) for t in Z.imag])
        ratio = max(ratio, float(np.max(np.abs(v) / bound[:, None])))
    xs = np.linspace(-3, 3, 13)
    dl = 0.0
    for n in range(1, 5):
        a = ev.hn(n, xs, biortho.DIRECT)[0]
        b = ev.hn(n, xs, biortho.LOW_CONTOUR)[0]
        dl = max(dl, np.max(np.abs(a - b)))
    return [
        _check(5, "generating identity", ident, 1e-6, "6 (x, y) points, H and M"),
        _check(5, "continuation = exterior transform", cont, 1e-8, f"{len(pts)} points"),
        _check(5, "strip bound ratio", ratio, 1.0, f"{m}x{m} grid"),
        _check(5, "DIRECT vs LOW_CONTOUR", dl, 1e-5, "n = 1..4"),
    ]


# 6. continued fractions -----------------------------------------------------

def criterion_6(quick: bool = False):
    qmax = 60 if quick else 200
    bad = 0
    count = 0
    for q in range(2, qmax + 1):
        for p in range(-q + 1, q):
            if p == 0 or math.gcd(p, q) != 1 or (p * q) % 2:
                continue
            count += 1
            w = cfrac.even_rational_decompose(p, q)
            if cfrac.phi_apply(w, Fraction(0)) != Fraction(p, q):
                bad += 1
    rng = np.random.default_rng(6)
    nwords = 1000 if quick else 10000
    inv_bad = 0
    for _ in range(nwords):
        L = int(rng.integers(1, 13))
        ent = [int(v) for v in rng.choice([-4, -3, -2, -1, 1, 2, 3, 4], L)]
        cv = cfrac.convergents(ent)
        for k in range(0, L + 1):
            if cv.pk(k - 1) * cv.qk(k) - cv.pk(k) * cv.qk(k - 1) != 1:
                inv_bad += 1
            if k >= 1 and not (abs(cv.qk(k)) > abs(cv.pk(k)) and abs(cv.qk(k)) > abs(cv.qk(k - 1))
                               and abs(cv.pk(k)) > abs(cv.pk(k - 1))):
                inv_bad += 1
    roof_bad = 0
    nroof = 0
    alphabet = (-2, -1, 1, 2) if not quick else (-1, 1, 2)
    for L in range(1, 9 if not quick else 6):
        for ent in itertools.product(alphabet, repeat=L):
            nroof += 1
            if cfrac.roof_diameter(ent) > Fraction(1, L):
                roof_bad += 1
    npts = 200 if quick else 1000
    zs = rng.uniform(-3, 3, npts) + 1j * np.exp(rng.uniform(math.log(0.02), math.log(3), npts))
    member_bad = 0
    for z in zs:
        cell = cfrac.classify_point(complex(z), strict=False)
        w = complex(z) - cell.shift
        if cell.kind == cfrac.E_INF:
            ok = abs(w) >= 1 and abs(w.real) <= 1
        else:
            ok = cfrac.in_zero_cell(cfrac.inverse_map(cell.word, w)) and cell.height == 1 + len(cell.word)
        member_bad += not ok
    return [
        _check(6, "decompose/evaluate roundtrip", bad, 0, f"{count} even rationals, |q| <= {qmax}"),
        _check(6, "convergent invariants", inv_bad, 0, f"{nwords} random words"),
        _check(6, "roof diameter <= 1/N", roof_bad, 0, f"{nroof} words"),
        _check(6, "classification membership", member_bad, 0, f"{npts} points"),
    ]


# 7. Klein-Gordon ------------------------------------------------------------

def criterion_7(quick: bool = False):
    nm = 2 if quick else 4
    dev = 0.0
    for n in range(nm + 1):
        for m in range(nm + 1):
            v, _ = kleingordon.r_interp(n, math.pi * m, 0.0)
            dev = max(dev, abs(v - (n == m)))
            v, _ = kleingordon.r_interp(n, 0.0, -math.pi * m)
            dev = max(dev, abs(v - (n == 0 and m == 0)))
    phi = hfs.log_bump()

    def U(x, y):
        return kleingordon.u_phi(phi, x, y)

    N = 12 if quick else 16
    samples = kleingordon.KGSamples.from_solution(U, N)
    X, Y = np.meshgrid(np.linspace(0, 4, 5), np.linspace(-4, 0, 5))
    rec, _, _ = kleingordon.kg_reconstruct(samples, X, Y)
    rec_err = np.max(np.abs(rec - U(X, Y)))
    rects = [(0, 1, -1, 0), (1, 3, -2, -0.5), (-2, 0.5, 0.2, 1.5)]
    res = max(abs(kleingordon.kg_residual(U, r)[0]) for r in rects)
    g = np.geomspace(0.05, 40, 5 if quick else 8)
    A, B = np.meshgrid(g, g)
    a, b = A.ravel(), B.ravel()
    r0 = np.abs(kleingordon.r_quadrant(0, a, b)[0])
    r0_ratio = float(np.max(r0 / kleingordon.r0_envelope(a, b)))
    k = int(np.argmax(r0 / kleingordon.r0_envelope(a, b)))
    r0_int = float(np.max(r0 / kleingordon.r0_integral_envelope(a, b)))
    rn_ratio = 0.0
    for n in range(1, nm + 1):
        rn = np.abs(kleingordon.r_quadrant(n, a, b)[0])
        rn_ratio = max(rn_ratio, float(np.max(rn / kleingordon.rn_envelope(n, a, b))))
    out = [
        _check(7, "interpolation delta matrix", dev, 1e-6, f"n, m <= {nm}"),
        _check(7, "reconstruction of U_bump", rec_err, 1e-3, f"5x5 quadrant grid, N = {N}"),
        _check(7, "PDE residual", res, 1e-6, "three rectangles"),
        _check(7, "R_0 integral envelope ratio", r0_int, 1.0, f"{a.size}-point log grid"),
        _check(7, "R_n Hankel envelope ratio", rn_ratio, 1.0, f"n <= {nm}"),
    ]
    if not quick:
        out.append(_check(7, "R_0 Hankel envelope ratio", r0_ratio, 1.0,
                          f"{a.size}-point log grid, worst at ({a[k]:.3g}, {b[k]:.3g})"))
    return out


# 8. transfer operator -------------------------------------------------------

def criterion_8(quick: bool = False):
    its = transfer.transfer_iterate(transfer.GridFunction.constant(1.0), 3)
    mass = max(abs(g.integral() - 2) for g in its[1:])
    at0 = abs(its[1].value_at_zero - math.pi**2 / 12)
    fixed = transfer.fixed_relation_residual(0)
    ratios = [transfer.contraction_check(N) for N in (2, 3)]
    return [
        _check(8, "mass of T^N[1]", mass, 1e-4, "N = 1..3"),
        _check(8, "T[1](0) = pi^2/12", at0, 1e-8),
        _check(8, "(I + T)[2 H0] = 1", fixed, 1e-5, "257-node grid"),
        _check(8, "contraction ratio", max(ratios), transfer.CONTRACTION_BOUND, f"N = 2, 3: {ratios[0]:.4f}, {ratios[1]:.4f}"),
    ]


# 9. conjugate series --------------------------------------------------------

def criterion_9(quick: bool = False):
    phi = hfs.bump(1.0, 2.0)
    t = np.linspace(0.5, 2.5, 41)
    errs = []
    for N in (4, 8, 12):
        c = hfs.conj_analyze(phi, N)
        v, _ = hfs.conj_synthesize(c, t)
        errs.append(float(np.max(np.abs(v - phi(t)))))
    decreasing = all(b < a for a, b in zip(errs, errs[1:]))
    pts = [(0.3 + 1.5j, 0.2), (-0.5 + 1.0j, 0.7), (0.1 + 2.0j, -1.3)]
    pk = 0.0
    for z, tt in pts:
        v, _ = hfs.conj_synthesize(hfs.poisson_coeffs(z, 16), tt)
        pk = max(pk, abs(v - hfs.poisson_kernel(z, tt)))
    lb = hfs.log_bump()
    Nc = 4 if quick else 8
    c = hfs.conj_analyze(lb, Nc)
    cross = 0.0
    for n in range(-Nc, Nc + 1):
        cross = max(cross, abs(c.h_at(n) - kleingordon.u_phi(lb, -math.pi * n, 0.0)))
        if n:
            cross = max(cross, abs(c.m_at(n) - kleingordon.u_phi(lb, 0.0, math.pi * n)))
    return [
        Check(9, "bump round trip decreasing", decreasing, errs[-1], errs[0],
              "errors " + ", ".join(f"{e:.3g}" for e in errs) + " at N = 4, 8, 12"),
        _check(9, "Poisson kernel expansion", pk, 1e-4, "three (z, t) points, N = 16"),
        _check(9, "h*_n = U(-pi n, 0), m*_n = U(0, pi n)", cross, 1e-6, f"|n| <= {Nc}"),
    ]


CRITERIA = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
}


def run_suite(quick: bool = False, criteria=None):
    """Run the selected criteria; returns ``(checks, seconds per criterion)``."""
    checks, timing = [], {}
    for k in criteria or sorted(CRITERIA):
        t0 = time.perf_counter()
        checks.extend(CRITERIA[k](quick))
        timing[k] = time.perf_counter() - t0
    return checks, timing


def format_report(checks, timing=None) -> str:
    lines = [c.line() for c in checks]
    if timing:
        lines.append("timing: " + ", ".join(f"{k}: {v:.1f}s" for k, v in timing.items()))
    n_fail = sum(not c.ok for c in checks)
    lines.append(f"{len(checks) - n_fail} passed, {n_fail} failed")
    return "\n".join(lines)
