"""Command line interface: one subcommand per module plus a self-test runner.

Output is JSON (with a ``schema_version`` field) or CSV with a header row,
written to stdout or to ``--out PATH``.  ``--out csv`` and ``--out json``
select the format while still writing to stdout.  Exit codes: 0 success,
1 usage error, 2 numerical failure or failed self-test.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys

import numpy as np

from . import biortho, cfrac, faber, genfun, hfs, kleingordon, modular, selftest, transfer
from .errors import BoundaryAmbiguous, DomainError, NumericalFailure

SCHEMA_VERSION = 1

_FLOAT = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX = re.compile(rf"^({_FLOAT})([+-](?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)i$")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_complex(text: str) -> complex:
    """Parse ``RE+IMi`` or ``RE-IMi`` with no whitespace."""
    m = _COMPLEX.match(text)
    if not m:
        raise UsageError(f"malformed complex literal {text!r}; expected RE+IMi or RE-IMi")
    return complex(float(m.group(1)), float(m.group(2)))


def parse_range(text: str):
    """``start:stop:step`` -> inclusive grid."""
    try:
        a, b, h = (float(v) for v in text.split(":"))
    except ValueError:
        raise UsageError(f"malformed grid {text!r}; expected start:stop:step") from None
    if not (h > 0 and b >= a):
        raise UsageError("grid needs step > 0 and stop >= start")
    n = int(math.floor((b - a) / h + 1e-9)) + 1
    return a + h * np.arange(n)


def parse_grid2(text: str):
    """``X0:X1:NX,Y0:Y1:NY`` -> two linspaces."""
    try:
        gx, gy = text.split(",")
        out = []
        for g in (gx, gy):
            a, b, n = g.split(":")
            n = int(n)
            if n < 1:
                raise ValueError
            out.append(np.linspace(float(a), float(b), n))
    except ValueError:
        raise UsageError(f"malformed grid {text!r}; expected X0:X1:NX,Y0:Y1:NY") from None
    return out


def _cplx(v) -> dict:
    v = complex(v)
    return {"re": v.real, "im": v.imag}


class _Output:
    def __init__(self, out: str | None, default: str):
        if out in ("csv", "json"):
            self.fmt, self.path = out, None
        else:
            self.path = out
            self.fmt = default
            if out and out.endswith(".csv"):
                self.fmt = "csv"
            elif out and out.endswith(".json"):
                self.fmt = "json"

    def write(self, text: str):
        if self.path:
            with open(self.path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)

    def emit(self, payload: dict, rows=None, header=None):
        if self.fmt == "csv" and rows is not None:
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(header)
            for r in rows:
                w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in r])
            self.write(buf.getvalue())
        else:
            self.write(json.dumps({"schema_version": SCHEMA_VERSION, **payload}, indent=2) + "\n")


# subcommands ----------------------------------------------------------------

def _cmd_theta(a, out):
    z = parse_complex(a.z)
    v = complex(modular.big_theta(a.kind, z))
    out.emit({"kind": a.kind, "z": _cplx(z), **_cplx(v)}, [[v.real, v.imag]], ["re", "im"])


def _cmd_lambda(a, out):
    z = parse_complex(a.z)
    v = complex(modular.modular_lambda(z))
    d = complex(modular.lambda_prime(z))
    out.emit({"z": _cplx(z), **_cplx(v), "derivative": _cplx(d)}, [[v.real, v.imag]], ["re", "im"])


def _cmd_tau(a, out):
    z = parse_complex(a.z)
    v = complex(modular.schwarz_tau(z))
    out.emit({"z": _cplx(z), **_cplx(v)}, [[v.real, v.imag]], ["re", "im"])


def _cmd_spoly(a, out):
    if a.n < 1 or a.n > faber.MAX_DEGREE:
        raise UsageError(f"--n must lie in 1..{faber.MAX_DEGREE}")
    p = faber.schwarz_poly(a.n)
    pairs = p.as_pairs()
    out.fmt = a.format or out.fmt
    out.emit({"n": a.n, "coefficients": [{"k": k, "value": v} for k, v in pairs]}, pairs, ["k", "value"])


def _cmd_cfrac(a, out):
    w = cfrac.even_rational_decompose(a.p, a.q)
    cv = cfrac.convergents(w)
    out.emit({"p": a.p, "q": a.q, "word": list(w.entries), "p_k": list(cv.p), "q_k": list(cv.q)},
             [[e] for e in w.entries], ["entry"])


def _cmd_classify(a, out):
    z = parse_complex(a.z)
    cell = cfrac.classify_point(z, boundary_eps=a.boundary_eps, strict=True)
    d = cell.as_dict()
    out.emit(d, [[d["kind"], d["shift"], " ".join(map(str, d["word"])), d["height"]]],
             ["kind", "shift", "word", "height"])


def _cmd_genfun(a, out):
    z = parse_complex(a.z)
    if a.delta not in (0, 1):
        raise UsageError("--delta must be 0 or 1")
    v, e = genfun.phi_strip(a.delta, a.x, z, a.quad)
    out.emit({"delta": a.delta, "x": a.x, "z": _cplx(z), **_cplx(v), "error_estimate": e},
             [[v.real, v.imag, e]], ["re", "im", "err"])


def _cmd_biortho(a, out):
    x = parse_range(a.grid)
    ev = biortho.BiorthoEvaluator(quad=a.quad)
    if a.which == "h0":
        v, e = ev.h0(x)
    else:
        if a.n is None or a.n == 0:
            raise UsageError("--n must be a nonzero integer for h and m")
        v, e = ev.value("H" if a.which == "h" else "M", a.n, x)
    v = np.asarray(v, dtype=complex)
    rows = [[xi, vi.real, vi.imag, ei] for xi, vi, ei in zip(x, v, e)]
    payload = {"which": a.which, "n": a.n, "rows": [{"x": r[0], "re": r[1], "im": r[2], "err": r[3]} for r in rows]}
    out.emit(payload, rows, ["x", "re", "im", "err"])


def _read_samples_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rd = csv.DictReader(fh)
        if rd.fieldnames is None or not {"t", "re"} <= set(rd.fieldnames):
            raise UsageError("samples CSV needs columns t,re[,im]")
        rows = [(float(r["t"]), float(r["re"]), float(r.get("im") or 0.0)) for r in rd]
    if len(rows) < 2:
        raise UsageError("samples CSV needs at least two rows")
    t, re_, im_ = (np.array(c) for c in zip(*sorted(rows)))
    if np.any(np.diff(t) <= 0):
        raise UsageError("sample abscissae must be distinct")
    return t, re_ + 1j * im_


def _cmd_hfs(a, out):
    t, v = _read_samples_csv(a.input)

    def f(x):
        x = np.asarray(x, dtype=float)
        inside = (x >= t[0]) & (x <= t[-1])
        return np.where(inside, np.interp(x, t, v.real) + 1j * np.interp(x, t, v.imag), 0)

    tf = hfs.TestFunction(f, (t[0], t[-1]), tail_bound=float(np.max(np.abs(v))) or 1.0)
    c = hfs.analyze(tf, a.nmax, tol=a.tol or 1e-6)
    data = c.to_json()
    rows = [["h", r["n"], r["re"], r["im"]] for r in data["h"]] + [["m", r["n"], r["re"], r["im"]] for r in data["m"]]
    out.emit(data, rows, ["family", "n", "re", "im"])


def _cmd_kg(a, out):
    with open(a.samples, encoding="utf-8") as fh:
        s = kleingordon.KGSamples.from_json(json.load(fh))
    xs, ys = parse_grid2(a.grid)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    v, e, tail = kleingordon.kg_reconstruct(s, X, Y, quad=a.quad)
    rows = [[x, y, val.real, val.imag, err] for x, y, val, err in zip(X.ravel(), Y.ravel(), v.ravel(), e.ravel())]
    payload = {"N": s.N, "tail_estimate": tail,
               "rows": [{"x": r[0], "y": r[1], "re": r[2], "im": r[3], "err": r[4]} for r in rows]}
    out.emit(payload, rows, ["x", "y", "re", "im", "err"])


def _cmd_transfer(a, out):
    if a.iterate < 0:
        raise UsageError("--iterate must be nonnegative")
    g = transfer.transfer_iterate(transfer.GridFunction.constant(1.0, a.nodes), a.iterate)[-1]
    rows = [[x, v.real, v.imag, g.err] for x, v in zip(g.nodes, g.values)]
    payload = {"iterate": a.iterate, "integral": _cplx(g.integral()), "value_at_zero": _cplx(g.value_at_zero),
               "error_estimate": g.err, "rows": [{"x": r[0], "re": r[1], "im": r[2]} for r in rows]}
    out.emit(payload, rows, ["x", "re", "im", "err"])


def _cmd_selftest(a, out):
    checks, timing = selftest.run_suite(quick=a.suite == "quick")
    payload = {"suite": a.suite, "checks": [
        {"criterion": c.criterion, "name": c.name, "ok": c.ok, "value": c.value, "tol": c.tol, "detail": c.detail}
        for c in checks], "seconds": timing}
    if out.fmt == "json":
        out.emit(payload)
    else:
        out.write(selftest.format_report(checks, timing) + "\n")
    return 0 if all(c.ok for c in checks) else 2


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hyperfourier", description=__doc__.splitlines()[0])
    p.add_argument("--tol", type=float, default=None, help="absolute tolerance for all quadratures (default 1e-10)")
    p.add_argument("--out", default=None, help="output path, or 'csv' / 'json' for stdout in that format")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("theta", help="Theta_kind(z)")
    s.add_argument("--kind", type=int, choices=(2, 3, 4), required=True)
    s.add_argument("--z", required=True)
    s.set_defaults(func=_cmd_theta)

    s = sub.add_parser("lambda", help="modular lambda and its derivative")
    s.add_argument("--z", required=True)
    s.set_defaults(func=_cmd_lambda)

    s = sub.add_parser("tau", help="Schwarz triangle map, the inverse of lambda")
    s.add_argument("--z", required=True)
    s.set_defaults(func=_cmd_tau)

    s = sub.add_parser("spoly", help="exact Schwarz triangle polynomial coefficients")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--format", choices=("json", "csv"), default=None)
    s.set_defaults(func=_cmd_spoly)

    s = sub.add_parser("cfrac", help="even continued fraction word of p/q")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.set_defaults(func=_cmd_cfrac)

    s = sub.add_parser("classify", help="partition cell of a half-plane point")
    s.add_argument("--z", required=True)
    s.add_argument("--boundary-eps", type=float, default=1e-9)
    s.set_defaults(func=_cmd_classify)

    s = sub.add_parser("genfun", help="continued generating function on the strip")
    s.add_argument("--delta", type=int, required=True)
    s.add_argument("--x", type=float, required=True)
    s.add_argument("--z", required=True)
    s.set_defaults(func=_cmd_genfun)

    s = sub.add_parser("biortho", help="H0, H_n or M_n on a grid")
    s.add_argument("--which", choices=("h0", "h", "m"), required=True)
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--grid", required=True)
    s.set_defaults(func=_cmd_biortho, default_fmt="csv")

    s = sub.add_parser("hfs", help="hyperbolic Fourier analysis of sampled data")
    hs = s.add_subparsers(dest="action", required=True, parser_class=_Parser)
    h = hs.add_parser("analyze")
    h.add_argument("--input", required=True)
    h.add_argument("--nmax", type=int, required=True)
    h.set_defaults(func=_cmd_hfs)

    s = sub.add_parser("kg", help="Klein-Gordon reconstruction from axis samples")
    ks = s.add_subparsers(dest="action", required=True, parser_class=_Parser)
    k = ks.add_parser("reconstruct")
    k.add_argument("--samples", required=True)
    k.add_argument("--grid", required=True)
    k.set_defaults(func=_cmd_kg, default_fmt="csv")

    s = sub.add_parser("transfer", help="iterate the Gauss map transfer operator on 1")
    s.add_argument("--iterate", type=int, required=True)
    s.add_argument("--nodes", type=int, default=transfer.DEFAULT_NODES)
    s.set_defaults(func=_cmd_transfer, default_fmt="csv")

    s = sub.add_parser("selftest", help="run the acceptance checks")
    s.add_argument("--suite", choices=("quick", "full"), default="quick")
    s.set_defaults(func=_cmd_selftest, default_fmt="text")
    return p


_VALUE_FLAGS = ("--grid", "--z", "--x", "--tol")


def _glue_negative_values(argv):
    # argparse reads "-3:3:0.5" or "-0.5+1i" as an option; attach such values to their flag
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and not nxt.startswith("--"):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
        else:
            out.append(tok)
    return out


def run(argv=None) -> int:
    parser = build_parser()
    try:
        argv = _glue_negative_values(sys.argv[1:] if argv is None else list(argv))
        a = parser.parse_args(argv)
        if a.tol is not None and not a.tol > 0:
            raise UsageError("--tol must be positive")
        a.quad = genfun.QuadConfig(abs_tol=a.tol or 1e-10)
        out = _Output(a.out, getattr(a, "default_fmt", "json"))
        code = a.func(a, out)
        return int(code or 0)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except (NumericalFailure, ArithmeticError, BoundaryAmbiguous) as exc:
        sys.stderr.write(f"numerical failure: {exc}\n")
        return 2
    except (DomainError, ValueError, OSError) as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
