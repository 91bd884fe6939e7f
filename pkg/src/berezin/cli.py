"""Command-line interface.

Subcommands: symbol, kernel, transform, heat, verify.  Tables are emitted
as CSV (with '#'-prefixed metadata comments, 17 significant digits) or as
JSON ({params, rows, meta}).  Exit codes: 0 ok, 1 verification failure,
2 usage or parameter error, 3 numerical failure.

Grid rows are computed via a thread pool capped by BEREZIN_THREADS and
written in deterministic grid order.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .geometry import BallPoint, Parameters
from .jacobi import JacobiParams, berezin_profile, forward, inverse, transform_symbol
from .kernels import berezin_kernel, berezin_kernel_alt
from .numerics import QuadratureSpec
from .spectral import berezin_symbol, heat_kernel
from .verification import PARAMETER_GRID, run_suite, SUITES

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


class UsageError(ValueError):
    pass


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _parse_grid(text: str) -> list[float]:
    """Parse 'a:b:step' (inclusive endpoints) or a comma list 'x,y,z'."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"grid must be a:b:step, got {text!r}")
        a, b, step = (float(v) for v in parts)
        if step <= 0 or b < a:
            raise UsageError("grid needs step > 0 and b >= a")
        count = int(math.floor((b - a) / step + 0.5)) + 1
        return [a + i * step for i in range(count) if a + i * step <= b + 1e-12]
    return [float(v) for v in text.split(",") if v.strip()]


def _parse_point(text: str, n: int) -> BallPoint:
    vals = [float(v) for v in text.split(",")]
    if len(vals) != 2 * n:
        raise UsageError(
            f"point needs {2 * n} comma-separated floats (re,im per coordinate)"
        )
    coords = [complex(vals[2 * i], vals[2 * i + 1]) for i in range(n)]
    return BallPoint(coords)


def _params_from_args(args) -> Parameters:
    try:
        return Parameters(n=args.n, nu=args.nu, l=args.l)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("BEREZIN_THREADS", "1")))
    except ValueError:
        return 1


def _map_ordered(fn, items):
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        return list(pool.map(fn, items))


def _emit(args, header: list[str], rows: list[list[str]], meta: dict) -> None:
    if args.out == "json":
        doc = {
            "params": meta.get("params"),
            "rows": [dict(zip(header, row)) for row in rows],
            "meta": {k: v for k, v in meta.items() if k != "params"},
        }
        print(json.dumps(doc, indent=2))
        return
    buf = io.StringIO()
    for key, val in meta.items():
        buf.write(f"# {key}: {json.dumps(val) if isinstance(val, dict) else val}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    sys.stdout.write(buf.getvalue())


def _meta(args, p: Parameters | None, extra: dict | None = None) -> dict:
    meta = {"command": args.command, "tolerance": args.tol}
    if p is not None:
        meta["params"] = {"n": p.n, "nu": p.nu, "l": p.l}
    if extra:
        meta.update(extra)
    return meta


def cmd_symbol(args) -> int:
    p = _params_from_args(args)
    lams = _parse_grid(args.lam)
    if not lams:
        raise UsageError("empty lambda grid")
    vals = _map_ordered(lambda lam: berezin_symbol(lam, p), lams)
    rows = [[_fmt(lam), _fmt(val)] for lam, val in zip(lams, vals)]
    _emit(args, ["lambda", "g"], rows, _meta(args, p))
    return EXIT_OK


def cmd_kernel(args) -> int:
    p = _params_from_args(args)
    z = _parse_point(args.z, p.n)
    w = _parse_point(args.w, p.n)
    rows = []
    if args.form in ("radial", "both"):
        v = berezin_kernel(z, w, p)
        rows.append(["radial", _fmt(v.real), _fmt(v.imag), _fmt(abs(v))])
    if args.form in ("euler", "both"):
        v = berezin_kernel_alt(z, w, p)
        rows.append(["euler", _fmt(v.real), _fmt(v.imag), _fmt(abs(v))])
    meta_extra = {"z": args.z, "w": args.w}
    if args.form == "both":
        v1 = berezin_kernel(z, w, p)
        v2 = berezin_kernel_alt(z, w, p)
        meta_extra["relative_difference"] = _fmt(abs(v1 - v2) / abs(v1))
    _emit(args, ["form", "re", "im", "abs"], rows, _meta(args, p, meta_extra))
    return EXIT_OK


def cmd_transform(args) -> int:
    p = _params_from_args(args)
    jp = JacobiParams.from_parameters(p)
    spec = QuadratureSpec(rel_tol=args.tol)
    if args.profile == "berezin":
        profile = berezin_profile(p)
    elif args.profile.startswith("csv:"):
        ts, vals = _read_profile_csv(args.profile[4:])
        profile = _interp_profile(ts, vals)
    else:
        raise UsageError("--profile must be 'berezin' or 'csv:<path>'")
    if args.direction == "fwd":
        lams = _parse_grid(args.lam)
        if not lams:
            raise UsageError("empty lambda grid")
        vals = forward(profile, np.asarray(lams, dtype=np.complex128), jp, spec)
        rows = [[_fmt(lam), _fmt(v.real)] for lam, v in zip(lams, vals)]
        _emit(args, ["lambda", "value"], rows,
              _meta(args, p, {"direction": "fwd", "profile": args.profile}))
        return EXIT_OK
    # inverse direction: invert the transform of the chosen profile
    ts = _parse_grid(args.radial)
    if not ts:
        raise UsageError("empty radial grid")
    vals = inverse(transform_symbol(profile, jp, spec), np.asarray(ts), jp, spec)
    rows = [[_fmt(t), _fmt(v)] for t, v in zip(ts, np.atleast_1d(vals))]
    _emit(args, ["t", "value"], rows,
          _meta(args, p, {"direction": "inv", "profile": args.profile}))
    return EXIT_OK


def _read_profile_csv(path: str):
    ts, vals = [], []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#") or row[0] == "t":
                continue
            ts.append(float(row[0]))
            vals.append(float(row[1]))
    if len(ts) < 2:
        raise UsageError(f"profile csv {path!r} needs at least two rows")
    return np.asarray(ts), np.asarray(vals)


def _interp_profile(ts, vals):
    from .jacobi import RadialProfile

    T = float(ts[-1])

    def evaluator(xx):
        xx = np.asarray(xx, dtype=np.float64)
        return np.interp(xx, ts, vals, right=0.0)

    return RadialProfile(evaluator=evaluator, decay="compact", support=T)


def cmd_heat(args) -> int:
    p = _params_from_args(args)
    if args.t <= 0:
        raise UsageError("--t must be positive")
    radii = _parse_grid(args.radial)
    if not radii:
        raise UsageError("empty radial grid")
    z0 = BallPoint(np.zeros(p.n, dtype=np.complex128))

    def one(r: float):
        if not 0 <= r < 1:
            raise UsageError("radial grid for heat must lie in [0, 1)")
        w = BallPoint([complex(r)] + [0.0j] * (p.n - 1))
        return heat_kernel(args.t, z0, w, p)

    vals = _map_ordered(one, radii)
    rows = [[_fmt(r), _fmt(v.real), _fmt(v.imag)] for r, v in zip(radii, vals)]
    _emit(args, ["r", "re", "im"], rows, _meta(args, p, {"t": args.t}))
    return EXIT_OK


def cmd_verify(args) -> int:
    params_list = None
    if args.n is not None and args.nu is not None and args.l is not None:
        params_list = [_params_from_args(args)]
    results = run_suite(args.suite, quick=args.quick, params_list=params_list)
    rows = [[r.criterion, r.name, _fmt(r.measured), _fmt(r.tolerance),
             "pass" if r.passed else "FAIL", r.detail] for r in results]
    meta = {"command": "verify", "suite": args.suite, "quick": args.quick}
    if args.out == "json":
        _emit(args, ["criterion", "check", "measured", "tolerance", "status",
                     "detail"], rows, meta)
    else:
        for r in results:
            print(r.line())
    n_fail = sum(not r.passed for r in results)
    print(f"# {len(results) - n_fail}/{len(results)} checks passed",
          file=sys.stderr)
    return EXIT_OK if n_fail == 0 else EXIT_VERIFY_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="berezin",
        description="Berezin transform kernels and spectral calculus on the "
                    "complex hyperbolic ball",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add_params(sp, required=True):
        sp.add_argument("--n", type=int, required=required, default=None)
        sp.add_argument("--nu", type=float, required=required, default=None)
        sp.add_argument("--l", type=int, required=required, default=None)
        sp.add_argument("--tol", type=float, default=1e-10)
        sp.add_argument("--out", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("symbol", help="tabulate the closed-form spectral symbol")
    add_params(sp)
    sp.add_argument("--lambda", dest="lam", required=True,
                    help="grid a:b:step or comma list")
    sp.set_defaults(fn=cmd_symbol)

    sp = sub.add_parser("kernel", help="evaluate the Berezin kernel at (z, w)")
    add_params(sp)
    sp.add_argument("--z", required=True, help="re,im per coordinate")
    sp.add_argument("--w", required=True)
    sp.add_argument("--form", choices=("radial", "euler", "both"), default="both")
    sp.set_defaults(fn=cmd_kernel)

    sp = sub.add_parser("transform", help="forward/inverse Fourier-Jacobi transform")
    add_params(sp)
    sp.add_argument("--direction", choices=("fwd", "inv"), default="fwd")
    sp.add_argument("--profile", default="berezin",
                    help="'berezin' or 'csv:<path>' with columns t,value")
    sp.add_argument("--lambda", dest="lam", default="0.1:5:0.5")
    sp.add_argument("--radial", default="0:2:0.25",
                    help="radial output grid for --direction inv")
    sp.set_defaults(fn=cmd_transform)

    sp = sub.add_parser("heat", help="radial heat-kernel profile at time t")
    add_params(sp)
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--radial", default="0:0.9:0.1",
                    help="|w| grid, kernel evaluated at (0, w)")
    sp.set_defaults(fn=cmd_heat)

    sp = sub.add_parser("verify", help="run verification suites")
    add_params(sp, required=False)
    sp.add_argument("--suite", choices=sorted(SUITES), default="all")
    sp.add_argument("--quick", action="store_true",
                    help="reduced grids, runtime < 60 s for --suite all")
    sp.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors already
        return int(exc.code) if exc.code else EXIT_OK
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # numerical failures
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
