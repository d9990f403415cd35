"""Command line entry point: ``fatcw verify|emit|invert|example``.

Exit codes: 0 pass, 1 check failure (or non-converged inversion),
2 usage or I/O error (or a point outside the handle).
"""

import argparse
import json
import sys

import numpy as np

from . import harness
from .handle import HandleSpec
from .kernels import default_context
from .maps import NoConvergence, NotInHandle, phi_hat_inverse, theta_map

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _parse_kv(items):
    out = {}
    for item in items or ():
        if "=" not in item:
            raise UsageError(f"expected key=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[k.strip()] = float(v)
        except ValueError:
            raise UsageError(f"tolerance {k!r} is not a number: {v!r}") from None
    return out


def read_config(path):
    """Plain ``key = value`` lines; ``#`` starts a comment.  ``seed`` is special."""
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    items = [ln.split("#", 1)[0].strip() for ln in lines]
    return _parse_kv([ln.replace(" ", "") for ln in items if ln])


def _write(path, text):
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from None


def cmd_verify(args):
    overrides = read_config(args.config) if args.config else {}
    seed = int(overrides.pop("seed", args.seed))
    if args.seed_given:
        seed = args.seed
    overrides.update(_parse_kv(args.tol))
    try:
        report = harness.run_suite(args.suite, overrides, seed)
    except (harness.UnknownSuite, harness.UnknownTolerance) as exc:
        raise UsageError(str(exc)) from None
    ok = report.passed
    if args.strict:
        again = harness.run_suite(args.suite, overrides, seed)
        same = again.to_csv() == report.to_csv()
        print(f"{'PASS' if same else 'FAIL'} strict: repeated run is byte-identical")
        ok = ok and same
    print(report.summary())
    if args.report:
        _write(args.report, report.to_csv())
    return EXIT_PASS if ok else EXIT_FAIL


def cmd_emit(args):
    fmt = args.format or ("obj" if args.object == "mesh" else "csv")
    req = harness.EmitRequest(
        args.object, n=args.n, m=args.m, samples=args.samples, fmt=fmt,
        t_min=args.t_min, t_max=args.t_max, u_max=args.u_max, v_max=args.v_max, segments=args.segments,
    )
    try:
        text = harness.emit_text(req)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_PASS


def _parse_vec(text):
    text = text.strip()
    if not text:
        return np.zeros(0)
    try:
        return np.array([float(x) for x in text.split(",")])
    except ValueError:
        raise UsageError(f"bad coordinate list {text!r}") from None


def cmd_invert(args):
    try:
        n, m = (int(x) for x in args.nm.split(","))
        spec = HandleSpec(n, m)
    except ValueError as exc:
        raise UsageError(f"bad --nm {args.nm!r}: {exc}") from None
    if ";" not in args.point:
        raise UsageError('point must look like "x1,...,xn;y1,...,ym"')
    xs, ys = args.point.split(";", 1)
    x, y = _parse_vec(xs), _parse_vec(ys)
    if x.size != n or y.size != m:
        raise UsageError(f"point has dims ({x.size}, {y.size}), handle is ({n}, {m})")
    inverse = phi_hat_inverse if args.hat else theta_map
    try:
        u, v, diag = inverse(default_context(), spec, x[None, :], y[None, :], diagnostics=True)
    except NotInHandle as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoConvergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    out = {
        "u": [float(a) for a in u[0]],
        "v": [float(b) for b in v[0]],
        "residual": float(diag.residual[0]),
        "jacobian_det": float(diag.jacobian_det[0]),
        "newton_iters": int(diag.newton_iters[0]),
        "fallback": bool(diag.used_fallback[0]),
    }
    print(json.dumps(out))
    return EXIT_PASS


def cmd_example(args):
    try:
        report = harness.example_audit(args.name, args.seed, args.samples)
    except harness.UnknownSuite as exc:
        raise UsageError(str(exc)) from None
    if args.audit:
        print(report.summary())
    else:
        print(f"{args.name}: {'PASS' if report.passed else 'FAIL'} ({len(report.checks)} checks)")
    if args.report:
        _write(args.report, report.to_csv())
    return EXIT_PASS if report.passed else EXIT_FAIL


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser():
    p = _Parser(prog="fatcw", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", help="kernels, geometry, maps, cw, smoothing or all")
    v.add_argument("--tol", action="append", metavar="KEY=VALUE", help="override a tolerance")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--strict", action="store_true", help="also require a byte-identical rerun")
    v.add_argument("--config", help="key = value file of default tolerances (and seed)")
    v.add_argument("--report", help="write the CSV report here")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("emit", help="write geometry (csv polylines, obj meshes)")
    e.add_argument("object", choices=harness.EMIT_OBJECTS)
    e.add_argument("--n", type=int, default=1)
    e.add_argument("--m", type=int, default=1)
    e.add_argument("--samples", type=int, default=512)
    e.add_argument("--t-min", type=float, default=-1.0)
    e.add_argument("--t-max", type=float, default=2.0)
    e.add_argument("--u-max", type=float, default=2.0)
    e.add_argument("--v-max", type=float, default=2.5)
    e.add_argument("--segments", type=int, default=64)
    e.add_argument("--out", help="output path (default stdout)")
    e.add_argument("--format", choices=("csv", "obj"))
    e.set_defaults(func=cmd_emit)

    i = sub.add_parser("invert", help="invert the handle map at a point")
    i.add_argument("--nm", required=True, help="handle dimensions, e.g. 2,1")
    i.add_argument("--point", required=True, help='image point "x1,...,xn;y1,...,ym"')
    i.add_argument("--hat", action="store_true", help="invert the singular map instead")
    i.set_defaults(func=cmd_invert)

    x = sub.add_parser("example", help="audit a worked example complex")
    x.add_argument("name", choices=("iota", "tdn", "fat-s2"))
    x.add_argument("--audit", action="store_true", help="print every check")
    x.add_argument("--seed", type=int, default=0)
    x.add_argument("--samples", type=int, default=10_000)
    x.add_argument("--report", help="write the CSV report here")
    x.set_defaults(func=cmd_example)
    return p


def main(argv=None):
    parser = build_parser()
    raw = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(raw)
    args.seed_given = any(a == "--seed" or a.startswith("--seed=") for a in raw)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"fatcw: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
