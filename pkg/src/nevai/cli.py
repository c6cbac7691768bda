"""Command-line front end: grids, error tables, rate studies, reconstruction.

Every subcommand writes its artifacts into --out-dir with deterministic
names and fixed float formatting (17 significant digits, comma separator,
'\\n' line endings, '#'-prefixed comment headers), so reruns with identical
flags are byte-identical and diffs stay meaningful.  A JSON run manifest is
written next to the outputs even when a command fails.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import imaging, testbed
from .chebyshev import make_basis
from .errors import (DegenerateDenominatorError, DomainError,
                     MissingDerivativesError, NonFiniteIntegrandError,
                     PairingError, ShapeMismatchError, UnknownFunctionError)
from .evaluation import (RATE_GRID_LIMIT, RATE_GRID_POINTS, distance_rate,
                         error_rows, evaluate_operator_grid, exact_grid,
                         square_grid)
from .metrics import ErrorReport, fit_rate
from .operators import Family, OperatorConfig

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

_FAMILY_TOKENS = {
    "nevai": Family.GENERALIZED,
    "generalized": Family.GENERALIZED,
    "kantorovich": Family.KANTOROVICH,
    "hermite": Family.HERMITE,
}


@dataclass
class RunManifest:
    """What a run did: inputs, parameters, artifacts, timing, outcome."""

    subcommand: str
    flags: dict
    n: object
    s: object
    r: object
    grid: object
    target: object
    outputs: list
    wall_seconds: float
    exit_code: int
    error: object


def _fmt(v) -> str:
    return f"{float(v):.17g}"


def _write_csv(path, comments, rows):
    with open(path, "w", newline="\n") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


def _write_matrix_csv(path, comments, matrix):
    rows = ([_fmt(v) for v in row] for row in np.asarray(matrix, dtype=float))
    _write_csv(path, comments, rows)


def _int_list(text: str):
    try:
        values = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty n list")
    return values


def _family(token: str) -> Family:
    try:
        return _FAMILY_TOKENS[token]
    except KeyError:
        raise DomainError(f"unknown operator {token!r}; choose from "
                          f"{', '.join(sorted(_FAMILY_TOKENS))}") from None


def _threads(args):
    if args.threads is not None:
        return args.threads
    env = os.environ.get("NEVAI_THREADS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise DomainError(f"NEVAI_THREADS is not an integer: {env!r}") from None
    return None


def _resolve_field(family: Family, fid: str):
    fn = testbed.lookup(fid)
    if family is Family.HERMITE:
        testbed.require_taylor_compatible(fn)
    return fn


def _config(args, family: Family) -> OperatorConfig:
    r = getattr(args, "r", 0)
    return OperatorConfig(family=family, n=args.n, s=args.s,
                          r=r if family is Family.HERMITE else 0)


def _config_comments(family, fid, n, s, r, grid_size):
    lines = [f"operator = {family.value}", f"function = {fid}", f"n = {n}",
             f"s = {_fmt(s)}"]
    if family is Family.HERMITE:
        lines.append(f"r = {r}")
    if grid_size:
        lines.append(f"grid = {grid_size}x{grid_size} pixel-centered, "
                     f"margin 1/{2 * grid_size}")
    return lines


def cmd_nodes(args):
    basis = make_basis(args.n)
    path = os.path.join(args.out_dir, f"nodes_n{args.n}.csv")
    comments = [f"chebyshev zeros and cotes numbers, n = {args.n}",
                "columns: k,x_k,lambda_k"]
    rows = ((str(k + 1), _fmt(basis.nodes[k]), _fmt(basis.cotes[k]))
            for k in range(args.n))
    _write_csv(path, comments, rows)
    return [path]


def cmd_eval(args):
    family = _family(args.operator)
    fn = _resolve_field(family, args.function)
    cfg = _config(args, family)
    xs = square_grid(args.grid_size)
    exact = exact_grid(fn.field, xs, xs)
    approx = evaluate_operator_grid(cfg, fn.field, xs, xs, _threads(args))
    path = os.path.join(args.out_dir,
                        f"eval_{family.value}_{args.function}_n{args.n}.csv")
    comments = _config_comments(family, args.function, args.n, args.s,
                                getattr(args, "r", 0), args.grid_size)
    comments.append("columns: x,y,re_f,im_f,re_approx,im_approx,abs_err")

    def rows():
        for i, x in enumerate(xs):
            for j, y in enumerate(xs):
                f = exact[i, j]
                a = approx[i, j]
                yield (_fmt(x), _fmt(y), _fmt(f.real), _fmt(f.imag),
                       _fmt(a.real), _fmt(a.imag), _fmt(abs(f - a)))

    _write_csv(path, comments, rows())
    return [path]


def cmd_table(args):
    family = _family(args.operator)
    fn = _resolve_field(family, args.function)
    rows = error_rows(family, fn.field, args.n_list, args.s,
                      getattr(args, "r", 0) if family is Family.HERMITE else 0,
                      args.grid_size, _threads(args))
    path = os.path.join(args.out_dir,
                        f"table_{family.value}_{args.function}.csv")
    comments = _config_comments(family, args.function, args.n_list, args.s,
                                getattr(args, "r", 0), args.grid_size)
    comments.append("columns: n," + ",".join(ErrorReport.FIELDS))
    out_rows = ((str(n),) + tuple(_fmt(getattr(rep, f)) for f in ErrorReport.FIELDS)
                for n, rep in rows)
    _write_csv(path, comments, out_rows)
    return [path]


def cmd_contour(args):
    family = _family(args.operator)
    fn = _resolve_field(family, args.function)
    cfg = _config(args, family)
    xs = square_grid(args.grid_size)
    exact = exact_grid(fn.field, xs, xs)
    approx = evaluate_operator_grid(cfg, fn.field, xs, xs, _threads(args))
    comments = _config_comments(family, args.function, args.n, args.s,
                                getattr(args, "r", 0), args.grid_size)
    comments.append("row-major matrix; rows follow x, columns follow y")
    stem = os.path.join(args.out_dir,
                        f"contour_{family.value}_{args.function}_n{args.n}")
    paths = [f"{stem}_exact.csv", f"{stem}_approx.csv", f"{stem}_error.csv"]
    _write_matrix_csv(paths[0], comments, np.abs(exact))
    _write_matrix_csv(paths[1], comments, np.abs(approx))
    _write_matrix_csv(paths[2], comments, np.abs(exact - approx))
    return paths


def cmd_image(args):
    amp = imaging.load_amplitude(args.amplitude)
    if args.phase:
        phase = imaging.read_phase_csv(args.phase)
    else:
        phase = np.zeros_like(amp)
    img = imaging.ComplexImage(amplitude=amp, phase=phase)
    rec = imaging.reconstruct(img, args.n, args.s, threads=_threads(args))
    quality = imaging.reconstruction_quality(img, rec)

    amp_pgm = os.path.join(args.out_dir, f"recon_amplitude_n{args.n}.pgm")
    amp_png = os.path.join(args.out_dir, f"recon_amplitude_n{args.n}.png")
    phase_csv = os.path.join(args.out_dir, f"recon_phase_n{args.n}.csv")
    metrics_csv = os.path.join(args.out_dir, f"recon_metrics_n{args.n}.csv")
    imaging.write_pgm(amp_pgm, rec.amplitude)
    imaging.write_png(amp_png, rec.amplitude)
    imaging.write_phase_csv(phase_csv, rec.phase)
    comments = [f"amplitude = {args.amplitude}",
                f"phase = {args.phase or '(zero)'}",
                f"n = {args.n}", f"s = {_fmt(args.s)}",
                f"image = {img.height}x{img.width}",
                "columns: channel,rmse,psnr_db,ssim"]
    rows = ((ch, _fmt(q.rmse), _fmt(q.psnr_db), _fmt(q.ssim))
            for ch, q in sorted(quality.items()))
    _write_csv(metrics_csv, comments, rows)
    return [amp_pgm, amp_png, phase_csv, metrics_csv]


def cmd_rate(args):
    if _family(args.operator) is not Family.KANTOROVICH:
        raise DomainError("the distance-sup rate study is defined for the "
                          "kantorovich family only")
    path = os.path.join(args.out_dir, f"rate_s{_fmt(args.s)}.csv")
    if args.errors_csv:
        data = np.loadtxt(args.errors_csv, delimiter=",", comments="#", ndmin=2)
        ns, errs = data[:, 0], data[:, 1]
        est = fit_rate(ns, errs)
        sups = tuple(float(e) for e in errs)
        n_list = tuple(int(n) for n in ns)
        source = f"errors from {args.errors_csv}"
    else:
        report = distance_rate(args.s, args.n_list)
        est = report.estimate
        sups = report.sups
        n_list = report.n_list
        source = (f"sup of the cell-averaged operator applied to the distance "
                  f"function, {RATE_GRID_POINTS}x{RATE_GRID_POINTS} grid over "
                  f"[-{RATE_GRID_LIMIT}, {RATE_GRID_LIMIT}]")
    comments = [f"s = {_fmt(args.s)}", source,
                f"exponent = {_fmt(est.exponent)}",
                f"log_factor_detected = {est.log_factor_detected}",
                "columns: n,sup"]
    _write_csv(path, comments,
               ((str(n), _fmt(v)) for n, v in zip(n_list, sups)))
    print(f"exponent {est.exponent:.6f} "
          f"log_factor_detected {est.log_factor_detected}")
    return [path]


def _add_common(sp):
    sp.add_argument("--out-dir", default=".", help="directory for artifacts")
    sp.add_argument("--threads", type=int, default=None,
                    help="worker threads (default: NEVAI_THREADS, else all cores)")


def _add_operator_args(sp, with_n=True):
    sp.add_argument("operator", choices=sorted(_FAMILY_TOKENS),
                    help="operator family (nevai = generalized)")
    sp.add_argument("function", help="built-in function id, one of "
                    + ", ".join(testbed.FUNCTION_IDS))
    if with_n:
        sp.add_argument("-n", type=int, required=True, help="basis degree")
    sp.add_argument("-s", type=float, default=2.0, help="kernel exponent")
    sp.add_argument("-r", type=int, default=2,
                    help="taylor degree (hermite only)")
    sp.add_argument("--grid-size", type=int, default=101,
                    help="evaluation grid points per axis")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nevai",
        description="Rational kernel-weighted approximation operators on "
                    "the square: evaluation grids, error tables, rate "
                    "studies, and image reconstruction.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sp = sub.add_parser("nodes", help="chebyshev zeros and cotes numbers")
    sp.add_argument("-n", type=int, required=True)
    _add_common(sp)
    sp.set_defaults(func=cmd_nodes)

    sp = sub.add_parser("eval", help="pointwise evaluation grid CSV")
    _add_operator_args(sp)
    _add_common(sp)
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("table", help="error table over a list of n")
    _add_operator_args(sp, with_n=False)
    sp.add_argument("--n-list", type=_int_list, required=True,
                    help="comma-separated basis degrees, e.g. 10,20,30")
    _add_common(sp)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("contour", help="|f|, |approx| and error matrices")
    _add_operator_args(sp)
    _add_common(sp)
    sp.set_defaults(func=cmd_contour)

    sp = sub.add_parser("image", help="amplitude/phase reconstruction")
    sp.add_argument("amplitude", help="grayscale image path (PGM/PNG/...)")
    sp.add_argument("--phase", default=None,
                    help="phase CSV path (default: zero phase)")
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("-s", type=float, default=2.0)
    _add_common(sp)
    sp.set_defaults(func=cmd_image)

    sp = sub.add_parser("rate", help="distance-sup decay rate study")
    sp.add_argument("--operator", default="kantorovich",
                    help="family (kantorovich only)")
    sp.add_argument("-s", type=float, default=2.0)
    sp.add_argument("--n-list", type=_int_list, default=[8, 16, 32, 64])
    sp.add_argument("--errors-csv", default=None,
                    help="fit a rate to an existing n,error CSV instead of "
                         "running the sup study")
    _add_common(sp)
    sp.set_defaults(func=cmd_rate)

    return parser


def _manifest(args, outputs, elapsed, code, error) -> RunManifest:
    flags = {k: v for k, v in vars(args).items() if k != "func"}
    grid_size = getattr(args, "grid_size", None)
    if args.subcommand == "rate":
        grid = (f"{RATE_GRID_POINTS}x{RATE_GRID_POINTS} over "
                f"[-{RATE_GRID_LIMIT}, {RATE_GRID_LIMIT}]")
    elif grid_size:
        grid = f"{grid_size}x{grid_size} pixel-centered"
    else:
        grid = None
    return RunManifest(
        subcommand=args.subcommand,
        flags=flags,
        n=getattr(args, "n", None) or getattr(args, "n_list", None),
        s=getattr(args, "s", None),
        r=getattr(args, "r", None),
        grid=grid,
        target=getattr(args, "function", None) or getattr(args, "amplitude", None),
        outputs=list(outputs),
        wall_seconds=elapsed,
        exit_code=code,
        error=error,
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.perf_counter()
    outputs = []
    code = EXIT_OK
    error = None
    try:
        os.makedirs(args.out_dir, exist_ok=True)
        outputs = args.func(args)
    except (UnknownFunctionError, PairingError, DomainError,
            ShapeMismatchError, ValueError) as exc:
        code, error = EXIT_USAGE, str(exc)
    except (DegenerateDenominatorError, NonFiniteIntegrandError,
            MissingDerivativesError) as exc:
        code, error = EXIT_NUMERIC, str(exc)
    except OSError as exc:
        code, error = EXIT_IO, str(exc)
    finally:
        manifest = _manifest(args, outputs, time.perf_counter() - started,
                             code, error)
        try:
            mpath = os.path.join(args.out_dir,
                                 f"{args.subcommand}_manifest.json")
            with open(mpath, "w", newline="\n") as fh:
                json.dump(asdict(manifest), fh, indent=2, sort_keys=True)
                fh.write("\n")
        except OSError:
            pass
    if error is not None:
        print(f"error: {error}", file=sys.stderr)
    else:
        for path in outputs:
            print(f"wrote {path}")
    return code


if __name__ == "__main__":
    sys.exit(main())
