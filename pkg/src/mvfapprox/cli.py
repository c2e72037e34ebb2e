"""Command line front end.

Exit codes: 0 success, 1 usage or file problems, 2 a computation refused
an input (singular sample, branch failure, class violation), 3 a check
suite found a failing property.
"""

import argparse
import math
import sys

import numpy as np

from .analysis import TRUTHS, approximation_order
from .checks import SUITES, run_suite
from .core import MatrixClass, ParamSamples
from .decompositions import DECOMPOSITIONS, decompose
from .errors import MvfError, SampleFileError
from .fileio import (
    dumps_json,
    factorization_payload,
    load_config,
    load_samples,
    write_curve_csv,
    write_diagnostics_csv,
)
from .operators import OperatorSpec
from .product import product_operator
from .sampling import DEFAULT_SEED


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems on stderr and exits 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"error: {message}\n")


def _build_parser():
    parser = _Parser(prog="mvf", description=__doc__)
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser(
        "decompose", help="factor every sample in a file", parents=[]
    )
    p.add_argument("--kind", required=True, choices=sorted(DECOMPOSITIONS))
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)

    p = sub.add_parser("approximate", help="build a curve through samples")
    p.add_argument("--input", required=True)
    p.add_argument("--config", required=True)
    p.add_argument("--output", required=True)

    p = sub.add_parser("order", help="empirical convergence study")
    p.add_argument("--config", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--levels", type=int, default=None)

    p = sub.add_parser("ellipsoid-demo", help="write the rotating ellipsoid artifact")
    p.add_argument("--output", required=True)

    p = sub.add_parser("check", help="run a named self-check suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    return parser


def _computation_error(exc):
    message = str(exc)
    index = getattr(exc, "sample_index", None)
    if index is not None:
        message = f"{message} at sample {index}"
    print(f"error: {message}", file=sys.stderr)
    return 2


def _cmd_decompose(args):
    samples = load_samples(args.input)
    rows = []
    for i in range(samples.count):
        try:
            rows.append(decompose(args.kind, samples.matrices[i]))
        except MvfError as exc:
            exc.sample_index = i
            raise
    payload = factorization_payload(args.kind, samples, rows)
    with open(args.output, "w") as fh:
        fh.write(dumps_json(payload) + "\n")
    return 0


def _builder_from_config(config):
    if "decomposition" in config:
        factor_specs = None
        if "factor_operators" in config:
            factor_specs = tuple(
                OperatorSpec.from_config(c) for c in config["factor_operators"]
            )
        return product_operator(config["decomposition"], factor_specs)
    if "operator" in config:
        return OperatorSpec.from_config(config["operator"])
    raise SampleFileError(
        "config needs either an 'operator' or a 'decomposition' entry"
    )


def _cmd_approximate(args):
    samples = load_samples(args.input)
    config = load_config(args.config)
    try:
        builder = _builder_from_config(config)
    except ValueError as exc:
        raise SampleFileError(str(exc)) from None
    grid_points = config.get("grid_points", 201)
    if not isinstance(grid_points, int) or grid_points < 2:
        raise SampleFileError("grid_points must be an integer of at least 2")
    curve = builder.build(samples)
    ts = np.linspace(samples.t[0], samples.t[-1], grid_points)
    mats = np.stack([curve(t) for t in ts])
    write_curve_csv(args.output, ts, mats)
    diagnostics = config.get("diagnostics")
    if diagnostics:
        write_diagnostics_csv(diagnostics, ts, mats)
    return 0


def _cmd_order(args):
    config = load_config(args.config)
    truth_name = config.get("truth")
    if truth_name not in TRUTHS:
        raise SampleFileError(
            f"config 'truth' must be one of {sorted(TRUTHS)}"
        )
    truth = TRUTHS[truth_name]
    try:
        builder = _builder_from_config(config)
    except ValueError as exc:
        raise SampleFileError(str(exc)) from None
    levels = args.levels if args.levels is not None else config.get("levels", 5)
    if not isinstance(levels, int):
        raise SampleFileError("levels must be an integer")
    report = approximation_order(
        truth, builder, truth.domain, truth.matrix_class, levels=levels
    )
    payload = {
        "truth": truth_name,
        "levels": levels,
        "hs": list(report.hs),
        "errors": list(report.errors),
        "slope": report.slope,
        "constant": report.constant,
        "exact": report.exact,
        "levels_used": report.levels_used,
    }
    with open(args.output, "w") as fh:
        fh.write(dumps_json(payload) + "\n")
    return 0


def _rot_x(a):
    c, s = math.cos(a), math.sin(a)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, -s], [0.0, s, c]])


def _rot_y(a):
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def _rot_z(a):
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _ellipsoid_frames():
    """Eleven SPD frames: a quarter turn about z, then an axis-length morph.

    The eigenframe is tilted out of the rotation plane so the sorted
    spectral factor varies continuously from frame to frame.
    """
    base = _rot_x(0.4) @ _rot_y(0.3)
    start = np.array([1.0, 4.0, 9.0])
    end = np.array([2.0, 4.0, 6.0])
    ts = np.linspace(0.0, 1.0, 11)
    frames = []
    for t in ts:
        angle = 0.5 * math.pi * min(1.0, 2.0 * t)
        u = max(0.0, 2.0 * t - 1.0)
        axes = start ** (1.0 - u) * end**u
        v = _rot_z(angle) @ base
        a = (v * axes) @ v.T
        frames.append(0.5 * (a + a.T))
    return ts, np.stack(frames)


def _cmd_ellipsoid_demo(args):
    ts, frames = _ellipsoid_frames()
    samples = ParamSamples(ts, frames, MatrixClass.SPD)
    curve = product_operator("spectral").build(samples)
    diag_curve = curve.meta["factors"][1]
    grid = np.linspace(0.0, 1.0, 101)
    spectral_drift = 0.0
    linear_drift = 0.0
    grid_rows = []
    for t in grid:
        want = np.sort(np.diag(diag_curve(t)))
        got = np.linalg.eigvalsh(curve(t))
        spectral_drift = max(
            spectral_drift, float(np.max(np.abs(got - want) / want))
        )
        i = min(int(np.searchsorted(ts, t, side="right")) - 1, ts.size - 2)
        s = (t - ts[i]) / (ts[i + 1] - ts[i])
        blend = (1.0 - s) * frames[i] + s * frames[i + 1]
        lin = np.linalg.eigvalsh(blend)
        linear_drift = max(
            linear_drift, float(np.max(np.abs(lin - want) / want))
        )
        grid_rows.append(
            {
                "t": float(t),
                "spectral_eigs": got,
                "linear_eigs": lin,
                "target_eigs": want,
            }
        )
    payload = {
        "description": (
            "a tilted ellipsoid makes a quarter turn and then morphs its "
            "axis lengths; conjugation-based interpolation keeps the axis "
            "lengths on their interpolated track while entrywise linear "
            "blending distorts them between frames"
        ),
        "frames": [
            {
                "t": float(t),
                "matrix": m,
                "axes": np.sqrt(np.sort(np.linalg.eigvalsh(m))),
            }
            for t, m in zip(ts, frames)
        ],
        "grid": grid_rows,
        "axis_drift": {
            "spectral": spectral_drift,
            "linear": linear_drift,
        },
    }
    with open(args.output, "w") as fh:
        fh.write(dumps_json(payload) + "\n")
    return 0


def _cmd_check(args):
    rows = run_suite(args.suite, args.seed)
    failed = 0
    for row in rows:
        mark = "ok" if row.passed else "FAIL"
        detail = f"  {row.detail}" if row.detail else ""
        print(f"[{mark}] {args.suite}: {row.name}{detail}")
        failed += 0 if row.passed else 1
    if failed:
        print(f"{failed} of {len(rows)} checks failed", file=sys.stderr)
        return 3
    print(f"all {len(rows)} checks passed")
    return 0


_COMMANDS = {
    "decompose": _cmd_decompose,
    "approximate": _cmd_approximate,
    "order": _cmd_order,
    "ellipsoid-demo": _cmd_ellipsoid_demo,
    "check": _cmd_check,
}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits on bad usage; keep main() returning an int
        return exc.code if isinstance(exc.code, int) else 1
    if args.command is None:
        parser.print_usage(sys.stderr)
        print("error: a command is required", file=sys.stderr)
        return 1
    handler = _COMMANDS[args.command]
    try:
        return handler(args)
    except SampleFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except MvfError as exc:
        return _computation_error(exc)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
