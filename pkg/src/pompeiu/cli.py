"""Command-line front end: decide / construct / verify / demo.

Exit codes: 0 success (property holds, verification passed, all checks
green), 2 malformed input, 10 property fails or verification exceeded its
threshold, 11 requested construction not applicable, 12 numerical budget
exhausted.  Reports are JSON (default) or CSV; ``--plot`` drops a PNG next
to the report file.
"""

from __future__ import annotations

import argparse
import io
import json
import logging
import os
import re
import sys
from pathlib import Path

import numpy as np

from .checks import CHECK_NAMES, run_all_checks
from .decision import decide_two_interval
from .exact_field import format_qfield
from .functions import (
    ConstructionNotApplicable,
    RecurrenceDepthError,
    construct_recurrence_extension_n,
    construct_three_interval_counterexample,
    function_from_descriptor,
    function_to_descriptor,
)
from .interval_sets import IntervalSet, ThreeIntervalParams, normalize_two
from .reporting import dumps_report, write_csv, write_json
from .verifier import GridSampler, QuadratureConfig, RandomSampler, verify_invariance

log = logging.getLogger("pompeiu")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_FAILS = 10
EXIT_NOT_APPLICABLE = 11
EXIT_BUDGET = 12


class _InputError(Exception):
    pass


def _configure_logging() -> None:
    level_name = os.environ.get("POMPEIU_LOG", "").strip().upper()
    if level_name:
        level = getattr(logging, level_name, None)
        if not isinstance(level, int):
            level = logging.INFO
        logging.basicConfig(level=level, format="%(name)s %(levelname)s %(message)s")


def _read_inline_or_file(text: str) -> str:
    stripped = text.strip()
    if stripped.startswith("[") or stripped.startswith("{"):
        return stripped
    path = Path(text)
    if not path.exists():
        raise _InputError(f"{text!r} is neither inline JSON nor an existing file")
    return path.read_text()


def _load_interval_set(args) -> IntervalSet:
    if not args.set:
        raise _InputError("--set is required")
    raw = _read_inline_or_file(args.set)
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise _InputError(f"malformed interval-set JSON: {exc}") from exc
    if isinstance(data, list) and args.field_d is not None:
        data = {"field_d": args.field_d, "intervals": data}
    try:
        iset = IntervalSet.from_json(data)
    except ValueError as exc:
        raise _InputError(str(exc)) from exc
    if args.field_d is not None and iset.field_d not in (1, args.field_d):
        raise _InputError(
            f"--field-d {args.field_d} conflicts with endpoints in sqrt({iset.field_d})"
        )
    return iset


def _load_function(text: str):
    raw = _read_inline_or_file(text)
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise _InputError(f"malformed function JSON: {exc}") from exc
    # accept construct reports ("function") and decide reports (counterexample)
    if isinstance(data, dict) and "variant" not in data:
        if "function" in data:
            data = data["function"]
        elif "verdict" in data:
            data = data["verdict"].get("counterexample")
            if data is None:
                raise _InputError(
                    "this decide report carries no counterexample (property holds)"
                )
    try:
        return function_from_descriptor(data)
    except (ValueError, KeyError) as exc:
        raise _InputError(f"bad function descriptor: {exc}") from exc


def _parse_grid(text: str) -> GridSampler:
    parts = text.split(":")
    if len(parts) != 3:
        raise _InputError(f"--grid expects t0:t1:n, got {text!r}")
    try:
        t0, t1, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise _InputError(f"--grid expects t0:t1:n, got {text!r}") from exc
    return GridSampler(t0, t1, n)


def _sampler(args):
    if getattr(args, "random", None) is not None:
        return RandomSampler(args.random, seed=args.seed)
    if getattr(args, "grid", None):
        return _parse_grid(args.grid)
    return GridSampler(-10.0, 10.0, 201)


def _quadrature_config(args) -> QuadratureConfig:
    kwargs = {}
    if getattr(args, "abs_tol", None) is not None:
        kwargs["abs_tol"] = args.abs_tol
    if getattr(args, "rel_tol", None) is not None:
        kwargs["rel_tol"] = args.rel_tol
    try:
        return QuadratureConfig(**kwargs)
    except ValueError as exc:
        raise _InputError(str(exc)) from exc


def _params_json(params) -> dict:
    return {
        "ell": format_qfield(params.ell),
        "H": format_qfield(params.H),
        "L": format_qfield(params.L),
        "ell_float": float(params.ell),
        "H_float": float(params.H),
        "L_float": float(params.L),
    }


def _emit(args, report: dict, csv_spec, figure=None) -> None:
    """Write the report as JSON or CSV to --out (or stdout), plus the figure.

    ``figure`` is a callable taking the PNG path; the report content itself
    never depends on whether a figure was requested.
    """
    header, rows = csv_spec
    if args.out:
        out = Path(args.out)
        if args.format == "csv":
            write_csv(out, header, rows)
        else:
            write_json(out, report)
        print(f"wrote {out}")
        if args.plot and figure is not None:
            figure_path = out.with_suffix(".png")
            figure(figure_path)
            print(f"wrote {figure_path}")
    else:
        if args.plot:
            raise _InputError("--plot needs --out to place the figure next to")
        if args.format == "csv":
            buf = io.StringIO()
            write_csv(buf, header, rows)
            sys.stdout.write(buf.getvalue())
        else:
            sys.stdout.write(dumps_report(report))


def _trace(f, iset: IntervalSet, args) -> dict:
    if getattr(args, "grid", None):
        sampler = _parse_grid(args.grid)
        x0, x1, n = sampler.t0, sampler.t1, sampler.n
    else:
        pairs = iset.float_pairs()
        lo, hi = pairs[0][0], pairs[-1][1]
        span = hi - lo
        x0, x1, n = lo - 2.0 * span, hi + 2.0 * span, 801
    xs = np.linspace(x0, x1, n)
    ys = f.evaluate_array(xs)
    return {"x": [float(v) for v in xs], "f": [float(v) for v in ys]}


# -- subcommands -----------------------------------------------------------------


def _cmd_decide(args) -> int:
    iset = _load_interval_set(args)
    if iset.n_intervals != 2:
        raise _InputError(f"decide needs exactly 2 intervals, got {iset.n_intervals}")
    params = normalize_two(iset)
    verdict = decide_two_interval(params, args.constant)
    report = {
        "command": "decide",
        "constant": args.constant,
        "set": iset.to_json_obj(),
        "params": _params_json(params),
        "verdict": verdict.to_json_obj(),
    }
    conditions = verdict.conditions
    csv_rows = [
        ("holds", verdict.holds),
        ("reason", verdict.reason.value),
        ("H1", conditions.h1),
        ("H2_n", "" if conditions.h2 is None else conditions.h2.n),
        ("H2_m", "" if conditions.h2 is None else conditions.h2.m),
        ("m_parity", conditions.m_parity or ""),
        ("ell", format_qfield(params.ell)),
        ("H", format_qfield(params.H)),
        ("L", format_qfield(params.L)),
    ]

    def figure(path: Path) -> None:
        from . import plots

        if verdict.counterexample is not None:
            trace = _trace(verdict.counterexample, iset, args)
            plots.save_trace_figure(
                path, trace["x"], trace["f"], iset.float_pairs(),
                title=f"decide: property fails ({verdict.reason.value})",
            )
        else:
            plots.save_trace_figure(
                path, [], [], iset.float_pairs(),
                title=f"decide: property holds ({verdict.reason.value})",
            )

    _emit(args, report, (("key", "value"), csv_rows), figure)
    return EXIT_OK if verdict.holds else EXIT_FAILS


def _cmd_construct(args) -> int:
    iset = _load_interval_set(args)
    if args.family == "translations":
        if iset.n_intervals < 2:
            raise _InputError("translation-mode construction needs at least 2 intervals")
        f = construct_recurrence_extension_n(iset, constant=args.constant)
    elif iset.n_intervals == 2:
        verdict = decide_two_interval(normalize_two(iset), args.constant)
        if verdict.holds:
            print(
                "construction not applicable: the property holds for this set "
                f"({verdict.reason.value})",
                file=sys.stderr,
            )
            return EXIT_NOT_APPLICABLE
        f = verdict.counterexample
    elif iset.n_intervals == 3:
        try:
            params = ThreeIntervalParams.from_interval_set(iset)
        except ValueError as exc:
            raise _InputError(str(exc)) from exc
        f = construct_three_interval_counterexample(params, args.constant)
    else:
        raise _InputError(
            "full-isometry construction supports 2 or 3 intervals, "
            f"got {iset.n_intervals}"
        )
    trace = _trace(f, iset, args)
    report = {
        "command": "construct",
        "family": args.family,
        "constant": args.constant,
        "set": iset.to_json_obj(),
        "function": function_to_descriptor(f),
        "trace": trace,
    }
    csv_rows = list(zip(trace["x"], trace["f"]))

    def figure(path: Path) -> None:
        from . import plots

        plots.save_trace_figure(
            path, trace["x"], trace["f"], iset.float_pairs(),
            title=f"construct ({args.family}): {report['function']['variant']}",
        )

    _emit(args, report, (("x", "f"), csv_rows), figure)
    return EXIT_OK


def _cmd_verify(args) -> int:
    iset = _load_interval_set(args)
    if not args.function:
        raise _InputError("--function is required")
    f = _load_function(args.function)
    cfg = _quadrature_config(args)
    sampler = _sampler(args)
    report_obj = verify_invariance(f, iset, args.family, sampler, cfg)
    log.info(
        "verified %d samples (%s): c=%.6g, max deviation %.3g",
        report_obj.n_samples, args.family, report_obj.c_estimate,
        report_obj.max_abs_deviation,
    )
    # The quadrature runs an order of magnitude tighter than the pass gate so
    # that integration error cannot flip the outcome.
    threshold = 10.0 * max(cfg.abs_tol, cfg.rel_tol * report_obj.sup_abs_f)
    passed = report_obj.max_abs_deviation <= threshold
    sampler_json = {"kind": type(sampler).__name__, **sampler.__dict__}
    report = {
        "command": "verify",
        "family": args.family,
        "set": iset.to_json_obj(),
        "function": function_to_descriptor(f),
        "sampler": sampler_json,
        "threshold": threshold,
        "passed": passed,
        "report": report_obj.to_json_obj(include_rows=True),
    }
    csv_rows = [(r.translation, r.reflected, r.integral) for r in report_obj.rows]

    def figure(path: Path) -> None:
        from . import plots

        plots.save_invariance_figure(
            path,
            [r.to_json_obj() for r in report_obj.rows],
            report_obj.c_estimate,
            title=f"verify ({args.family}): max deviation "
            f"{report_obj.max_abs_deviation:.3g}",
        )

    _emit(args, report, (("t", "reflected", "integral"), csv_rows), figure)
    if not report_obj.all_converged:
        print("quadrature budget exhausted on at least one sample", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK if passed else EXIT_FAILS


def _cmd_demo(args) -> int:
    if args.only is not None and args.only not in CHECK_NAMES:
        raise _InputError(
            f"unknown check {args.only!r}; choose from {', '.join(CHECK_NAMES)}"
        )
    report = run_all_checks(seed=args.seed, only=args.only)
    report["command"] = "demo"
    csv_rows = [(c["name"], c["passed"]) for c in report["checks"]]

    def figure(path: Path) -> None:
        from . import plots

        plots.save_demo_figure(path, report["checks"])

    _emit(args, report, (("check", "passed"), csv_rows), figure)
    failed = [c["name"] for c in report["checks"] if not c["passed"]]
    if failed:
        print("failed checks: " + ", ".join(failed), file=sys.stderr)
        return 1
    return EXIT_OK


# -- argument wiring ----------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pompeiu",
        description="Decide the Pompeiu property for unions of intervals, "
        "construct counterexamples, and verify integral invariance.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    out_opts = argparse.ArgumentParser(add_help=False)
    out_opts.add_argument("--out", metavar="FILE", help="write the report to FILE")
    out_opts.add_argument(
        "--format", choices=("json", "csv"), default="json", help="report format"
    )
    out_opts.add_argument(
        "--plot", action="store_true",
        help="render a PNG figure next to --out",
    )

    set_opts = argparse.ArgumentParser(add_help=False)
    set_opts.add_argument(
        "--set", metavar="JSON_OR_FILE",
        help='interval set: [["0/1","1/1"],["2/1","3/1"]], the full '
        '{"field_d": ..., "intervals": ...} object, or a file path',
    )
    set_opts.add_argument(
        "--field-d", type=int, metavar="D",
        help="square-free radicand of the ambient field (for rational-only literals)",
    )

    quad_opts = argparse.ArgumentParser(add_help=False)
    quad_opts.add_argument("--abs-tol", type=float, help="quadrature absolute tolerance")
    quad_opts.add_argument("--rel-tol", type=float, help="quadrature relative tolerance")

    seed_opts = argparse.ArgumentParser(add_help=False)
    seed_opts.add_argument("--seed", type=int, default=42, help="sampling seed")

    p_decide = sub.add_parser(
        "decide", parents=[set_opts, out_opts],
        help="decide the property for a two-interval set (exact arithmetic)",
    )
    p_decide.add_argument(
        "--constant", type=float, default=0.0, metavar="C",
        help="target integral of the counterexample when the property fails",
    )
    p_decide.set_defaults(func=_cmd_decide)

    p_construct = sub.add_parser(
        "construct", parents=[set_opts, out_opts],
        help="construct a function with constant integral over images of the set",
    )
    p_construct.add_argument("--constant", type=float, default=0.0, metavar="C")
    p_construct.add_argument(
        "--family", choices=("translations", "full"), default="translations",
        help="isometry family the construction must defeat",
    )
    p_construct.add_argument(
        "--grid", metavar="t0:t1:n", help="window and resolution of the emitted trace"
    )
    p_construct.set_defaults(func=_cmd_construct)

    p_verify = sub.add_parser(
        "verify", parents=[set_opts, out_opts, quad_opts, seed_opts],
        help="verify integral invariance of a function over sampled isometries",
    )
    p_verify.add_argument(
        "--function", metavar="JSON_OR_FILE",
        help="function descriptor (or a construct report containing one)",
    )
    p_verify.add_argument(
        "--family", choices=("translations", "full"), default="translations"
    )
    p_verify.add_argument("--grid", metavar="t0:t1:n", help="translation grid sampler")
    p_verify.add_argument(
        "--random", type=int, metavar="N", help="N random isometries instead of a grid"
    )
    p_verify.set_defaults(func=_cmd_verify)

    p_demo = sub.add_parser(
        "demo", parents=[out_opts, seed_opts],
        help="run the full verification battery and write a consolidated report",
    )
    p_demo.add_argument("--only", metavar="CHECK", help=f"one of: {', '.join(CHECK_NAMES)}")
    p_demo.set_defaults(func=_cmd_demo)

    # Let grid specs with a negative start ("--grid -10:10:401") parse as
    # values rather than unknown options.
    matcher = re.compile(r"^-\d+(?:[.:]\S*)?$")
    for p in (parser, p_decide, p_construct, p_verify, p_demo):
        p._negative_number_matcher = matcher

    return parser


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConstructionNotApplicable as exc:
        print(f"construction not applicable: {exc}", file=sys.stderr)
        return EXIT_NOT_APPLICABLE
    except RecurrenceDepthError as exc:
        print(f"evaluation budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
