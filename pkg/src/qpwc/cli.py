"""Command-line front end: verify, sweep, and readout.

    qpwc verify  --config path [--filter substr] --out report.txt
    qpwc sweep   --config path --dims 16,32,64,128 --check id --out sweep.txt
    qpwc readout --config path --shift 0.589

verify exits 0 only if every selected check passes; sweep exits 0 unless a
monotonicity-required ladder increased; readout prints the recovered clock
shift.  verify and sweep also render a PNG figure next to the output file
unless --no-figures is given.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

from . import checks as checks_mod
from . import heisenberg as hb
from .config import load_config, parse_config, universe_from_config
from .errors import NoClockSignal, NoMatch, UnknownCheck


def _default_config_text() -> str:
    return resources.files("qpwc").joinpath("data/default.cfg").read_text()


def _read_config(path: str | None) -> dict[str, str]:
    if path is None:
        return parse_config(_default_config_text())
    return load_config(path)


def _cmd_verify(args) -> int:
    try:
        cfg = _read_config(args.config)
    except (OSError, ValueError) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    results = checks_mod.run_verify(cfg, args.filter)
    report = checks_mod.format_report(results)
    out = Path(args.out)
    out.write_text(report)
    if not args.no_figures:
        from .figures import figure_path, render_verify_figure

        render_verify_figure(results, figure_path(out))
    failed = [r for r in results if not r.passed]
    print(f"{len(results)} checks, {len(results) - len(failed)} passed, "
          f"{len(failed)} failed -> {out}")
    for r in failed:
        print(f"  FAIL {r.check_id} ({r.paper_anchor}): "
              f"residual {r.residual:.3e} > tol {r.tolerance:.3e}")
    return 1 if failed else 0


def _cmd_sweep(args) -> int:
    try:
        cfg = _read_config(args.config)
    except (OSError, ValueError) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    try:
        dims = [int(part) for part in args.dims.split(",") if part.strip()]
        result = checks_mod.run_sweep(cfg, dims, args.check)
    except UnknownCheck as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out = Path(args.out)
    out.write_text(checks_mod.format_sweep(result))
    if not args.no_figures:
        from .figures import figure_path, render_sweep_figure

        render_sweep_figure(result, figure_path(out))
    print(f"sweep {result.check_id} over d={list(result.dims)} -> {out}")
    print("  residuals: " + ", ".join(f"{r:.3e}" for r in result.residuals))
    if result.monotone_required and not result.non_increasing:
        print("  FAIL: residuals increased where decrease is required")
        return 1
    return 0


def _cmd_readout(args) -> int:
    try:
        cfg = _read_config(args.config)
    except (OSError, ValueError) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    bundle = universe_from_config(cfg)
    shifted = hb.clock_shift(bundle.descriptor, args.shift)
    try:
        result = hb.clock_readout(shifted, bundle.descriptor)
    except NoClockSignal as exc:
        print(f"error: no clock signal: {exc}", file=sys.stderr)
        return 1
    except NoMatch as exc:
        print(f"error: no match: {exc}", file=sys.stderr)
        return 1
    print(f"lambda={result.lam:.12g}")
    print(f"ambiguous={'true' if result.ambiguous else 'false'}")
    print(f"period={'none' if result.period is None else format(result.period, '.12g')}")
    print(f"residual={result.residual:.3e}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpwc",
        description="finite-clock relational-time verification suites",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run the check registry")
    p_verify.add_argument("--config", default=None, help="key=value config path")
    p_verify.add_argument("--filter", default=None,
                          help="substring of check id or anchor, e.g. eq4.8")
    p_verify.add_argument("--out", required=True, help="report output path")
    p_verify.add_argument("--no-figures", action="store_true")
    p_verify.set_defaults(fn=_cmd_verify)

    p_sweep = sub.add_parser("sweep", help="run one residual over a dimension ladder")
    p_sweep.add_argument("--config", default=None)
    p_sweep.add_argument("--dims", required=True, help="comma list, e.g. 16,32,64,128")
    p_sweep.add_argument("--check", required=True,
                         help=f"one of {sorted(checks_mod.SWEEPS_BY_ID)}")
    p_sweep.add_argument("--out", required=True)
    p_sweep.add_argument("--no-figures", action="store_true")
    p_sweep.set_defaults(fn=_cmd_sweep)

    p_readout = sub.add_parser("readout", help="recover a clock shift from descriptors")
    p_readout.add_argument("--config", default=None)
    p_readout.add_argument("--shift", type=float, required=True,
                           help="applied shift in time units (multiple of dt)")
    p_readout.set_defaults(fn=_cmd_readout)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    raise SystemExit(main())
