"""Argument parser for the charflow command line."""

import argparse

from charflow import __version__

SUITES = ("theorem-a", "charts", "theta-t", "flux", "funnel", "all")

S = argparse.SUPPRESS


def _common() -> argparse.ArgumentParser:
    """Options every command accepts; unset options stay out of the namespace so config files apply."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=S, help="flat key = value run configuration file")
    common.add_argument("--tol", action="append", default=S, metavar="CHECK=VALUE",
                        help="override a tolerance (repeatable)")
    common.add_argument("--format", choices=("json", "text"), default=S, help="report format")
    common.add_argument("--threads", type=int, default=S, help="worker threads (overrides CHARFLOW_THREADS)")
    common.add_argument("--out", default=S, help="output path (default: stdout)")
    common.add_argument("--seed", type=int, default=S, help="seed for randomized sampling")
    common.add_argument("--log-level", default=S, help="console log level")
    return common


def _field(p: argparse.ArgumentParser) -> None:
    p.add_argument("--field", default=S,
                   help="catalog name (bilinear, radial, example32, lipschitz_xy, bilinear(<g>)) or field file")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="charflow",
        description="Characteristic curves, charts and identity checks for prescribed p-mean curvature fields",
    )
    parser.add_argument("--version", action="version", version=f"charflow {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("trace", parents=[common], help="trace a characteristic or seed curve to CSV")
    _field(p)
    p.add_argument("--start", default=S, help="start point x,y")
    p.add_argument("--kind", choices=("char", "seed"), default=S)
    p.add_argument("--arclen", type=float, default=S, help="signed arclength (negative runs backwards)")
    p.add_argument("--back", type=float, default=S, help="also trace this far backwards from the start")
    p.add_argument("--step", type=float, default=S)

    p = sub.add_parser("chart", parents=[common], help="build a characteristic chart to JSON")
    _field(p)
    p.add_argument("--center", default=S, help="chart center x,y")
    p.add_argument("--radius", type=float, default=S)
    p.add_argument("--grid", type=int, default=S, help="grid points per side (odd)")
    p.add_argument("--step", type=float, default=S)
    p.add_argument("--report", default=S, help="residual report path")

    p = sub.add_parser("minimize", parents=[common], help="minimize L_H over graphs with pinned endpoints")
    _field(p)
    p.add_argument("--H", dest="H", default=S, help="curvature expression in x, y (instead of --field)")
    p.add_argument("--start", default=S, help="left endpoint x0,y0")
    p.add_argument("--end", default=S, help="right endpoint x1,y1")
    p.add_argument("--nodes", type=int, default=S, help="number of segments")
    p.add_argument("--initial", default=S, help="initial heights as an expression in x")
    p.add_argument("--min-tol", dest="min_tol", type=float, default=S, help="gradient max-norm to stop at")
    p.add_argument("--max-iters", dest="max_iters", type=int, default=S)
    p.add_argument("--report", default=S, help="Euler-Lagrange residual report path")

    p = sub.add_parser("flux", parents=[common], help="check the flux identities on polygons")
    _field(p)
    p.add_argument("--polygon", default=S, help="polygon JSON file (default: catalog polygons)")
    p.add_argument("--phi", default=S, help="test function expression (default: x)")
    p.add_argument("--refinement", type=int, default=S)
    p.add_argument("--order", type=int, default=S)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("suite", nargs="?", choices=SUITES, help="suite to run")
    p.add_argument("--list", action="store_true", dest="list_suites", help="list suites and exit")
    _field(p)
    p.add_argument("--start", default=S)
    p.add_argument("--arclen", type=float, default=S)
    p.add_argument("--step", type=float, default=S)
    p.add_argument("--center", default=S)
    p.add_argument("--radius", type=float, default=S)
    p.add_argument("--grid", type=int, default=S)
    p.add_argument("--levels", default=S, help="chart refinement grid sizes, e.g. 11,21,41")
    p.add_argument("--polygon", default=S)
    p.add_argument("--phi", default=S)
    p.add_argument("--refinement", type=int, default=S)
    p.add_argument("--order", type=int, default=S)

    p = sub.add_parser("catalog", parents=[common], help="list or describe built-in fields")
    p.add_argument("action", choices=("list", "show"))
    p.add_argument("name", nargs="?")
    return parser
