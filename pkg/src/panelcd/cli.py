"""Command-line interface: test a CSV panel, run simulation grids, probe
residual-vs-error trace gaps.

Worker count for simulations comes from the PANELCD_JOBS environment
variable (default: all available cores); results do not depend on it.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .cdtests import run_all_tests
from .csvio import read_panel_csv
from .errors import PanelCdError
from .reporting import (
    format_probe_report,
    format_simulate_report,
    format_test_report,
    load_simulation_grid,
)
from .simulate import run_experiment, trace_gap_probe


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="panelcd",
        description="Cross-sectional dependence tests for large panels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_test = sub.add_parser("test", help="run all tests on a panel CSV")
    p_test.add_argument("--input", required=True, help="panel CSV file")
    p_test.add_argument("--alpha", type=float, default=0.05)
    p_test.add_argument(
        "--k-convention",
        choices=["include_intercept", "regressors_only"],
        default="include_intercept",
        help="whether k in the test formulas counts the absorbed intercept",
    )
    p_test.add_argument("--out", required=True, help="report output path")

    p_sim = sub.add_parser("simulate", help="run a size/power experiment grid")
    p_sim.add_argument("--config", required=True, help="JSON grid config")
    p_sim.add_argument("--seed", type=int, required=True)
    p_sim.add_argument("--out", required=True)

    p_probe = sub.add_parser(
        "trace-probe", help="measure residual-vs-error trace gaps"
    )
    p_probe.add_argument("--config", required=True, help="JSON grid config")
    p_probe.add_argument("--seed", type=int, required=True)
    p_probe.add_argument("--out", required=True)
    return parser


def cmd_test(args) -> str:
    panel = read_panel_csv(args.input)
    if not 0.0 < args.alpha < 1.0:
        raise PanelCdError(f"alpha must lie in (0, 1), got {args.alpha}")
    k = panel.k_x + 1 if args.k_convention == "include_intercept" else panel.k_x
    results = run_all_tests(panel, k, args.alpha)
    return format_test_report(
        results,
        n=panel.n,
        T=panel.T,
        k=k,
        alpha=args.alpha,
        input_path=args.input,
        k_convention=args.k_convention,
    )


def cmd_simulate(args) -> str:
    cells, replications, alpha = load_simulation_grid(args.config)
    reports = [
        run_experiment(cell, replications, alpha=alpha, seed=args.seed)
        for cell in cells
    ]
    return format_simulate_report(
        reports, seed=args.seed, replications=replications, alpha=alpha
    )


def cmd_trace_probe(args) -> str:
    cells, replications, _ = load_simulation_grid(args.config)
    results = [
        (cell, trace_gap_probe(cell, replications, seed=args.seed))
        for cell in cells
    ]
    return format_probe_report(
        results, seed=args.seed, replications=replications
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "test": cmd_test,
        "simulate": cmd_simulate,
        "trace-probe": cmd_trace_probe,
    }
    try:
        report = handlers[args.command](args)
    except (PanelCdError, OSError, ValueError) as exc:
        print(f"panelcd: error: {exc}", file=sys.stderr)
        return 1
    Path(args.out).write_text(report, encoding="utf-8")
    return 0


if __name__ == "__main__":
    sys.exit(main())
