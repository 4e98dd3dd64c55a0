"""Command-line front end: emits figure data as CSV/JSON and runs the selftest.

Commands: ghz-surface, werner-ghz, at-scan, discord, selftest.
Exit codes: 0 success, 1 usage, 2 I/O, 3 resource budget, 4 selftest failure.
Outputs are byte-identical across runs for fixed flags and seed.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from typing import Any, Sequence

import numpy as np

from . import ashkin_teller as at
from . import correlations, selftest, states
from .core import SubsystemDims, reduced_from_vector

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_BUDGET = 3
EXIT_SELFTEST = 4


class UsageError(Exception):
    pass


class BudgetError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    if value is None:
        return ""
    return str(value)


def _render_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _render_json(meta: dict, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    payload = {
        "meta": meta,
        "rows": [dict(zip(header, row)) for row in rows],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _emit(args, meta: dict, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    text = (
        _render_json(meta, header, rows)
        if args.format == "json"
        else _render_csv(header, rows)
    )
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _optimizer_config(args) -> correlations.OptimizerConfig:
    kwargs: dict[str, Any] = {"seed": args.seed}
    if args.multistarts is not None:
        kwargs["multistarts"] = args.multistarts
    return correlations.OptimizerConfig(**kwargs)


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    return max(1, int(os.environ.get("GQD_THREADS", "1")))


def _cmd_ghz_surface(args) -> int:
    if args.resolution < 2:
        raise UsageError("resolution must be at least 2")
    t2, t3, values = states.ghz_surface(args.resolution)
    rows = [
        (float(a), float(b), float(values[i, j]))
        for i, a in enumerate(t2)
        for j, b in enumerate(t3)
    ]
    meta = {"command": "ghz-surface", "resolution": args.resolution, "seed": args.seed}
    _emit(args, meta, ("theta2", "theta3", "gqd"), rows)
    return EXIT_OK


def _mu_grid(args) -> np.ndarray:
    if args.grid_step is not None:
        if args.grid_step <= 0 or args.grid_step > 1:
            raise UsageError("grid step must lie in (0, 1]")
        return np.round(np.arange(0.0, 1.0 + 0.5 * args.grid_step, args.grid_step), 12)
    if args.points < 2:
        raise UsageError("need at least 2 grid points")
    return np.linspace(0.0, 1.0, args.points)


def _cmd_werner_ghz(args) -> int:
    mus = _mu_grid(args)
    analytic = [states.werner_ghz_gqd_analytic(float(m)) for m in mus]
    header: tuple[str, ...] = ("mu", "gqd_analytic")
    columns: list[list[Any]] = [list(mus.astype(float)), analytic]

    meta: dict[str, Any] = {
        "command": "werner-ghz",
        "mode": args.mode,
        "points": len(mus),
        "seed": args.seed,
        "monotone_analytic": bool(np.all(np.diff(analytic) >= -1e-12)),
    }
    if args.mode in ("numeric", "both"):
        config = _optimizer_config(args)

        def worker(mu: float) -> float:
            return correlations.gqd(states.werner_ghz(mu), "minimize", config).value

        numeric = at._map_ordered(worker, [float(m) for m in mus], _threads(args))
        diffs = [abs(a - b) for a, b in zip(analytic, numeric)]
        header = header + ("gqd_numeric", "abs_difference")
        columns += [numeric, diffs]
        meta["max_abs_difference"] = max(diffs)

    rows = list(zip(*columns))
    _emit(args, meta, header, rows)
    if args.out is not None:
        sys.stdout.write(json.dumps({"summary": meta}, sort_keys=True) + "\n")
    return EXIT_OK


def _delta_grid(args) -> np.ndarray:
    step = args.grid_step if args.grid_step is not None else 0.05
    if step <= 0 or args.delta_max < args.delta_min:
        raise UsageError("empty coupling range")
    fine = args.fine_step if args.fine_step and args.fine_step > 0 else step
    return at.default_delta_grid(
        start=args.delta_min, stop=args.delta_max, step=step, fine_step=fine
    )


def _cmd_at_scan(args) -> int:
    if args.sites > at.SPARSE_MAX_SITES:
        raise BudgetError(
            f"chains beyond {at.SPARSE_MAX_SITES} sites are out of budget"
        )
    if args.sites > at.DENSE_MAX_SITES and not args.iterative:
        raise BudgetError(
            f"dense diagonalization supports at most {at.DENSE_MAX_SITES} sites; "
            "pass --iterative to enable the sparse lowest-eigenpair solver"
        )
    deltas = _delta_grid(args)
    template = at.ChainSpec(sites=args.sites, beta=args.beta, delta=float(deltas[0]))
    group = at.SpinGroup(kind=args.group, anchor=args.anchor)
    try:
        result = at.gqd_scan(
            template,
            deltas,
            group,
            strategy=args.strategy,
            iterative=args.iterative,
            threads=_threads(args),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    interior = result.deltas[1:-1]
    crossings = at.zero_crossings(interior, result.derivative)
    derivative_column: list[Any] = [None] + list(result.derivative) + [None]
    if len(result.deltas) < 3:
        derivative_column = [None] * len(result.deltas)
    rows = [
        (float(d), float(g), dv if dv is None else float(dv), bool(flag))
        for d, g, dv, flag in zip(result.deltas, result.gqd, derivative_column, result.degenerate)
    ]
    summary = {
        "zero_crossings": [round(c, 12) for c in crossings],
        "degenerate_points": int(result.degenerate.sum()),
    }
    meta = {
        "command": "at-scan",
        "sites": args.sites,
        "beta": args.beta,
        "group": args.group,
        "anchor": args.anchor,
        "strategy": args.strategy,
        "iterative": bool(args.iterative),
        "seed": args.seed,
        "summary": summary,
    }
    _emit(args, meta, ("delta", "gqd", "dgqd_ddelta", "degenerate"), rows)
    if args.format == "csv" or args.out is not None:
        sys.stdout.write(json.dumps({"summary": summary}, sort_keys=True) + "\n")
    return EXIT_OK


def _parse_state(spec: str):
    """Parse a state spec into (label, DensityOperator)."""
    name, _, rest = spec.partition(":")
    name = name.strip().lower()
    try:
        if name == "bell":
            return "bell", states.bell()
        if name == "ghz":
            return spec, states.ghz(int(rest))
        if name == "werner":
            return spec, states.werner(float(rest))
        if name == "werner-ghz":
            return spec, states.werner_ghz(float(rest))
        if name == "at-pair":
            fields = rest.split(",")
            if len(fields) != 3:
                raise ValueError("at-pair takes sites,delta,kind")
            sites, delta, kind = int(fields[0]), float(fields[1]), fields[2].strip()
            keep = at.pair_qubits(kind)
            chain = at.ChainSpec(sites=sites, beta=1.0, delta=delta)
            vector, _ = at._ground_vector(chain, iterative=False)
            rho = reduced_from_vector(vector, SubsystemDims.qubits(chain.n_spins), keep)
            return spec, rho
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad state spec {spec!r}: {exc}") from exc
    raise UsageError(
        f"unknown state {spec!r}; expected bell, ghz:N, werner:MU, werner-ghz:MU, "
        "or at-pair:SITES,DELTA,KIND"
    )


def _cmd_discord(args) -> int:
    label, rho = _parse_state(args.state)
    config = _optimizer_config(args)
    n = rho.n_subsystems

    info = correlations.mutual_information(rho, cut=range(n - 1))
    asym = correlations.discord_asymmetric(rho, config)
    rows: list[tuple[str, float]] = [
        ("mutual_information", info),
        ("classical_correlation", info - asym),
        ("discord_asymmetric", asym),
    ]
    if n == 2:
        rows.append(("discord_symmetric", correlations.symmetric_discord(rho, config)))
    result = correlations.gqd(rho, strategy=args.strategy, config=config)
    rows.append((f"gqd_{args.strategy}", result.value))

    meta = {"command": "discord", "state": label, "strategy": args.strategy, "seed": args.seed}
    _emit(args, meta, ("measure", "value"), rows)
    return EXIT_OK


def _cmd_selftest(args) -> int:
    if args.count < 1:
        raise UsageError("count must be positive")
    report = selftest.run_selftest(seed=args.seed, count=args.count)
    text = report.render()
    sys.stdout.write(text)
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK if report.ok else EXIT_SELFTEST


def build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: GQD_THREADS or 1)")
    common.add_argument("--grid-step", type=float, default=None,
                        help="sweep-grid step for commands that scan a parameter")
    common.add_argument("--multistarts", type=int, default=None,
                        help="override the optimizer multistart count")

    parser = _Parser(prog="gqd", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ghz-surface", parents=[common],
                       help="dephased-GHZ entropy surface over (theta2, theta3)")
    p.add_argument("--resolution", type=int, default=129, help="grid points per axis")
    p.set_defaults(func=_cmd_ghz_surface)

    p = sub.add_parser("werner-ghz", parents=[common],
                       help="global discord of the Werner-GHZ family over mu")
    p.add_argument("--mode", choices=("analytic", "numeric", "both"), default="analytic")
    p.add_argument("--points", type=int, default=101)
    p.set_defaults(func=_cmd_werner_ghz)

    p = sub.add_parser("at-scan", parents=[common],
                       help="Ashkin-Teller group discord scan across the coupling")
    p.add_argument("--sites", type=int, required=True)
    p.add_argument("--group", choices=tuple(sorted(at.GROUP_SITES)), default="quartet")
    p.add_argument("--strategy", choices=at.SCAN_STRATEGIES, default="fixed-x")
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--anchor", type=int, default=0)
    p.add_argument("--delta-min", type=float, default=0.2)
    p.add_argument("--delta-max", type=float, default=1.8)
    p.add_argument("--fine-step", type=float, default=0.01,
                   help="finer step inside the critical window (0 disables)")
    p.add_argument("--iterative", action="store_true",
                   help="use the sparse lowest-eigenpair solver")
    p.set_defaults(func=_cmd_at_scan)

    p = sub.add_parser("discord", parents=[common],
                       help="correlation measures of a named state")
    p.add_argument("state",
                   help="bell | ghz:N | werner:MU | werner-ghz:MU | at-pair:SITES,DELTA,KIND")
    p.add_argument("--strategy", choices=correlations.STRATEGIES, default="minimize")
    p.set_defaults(func=_cmd_discord)

    p = sub.add_parser("selftest", parents=[common], help="run the verification suites")
    p.add_argument("--count", type=int, default=200)
    p.set_defaults(func=_cmd_selftest)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"gqd: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetError as exc:
        print(f"gqd: error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except OSError as exc:
        print(f"gqd: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
