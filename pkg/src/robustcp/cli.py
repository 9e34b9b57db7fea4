"""Command-line front end: ``design``, ``simulate``, ``verify`` and ``compare``."""

from __future__ import annotations

import argparse
import math
import sys

from . import __version__, landscape, verify
from .pulsefile import PulseFile, PulseFileError, file_digest
from .solver import (
    AllDirections,
    DesignProblem,
    SingleLine,
    SolverConfig,
    TwoLines,
    UnsupportedModeError,
    alternating_sum_diagnostic,
    solve,
)
from .su2 import not_fidelity_map

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_NOT_CONVERGED = 0, 1, 2, 3
COARSE_SAMPLES = 11


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text, count=None, name="value"):
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"malformed {name} {text!r}") from None
    if count is not None and len(values) != count:
        raise UsageError(f"{name} needs {count} comma-separated numbers, got {text!r}")
    if not all(math.isfinite(v) for v in values):
        raise UsageError(f"{name} must be finite")
    return values


def _grid_spec(args) -> landscape.GridSpec:
    dlo, dhi, elo, ehi = _floats(args.window, 4, "window")
    nx, ny = _floats(args.samples, 2, "samples")
    if nx != int(nx) or ny != int(ny):
        raise UsageError("samples must be integers")
    try:
        return landscape.GridSpec(dlo, dhi, int(nx), elo, ehi, int(ny))
    except ValueError as exc:
        raise UsageError(f"malformed window: {exc}") from None


def _levels(args):
    levels = _floats(args.levels, name="levels")
    if not all(0.0 < lv < 1.0 for lv in levels):
        raise UsageError("levels must lie strictly between 0 and 1")
    return levels


def _fmt_phases(phases, degrees):
    if degrees:
        return ", ".join(f"{math.degrees(p):.6f}" for p in phases) + "  (degrees)"
    return ", ".join(f"{p:.6f}" for p in phases)


def _read_pulse(path) -> PulseFile:
    try:
        return PulseFile.read(path)
    except PulseFileError as exc:
        raise UsageError(str(exc)) from None


# ---------------------------------------------------------------------------


def cmd_design(args) -> int:
    if args.mode == "line":
        mode = SingleLine(args.alpha)
    elif args.mode == "two-lines":
        mode = TwoLines(args.alpha, args.alpha2)
    else:
        mode = AllDirections()
    symmetric = False if args.asymmetric or args.mode == "two-lines" else None
    try:
        config = SolverConfig(residual_tol=args.tol, restarts=args.restarts, rng_seed=args.seed,
                              max_iterations=args.max_iterations)
        problem = DesignProblem(args.order, mode, symmetric=symmetric, solver=config)
    except UnsupportedModeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    sol = solve(problem)
    alt, alt_sin = alternating_sum_diagnostic(sol.phases)
    mode_meta = {"name": args.mode}
    if args.mode == "line":
        mode_meta["alpha"] = args.alpha
    elif args.mode == "two-lines":
        mode_meta.update(alpha1=args.alpha, alpha2=args.alpha2)
    pulse = PulseFile(
        phases=sol.phases,
        metadata={
            "mode": mode_meta,
            "order": sol.problem.order,
            "symmetric": sol.problem.symmetric,
            "residual": sol.residual_norm,
            "residuals": dict(zip(sol.labels, sol.residuals)),
            "target_sign": sol.sign,
            "converged": sol.converged,
            "exact": sol.exact,
            "source": sol.source,
            "solver": {
                "seed": config.rng_seed,
                "restarts": config.restarts,
                "residual_tol": config.residual_tol,
                "max_iterations": config.max_iterations,
                "damping_init": config.damping_init,
            },
            "provenance": {"generator": "robustcp", "version": __version__, "command": "design"},
        },
    )
    pulse.write(args.out)

    target = problem.target.as_array()
    print(f"order {problem.order}, mode {args.mode}, start {sol.source}")
    print(f"phases: {_fmt_phases(sol.phases, args.degrees)}")
    print(f"residual norm: {sol.residual_norm:.3e} ({'converged' if sol.converged else 'NOT converged'})")
    print(f"target sign: {sol.sign:+d}")
    for label, coeffs in sol.achieved.items():
        row = "  ".join(f"c{k}={c:.9f} (target {sol.sign * t:.9f})" for k, (c, t) in enumerate(zip(coeffs, target)))
        print(f"  {label}: {row}")
    print(f"alternating phase sum: {alt:.9f} (sin = {alt_sin:+.12f})")
    origin = abs(float(not_fidelity_map(pulse.phases, 0.0, 0.0)))
    print(f"|J| at origin: {origin:.15f}")
    print(f"wrote {args.out}")
    return EXIT_OK if sol.converged else EXIT_NOT_CONVERGED


def cmd_simulate(args) -> int:
    spec = _grid_spec(args)
    levels = _levels(args)
    pulse = _read_pulse(args.pulse)
    if min(spec.delta_samples, spec.eta_samples) < COARSE_SAMPLES:
        print(f"warning: {spec.delta_samples}x{spec.eta_samples} samples is too coarse for meaningful level lines",
              file=sys.stderr)
    grid = landscape.evaluate_grid(pulse.sequence, spec, pulse_hash=file_digest(args.pulse))
    prefix = args.out_prefix
    landscape.write_grid_csv(grid, f"{prefix}.grid.csv")
    landscape.write_json(landscape.extract_contours(grid, levels).to_json(), f"{prefix}.contours.json")
    landscape.write_json(landscape.reference_lines(spec), f"{prefix}.reflines.json")
    print(f"pulse sha256 {grid.provenance['pulse_sha256']}")
    print(f"window sha256 {grid.provenance['spec_sha256']}")
    print(f"|J| at node nearest origin: {landscape.origin_value(grid):.15f}")
    for level in levels:
        print(f"score(|J| >= {level:g}) = {landscape.robustness_score(grid, level):.6f}")
    print(f"wrote {prefix}.grid.csv, {prefix}.contours.json, {prefix}.reflines.json")
    return EXIT_OK


def cmd_verify(args) -> int:
    report = verify.run(args.suite)
    for suite, body in report["suites"].items():
        for check in body["checks"]:
            value = "" if check["value"] is None else f" value={check['value']:.3e}"
            note = f"  [{check['note']}]" if check["note"] else ""
            print(f"{'PASS' if check['passed'] else 'FAIL'} {suite}: {check['name']}{value}{note}")
    if args.report:
        landscape.write_json(report, args.report)
    print("all checks passed" if report["passed"] else "verification FAILED")
    return EXIT_OK if report["passed"] else EXIT_VERIFY


def cmd_compare(args) -> int:
    spec = landscape.strip_spec() if args.strip else _grid_spec(args)
    levels = _levels(args)
    pulses = [_read_pulse(p) for p in args.pulse]
    gates = {p.gate for p in pulses}
    if len(gates) > 1:
        raise UsageError(f"pulse files target different gates: {', '.join(sorted(gates))}")
    rows = []
    for path, pulse in zip(args.pulse, pulses):
        grid = landscape.evaluate_grid(pulse.sequence, spec, pulse_hash=file_digest(path))
        alt, alt_sin = alternating_sum_diagnostic(pulse.phases)
        rows.append({
            "pulse": path,
            "order": len(pulse.phases),
            "scores": [landscape.robustness_score(grid, lv) for lv in levels],
            "alternating_sum": alt,
        })
    base = rows[0]["scores"]
    print(f"window {spec.to_dict()} sha256 {spec.digest()}")
    print("levels: " + ", ".join(f"{lv:g}" for lv in levels))
    for row in rows:
        scores = "  ".join(f"{s:.6f}" for s in row["scores"])
        deltas = "  ".join(f"{s - b:+.6f}" for s, b in zip(row["scores"], base))
        alt = math.degrees(row["alternating_sum"]) if args.degrees else row["alternating_sum"]
        print(f"{row['pulse']}: N={row['order']} scores {scores}  delta vs first {deltas}  alternating sum {alt:.6f}")
    if args.json:
        landscape.write_json({"window": spec.to_dict(), "levels": levels, "pulses": rows}, args.json)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="robustcp", description="Robust composite NOT-gate design and fidelity maps.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d = sub.add_parser("design", help="solve for a phase sequence and write a pulse file")
    d.add_argument("--order", type=int, required=True)
    d.add_argument("--mode", choices=("line", "two-lines", "all-dirs"), required=True)
    d.add_argument("--alpha", type=float, default=0.0, help="design line (radians); first line for two-lines")
    d.add_argument("--alpha2", type=float, default=math.pi / 2, help="second line for two-lines (radians)")
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--restarts", type=int, default=512)
    d.add_argument("--tol", type=float, default=1e-12)
    d.add_argument("--max-iterations", type=int, default=200)
    d.add_argument("--asymmetric", action="store_true", help="free all N phases in line mode")
    d.add_argument("--degrees", action="store_true", help="display phases in degrees")
    d.add_argument("--out", required=True)
    d.set_defaults(func=cmd_design)

    window = f"{-math.pi!r},{math.pi!r},-1,1"
    s = sub.add_parser("simulate", help="evaluate |J| on a grid, export level lines")
    s.add_argument("--pulse", required=True)
    s.add_argument("--window", default=window, help="dlo,dhi,elo,ehi (deltaT and eta ranges)")
    s.add_argument("--samples", default="401,401", help="NX,NY nodes along deltaT and eta")
    s.add_argument("--levels", default=",".join(str(lv) for lv in landscape.DEFAULT_LEVELS))
    s.add_argument("--out-prefix", required=True)
    s.set_defaults(func=cmd_simulate)

    v = sub.add_parser("verify", help="run the embedded fixture suites")
    v.add_argument("--suite", choices=verify.SUITES + ("all",), default="all")
    v.add_argument("--report", help="write the JSON report here")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("compare", help="robustness scores of several pulse files side by side")
    c.add_argument("--pulse", action="append", required=True)
    c.add_argument("--window", default=window)
    c.add_argument("--samples", default="401,401")
    c.add_argument("--strip", action="store_true", help="use the thin window around deltaT = 0")
    c.add_argument("--levels", default=",".join(str(lv) for lv in landscape.DEFAULT_LEVELS))
    c.add_argument("--degrees", action="store_true", help="display the alternating sum in degrees")
    c.add_argument("--json", help="write the comparison as JSON here")
    c.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
