import argparse
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional
import numpy as np
from app.config import settings
from app.criteria import analyze, phi_applicable, ppt_check
from app.exceptions import (
    EXIT_NUMERICAL,
    EXIT_OK,
    InvalidInputError,
    PhicritException,
    UsageError,
)
from app.factory import (
    Ensemble,
    family_state,
    family_threshold,
    random_state,
    standard_manifold_member,
)
from app.logger import logger, setup_logging
from app.schemas import Criterion, CriterionReport, RunReport
from app.spin import SpinSystem
from app.storage import load_state, save_rows, save_state, write_rows
from app.witnesses import build_witness, verify_optimality, witness_expectation

THRESHOLD_CRITERIA = (
    Criterion.PHI,
    Criterion.PPT,
    Criterion.REDUCTION2,
    Criterion.REALIGNMENT,
    Criterion.MAJORIZATION,
)

SWEEP_COLUMNS = [
    "lambda",
    "ppt_score",
    "reduction1_score",
    "reduction2_score",
    "phi_score",
    "realign_excess",
    "major_violation",
    "witness_expectation",
]

SCORE_COLUMNS = {
    Criterion.PPT: "ppt_score",
    Criterion.REDUCTION1: "reduction1_score",
    Criterion.REDUCTION2: "reduction2_score",
    Criterion.PHI: "phi_score",
    Criterion.REALIGNMENT: "realign_excess",
    Criterion.MAJORIZATION: "major_violation",
}

ENSEMBLE_ALIASES = {
    "separable": Ensemble.SEPARABLE_MIXTURE,
    "ginibre": Ensemble.GINIBRE_MIXED,
    "pure": Ensemble.PURE_HAAR,
}


class ArgumentParser(argparse.ArgumentParser):
    """argparse parser that raises UsageError (exit 1) instead of exiting with 2."""

    def error(self, message):
        raise UsageError(message)


def _label(criterion: Criterion) -> str:
    # On the family both reduction sides coincide
    return "Reduction" if criterion == Criterion.REDUCTION2 else criterion.value


def _parse_ensemble(value: str) -> Ensemble:
    if value.lower() in ENSEMBLE_ALIASES:
        return ENSEMBLE_ALIASES[value.lower()]
    try:
        return Ensemble(value)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"unknown ensemble '{value}' (choose from {', '.join(ENSEMBLE_ALIASES)})"
        )


def _parse_weights(value: str) -> list[float]:
    try:
        return [float(w) for w in value.split(",") if w.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"weights must be comma-separated numbers, got '{value}'")


def parse_sweep(spec: str) -> np.ndarray:
    """'a:b:step' -> lambdas from a to b inclusive."""
    try:
        start, stop, step = (float(part) for part in spec.split(":"))
    except ValueError:
        raise InvalidInputError(f"Sweep must look like a:b:step, got '{spec}'")
    if not (0.0 <= start <= stop <= 1.0) or step <= 0.0:
        raise InvalidInputError(f"Invalid sweep range '{spec}' (need 0 <= a <= b <= 1, step > 0)")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return np.minimum(start + step * np.arange(count), stop)


def _witness_value(state) -> Optional[float]:
    d1, d2 = state.dims
    if d1 == d2 and phi_applicable(state.dims):
        return witness_expectation(build_witness(d2), state)
    return None


def cmd_analyze(args) -> RunReport:
    """Run every criterion on a state file."""
    state, digest = load_state(args.path)
    return RunReport(
        command="analyze",
        input_digest=digest,
        reports=analyze(state, args.tol),
        witness_expectation=_witness_value(state),
    )


def cmd_family(args) -> RunReport:
    """Single family member, a λ sweep, or the threshold table."""
    N = args.N
    if args.thresholds:
        thresholds = [
            family_threshold(N, criterion, tol=args.bisection_tol, criterion_tol=args.tol)
            for criterion in THRESHOLD_CRITERIA
        ]
        return RunReport(command="family", thresholds=thresholds)

    if args.sweep is not None:
        lambdas = parse_sweep(args.sweep)
        witness = build_witness(N)
        rows = []
        for lam in lambdas:
            state = family_state(N, float(lam)).state
            row = {"lambda": float(lam), "witness_expectation": witness_expectation(witness, state)}
            for report in analyze(state, args.tol):
                row[SCORE_COLUMNS[report.criterion]] = report.score
            rows.append(row)
        report = RunReport(command="family", checks={"rows": len(rows)}, output_path=args.out)
        if args.out:
            save_rows(rows, SWEEP_COLUMNS, args.out)
        else:
            write_rows(sys.stdout, rows, SWEEP_COLUMNS)
            report.streamed = True
        return report

    point = family_state(N, args.lam)
    if args.out:
        save_state(point.state, args.out)
    return RunReport(
        command="family",
        reports=analyze(point.state, args.tol),
        witness_expectation=_witness_value(point.state),
        output_path=args.out,
        checks={"lambda": point.lam},
    )


def cmd_generate_bound(args) -> RunReport:
    """Write a member of the bound entangled manifold built on ρ(λ)."""
    N = args.N
    if not args.out:
        raise UsageError("generate-bound requires --out")
    if args.weights is not None:
        weights = args.weights
    else:
        seed = settings.DEFAULT_SEED if args.seed is None else args.seed
        weights = np.random.default_rng(seed).uniform(0.0, 0.1, 2 * N).tolist()

    state = standard_manifold_member(N, args.lam, weights, tol=args.tol)
    save_state(state, args.out)
    ppt = ppt_check(state, args.tol)
    value = witness_expectation(build_witness(N), state)
    return RunReport(
        command="generate-bound",
        reports=analyze(state, args.tol),
        witness_expectation=value,
        output_path=args.out,
        checks={
            "ppt_min_eigenvalue": ppt.score,
            "ppt": not ppt.entangled,
            "detected": value < 0.0,
            "trace_factor": state.scale,
            "weights": ",".join(repr(float(w)) for w in weights),
        },
    )


def cmd_verify_optimality(args) -> RunReport:
    """Γ_W span rank, ϑ2 invariance, and the PPT-but-detected exhibit."""
    N = args.N
    sys_ = SpinSystem.from_dimension(N)
    result = verify_optimality(sys_, samples=args.samples, seed=args.seed, tol=args.tol)

    exhibit = family_state(N, 1.0 / (N + 2)).state
    ppt = ppt_check(exhibit, args.tol)
    value = witness_expectation(build_witness(N), exhibit)
    exhibit_confirmed = not ppt.entangled and value < 0.0

    confirmed = result.confirmed and exhibit_confirmed
    return RunReport(
        command="verify-optimality",
        reports=[ppt],
        witness_expectation=value,
        checks={
            "rank": result.rank,
            "dimension": result.dimension,
            "samples": result.samples,
            "invariance_residual": result.invariance_residual,
            "theta2_invariant": result.theta2_invariant,
            "exhibit_lambda": 1.0 / (N + 2),
            "exhibit_ppt_min_eigenvalue": ppt.score,
            "exhibit_confirmed": exhibit_confirmed,
            "confirmed": confirmed,
        },
        exit_code=EXIT_OK if confirmed else EXIT_NUMERICAL,
    )


def cmd_bench(args) -> RunReport:
    """Detection counts per criterion over a seeded random ensemble."""
    d1, d2 = args.d1, args.d2
    if d1 < 1 or d2 < 1 or args.samples < 1:
        raise InvalidInputError("bench needs positive --d1, --d2 and --samples")
    seed = settings.DEFAULT_SEED if args.seed is None else args.seed
    ensemble = args.ensemble
    with_witness = d1 == d2 and phi_applicable((d1, d2))

    def evaluate(index: int) -> dict[str, bool]:
        # (seed, index) gives every sample its own stream
        state = random_state((d1, d2), ensemble, seed=(seed, index), k=args.k)
        reports = analyze(state, args.tol)
        flags = {r.criterion.value: r.entangled for r in reports}
        flags["PPT|Phi"] = flags[Criterion.PPT.value] or flags[Criterion.PHI.value]
        if with_witness:
            flags["Witness"] = witness_expectation(build_witness(d2), state) < -(args.tol or settings.POSITIVITY_TOL)
        return flags

    workers = args.workers or settings.BENCH_WORKERS
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(evaluate, range(args.samples)))

    counts = {key: 0 for key in results[0]}
    for flags in results:
        for key, fired in flags.items():
            counts[key] += int(fired)
    logger.info(f"Bench {ensemble.value} {d1}x{d2}: {args.samples} samples, counts {counts}")
    return RunReport(
        command="bench",
        detections=counts,
        checks={"ensemble": ensemble.value, "dims": f"{d1}x{d2}", "samples": args.samples, "seed": seed},
    )


COMMANDS: dict[str, Callable[[argparse.Namespace], RunReport]] = {
    "analyze": cmd_analyze,
    "family": cmd_family,
    "generate-bound": cmd_generate_bound,
    "verify-optimality": cmd_verify_optimality,
    "bench": cmd_bench,
}


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help=f"Criterion tolerance (default {settings.POSITIVITY_TOL:g})")
    common.add_argument("--json", action="store_true", help="Print the report as JSON")
    common.add_argument("--seed", type=int, default=None, help="Seed for randomized commands")
    common.add_argument("--out", default=None, help="Output file")
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING, ERROR")

    parser = ArgumentParser(
        prog="phicrit",
        description="Entanglement detection with the positive map Φ and its optimal witness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="Run all criteria on a state file")
    p.add_argument("path", help="State file (JSON with dims/re/im)")

    p = sub.add_parser("family", parents=[common], help="The family ρ(λ) = λP0 + (1-λ)ρ0")
    p.add_argument("--N", type=int, required=True, help="Even dimension N >= 4")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--lambda", dest="lam", type=float, help="Single mixing parameter")
    mode.add_argument("--sweep", help="a:b:step sweep written as CSV")
    mode.add_argument("--thresholds", action="store_true", help="Bisect λ^c per criterion")
    p.add_argument("--bisection-tol", type=float, default=None,
                   help=f"Threshold resolution (default {settings.BISECTION_TOL:g})")

    p = sub.add_parser("generate-bound", parents=[common], help="Bound entangled manifold member")
    p.add_argument("--N", type=int, required=True, help="Even dimension N >= 4")
    p.add_argument("--lambda", dest="lam", type=float, required=True,
                   help="Base family parameter in (0, 1/(N+2)]")
    p.add_argument("--weights", type=_parse_weights, default=None,
                   help="2N comma-separated nonnegative weights (random from --seed otherwise)")

    p = sub.add_parser("verify-optimality", parents=[common], help="Numerical optimality evidence")
    p.add_argument("--N", type=int, required=True, help="Even dimension N >= 4")
    p.add_argument("--samples", type=int, default=None, help="Γ_W samples (default 2N^2)")

    p = sub.add_parser("bench", parents=[common], help="Detection counts on random ensembles")
    p.add_argument("--d1", type=int, default=4)
    p.add_argument("--d2", type=int, default=4)
    p.add_argument("--ensemble", type=_parse_ensemble, default=Ensemble.SEPARABLE_MIXTURE,
                   help="separable, ginibre or pure")
    p.add_argument("--k", type=int, default=10, help="Terms per separable mixture")
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--workers", type=int, default=None)
    return parser


def _format_score(report: CriterionReport) -> str:
    return "skipped" if report.skipped or report.score is None else f"{report.score:+.6e}"


def render_report(report: RunReport) -> str:
    """Human-readable table."""
    lines = [f"command: {report.command}"]
    if report.input_digest:
        lines.append(f"input sha256: {report.input_digest}")
    if report.reports:
        lines.append(f"{'criterion':<13} {'verdict':<13} {'score':>14}  detail")
        for r in report.reports:
            lines.append(f"{r.criterion.value:<13} {r.verdict.value:<13} {_format_score(r):>14}  {r.detail}")
    if report.witness_expectation is not None:
        lines.append(f"tr(Wρ) = {report.witness_expectation:+.10f}")
    if report.thresholds:
        lines.append(f"{'criterion':<13} {'lambda_c':>10} {'closed form':>12}")
        for t in report.thresholds:
            note = "" if t.detected else "  not detected"
            lines.append(f"{_label(t.criterion):<13} {t.threshold:>10.6f} {t.closed_form:>12.6f}{note}")
    if report.detections:
        lines.append(f"{'criterion':<13} {'detections':>10}")
        for key, count in report.detections.items():
            lines.append(f"{key:<13} {count:>10d}")
    for key, value in report.checks.items():
        lines.append(f"{key}: {value}")
    if report.output_path:
        lines.append(f"output: {report.output_path}")
    lines.append(f"wall time: {report.wall_time:.3f}s")
    return "\n".join(lines)


def main(argv: Optional[list[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc.detail}", file=sys.stderr)
        return exc.exit_code

    if args.log_level:
        setup_logging(args.log_level)

    start_time = time.time()
    logger.info(f"Command: {' '.join(argv)}")
    try:
        report = COMMANDS[args.command](args)
    except PhicritException as exc:
        logger.warning(f"Phicrit exception: exit {exc.exit_code} - {exc.detail}")
        print(f"error: {exc.detail}", file=sys.stderr)
        return exc.exit_code
    except Exception as exc:
        logger.error(f"Unhandled exception in {args.command}: {exc}", exc_info=True)
        print("error: internal failure", file=sys.stderr)
        return EXIT_NUMERICAL

    report.command = " ".join(argv)
    report.wall_time = time.time() - start_time
    logger.info(f"Finished {args.command} - exit {report.exit_code} - Time: {report.wall_time:.3f}s")
    if not report.streamed:
        print(report.model_dump_json(indent=2) if args.json else render_report(report))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
