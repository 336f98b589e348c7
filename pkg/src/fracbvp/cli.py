"""Command-line front end.

Exit codes: 0 success, 1 error, 2 fixed-point non-convergence,
3 unstable limit classification.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path
from typing import Optional, Sequence, TextIO

import numpy as np

from .bvp_solver import solve
from .config import EXAMPLES, parse_problem_config
from .errors import FracBvpError, NonConvergence, UnstableLimit
from .exact_grid import Grid, GridFunction, format_rational, parse_rational
from .green_kernel import BvpShape, green_table
from .hypotheses import classify_hypotheses, lambda_intervals
from .verify import run_all

EXIT_OK, EXIT_ERROR, EXIT_NONCONVERGENCE, EXIT_UNSTABLE = 0, 1, 2, 3


def write_atomic(path: os.PathLike | str, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load(config: str):
    return parse_problem_config(Path(config).read_text())


def cmd_solve(
    config: str,
    method: str,
    out: str,
    tol: float = 1e-12,
    max_iter: int = 1000,
    lam: Optional[float] = None,
    stream: TextIO = sys.stdout,
) -> int:
    problem = _load(config)
    if lam is not None:
        problem = problem.with_lambda(lam)
    try:
        sol = solve(problem, method, tol=tol, max_iter=max_iter)
    except NonConvergence as exc:
        print(f"error: {exc}", file=stream)
        return EXIT_NONCONVERGENCE
    write_atomic(out, sol.to_csv())
    stream.write(sol.report())
    return EXIT_OK


def cmd_green(v: str, b: int, out: str, stream: TextIO = sys.stdout) -> int:
    table = green_table(BvpShape(parse_rational(v), b))
    write_atomic(out, table.to_csv())
    print(f"wrote {b + 3}x{b + 1} Green table to {out}", file=stream)
    return EXIT_OK


def _parse_h(text: str, shape: BvpShape) -> GridFunction:
    parts = [float(x) for x in text.split(",")]
    if len(parts) == 1:
        parts *= shape.b + 2
    return GridFunction(Grid(shape.v - 1, shape.b + 2), np.array(parts))


def cmd_constants(v: str, b: int, h: Optional[str] = None, stream: TextIO = sys.stdout) -> int:
    shape = BvpShape(parse_rational(v), b)
    hf = _parse_h(h, shape) if h is not None else None
    table = green_table(shape, hf)
    lines = [
        f"v={format_rational(shape.v)}",
        f"b={shape.b}",
        f"denominator={shape.denominator:.17g}",
        f"D={table.D:.17g}",
        f"cone_coeff={table.cone_coeff:.17g}",
    ]
    if hf is not None:
        lines += [f"sigma={table.sigma_h:.17g}", f"tau={table.tau_h:.17g}"]
    stream.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(v: str, b: int, stream: TextIO = sys.stdout) -> int:
    shape = BvpShape(parse_rational(v), b)
    results = run_all(shape)
    for r in results:
        print(r.line(), file=stream)
    ok = all(r.passed for r in results)
    print(f"{'PASS' if ok else 'FAIL'} all ({shape})", file=stream)
    return EXIT_OK if ok else EXIT_ERROR


def interval_report(problem) -> str:
    """Hypothesis classification, sigma/tau and both lambda intervals."""
    shape = problem.shape
    hyp = classify_hypotheses(problem.f, shape.b)
    table = green_table(shape, problem.h)
    lines = [
        f"limit.zero={hyp.at_zero.describe()}",
        f"limit.b={hyp.at_b.describe()}",
        f"limit.infinity={hyp.at_infinity.describe()}",
        f"H1={str(hyp.h1).lower()}",
        f"H2={str(hyp.h2).lower()}",
        f"H3={str(hyp.h3).lower()}",
        f"H4={str(hyp.h4).lower()}",
        f"existence_h1h2={str(hyp.existence_h1h2).lower()}",
        f"existence_h3h4={str(hyp.existence_h3h4).lower()}",
        f"sigma={table.sigma_h:.17g}",
        f"tau={table.tau_h:.17g}",
    ]
    text = "\n".join(lines) + "\n"
    if hyp.existence_h3h4 and table.tau_h > 0:
        l, L = hyp.at_zero.estimate, hyp.at_infinity.estimate
        text += lambda_intervals(table.sigma_h, table.tau_h, l, L).to_text()
    else:
        text += "intervals.applicable=false\n"
    return text


def cmd_interval(config: str, stream: TextIO = sys.stdout) -> int:
    stream.write(interval_report(_load(config)))
    return EXIT_OK


def cmd_example(n: int, directory: str = ".", stream: TextIO = sys.stdout) -> int:
    """Emit Example ``n``'s config and reports; Example 2 is also solved."""
    if n not in EXAMPLES:
        print(f"error: no example {n}; choose 1, 2 or 3", file=stream)
        return EXIT_ERROR
    root = Path(directory)
    cfg = root / f"example{n}.cfg"
    write_atomic(cfg, EXAMPLES[n])
    print(f"wrote {cfg}", file=stream)
    problem = parse_problem_config(EXAMPLES[n])
    report = interval_report(problem)
    write_atomic(root / f"example{n}_interval.txt", report)
    stream.write(report)
    if n != 2:
        return EXIT_OK

    hyp = classify_hypotheses(problem.f, problem.shape.b)
    table = green_table(problem.shape, problem.h)
    intervals = lambda_intervals(
        table.sigma_h, table.tau_h, hyp.at_zero.estimate, hyp.at_infinity.estimate
    )
    lam = intervals.sublinear_midpoint()
    if lam is None:
        lam = 0.9 / table.sigma_h
        print(f"sublinear_interval empty; solving at lambda = 0.9/sigma = {lam:.17g}", file=stream)
    else:
        print(f"solving at sublinear_interval midpoint lambda = {lam:.17g}", file=stream)
    return cmd_solve(
        str(cfg),
        "fixedpoint",
        str(root / "example2_solution.csv"),
        lam=lam,
        stream=stream,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fracbvp",
        description="Discrete fractional boundary value problem toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve a configured problem")
    p.add_argument("--config", required=True)
    p.add_argument("--method", required=True, choices=["green", "direct", "fixedpoint"])
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--max-iter", type=int, default=1000)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--out", required=True)

    p = sub.add_parser("green", help="write the Green's function table as CSV")
    p.add_argument("--v", required=True)
    p.add_argument("--b", required=True, type=int)
    p.add_argument("--out", required=True)

    p = sub.add_parser("constants", help="print D, the cone coefficient, sigma and tau")
    p.add_argument("--v", required=True)
    p.add_argument("--b", required=True, type=int)
    p.add_argument("--h", default=None, help="constant or comma-separated b+2 values")

    p = sub.add_parser("verify", help="run the identity and bound checks for a shape")
    p.add_argument("--v", required=True)
    p.add_argument("--b", required=True, type=int)

    p = sub.add_parser("interval", help="classify growth limits and print lambda intervals")
    p.add_argument("--config", required=True)

    p = sub.add_parser("example", help="reproduce one of the three worked examples")
    p.add_argument("n", type=int)
    p.add_argument("--dir", default=".")
    return parser


def main(argv: Optional[Sequence[str]] = None, stream: TextIO = sys.stdout) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "solve":
            return cmd_solve(
                args.config, args.method, args.out, args.tol, args.max_iter, args.lam, stream
            )
        if args.command == "green":
            return cmd_green(args.v, args.b, args.out, stream)
        if args.command == "constants":
            return cmd_constants(args.v, args.b, args.h, stream)
        if args.command == "verify":
            return cmd_verify(args.v, args.b, stream)
        if args.command == "interval":
            return cmd_interval(args.config, stream)
        if args.command == "example":
            return cmd_example(args.n, args.dir, stream)
    except UnstableLimit as exc:
        print(f"error: UnstableLimit: {exc}", file=stream)
        return EXIT_UNSTABLE
    except (FracBvpError, OSError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stream)
        return EXIT_ERROR
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
