"""Command-line surface: pinv, check, gen, and bench subcommands.

Exit codes are part of the contract:

* 0  success
* 1  I/O, parse, or shape errors
* 2  hypothesis violation in strict mode (including singular X or Y)
* 3  infeasible generator spec
* 64 usage errors

``MPX_SEED`` in the environment provides the default seed for ``gen`` and
``bench`` when ``--seed`` is not given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .bench import run_bench, summarize, write_csv
from .decomp import (
    NotHpdError,
    SingularMatrixError,
    SvdConvergenceError,
    svd,
)
from .formulas import (
    HypothesisViolationError,
    PinvResult,
    pinv_block,
    pinv_ny,
    pinv_oracle_result,
    pinv_xn,
    pinv_xny,
    pinv_xny_baseline,
    pinv_xny_hermitian,
)
from .generators import InstanceSpec, generate
from .matrix import DEFAULT_TOL, DimensionMismatchError, block_split, frobenius_norm, identity
from .mmio import MatrixMarketError, read_matrix, write_matrix
from .projectors import (
    check_condition,
    condition_side,
    normalize_condition_id,
    structure_report_x,
    structure_report_y,
)

EXIT_OK = 0
EXIT_IO = 1
EXIT_HYPOTHESIS = 2
EXIT_INFEASIBLE = 3
EXIT_USAGE = 64

_METHOD_TOKENS = ("oracle", "lemma21", "thm31-xn", "thm31-ny", "thm33", "cor34", "cgms11")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # noqa: A002 - argparse API
        raise UsageError(message)


def _env_seed() -> int:
    raw = os.environ.get("MPX_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"MPX_SEED must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mpx", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pinv", parents=[], help="compute a pseudo-inverse by any method")
    p.add_argument("--n", required=True, help="matrix file for N (or M for oracle/lemma21)")
    p.add_argument("--x", help="matrix file for X (default identity)")
    p.add_argument("--y", help="matrix file for Y (default identity)")
    p.add_argument("--method", default="oracle", choices=_METHOD_TOKENS)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="hypothesis check tolerance")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--strict", dest="strict", action="store_true", default=True)
    mode.add_argument("--permissive", dest="strict", action="store_false")
    p.add_argument("--out", help="write the candidate pseudo-inverse here")
    p.add_argument("--report", help="write the plain-text report here (default stdout)")
    p.add_argument("--verify", action="store_true", help="also compare against the SVD oracle")
    p.add_argument("--split", help="ROW,COL block cut, required by --method lemma21")
    p.set_defaults(func=cmd_pinv)

    p = sub.add_parser("check", help="evaluate structural conditions and the block report")
    p.add_argument("--n", required=True)
    p.add_argument("--x", help="check the X side of this matrix")
    p.add_argument("--y", help="check the Y side of this matrix")
    p.add_argument("--conditions", help="comma-separated ids (default: all for the side)")
    p.add_argument("--k-max", type=int, default=8)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen", help="generate a structured test instance")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--cond", type=float, default=10.0)
    p.add_argument("--flavor", default="a1a2")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="time the product formula against the oracle")
    p.add_argument("--sizes", default="16,32,64", help="comma-separated square sizes")
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--cond", type=float, default=10.0)
    p.add_argument("--csv", help="write per-trial records here")
    p.set_defaults(func=cmd_bench)

    return parser


def _read(path: str) -> np.ndarray:
    return read_matrix(path)


def _report_lines(result: PinvResult, m_src: np.ndarray, verify: bool) -> list[str]:
    lines = [
        f"method: {result.method}",
        f"rows: {m_src.shape[0]}",
        f"cols: {m_src.shape[1]}",
    ]
    for check in result.hypothesis_checks:
        passed = "yes" if check.passed else "no"
        lines.append(f"check: {check.name} passed={passed} residual={check.residual:.6e}")
    res = result.residuals
    lines.append(f"residual-a: {res.r_a:.6e}")
    lines.append(f"residual-b: {res.r_b:.6e}")
    lines.append(f"residual-c: {res.r_c:.6e}")
    lines.append(f"residual-d: {res.r_d:.6e}")
    if verify:
        z_oracle = pinv_oracle_result(m_src).z
        dist = frobenius_norm(result.z - z_oracle) / max(1.0, frobenius_norm(z_oracle))
        lines.append(f"oracle-distance: {dist:.6e}")
    return lines


def _parse_split(raw: str, shape: tuple[int, int]) -> tuple[int, int]:
    parts = raw.split(",")
    if len(parts) != 2:
        raise UsageError(f"--split must be ROW,COL, got {raw!r}")
    try:
        row, col = int(parts[0]), int(parts[1])
    except ValueError:
        raise UsageError(f"--split must be integers, got {raw!r}") from None
    if not (0 < row < shape[0] and 0 < col < shape[1]):
        raise UsageError(f"--split {raw} does not cut a {shape[0]}x{shape[1]} matrix")
    return row, col


def cmd_pinv(args) -> int:
    method = args.method
    n_mat = _read(args.n)
    if method == "lemma21":
        if args.x or args.y:
            raise UsageError("--method lemma21 interprets --n as the block matrix; "
                             "--x/--y are not allowed")
        if not args.split:
            raise UsageError("--method lemma21 requires --split ROW,COL")
        row, col = _parse_split(args.split, n_mat.shape)
        a, c, b, d = block_split(n_mat, row, col)
        result = pinv_block(a, b, c, d, tol=args.tol, strict=args.strict)
        m_src = n_mat
    else:
        if args.split:
            raise UsageError("--split is only meaningful with --method lemma21")
        if method == "thm31-xn" and args.y:
            raise UsageError("--method thm31-xn inverts X N and does not take --y")
        if method == "thm31-ny" and args.x:
            raise UsageError("--method thm31-ny inverts N Y and does not take --x")
        x = _read(args.x) if args.x else identity(n_mat.shape[0])
        y = _read(args.y) if args.y else identity(n_mat.shape[1])
        if method == "oracle":
            m_src = x @ n_mat @ y
            result = pinv_oracle_result(m_src, tol=None)
        else:
            f = svd(n_mat)
            if method == "thm31-xn":
                result = pinv_xn(x, n_mat, f, tol=args.tol, strict=args.strict)
                m_src = x @ n_mat
            elif method == "thm31-ny":
                result = pinv_ny(n_mat, y, f, tol=args.tol, strict=args.strict)
                m_src = n_mat @ y
            else:
                fn = {"thm33": pinv_xny, "cor34": pinv_xny_hermitian,
                      "cgms11": pinv_xny_baseline}[method]
                result = fn(x, n_mat, y, f, tol=args.tol, strict=args.strict)
                m_src = x @ n_mat @ y
    if args.out:
        write_matrix(args.out, result.z)
    lines = _report_lines(result, m_src, args.verify)
    if args.report:
        Path(args.report).write_text("\n".join(lines) + "\n", encoding="ascii")
    else:
        print("\n".join(lines))
    return EXIT_OK


def _verdict_line(verdict) -> str:
    parts = [
        f"condition: {verdict.condition_id}",
        f"holds={'yes' if verdict.holds else 'no'}",
        f"residual={verdict.detail:.6e}",
    ]
    if verdict.witness is not None:
        parts.append(f"k={verdict.witness.k}")
        if verdict.witness.ell is not None:
            parts.append(f"ell={verdict.witness.ell}")
        if verdict.witness.c is not None:
            parts.append(f"c={verdict.witness.c}")
    return " ".join(parts)


def cmd_check(args) -> int:
    if bool(args.x) == bool(args.y):
        raise UsageError("check requires exactly one of --x or --y")
    n_mat = _read(args.n)
    f = svd(n_mat)
    side = "X" if args.x else "Y"
    mat = _read(args.x or args.y)
    if args.conditions:
        try:
            ids = [
                normalize_condition_id(tok)
                for tok in args.conditions.split(",")
                if tok.strip()
            ]
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        bad = [cid for cid in ids if condition_side(cid) != side]
        if bad:
            raise UsageError(f"conditions {bad} do not apply to the {side} side")
    else:
        ids = [f"C{i}" if side == "X" else f"C{i}'" for i in range(1, 8)]
    if args.k_max < 1:
        raise UsageError("--k-max must be >= 1")
    for cid in ids:
        verdict = check_condition(cid, mat, f, k_max=args.k_max, tol=args.tol)
        print(_verdict_line(verdict))
    report = (structure_report_x if side == "X" else structure_report_y)(mat, f, args.tol)
    print(
        f"structure: side={report.side} off-block-norm={report.off_block_norm:.6e} "
        f"satisfied={'yes' if report.satisfied else 'no'}"
    )
    return EXIT_OK


def cmd_gen(args) -> int:
    seed = args.seed if args.seed is not None else _env_seed()
    try:
        spec = InstanceSpec(
            m=args.m, n=args.n, r=args.r, sigma_cond=args.cond,
            flavor=args.flavor, seed=seed,
        )
        spec.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    inst = generate(spec)
    if inst.notes:
        for note in inst.notes:
            print(f"infeasible: {note.code}: {note.message}", file=sys.stderr)
        return EXIT_INFEASIBLE
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_matrix(out / "N.mtx", inst.n_matrix)
    write_matrix(out / "X.mtx", inst.x)
    write_matrix(out / "Y.mtx", inst.y)
    sidecar = {
        "m": spec.m,
        "n": spec.n,
        "r": spec.r,
        "sigma_cond": spec.sigma_cond,
        "flavor": spec.flavor,
        "seed": spec.seed,
        "planted_off_norm": inst.planted_off_norm,
    }
    (out / "spec.json").write_text(json.dumps(sidecar, indent=2) + "\n", encoding="ascii")
    print(f"wrote N.mtx X.mtx Y.mtx spec.json to {out}")
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    try:
        sizes = [int(tok) for tok in args.sizes.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"--sizes must be comma-separated integers, got {args.sizes!r}") from None
    if not sizes or any(s < 2 for s in sizes):
        raise UsageError("--sizes must contain integers >= 2")
    seed = args.seed if args.seed is not None else _env_seed()
    records = run_bench(sizes, args.trials, seed, sigma_cond=args.cond)
    if args.csv:
        write_csv(records, args.csv)
    for line in summarize(records):
        print(line)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (HypothesisViolationError, SingularMatrixError) as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (MatrixMarketError, DimensionMismatchError, NotHpdError,
            SvdConvergenceError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
