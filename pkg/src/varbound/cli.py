"""Command-line front end.

Subcommands: bound (numeric / certified / exact), table1 (batch spin bounds),
and the geometry exports jnr2d, jnr3d, dual2d, urange.  Reports are JSON with
floats at fixed 17-significant-digit precision, so identical commands with the
same seed produce byte-identical output; files are written atomically.

Exit codes: 0 success, 1 usage or input error, 2 certification failure,
3 symbolic budget or grid cap exceeded.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import geometry, matrixio
from .bounds import BoundResult, SolverConfig, WeightedPair, bound_numeric
from .errors import (
    BudgetExceededError,
    CertificationError,
    GridCapError,
    VarboundError,
    ZeroResultantError,
)
from .exact import ExactConfig, bound_exact, bound_exact_spin
from .linalg import HermitianOperator, angular_momentum, half_integer
from .sectors import Grid, certified_bound, certified_bound_auto, uncertainty_range_approx

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CERTIFICATION = 2
EXIT_BUDGET = 3


@dataclass(frozen=True)
class RunConfig:
    tolerance: float = 1e-9
    multistarts: int = 81
    directions: int = 720
    precision_bits: int = 256
    seed: int = 42
    output_format: str = "json"

    def __post_init__(self):
        if self.tolerance <= 0 or self.multistarts <= 0 or self.directions <= 0 \
                or self.precision_bits <= 0 or self.seed < 0:
            raise ValueError("RunConfig fields must be positive")
        if self.output_format not in ("json", "csv", "gnuplot"):
            raise ValueError(f"unknown output format {self.output_format!r}")


# ---------------------------------------------------------------------------
# canonical JSON with fixed float formatting


def _fmt_float(v: float) -> str:
    if v != v or v in (float("inf"), float("-inf")):
        raise ValueError(f"cannot serialize non-finite float {v!r}")
    text = format(float(v), ".17g")
    return text


def canonical_json(obj, indent=0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        rows = [
            f'{pad}  {canonical_json(str(k))}: {canonical_json(v, indent + 1)}'
            for k, v in sorted(obj.items())
        ]
        return "{\n" + ",\n".join(rows) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        rows = [f"{pad}  {canonical_json(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(rows) + f"\n{pad}]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        out = obj.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        return f'"{out}"'
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(text: str, out_path):
    if out_path:
        matrixio.atomic_write_text(out_path, text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


# ---------------------------------------------------------------------------
# shared input handling


def _parse_weights(raw: str) -> tuple[float, float]:
    parts = raw.split(",")
    if len(parts) != 2:
        raise ValueError(f"--weights expects 'a,b', got {raw!r}")
    a, b = (float(p) for p in parts)
    if a <= 0 or b <= 0:
        raise ValueError("weights must be positive")
    return a, b


def _load_pair(args) -> tuple[HermitianOperator, HermitianOperator, Fraction | None]:
    if args.angmom is not None:
        j = half_integer(args.angmom)
        jx, jy, _ = angular_momentum(j)
        return jx, jy, j
    if len(args.matrices) != 2:
        raise ValueError("provide two matrix files or --angmom J")
    x = matrixio.load_hermitian(args.matrices[0])
    y = matrixio.load_hermitian(args.matrices[1])
    return x, y, None


def _state_to_json(state) -> dict:
    flat = state.matrix.reshape(-1)
    return {"dim": state.dim, "entries": [[float(z.real), float(z.imag)] for z in flat]}


def _bound_report(result: BoundResult, polynomial=None) -> dict:
    report = {
        "method": result.method,
        "value": result.value,
        "error": result.error,
        "minimizer": [result.minimizer[0], result.minimizer[1]],
        "witness": _state_to_json(result.witness),
    }
    if polynomial is not None:
        report["polynomial"] = {
            "pretty": polynomial.pretty(),
            **polynomial.to_json_dict(),
        }
    return report


# ---------------------------------------------------------------------------
# subcommands


def cmd_bound(args) -> tuple[int, dict]:
    x, y, j = _load_pair(args)
    a, b = _parse_weights(args.weights)
    cfg = SolverConfig(multistarts=args.multistarts)
    if args.method == "numeric":
        result = bound_numeric(WeightedPair(x, y, a, b), cfg)
        report = _bound_report(result)
    elif args.method == "certified":
        if (a, b) != (1.0, 1.0):
            raise ValueError("certified bounds support weights 1,1 only")
        result = certified_bound_auto(x, y, args.tol)
        report = _bound_report(result)
        report["grid_sizes"] = list(result.diagnostics["grid_sizes"])
    else:
        if (a, b) != (1.0, 1.0):
            raise ValueError("exact bounds support weights 1,1 only")
        exact_cfg = ExactConfig(precision_bits=args.precision, numeric=cfg)
        if j is not None:
            result, factor = bound_exact_spin(j, exact_cfg)
        else:
            result, factor = bound_exact(x, y, exact_cfg)
        report = _bound_report(result, factor)
    report["config"] = {
        "method": args.method,
        "weights": [a, b],
        "tolerance": args.tol,
        "multistarts": args.multistarts,
        "precision_bits": args.precision,
        "seed": args.seed,
    }
    return EXIT_OK, report


def cmd_table1(args) -> tuple[int, dict]:
    js = [half_integer(raw) for raw in args.j]
    if args.max_j is not None:
        top = half_integer(args.max_j)
        k = Fraction(1, 2)
        while k <= top:
            js.append(k)
            k += Fraction(1, 2)
    js = sorted(set(js))
    rows = []
    for j in js:
        row = {"j": f"{j.numerator}/{j.denominator}" if j.denominator > 1 else str(j.numerator)}
        try:
            if args.method == "numeric":
                jx, jy, _ = angular_momentum(j)
                result = bound_numeric(
                    WeightedPair(jx, jy), SolverConfig(multistarts=args.multistarts)
                )
                row["value"] = result.value
            else:
                result, factor = bound_exact_spin(
                    j, ExactConfig(precision_bits=args.precision)
                )
                row["value"] = result.value
                row["polynomial_order"] = factor.degree_in("lam")
                row["polynomial"] = factor.pretty()
            row["status"] = "ok"
        except VarboundError as exc:
            row["status"] = f"error: {exc}"
        rows.append(row)
    return EXIT_OK, {"rows": rows, "method": args.method}


def _table_csv(report: dict) -> str:
    lines = ["j,value,polynomial_order,status"]
    for row in report["rows"]:
        lines.append(
            f"{row['j']},{_fmt_float(row['value']) if 'value' in row else ''},"
            f"{row.get('polynomial_order', '')},{row['status']}"
        )
    return "\n".join(lines) + "\n"


def cmd_geometry(args) -> tuple[int, dict | None]:
    x, y, _ = _load_pair(args)
    kind = args.command
    if kind == "jnr2d":
        poly = geometry.jnr2d(x, y, args.dirs)
        payload = geometry.polytope_to_json_dict(poly)
        csv_text = geometry.polytope_to_csv(poly)
        gnuplot_kind = "curve2d"
        data_for_plot = "\n".join(
            f"{_fmt_float(px)} {_fmt_float(py)}" for px, py in poly.points
        )
    elif kind == "jnr3d":
        poly = geometry.jnr3d_variance_surface(x, y, args.dirs)
        payload = geometry.polytope_to_json_dict(poly)
        csv_text = geometry.polytope_to_csv(poly)
        gnuplot_kind = "cloud3d"
        data_for_plot = "\n".join(
            f"{_fmt_float(p[0])} {_fmt_float(p[1])} {_fmt_float(p[2])} {_fmt_float(s)}"
            for p, s in zip(poly.points, poly.shades)
        )
    elif kind == "dual2d":
        curve = geometry.dual2d(x, y, args.dirs)
        payload = geometry.dual_to_json_dict(curve)
        csv_text = geometry.dual_to_csv(curve)
        gnuplot_kind = "curve2d"
        data_for_plot = "\n".join(
            f"{_fmt_float(vx)} {_fmt_float(vy)}" for vx, vy in curve.points
        )
    else:  # urange
        approx = uncertainty_range_approx(x, y, directions=max(args.dirs, 8))
        payload = approx.to_json_dict()
        csv_text = approx.to_csv()
        gnuplot_kind = "cells"
        blocks = []
        for cell in approx.cells:
            closed = list(cell.points) + ([cell.points[0]] if len(cell.points) else [])
            blocks.append(
                "\n".join(f"{_fmt_float(px)} {_fmt_float(py)}" for px, py in closed)
            )
        data_for_plot = "\n\n".join(blocks)

    if args.format == "json":
        _emit(canonical_json(payload) + "\n", args.out)
    elif args.format == "csv":
        _emit(csv_text, args.out)
    else:
        if not args.out:
            raise ValueError("--format gnuplot requires --out BASENAME")
        files = geometry.gnuplot_pair(args.out, gnuplot_kind, data_for_plot + "\n",
                                      title=f"{kind}")
        for name, contents in files.items():
            matrixio.atomic_write_text(name, contents)
        sys.stdout.write("wrote " + " ".join(sorted(files)) + "\n")
    return EXIT_OK, None


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="varbound",
        description="State-independent lower bounds for sums of variances of two observables",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_method=True):
        p.add_argument("matrices", nargs="*", default=[],
                       help="two matrix JSON files {dim, entries: [[re, im], ...]}")
        p.add_argument("--angmom", default=None, metavar="J",
                       help="spin pair (J_X, J_Y) for total angular momentum J ('3/2' or '1.5')")
        if with_method:
            p.add_argument("--method", choices=["numeric", "certified", "exact"],
                           default="numeric")
        p.add_argument("--tol", type=float, default=1e-4,
                       help="target certified error (certified method)")
        p.add_argument("--weights", default="1,1", metavar="A,B",
                       help="positive weights on the two variances")
        p.add_argument("--dirs", type=int, default=720, help="sweep direction count")
        p.add_argument("--precision", type=int, default=256,
                       help="working precision bits for the exact engine")
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--format", choices=["json", "csv", "gnuplot"], default="json")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--multistarts", type=int, default=81)

    p_bound = sub.add_parser("bound", help="lower bound for a pair of observables")
    add_common(p_bound)

    p_table = sub.add_parser("table1", help="batch spin-pair bounds")
    p_table.add_argument("j", nargs="*", default=[], help="spin values ('1/2', '1', ...)")
    p_table.add_argument("--max-j", default=None,
                         help="include every half-integer up to this value")
    p_table.add_argument("--method", choices=["numeric", "exact"], default="numeric")
    p_table.add_argument("--multistarts", type=int, default=81)
    p_table.add_argument("--precision", type=int, default=256)
    p_table.add_argument("--seed", type=int, default=42)
    p_table.add_argument("--format", choices=["json", "csv"], default="json")
    p_table.add_argument("--out", default=None)

    for name, blurb in [
        ("jnr2d", "2D joint numerical range boundary"),
        ("jnr3d", "3D variance-surface point cloud"),
        ("dual2d", "dual set of the 2D joint numerical range"),
        ("urange", "lower approximation of the attainable variance pairs"),
    ]:
        p = sub.add_parser(name, help=blurb)
        add_common(p, with_method=False)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "bound":
            code, report = cmd_bound(args)
        elif args.command == "table1":
            code, report = cmd_table1(args)
        else:
            return cmd_geometry(args)[0]
        if report is not None:
            if args.command == "table1" and args.format == "csv":
                _emit(_table_csv(report), args.out)
            else:
                _emit(canonical_json(report) + "\n", args.out)
        return code
    except (CertificationError, ZeroResultantError) as exc:
        sys.stderr.write(f"certification failure: {exc}\n")
        return EXIT_CERTIFICATION
    except (BudgetExceededError, GridCapError) as exc:
        sys.stderr.write(f"budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except (VarboundError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
