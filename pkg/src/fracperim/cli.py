"""``fracperim`` command line: sweep, verify, example.

Exit codes: 0 success, 1 a verification check failed, 2 invalid input
(schema violation, bad flag values), 3 divergent interaction (infinite
perimeter), 4 any other evaluation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

from fracperim.asymptotics import (
    DEFAULT_DEGREE,
    DEFAULT_THRESHOLD,
    default_grid,
    extrapolate,
    oscillation_probe,
    probe_grid,
    sweep,
)
from fracperim.errors import DivergentInteractionError, DomainError, FracPerimError, SchemaError
from fracperim.quad_nd import McSpec, QuadratureSpec
from fracperim.scene_io import dumps_scene, load_scene, validate
from fracperim.scenarios import (
    EX2_CHECKPOINTS,
    EX2_N_MAX,
    EX2_THRESHOLDS,
    build_exx,
    build_exx_special,
    build_t2_counterexample,
    ex2_divergence_reports,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_DIVERGENT, EXIT_EVAL = 0, 1, 2, 3, 4
EX2_DEFAULT_S = (0.1, 0.5, 0.9)


def parse_grid(spec: str) -> list[float]:
    """``geom:<s0>:<ratio>:<count>`` or ``list:<s1>,<s2>,...``.

    >>> parse_grid("geom:0.2:0.5:3")
    [0.2, 0.1, 0.05]
    >>> parse_grid("list:0.3,0.1")
    [0.3, 0.1]
    """
    kind, _, rest = spec.partition(":")
    try:
        if kind == "geom":
            s0, ratio, count = rest.split(":")
            grid = default_grid(float(s0), float(ratio), int(count))
        elif kind == "list":
            grid = [float(x) for x in rest.split(",")]
        else:
            raise ValueError
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"invalid grid {spec!r}: use geom:<s0>:<ratio>:<count> or list:<s1>,<s2>,..."
        ) from None
    if not grid or any(not (0 < s < 1) for s in grid):
        raise argparse.ArgumentTypeError(f"invalid grid {spec!r}: every s must lie in (0, 1)")
    return grid


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _s_value(text: str) -> float:
    v = float(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError("s must lie in (0, 1)")
    return v


def _limit_line(scene_id: str, table, degree: int, tol: float) -> dict:
    out = {"scene_id": scene_id}
    for col, key in (("s_per_s", "mu_hat"), ("alpha_s", "alpha_hat")):
        est = extrapolate(table, col, degree, tol)
        out[key] = est.value
        out[f"{key}_converged"] = est.converged
        out[f"{key}_residual_rms"] = est.residual_rms
    return out


def _write_text(path: Path | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(["" if v is None else (f"{v:.17g}" if isinstance(v, float) else v) for v in r])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_sweep(args) -> int:
    scene = load_scene(args.scene)
    quad = QuadratureSpec(rel_tol=args.quad_tol) if args.quad_tol else None
    table = sweep(scene, args.s_grid or default_grid(), quad, McSpec(seed=args.seed))
    _write_text(args.out, table.to_csv())
    if len(table) >= args.degree + 3:
        print(json.dumps(_limit_line(scene.scene_id, table, args.degree, args.tol)), file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    from fracperim.verify import run_suite

    ok = True
    out = sys.stdout if args.out is None else open(args.out, "w", encoding="utf-8")
    try:
        for rep in run_suite(args.suite, seed=args.seed):
            ok &= rep.status != "fail"
            out.write(rep.to_json() + "\n")
            out.flush()
    finally:
        if out is not sys.stdout:
            out.close()
    return 0 if ok else EXIT_FAIL


def _example_t2(args, out: Path) -> None:
    scenes = build_t2_counterexample(1)
    rows = []
    grid = args.s_grid or default_grid()
    for sc in scenes:
        (out / f"{sc.scene_id}.json").write_text(dumps_scene(sc), encoding="utf-8")
        table = sweep(sc, grid)
        (out / f"{sc.scene_id}.csv").write_text(table.to_csv(), encoding="utf-8")
        est = extrapolate(table, degree=args.degree, threshold=args.tol)
        rows.append((sc.scene_id, est.value, est.residual_rms, est.converged))
    gap = rows[0][1] + rows[1][1] - rows[2][1]
    rows.append(("gap", gap, math.nan, True))
    _write_text(out / "t2-summary.csv", _csv_text(("scene_id", "mu_hat", "residual_rms", "converged"), rows))
    sys.stdout.write(_csv_text(("scene_id", "mu_hat", "residual_rms", "converged"), rows))


def _probe_table(scene, k_max: int) -> str:
    p = scene.set_e if not hasattr(scene.set_e, "members") else scene.set_e.members[-1]
    phi = p.profile.phi
    rows = []
    for r in oscillation_probe(p, range(1, k_max + 1)):
        upper, lower = phi.probe_bounds(r.k)
        lo, hi = phi.probe_log10_s(r.k)
        rows.append((r.k, lo, r.alpha_at_s_lo, upper, hi, r.alpha_at_s_hi, lower))
    header = ("k", "log10_s_lo", "alpha_at_s_lo", "upper_bound", "log10_s_hi", "alpha_at_s_hi", "lower_bound")
    return _csv_text(header, rows)


def _example_exx(args, out: Path, special: bool) -> None:
    k_max = args.k_max
    scene = build_exx_special(k_max) if special else build_exx(k_max)
    (out / f"{scene.scene_id}.json").write_text(dumps_scene(scene), encoding="utf-8")
    probes = _probe_table(scene, k_max)
    (out / f"{scene.scene_id}-probes.csv").write_text(probes, encoding="utf-8")
    sys.stdout.write(probes)
    if special:
        table = sweep(scene, args.s_grid or [0.2, 0.1, 0.05, 0.02, 0.01])
    else:
        p = scene.set_e
        table = sweep(scene, probe_grid(p, range(1, min(k_max, 3) + 1)))
    (out / f"{scene.scene_id}.csv").write_text(table.to_csv(), encoding="utf-8")
    if len(table) >= args.degree + 3:
        print(json.dumps(_limit_line(scene.scene_id, table, args.degree, args.tol)))


def _example_ex2(args, out: Path) -> None:
    n_max = args.n_terms or int(EX2_N_MAX)
    s_values = [args.s] if args.s is not None else list(EX2_DEFAULT_S)
    if n_max < 4:
        raise DomainError("the ex2 truncation needs --n-terms >= 4")
    doc = {"dim": 1, "id": f"ex2-N{n_max}", "set": {"type": "ex2", "n_terms": n_max}}
    validate(doc)
    (out / f"{doc['id']}.json").write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    checkpoints = tuple(n for n in EX2_CHECKPOINTS if n <= n_max) or (n_max,)
    reports = ex2_divergence_reports(s_values, EX2_THRESHOLDS, n_max, checkpoints)
    crossings, table = [], []
    for rep in reports:
        for t, n in rep.rows():
            crossings.append((rep.s, t, n, "open" if n is None else "reached"))
        for i, n in enumerate(rep.checkpoints):
            table.append((rep.s, n, rep.exact[i], rep.chain[i], rep.lower_bound[i]))
    cross_text = _csv_text(("s", "threshold", "n_exceeded", "status"), crossings)
    (out / "ex2-thresholds.csv").write_text(cross_text, encoding="utf-8")
    (out / "ex2-checkpoints.csv").write_text(
        _csv_text(("s", "n_terms", "exact_per_s", "chain_bound", "lower_bound"), table), encoding="utf-8"
    )
    sys.stdout.write(cross_text)


def cmd_example(args) -> int:
    out = Path(args.out) if args.out is not None else Path(".")
    out.mkdir(parents=True, exist_ok=True)
    if args.name == "t2":
        _example_t2(args, out)
    elif args.name in ("exx", "exx-special"):
        _example_exx(args, out, args.name == "exx-special")
    else:
        _example_ex2(args, out)
    return 0


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    from fracperim.verify import SUITES

    parser = argparse.ArgumentParser(prog="fracperim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=0, help="Monte Carlo seed (unsigned 64-bit)")
    common.add_argument("--tol", type=_positive, default=DEFAULT_THRESHOLD, help="extrapolation convergence threshold")
    common.add_argument("--degree", type=int, default=DEFAULT_DEGREE, help="extrapolation polynomial degree")
    common.add_argument("--s-grid", type=parse_grid, default=None, help="geom:<s0>:<ratio>:<count> or list:<s1>,...")

    p = sub.add_parser("sweep", parents=[common], help="write the s-sweep table of a scene as CSV")
    p.add_argument("--scene", required=True, type=Path)
    p.add_argument("--out", type=Path, default=None, help="CSV path (default: stdout)")
    p.add_argument("--quad-tol", type=_positive, default=None, help="relative quadrature tolerance")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", parents=[common], help="run verification suites, JSON lines on stdout")
    p.add_argument("--suite", choices=("all",) + SUITES, default="all")
    p.add_argument("--out", type=Path, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("example", parents=[common], help="build a named construction and write its artifacts")
    p.add_argument("name", choices=("t2", "exx", "exx-special", "ex2"))
    p.add_argument("--out", default=None, help="output directory (default: current directory)")
    p.add_argument("--k-max", type=int, default=3)
    p.add_argument("--n-terms", type=int, default=None)
    p.add_argument("--s", type=_s_value, default=None)
    p.set_defaults(func=cmd_example)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"fracperim: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DivergentInteractionError as exc:
        msg = str(exc)
        print(f"fracperim: {msg if 'divergent' in msg else 'divergent: ' + msg}", file=sys.stderr)
        return EXIT_DIVERGENT
    except DomainError as exc:
        print(f"fracperim: invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FracPerimError as exc:
        print(f"fracperim: {exc}", file=sys.stderr)
        return EXIT_EVAL
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK
    except OSError as exc:
        print(f"fracperim: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
