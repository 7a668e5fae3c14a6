"""Command-line interface.

Subcommands: ``evaluate``, ``compare``, ``curve``, ``plot``, ``synth``.
Exit codes: 0 ok, 2 usage, 3 ingestion, 4 computation.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import curve as ucc
from . import data, report, svg, synthetic
from .errors import AllScalesInfinite, ComputationError, IngestionError, MismatchedBase
from .references import constant_band, epsilon_perfect_band, random_band

EXIT_OK, EXIT_USAGE, EXIT_INGEST, EXIT_COMPUTE = 0, 2, 3, 4


# -- argument types ------------------------------------------------------------


def _axes(text):
    try:
        return ucc.Axes.parse(text)
    except ComputationError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _unit_interval(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {text}")
    return v


def _range(text):
    try:
        lo, hi = (float(t) for t in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None
    if not (0.0 <= lo < hi):
        raise argparse.ArgumentTypeError(f"need 0 <= lo < hi, got {text}")
    return lo, hi


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {v}")
    return v


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


# -- parser ---------------------------------------------------------------------

# options recorded in provenance, in order; (dest, flag, kind)
_RECORDED = {
    "evaluate": [("axes", "--axes", "value"), ("partial", "--partial", "range"),
                 ("cost_c", "--cost-c", "value"), ("at_missrate", "--at-missrate", "value"),
                 ("normalize", "--normalize", "value"), ("seed", "--seed", "value"),
                 ("allow_infinite", "--allow-infinite", "flag"), ("format", "--format", "value")],
    "compare": [("axes", "--axes", "value"), ("partial", "--partial", "range"),
                ("cost_c", "--cost-c", "value"), ("at_missrate", "--at-missrate", "value"),
                ("normalize", "--normalize", "value"), ("seed", "--seed", "value"),
                ("n_perm", "--n-perm", "value"), ("allow_infinite", "--allow-infinite", "flag"),
                ("format", "--format", "value")],
}


def _common(p, *, fmt=("json", "csv"), fmt_default="json"):
    p.add_argument("--axes", type=_axes, default=ucc.DEFAULT_AXES,
                   help="axis pair x:y (bandwidth:miss_rate, excess:deficit, excess:miss_rate)")
    p.add_argument("--normalize", choices=("none", "std"), default="none",
                   help="express values in units of the population std of y")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--allow-infinite", action="store_true",
                   help="exclude records with zero active band and nonzero error instead of failing")
    p.add_argument("--format", choices=fmt, default=fmt_default)
    p.add_argument("--out", help="output path (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ucceval", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ucceval {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", help="areas, gains and costs for one or more models")
    p.add_argument("inputs", nargs="+")
    _common(p)
    p.add_argument("--partial", type=_range, help="partial area over y in lo:hi")
    p.add_argument("--cost-c", type=_unit_interval, default=0.1, help="cost weight c (default 0.1)")
    p.add_argument("--at-missrate", type=_unit_interval, help="report cost and MAE at this miss rate")

    p = sub.add_parser("compare", help="two models plus a paired permutation test")
    p.add_argument("file_a")
    p.add_argument("file_b")
    _common(p)
    p.add_argument("--partial", type=_range)
    p.add_argument("--cost-c", type=_unit_interval, default=0.1)
    p.add_argument("--at-missrate", type=_unit_interval)
    p.add_argument("--n-perm", type=_positive_int, default=999)

    p = sub.add_parser("curve", help="export curve points")
    p.add_argument("input")
    _common(p, fmt_default="csv")
    p.add_argument("--include-reference", action="store_true",
                   help="also export the constant-band reference curve")

    p = sub.add_parser("plot", help="render curves to SVG")
    p.add_argument("inputs", nargs="+", help="dataset files or curve CSV exports")
    _common(p, fmt=("svg",), fmt_default="svg")
    p.add_argument("--cost-c", type=_unit_interval, help="draw the isocost line and optimal point")
    p.add_argument("--no-reference", action="store_true")
    p.add_argument("--title", default="")

    p = sub.add_parser("synth", help="write a synthetic dataset")
    p.add_argument("--kind", choices=synthetic.KINDS, default="heteroskedastic")
    p.add_argument("--bands", default=None,
                   help="oracle|constant|random|epsilon_perfect (heteroskedastic); "
                        "tuned|weak|constant|random|epsilon_perfect (xsinx)")
    p.add_argument("--n", type=_positive_int, default=None, help="number of test records")
    p.add_argument("--n-train", type=_positive_int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=_positive_float, default=1e-3)
    p.add_argument("--sigma-lo", type=_positive_float, default=0.5)
    p.add_argument("--sigma-hi", type=_positive_float, default=2.5)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="output path (default: stdout)")
    return parser


# -- helpers --------------------------------------------------------------------


def _sha256(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _load(path: str, normalize: str) -> data.Dataset:
    try:
        ds = data.load(path)
    except OSError as exc:
        raise IngestionError(f"{path}: {exc.strerror or exc}") from None
    except IngestionError as exc:
        if path in str(exc):
            raise
        raise IngestionError(f"{path}: {exc}") from exc
    return data.normalize_std(ds) if normalize == "std" else ds


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
        return
    try:
        sys.stdout.write(text)
        sys.stdout.flush()
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the interpreter's flush at exit
        sys.stdout = open("/dev/null", "w")


def _canonical_argv(command, positionals, args) -> list[str]:
    argv = [command, *positionals]
    for dest, flag, kind in _RECORDED[command]:
        val = getattr(args, dest)
        if kind == "flag":
            if val:
                argv.append(flag)
        elif val is not None:
            if kind == "range":
                val = f"{val[0]!r}:{val[1]!r}"
            argv += [flag, str(val)]
    return argv


def _provenance(command, inputs, args) -> dict:
    return {
        "command": command,
        "argv": _canonical_argv(command, inputs, args),
        "inputs": [{"path": p, "sha256": _sha256(p)} for p in inputs],
        "flags": {dest: (list(v) if isinstance(v, tuple) else (str(v) if isinstance(v, ucc.Axes) else v))
                  for dest, _, _ in _RECORDED[command] for v in [getattr(args, dest)]},
        "seed": args.seed,
        "normalization": args.normalize,
        "std_convention": "population",
        "tool_version": __version__,
    }


def _entry(ds, path, args):
    return report.evaluate_model(
        ds, args.axes, source=path, partial=args.partial, cost_c=args.cost_c,
        at_missrate=args.at_missrate, allow_infinite=args.allow_infinite,
    )


def _render_report(rep: report.EvaluationReport, args) -> str:
    return rep.to_csv() if args.format == "csv" else rep.to_json()


# -- commands ---------------------------------------------------------------------


def cmd_evaluate(args) -> int:
    datasets = [_load(p, args.normalize) for p in args.inputs]
    rep = report.EvaluationReport(
        models=[_entry(ds, p, args) for ds, p in zip(datasets, args.inputs)],
        provenance=_provenance("evaluate", args.inputs, args),
    )
    _emit(_render_report(rep, args), args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    paths = [args.file_a, args.file_b]
    a, b = (_load(p, args.normalize) for p in paths)
    if a.name == b.name:
        a, b = a.renamed(f"{a.name}[a]"), b.renamed(f"{b.name}[b]")
    if not a.same_base(b):
        raise MismatchedBase()
    if args.allow_infinite:
        keep = np.isfinite(a.critical) & np.isfinite(b.critical)
        if not keep.any():
            raise AllScalesInfinite()
        a_eff, b_eff = a.subset(keep), b.subset(keep)
    else:
        a_eff, b_eff = a, b
    entries = [_entry(ds, p, args) for ds, p in zip((a, b), paths)]
    pair = report.compare_models(a_eff, b_eff, args.axes, n_perm=args.n_perm, seed=args.seed)
    rep = report.EvaluationReport(models=entries, pairwise=[pair],
                                  provenance=_provenance("compare", paths, args))
    _emit(_render_report(rep, args), args.out)
    return EXIT_OK


def cmd_curve(args) -> int:
    ds = _load(args.input, args.normalize)
    curves = [ucc.build_ucc(ds, args.axes)]
    if args.include_reference:
        curves.append(ucc.build_ucc(constant_band(ds), args.axes))
    text = ucc.to_csv(curves) if args.format == "csv" else ucc.to_json(curves)
    _emit(text, args.out)
    return EXIT_OK


def _is_curve_file(path: str) -> bool:
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            s = line.strip()
            if not s:
                continue
            if s.startswith("# axes=") or s.startswith("# model="):
                return True
            if not s.startswith("#"):
                return s == "k,x,y"
    return False


def _step_vertices(xs, ys, step: bool):
    if not step or len(xs) < 2:
        return list(xs), list(ys)
    vx, vy = [xs[0]], [ys[0]]
    for j in range(1, len(xs)):
        vx += [xs[j], xs[j]]
        vy += [ys[j - 1], ys[j]]
    return vx, vy


def cmd_plot(args) -> int:
    series: list[svg.Series] = []
    isocost = None
    axes = args.axes
    normalization = "std_units" if args.normalize == "std" else "none"
    refs: list[data.Dataset] = []
    for path in args.inputs:
        if not Path(path).exists():
            raise IngestionError(f"{path}: no such file")
        if _is_curve_file(path):
            for t in ucc.read_csv(Path(path).read_text(encoding="utf-8")):
                axes = t.axes
                vx, vy = _step_vertices(t.x, t.y, t.axes.y == "miss_rate")
                marker = None
                if args.cost_c is not None:
                    costs = args.cost_c * t.x + (1 - args.cost_c) * t.y
                    j = int(np.argmin(costs))
                    marker = (float(t.x[j]), float(t.y[j]))
                    if isocost is None:
                        isocost = (args.cost_c, float(costs[j]))
                series.append(svg.Series(t.model, [float(v) for v in vx], [float(v) for v in vy],
                                         dashed=t.model.endswith(":constant"), marker=marker))
            continue
        ds = _load(path, args.normalize)
        normalization = ds.normalization
        todo = [(ds, False)]
        if not args.no_reference and not any(r.same_base(ds) for r in refs):
            refs.append(ds)
            todo.append((constant_band(ds), True))
        for d, dashed in todo:
            c = ucc.build_ucc(d, axes)
            xs, ys = c.polyline
            marker = None
            if args.cost_c is not None:
                op, best = ucc.optimal_operating_point(c, args.cost_c)
                marker = (op.x, op.y)
                if isocost is None:
                    isocost = (args.cost_c, best)
            series.append(svg.Series(d.name, [float(v) for v in xs], [float(v) for v in ys],
                                     dashed=dashed, marker=marker))
    text = svg.render(series, svg.axis_title(axes.x, normalization),
                      svg.axis_title(axes.y, normalization), isocost=isocost, title=args.title)
    _emit(text, args.out)
    return EXIT_OK


def cmd_synth(args) -> int:
    n = args.n or (2000 if args.kind == "heteroskedastic" else 1000)
    cfg = synthetic.SyntheticSpec(kind=args.kind, n_train=args.n_train, n_test=n, seed=args.seed,
                                   sigma_lo=args.sigma_lo, sigma_hi=args.sigma_hi)
    if args.kind == "heteroskedastic":
        bands = args.bands or "oracle"
        base = synthetic.gen_heteroskedastic(cfg)
        makers = {
            "oracle": lambda: base,
            "constant": lambda: constant_band(base),
            "random": lambda: random_band(base, args.seed),
            "epsilon_perfect": lambda: epsilon_perfect_band(base, args.epsilon, args.seed),
        }
        if bands not in makers:
            raise _Usage(f"--bands {bands!r} is not available for {args.kind}")
        ds = makers[bands]()
    else:
        bands = args.bands or "tuned"
        models = synthetic.xsinx_models(cfg, epsilon=args.epsilon)
        if bands not in models:
            raise _Usage(f"--bands {bands!r} is not available for {args.kind}")
        ds = models[bands]
    comments = [f"generator: {cfg.describe()}", f"bands: {bands}"]
    if bands == "epsilon_perfect":
        comments.append(f"epsilon: {args.epsilon!r}")
    text = data.format_json(ds) if args.format == "json" else data.format_csv(ds, comments=comments)
    _emit(text, args.out)
    return EXIT_OK


class _Usage(Exception):
    pass


COMMANDS = {
    "evaluate": cmd_evaluate,
    "compare": cmd_compare,
    "curve": cmd_curve,
    "plot": cmd_plot,
    "synth": cmd_synth,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except _Usage as exc:
        print(f"ucceval: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IngestionError as exc:
        print(f"ucceval: ingestion error: {exc}", file=sys.stderr)
        return EXIT_INGEST
    except ComputationError as exc:
        print(f"ucceval: computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
