"""Command-line front end.

Exit codes: 0 success, 1 operational error, 2 mathematically negative
result (an uncolorable set, or a finite-precision run without a witness).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import catalog
from .geometry import NORMS, DirectionSet
from .solver import Coloring, export_cnf, solve

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NEGATIVE = 2


def _read_set(args) -> DirectionSet:
    if getattr(args, "file", None):
        return _load_any(args.file)
    if not args.set:
        raise catalog.CatalogError("give a catalog name or --file PATH")
    if args.set in catalog.BUILTINS:
        return catalog.builtin(args.set).directions
    return _load_any(args.set)


def _load_any(path: str) -> DirectionSet:
    p = Path(path)
    if not p.exists():
        raise catalog.CatalogError(
            f"unknown catalog or missing file {path!r}; available: {', '.join(catalog.BUILTINS)}"
        )
    data = json.loads(p.read_text())
    if "directions" not in data and "result" in data:
        # a saved perturbation plan; use its perturbed set
        ds = catalog.loads(json.dumps(data["result"]))
        return ds if ds.name else ds.with_name(p.stem)
    return catalog.load(p)


def _emit(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_verify(args) -> int:
    ds = _read_set(args)
    report = solve(ds)
    if args.format == "json":
        data = report.to_json(ds.name)
        if not args.timing:
            data["stats"].pop("wall_time")
        print(_dumps(data), end="")
    else:
        print(f"{ds.name}: {len(ds)} directions, {len(ds.edges)} orthogonal pairs, {len(ds.frames)} frames")
        print(f"verdict: {report.verdict}")
        print(
            f"nodes: {report.nodes}  propagations: {report.propagations}  "
            f"time: {report.wall_time:.4f}s  backend: {report.backend}"
        )
    if report.colorable and args.output:
        Path(args.output).write_text(_dumps(report.witness.to_json(ds.name)))
    return EXIT_OK if report.colorable else EXIT_NEGATIVE


def cmd_gen_rational(args) -> int:
    from .rational import rational_frames

    ds = rational_frames(args.max_n)
    if args.output:
        catalog.save(ds, args.output)
    if args.format == "json" and not args.output:
        sys.stdout.write(catalog.dumps(ds))
    else:
        print(f"{ds.name}: {len(ds)} directions, {len(ds.frames)} frames")
    return EXIT_OK


def cmd_perturb(args) -> int:
    from .rational import is_totally_incompatible, perturb_frames

    ds = _read_set(args)
    plan = perturb_frames(ds, args.epsilon, args.seed, norm=args.norm)
    data = plan.to_json()
    if args.output:
        Path(args.output).write_text(_dumps(data))
    if args.format == "json" and not args.output:
        print(_dumps(data), end="")
    else:
        dists = plan.frame_distances()
        print(
            f"{ds.name}: {len(plan.result.frames)} frames rotated independently, "
            f"max frame distance {max(dists):.6g} < {args.epsilon}, "
            f"totally incompatible: {is_totally_incompatible(plan.result)}"
        )
    return EXIT_OK


def cmd_fwt(args) -> int:
    from .fwt import fwt_pipeline

    ds = _read_set(args)
    rep = fwt_pipeline(
        ds,
        args.epsilon,
        args.seed,
        n_states=args.states,
        complete=not args.no_complete,
        shared_settings=not args.independent,
        norm=args.norm,
    )
    data = rep.to_json()
    if args.output:
        Path(args.output).write_text(_dumps(data))
    if args.format == "json" and not args.output:
        print(_dumps(data), end="")
    else:
        print(
            f"{ds.name}: settings from {rep.base.name} ({len(rep.base)} directions, "
            f"{len(rep.base.frames)} frames), epsilon {rep.epsilon}, seed {rep.seed}"
        )
        print(f"hidden states: {rep.model.n_states}")
        print(f"exact Nature violations: {len(rep.nature_violations)}")
        print(
            f"finite-precision witnesses within {rep.radius}: {len(rep.witnesses)} "
            f"(states covered: {len(rep.states_with_witness)}/{rep.model.n_states})"
        )
        for z in range(rep.model.n_states):
            w = next((w for w in rep.witnesses if w.z == z), None)
            if w is not None:
                print(
                    f"  z={z}: A frame {w.a_frame} slot {w.i} {w.a_point} -> {w.values[0]}, "
                    f"B frame {w.b_frame} slot {w.j} {w.b_point} -> {w.values[1]}, "
                    f"distance {w.distance:.6g}"
                )
    return EXIT_OK if rep.ok else EXIT_NEGATIVE


def cmd_cnf(args) -> int:
    ds = _read_set(args)
    _emit(args, export_cnf(ds))
    return EXIT_OK


def cmd_stats(args) -> int:
    from .fwt import discontinuity_stats, stats_csv

    ds = _read_set(args)
    if args.coloring:
        c = Coloring.from_json(json.loads(Path(args.coloring).read_text()))
    else:
        rep = solve(ds)
        if not rep.colorable:
            print(f"{ds.name} is uncolorable; no coloring to analyse", file=sys.stderr)
            return EXIT_NEGATIVE
        c = rep.witness
    radii = [float(r) for r in args.radii.split(",") if r.strip()]
    rows = discontinuity_stats(ds, c, radii, norm=args.norm)
    _emit(args, stats_csv(rows))
    return EXIT_OK


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


class _Parser(argparse.ArgumentParser):
    # usage errors are operational errors, keep 2 for negative verdicts
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="kscolor",
        description="Kochen-Specker colorability and finite-precision witnesses.",
        epilog="exit codes: 0 ok, 1 error, 2 negative verdict",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, set_arg=True, fmt="text"):
        if set_arg:
            p.add_argument("set", nargs="?", help=f"built-in set ({', '.join(catalog.BUILTINS)}) or file")
            p.add_argument("--file", help="direction-set JSON file")
        p.add_argument("--format", choices=("json", "csv", "text"), default=fmt)
        p.add_argument("-o", "--output", help="write the result file here")
        p.add_argument("--norm", choices=NORMS, default="operator",
                       help="projector norm for distances (default: operator)")

    p = sub.add_parser("verify", help="decide colorability")
    common(p)
    p.add_argument("--timing", action="store_true", help="include wall time in JSON output")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen-rational", help="rational directions up to a height")
    common(p, set_arg=False)
    p.add_argument("--max-n", type=_positive_int, required=True)
    p.set_defaults(func=cmd_gen_rational)

    p = sub.add_parser("perturb", help="totally incompatible perturbation of a set's frames")
    common(p)
    p.add_argument("--epsilon", type=_positive_float, default=0.02)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("fwt", help="two-wing finite-precision pipeline")
    common(p)
    p.add_argument("--epsilon", type=_positive_float, default=0.02)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--states", type=_positive_int, default=4, help="number of hidden states")
    p.add_argument("--independent", action="store_true",
                   help="perturb the B wing separately instead of sharing A's settings")
    p.add_argument("--no-complete", action="store_true",
                   help="perturb the set's frames as given, without completing orthogonal pairs")
    p.set_defaults(func=cmd_fwt)

    p = sub.add_parser("cnf", help="export DIMACS CNF")
    common(p)
    p.set_defaults(func=cmd_cnf)

    p = sub.add_parser("stats", help="color disagreement among nearby directions (CSV)")
    common(p, fmt="csv")
    p.add_argument("--coloring", help="coloring JSON; defaults to the solver's witness")
    p.add_argument("--radii", default="0.01,0.02,0.04,0.1")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (catalog.CatalogError, catalog.DirectionFileError, ValueError, RuntimeError, OSError) as exc:
        print(f"kscolor {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
