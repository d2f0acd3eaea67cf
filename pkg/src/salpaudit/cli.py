"""Command-line front end.

Subcommands: run (experiment grid from a JSON config), report (comparison
stats + SVG plots from a result directory), dynamics (swarm snapshots under a
random-fitness objective), bounce (boundary-bounce fraction of the leader
update), compare (shift-invariance probe).

Exit codes: 0 success, 2 configuration error, 3 IO failure, 4 refusing to
overwrite an existing manifest.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import backend, svgplot
from .core import Bounds, ConfigurationError, DimensionError, RngStream
from .harness import (
    ExperimentConfig,
    MANIFEST_NAME,
    ManifestExistsError,
    bounce_probe,
    dynamics_probe,
    load_result_set,
    run_experiment,
    shift_invariance_probe,
)
from .stats import compare_samples

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_MANIFEST_EXISTS = 4


def _parse_override(text: str) -> tuple[str, object]:
    if "=" not in text:
        raise ConfigurationError(f"override must look like key=value, got {text!r}")
    key, raw = text.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return key, value


def _load_config(path: str, args) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigurationError("config must be a JSON object")
    if args.seed is not None:
        data["base_seed"] = args.seed
    if args.reps is not None:
        data["repetitions"] = args.reps
    for item in args.set or []:
        key, value = _parse_override(item)
        data[key] = value
    return ExperimentConfig.from_dict(data)


def cmd_run(args) -> int:
    config = _load_config(args.config, args)
    manifest_path = os.path.join(args.out, MANIFEST_NAME)
    if os.path.exists(manifest_path) and not args.force:
        print(f"error: manifest exists: {manifest_path} (pass --force to overwrite)", file=sys.stderr)
        return EXIT_MANIFEST_EXISTS
    result = run_experiment(config)
    result.save(args.out, force=args.force)
    print(f"wrote {manifest_path}")
    return EXIT_OK


def cmd_report(args) -> int:
    out = args.out or args.result_dir
    manifest, cells = load_result_set(args.result_dir)
    if not cells:
        raise ConfigurationError(f"no traces found in {args.result_dir!r}")
    os.makedirs(out, exist_ok=True)
    labels = []
    for label, _ in cells:
        if label not in labels:
            labels.append(label)
    for label in labels:
        cell_items = [(alg, cell) for (lbl, alg), cell in cells.items() if lbl == label]
        report = compare_samples([cell.final_bests for _, cell in cell_items], label)
        report.to_json(os.path.join(out, f"{label}.report.json"))
        report.to_csv(os.path.join(out, f"{label}.report.csv"))
        abf_svg = svgplot.abf_line_plot(
            [(alg, cell.abf) for alg, cell in cell_items],
            title=f"average best fitness: {label}",
            log_floor=args.log_floor,
        )
        with open(os.path.join(out, f"{label}.abf.svg"), "w", encoding="utf-8") as fh:
            fh.write(abf_svg)
        box_svg = svgplot.box_summary_plot(
            [(alg, cell.final_bests.values) for alg, cell in cell_items],
            title=f"final best fitness: {label}",
            log_floor=args.log_floor,
        )
        with open(os.path.join(out, f"{label}.box.svg"), "w", encoding="utf-8") as fh:
            fh.write(box_svg)
    print(f"wrote reports for {len(labels)} objective(s) to {out}")
    return EXIT_OK


def cmd_dynamics(args) -> int:
    bounds = Bounds.symmetric(args.bound, args.dimension)
    result = dynamics_probe(
        args.preset, bounds, args.record, args.seed,
        population_size=args.population, iterations=args.iterations,
    )
    os.makedirs(args.out, exist_ok=True)
    csv_path = os.path.join(args.out, f"dynamics_{args.preset}.csv")
    with open(csv_path, "w", encoding="utf-8", newline="\n") as fh:
        coords = ",".join(f"x{j}" for j in range(args.dimension))
        fh.write(f"iteration,member,{coords}\n")
        for t in range(result.snapshots.shape[0]):
            for i in range(result.snapshots.shape[1]):
                row = ",".join(repr(float(v)) for v in result.snapshots[t, i])
                fh.write(f"{t + 1},{i},{row}\n")
    svg = svgplot.swarm_scatter_plot(
        result.initial_positions, result.snapshots, result.leader_count,
        args.bound, title=f"swarm dynamics: {args.preset} (seed {args.seed})",
    )
    with open(os.path.join(args.out, f"dynamics_{args.preset}.svg"), "w", encoding="utf-8") as fh:
        fh.write(svg)
    summary = {
        "preset": args.preset,
        "seed": args.seed,
        "bound": args.bound,
        "dimension": args.dimension,
        "population_size": args.population,
        "iterations": args.iterations,
        "recorded_iterations": args.record,
        "leader_count": result.leader_count,
        "final_centroid_norm": result.final_centroid_norm,
        "generator": RngStream.generator_name,
        "backend": backend.name,
    }
    with open(os.path.join(args.out, f"dynamics_{args.preset}.json"), "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"final centroid norm: {result.final_centroid_norm!r}")
    print(f"wrote {csv_path}")
    return EXIT_OK


def cmd_bounce(args) -> int:
    fraction = bounce_probe(args.k, iterations=args.iterations, seed=args.seed,
                            leader_rule=args.rule, dimension=args.dimension)
    payload = {
        "k": args.k,
        "leader_rule": args.rule,
        "iterations": args.iterations,
        "seed": args.seed,
        "dimension": args.dimension,
        "outside_fraction": fraction,
        "generator": RngStream.generator_name,
        "backend": backend.name,
    }
    text = json.dumps(payload, indent=2, sort_keys=True)
    print(text)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "bounce.json"), "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return EXIT_OK


def cmd_compare(args) -> int:
    report = shift_invariance_probe(
        args.algorithm, args.objective, args.shift, args.seed,
        dimension=args.dimension, population_size=args.population,
        iterations=args.iterations,
    )
    text = json.dumps(report.to_json_dict(), indent=2, sort_keys=True)
    print(text)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "shift_invariance.json"), "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="salpaudit",
        description="Salp-swarm optimizer variants, baselines, and shift/bias probes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment grid from a JSON config")
    p_run.add_argument("--config", required=True, help="experiment config (JSON)")
    p_run.add_argument("--out", required=True, help="result directory")
    p_run.add_argument("--force", action="store_true", help="overwrite an existing manifest")
    p_run.add_argument("--seed", type=int, default=None, help="override base_seed")
    p_run.add_argument("--reps", type=int, default=None, help="override repetitions")
    p_run.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override any config field (JSON-parsed value)")
    p_run.set_defaults(func=cmd_run)

    p_rep = sub.add_parser("report", help="comparison stats + SVG plots from a result directory")
    p_rep.add_argument("result_dir", help="directory written by 'run'")
    p_rep.add_argument("--out", default=None, help="output directory (default: the result directory)")
    p_rep.add_argument("--log-floor", type=float, default=svgplot.DEFAULT_LOG_FLOOR,
                       help="clamp for nonpositive values on log axes")
    p_rep.set_defaults(func=cmd_report)

    p_dyn = sub.add_parser("dynamics", help="swarm snapshots under a random-fitness objective")
    p_dyn.add_argument("--preset", default="sso-nofood")
    p_dyn.add_argument("--bound", type=float, default=100.0, help="symmetric box half-width")
    p_dyn.add_argument("--dimension", type=int, default=2)
    p_dyn.add_argument("--record", type=int, default=10, help="iterations to snapshot")
    p_dyn.add_argument("--iterations", type=int, default=100)
    p_dyn.add_argument("--population", type=int, default=50)
    p_dyn.add_argument("--seed", type=int, default=0)
    p_dyn.add_argument("--out", required=True)
    p_dyn.set_defaults(func=cmd_dynamics)

    p_bnc = sub.add_parser("bounce", help="pre-clip boundary-violation fraction of the leader update")
    p_bnc.add_argument("--k", type=float, required=True, help="box is [10^k, 10^k + 1]^D")
    p_bnc.add_argument("--rule", choices=("published", "amended"), default="published")
    p_bnc.add_argument("--iterations", type=int, default=100)
    p_bnc.add_argument("--dimension", type=int, default=2)
    p_bnc.add_argument("--seed", type=int, default=0)
    p_bnc.add_argument("--out", default=None)
    p_bnc.set_defaults(func=cmd_bounce)

    p_cmp = sub.add_parser("compare", help="shift-invariance probe: base vs shifted trajectories")
    p_cmp.add_argument("--algorithm", required=True)
    p_cmp.add_argument("--objective", required=True)
    p_cmp.add_argument("--shift", type=float, required=True)
    p_cmp.add_argument("--dimension", type=int, default=2)
    p_cmp.add_argument("--population", type=int, default=50)
    p_cmp.add_argument("--iterations", type=int, default=100)
    p_cmp.add_argument("--seed", type=int, default=0)
    p_cmp.add_argument("--out", default=None)
    p_cmp.set_defaults(func=cmd_compare)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ManifestExistsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MANIFEST_EXISTS
    except (ConfigurationError, DimensionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
