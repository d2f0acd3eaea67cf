"""Experiment orchestration: seeded repetition grids over (algorithm,
objective) cells, result persistence, and the three forensic probes
(shift invariance, swarm dynamics under random fitness, boundary bounce).

Seed schedule: repetition r of every cell runs with base_seed + r, so any
cell can be reproduced bit-exactly from the manifest alone.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace

import numpy as np

from . import backend
from .algorithms import ALGORITHM_IDS, SSO_PRESETS, config_for, run, sso_step
from .benchmarks import (
    ObjectiveSpec,
    as_shift_vector,
    get_objective,
    objective_names,
    random_objective,
)
from .core import (
    Bounds,
    ConfigurationError,
    RngStream,
    RunTrace,
    uniform_init,
)
from .stats import SampleSet, abf, compare_samples

# offset separating a stochastic objective's stream from the algorithm stream
# that shares its run seed
OBJECTIVE_STREAM_OFFSET = 1000003

MANIFEST_NAME = "manifest.json"


class ManifestExistsError(FileExistsError):
    """Refusing to overwrite an existing result directory without force."""


@dataclass(frozen=True)
class ObjectiveRequest:
    """One objective cell of an experiment: registry name, dimension, and an
    optional shift (scalar broadcast or full vector)."""

    name: str
    dimension: int
    shift: float | list | None = None

    def shift_vector(self) -> np.ndarray | None:
        if self.shift is None:
            return None
        return as_shift_vector(self.shift, self.dimension)

    def build(self, seed=None) -> ObjectiveSpec:
        return get_objective(self.name, self.dimension, shift=self.shift_vector(), seed=seed)

    def label(self) -> str:
        spec_name = self.build(seed=0).name
        return f"{spec_name}_{self.dimension}d"

    def to_dict(self) -> dict:
        d = {"name": self.name, "dimension": self.dimension}
        if self.shift is not None:
            d["shift"] = self.shift
        return d


@dataclass
class ExperimentConfig:
    algorithms: list[str]
    objectives: list[ObjectiveRequest]
    population_size: int = 50
    iterations: int = 100
    repetitions: int = 30
    base_seed: int = 0
    snapshot: bool = False
    de_weight: float = 0.3
    de_crossover_rate: float = 0.5

    def __post_init__(self):
        if self.repetitions < 1:
            raise ConfigurationError("repetitions must be at least 1")
        for alg in self.algorithms:
            if alg not in ALGORITHM_IDS:
                raise ConfigurationError(
                    f"unknown algorithm id: {alg!r} (known: {', '.join(ALGORITHM_IDS)})"
                )
        if not self.algorithms:
            raise ConfigurationError("config field 'algorithms' must list at least one id")
        if not self.objectives:
            raise ConfigurationError("config field 'objectives' must list at least one objective")
        for req in self.objectives:
            if req.name not in objective_names():
                raise ConfigurationError(
                    f"unknown objective name: {req.name!r} (known: {', '.join(objective_names())})"
                )

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        d = dict(d)
        known = {
            "algorithms", "objectives", "population_size", "iterations",
            "repetitions", "base_seed", "snapshot", "de_weight", "de_crossover_rate",
        }
        unknown = set(d) - known
        if unknown:
            raise ConfigurationError(f"unknown config field: {sorted(unknown)[0]!r}")
        if "algorithms" not in d:
            raise ConfigurationError("missing config field: 'algorithms'")
        if "objectives" not in d:
            raise ConfigurationError("missing config field: 'objectives'")
        objectives = []
        for i, obj in enumerate(d["objectives"]):
            if not isinstance(obj, dict) or "name" not in obj or "dimension" not in obj:
                raise ConfigurationError(
                    f"config field 'objectives[{i}]' must be an object with 'name' and 'dimension'"
                )
            objectives.append(ObjectiveRequest(
                name=str(obj["name"]),
                dimension=int(obj["dimension"]),
                shift=obj.get("shift"),
            ))
        d["objectives"] = objectives
        d["algorithms"] = [str(a) for a in d["algorithms"]]
        try:
            return cls(**d)
        except TypeError as exc:
            raise ConfigurationError(str(exc)) from exc

    def to_dict(self) -> dict:
        return {
            "algorithms": list(self.algorithms),
            "objectives": [o.to_dict() for o in self.objectives],
            "population_size": self.population_size,
            "iterations": self.iterations,
            "repetitions": self.repetitions,
            "base_seed": self.base_seed,
            "snapshot": self.snapshot,
            "de_weight": self.de_weight,
            "de_crossover_rate": self.de_crossover_rate,
        }

    def algorithm_config(self, algorithm_id: str):
        overrides = {}
        if algorithm_id == "de":
            overrides = {"weight": self.de_weight, "crossover_rate": self.de_crossover_rate}
        return config_for(algorithm_id, self.population_size, self.iterations, **overrides)


class EvalCounter:
    """Counts objective evaluations (batch calls add the batch size)."""

    def __init__(self):
        self.count = 0


def counted(spec: ObjectiveSpec) -> tuple[ObjectiveSpec, EvalCounter]:
    """Wrap an objective so every evaluation is tallied."""
    counter = EvalCounter()
    single = spec.evaluator
    batch = spec.batch_evaluator

    def count_single(x):
        counter.count += 1
        return single(x)

    count_batch = None
    if batch is not None:
        def count_batch(positions):
            counter.count += positions.shape[0]
            return batch(positions)

    return replace(spec, evaluator=count_single, batch_evaluator=count_batch), counter


@dataclass
class CellResult:
    """All repetitions of one (algorithm, objective) cell."""

    algorithm_id: str
    objective_label: str
    seeds: list[int]
    traces: list[RunTrace]
    abf: np.ndarray
    final_bests: SampleSet


@dataclass
class ResultSet:
    config: ExperimentConfig
    cells: dict[tuple[str, str], CellResult] = field(default_factory=dict)

    @property
    def objective_labels(self) -> list[str]:
        seen = []
        for label, _ in self.cells:
            if label not in seen:
                seen.append(label)
        return seen

    def cell(self, objective_label: str, algorithm_id: str) -> CellResult:
        return self.cells[(objective_label, algorithm_id)]

    def samples_for(self, objective_label: str) -> list[SampleSet]:
        return [
            cell.final_bests
            for (label, _), cell in self.cells.items()
            if label == objective_label
        ]

    def report_for(self, objective_label: str, correction_factor: int | None = None):
        return compare_samples(
            self.samples_for(objective_label), objective_label, correction_factor
        )

    def save(self, directory, force: bool = False):
        """Persist as a directory: manifest.json plus, per objective, a
        report.json and per-algorithm traces/abf CSVs."""
        os.makedirs(directory, exist_ok=True)
        manifest_path = os.path.join(directory, MANIFEST_NAME)
        if os.path.exists(manifest_path) and not force:
            raise ManifestExistsError(f"manifest exists: {manifest_path} (use force to overwrite)")
        cells_meta = []
        for (label, alg), cell in self.cells.items():
            obj_dir = os.path.join(directory, label)
            os.makedirs(obj_dir, exist_ok=True)
            traces_rel = os.path.join(label, f"{alg}.traces.csv")
            abf_rel = os.path.join(label, f"{alg}.abf.csv")
            with open(os.path.join(directory, traces_rel), "w", encoding="utf-8", newline="\n") as fh:
                fh.write("repetition,seed,iteration,best_fitness\n")
                for r, trace in enumerate(cell.traces):
                    for i, v in enumerate(trace.best_per_iteration, start=1):
                        fh.write(f"{r},{trace.seed},{i},{float(v)!r}\n")
            with open(os.path.join(directory, abf_rel), "w", encoding="utf-8", newline="\n") as fh:
                fh.write("iteration,abf\n")
                for i, v in enumerate(cell.abf, start=1):
                    fh.write(f"{i},{float(v)!r}\n")
            cells_meta.append({
                "objective": label,
                "algorithm": alg,
                "seeds": cell.seeds,
                "traces_csv": traces_rel,
                "abf_csv": abf_rel,
            })
        for label in self.objective_labels:
            self.report_for(label).to_json(os.path.join(directory, label, "report.json"))
        manifest = {
            "package": "salpaudit",
            "generator": RngStream.generator_name,
            "backend": backend.name,
            "config": self.config.to_dict(),
            "cells": cells_meta,
        }
        with open(manifest_path, "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")


@dataclass
class LoadedCell:
    algorithm_id: str
    objective_label: str
    seeds: list[int]
    best_curves: np.ndarray  # (repetitions, iterations)
    abf: np.ndarray

    @property
    def final_bests(self) -> SampleSet:
        return SampleSet(self.best_curves[:, -1], self.algorithm_id)


def load_result_set(directory) -> tuple[dict, dict[tuple[str, str], LoadedCell]]:
    """Read back a persisted ResultSet directory: (manifest, cells)."""
    manifest_path = os.path.join(directory, MANIFEST_NAME)
    try:
        with open(manifest_path, encoding="utf-8") as fh:
            manifest = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigurationError(f"not a result directory (no manifest): {directory}") from exc
    cells = {}
    for meta in manifest["cells"]:
        label, alg = meta["objective"], meta["algorithm"]
        rows = {}
        try:
            with open(os.path.join(directory, meta["traces_csv"]), encoding="utf-8") as fh:
                next(fh)
                for line in fh:
                    r, _, _, v = line.rstrip("\n").split(",")
                    rows.setdefault(int(r), []).append(float(v))
            with open(os.path.join(directory, meta["abf_csv"]), encoding="utf-8") as fh:
                next(fh)
                abf_curve = np.array([float(line.rstrip("\n").split(",")[1]) for line in fh])
        except FileNotFoundError as exc:
            raise ConfigurationError(
                f"result directory is missing traces for ({label}, {alg})"
            ) from exc
        curves = np.array([rows[r] for r in sorted(rows)])
        cells[(label, alg)] = LoadedCell(alg, label, list(meta["seeds"]), curves, abf_curve)
    return manifest, cells


def _objective_for_run(req: ObjectiveRequest, run_seed: int) -> ObjectiveSpec:
    return req.build(seed=run_seed + OBJECTIVE_STREAM_OFFSET)


def run_experiment(config: ExperimentConfig) -> ResultSet:
    """Run every (algorithm, objective) cell for `repetitions` seeds."""
    result = ResultSet(config)
    for req in config.objectives:
        label = req.label()
        for alg in config.algorithms:
            acfg = config.algorithm_config(alg)
            traces = []
            seeds = []
            for r in range(config.repetitions):
                seed = config.base_seed + r
                objective = _objective_for_run(req, seed)
                traces.append(run(alg, objective, acfg, seed, snapshot=config.snapshot))
                seeds.append(seed)
            finals = np.array([t.best_per_iteration[-1] for t in traces])
            result.cells[(label, alg)] = CellResult(
                alg, label, seeds, traces, abf(traces), SampleSet(finals, alg)
            )
    return result


def rerun_cell_repetition(manifest: dict, objective_label: str, algorithm_id: str,
                          repetition: int) -> RunTrace:
    """Reproduce one repetition of a persisted cell from its recorded seed."""
    config = ExperimentConfig.from_dict(manifest["config"])
    req = next(o for o in config.objectives if o.label() == objective_label)
    for meta in manifest["cells"]:
        if meta["objective"] == objective_label and meta["algorithm"] == algorithm_id:
            seed = meta["seeds"][repetition]
            objective = _objective_for_run(req, seed)
            return run(algorithm_id, objective, config.algorithm_config(algorithm_id),
                       seed, snapshot=config.snapshot)
    raise ConfigurationError(f"no cell ({objective_label!r}, {algorithm_id!r}) in manifest")


@dataclass
class ShiftInvarianceReport:
    """Trajectories of one algorithm on an objective and its shifted twin,
    run from the same seed; deviation is measured after un-shifting."""

    algorithm_id: str
    objective_name: str
    shift: np.ndarray
    seed: int
    max_deviation: float
    final_best_base: float
    final_best_shifted: float

    def to_json_dict(self) -> dict:
        return {
            "algorithm_id": self.algorithm_id,
            "objective_name": self.objective_name,
            "shift": [float(v) for v in self.shift],
            "seed": self.seed,
            "max_deviation": self.max_deviation,
            "final_best_base": self.final_best_base,
            "final_best_shifted": self.final_best_shifted,
            "generator": RngStream.generator_name,
            "backend": backend.name,
        }


def _trajectory(trace: RunTrace) -> np.ndarray:
    parts = []
    if trace.initial_positions is not None:
        parts.append(trace.initial_positions[None, :, :])
    parts.append(trace.snapshots)
    return np.concatenate(parts, axis=0)


def shift_invariance_probe(algorithm_id: str, objective_name: str, s, seed: int,
                           dimension: int = 2, population_size: int = 50,
                           iterations: int = 100) -> ShiftInvarianceReport:
    """Run on the base objective and on its shifted twin with identical seeds;
    report the worst per-coordinate trajectory deviation after un-shifting and
    the two final best fitnesses."""
    s_vec = as_shift_vector(s, dimension)
    cfg = config_for(algorithm_id, population_size, iterations)
    base_obj = get_objective(objective_name, dimension, seed=seed + OBJECTIVE_STREAM_OFFSET)
    shifted_obj = get_objective(objective_name, dimension, shift=s_vec,
                                seed=seed + OBJECTIVE_STREAM_OFFSET)
    t_base = run(algorithm_id, base_obj, cfg, seed, snapshot=True)
    t_shift = run(algorithm_id, shifted_obj, cfg, seed, snapshot=True)
    deviation = np.max(np.abs((_trajectory(t_shift) - s_vec) - _trajectory(t_base)))
    return ShiftInvarianceReport(
        algorithm_id=algorithm_id,
        objective_name=objective_name,
        shift=s_vec,
        seed=seed,
        max_deviation=float(deviation),
        final_best_base=float(t_base.best_per_iteration[-1]),
        final_best_shifted=float(t_shift.best_per_iteration[-1]),
    )


@dataclass
class DynamicsResult:
    """Swarm positions under a pure-noise objective on a symmetric box."""

    preset: str
    seed: int
    bounds: Bounds
    leader_count: int
    initial_positions: np.ndarray          # (N, D), the "Start" marker
    snapshots: np.ndarray                  # (T, N, D), iterations 1..T
    centroid_norms: np.ndarray             # (L,), full run
    final_positions: np.ndarray            # (N, D) at iteration L

    @property
    def final_centroid_norm(self) -> float:
        return float(self.centroid_norms[-1])

    def final_leader_magnitude(self) -> float:
        """Largest |coordinate| among leader-rule members at the end."""
        return float(np.max(np.abs(self.final_positions[: self.leader_count])))


def dynamics_probe(preset: str, bounds: Bounds, record_iterations: int, seed: int,
                   population_size: int = 50, iterations: int = 100) -> DynamicsResult:
    """Run an SSO-family preset against random fitness on a symmetric box,
    keeping full position snapshots for the first ``record_iterations``."""
    if preset not in SSO_PRESETS:
        raise ConfigurationError(
            f"dynamics probe needs an SSO-family preset, got {preset!r} "
            f"(known: {', '.join(SSO_PRESETS)})"
        )
    if not bounds.is_symmetric():
        raise ConfigurationError("dynamics probe is defined for symmetric bounds (lower = -upper)")
    if not 1 <= record_iterations <= iterations:
        raise ConfigurationError(
            f"record_iterations must lie in [1, {iterations}], got {record_iterations}"
        )
    objective = random_objective(bounds.dimension, RngStream(seed + OBJECTIVE_STREAM_OFFSET), bounds)
    cfg = config_for(preset, population_size, iterations)
    trace = run(preset, objective, cfg, seed, snapshot=True)
    centroids = np.mean(trace.snapshots, axis=1)
    return DynamicsResult(
        preset=preset,
        seed=seed,
        bounds=bounds,
        leader_count=cfg.leader_count(population_size),
        initial_positions=trace.initial_positions,
        snapshots=trace.snapshots[:record_iterations],
        centroid_norms=np.linalg.norm(centroids, axis=1),
        final_positions=trace.snapshots[-1],
    )


def bounce_probe(k: float, iterations: int = 100, seed: int = 0,
                 leader_rule: str = "published", dimension: int = 2) -> float:
    """Fraction of pre-clip leader updates falling outside the box
    [10^k, 10^k + 1]^D during a full run on sphere.

    An update counts as outside when at least one coordinate violates the box
    (i.e. clipping would alter the position). Uses the canonical chain split
    (single leader, c3 threshold 0.5, food attraction on); ``leader_rule``
    switches between the published and the amended update.
    """
    if iterations < 1:
        raise ConfigurationError("iterations must be at least 1")
    low = 10.0 ** k
    bounds = Bounds.cube(low, low + 1.0, dimension)
    objective = get_objective("sphere", dimension, bounds=bounds)
    cfg = config_for("sso", iterations=iterations, leader_rule=leader_rule)
    rng = RngStream(seed)
    chain = uniform_init(bounds, cfg.population_size, rng)
    chain.fitness = objective.evaluate_batch(chain.positions)
    chain.update_food()
    sink: list[np.ndarray] = []
    for iteration in range(1, iterations + 1):
        chain = sso_step(chain, objective, cfg, iteration, rng, preclip_out=sink)
    outside = 0
    total = 0
    for block in sink:
        viol = np.any((block < bounds.lower) | (block > bounds.upper), axis=1)
        outside += int(np.sum(viol))
        total += block.shape[0]
    return outside / total
