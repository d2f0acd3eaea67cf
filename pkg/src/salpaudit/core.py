"""Shared domain types: bounded search spaces, populations, seeded randomness,
and per-run trace recording.

All algorithms in this package minimize. Out-of-bounds positions are repaired
by coordinate-wise clipping onto the box boundary, applied before fitness
evaluation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np


class DimensionError(ValueError):
    """Vector lengths do not match the search-space dimension."""


class ConfigurationError(ValueError):
    """A run or experiment was configured with invalid parameters."""


def _as_float_vector(x, name="vector"):
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be one-dimensional, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class Bounds:
    """Box constraints: lower[j] < upper[j] for every coordinate j."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = _as_float_vector(self.lower, "lower").copy()
        upper = _as_float_vector(self.upper, "upper").copy()
        if lower.shape != upper.shape:
            raise DimensionError(
                f"lower has length {lower.size}, upper has length {upper.size}"
            )
        if lower.size < 1:
            raise ConfigurationError("bounds must have at least one dimension")
        if not np.all(lower < upper):
            raise ConfigurationError("every lower bound must be strictly below its upper bound")
        lower.flags.writeable = False
        upper.flags.writeable = False
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def symmetric(cls, magnitude, dimension):
        """[-magnitude, magnitude]^dimension."""
        m = float(magnitude)
        return cls(np.full(dimension, -m), np.full(dimension, m))

    @classmethod
    def cube(cls, lower, upper, dimension):
        return cls(np.full(dimension, float(lower)), np.full(dimension, float(upper)))

    @property
    def dimension(self) -> int:
        return self.lower.size

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def shifted(self, offset) -> "Bounds":
        s = np.broadcast_to(np.asarray(offset, dtype=np.float64), (self.dimension,))
        return Bounds(self.lower + s, self.upper + s)

    def contains(self, position) -> bool:
        x = np.asarray(position, dtype=np.float64)
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))

    def is_symmetric(self) -> bool:
        return bool(np.all(self.lower == -self.upper))


@dataclass
class Candidate:
    """A position and its fitness; fitness None means not yet evaluated."""

    position: np.ndarray
    fitness: float | None = None

    def __post_init__(self):
        self.position = _as_float_vector(self.position, "position").copy()
        if self.fitness is not None:
            self.fitness = float(self.fitness)

    @property
    def evaluated(self) -> bool:
        return self.fitness is not None


class SalpChain:
    """Ordered population of positions; index order defines the leader/follower
    chain. ``food`` tracks the best evaluated candidate seen so far."""

    def __init__(self, positions, fitness=None, food: Candidate | None = None):
        positions = np.array(positions, dtype=np.float64)
        if positions.ndim != 2:
            raise DimensionError(f"positions must be an (N, D) matrix, got shape {positions.shape}")
        if positions.shape[0] < 2:
            raise ConfigurationError("a chain needs at least 2 members")
        self.positions = positions
        self.fitness = None if fitness is None else np.asarray(fitness, dtype=np.float64).copy()
        if self.fitness is not None and self.fitness.shape != (positions.shape[0],):
            raise DimensionError("fitness must have one value per member")
        self.food = food

    @property
    def size(self) -> int:
        return self.positions.shape[0]

    @property
    def dimension(self) -> int:
        return self.positions.shape[1]

    @property
    def evaluated(self) -> bool:
        return self.fitness is not None

    def member(self, i) -> Candidate:
        fit = None if self.fitness is None else float(self.fitness[i])
        return Candidate(self.positions[i], fit)

    def best_index(self) -> int:
        if self.fitness is None:
            raise ConfigurationError("chain has not been evaluated")
        return int(np.argmin(self.fitness))

    def update_food(self):
        """Replace food with this generation's best member on strict improvement
        only; the first index wins ties within the generation."""
        i = self.best_index()
        if self.food is None or self.fitness[i] < self.food.fitness:
            self.food = Candidate(self.positions[i], float(self.fitness[i]))
        return self.food


class RngStream:
    """Seeded uniform random stream. Same seed, same platform-independent draw
    sequence (PCG64); uniform draws lie in [0, 1)."""

    generator_name = "numpy-pcg64"

    def __init__(self, seed):
        self.seed = int(seed)
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def random(self, size=None):
        return self._gen.random(size)

    def integers(self, n) -> int:
        """One uniform integer in [0, n)."""
        return int(self._gen.integers(0, n))


def clip(position, bounds: Bounds):
    """Coordinate-wise projection onto the box; coordinates inside are untouched."""
    x = _as_float_vector(position, "position")
    if x.size != bounds.dimension:
        raise DimensionError(
            f"position has length {x.size}, bounds have dimension {bounds.dimension}"
        )
    return np.minimum(bounds.upper, np.maximum(bounds.lower, x))


def uniform_positions(bounds: Bounds, n: int, rng: RngStream):
    """n uniform positions in the box, drawn member-major, dimension-minor:
    lower[j] + u * (upper[j] - lower[j]), consuming exactly n * D draws."""
    u = rng.random((int(n), bounds.dimension))
    return bounds.lower + u * (bounds.upper - bounds.lower)


def uniform_init(bounds: Bounds, n: int, rng: RngStream) -> SalpChain:
    """Fresh unevaluated chain of n uniform members (n >= 2), food unset."""
    if int(n) < 2:
        raise ConfigurationError(f"population size must be at least 2, got {n}")
    return SalpChain(uniform_positions(bounds, n, rng))


@dataclass
class RunTrace:
    """One repetition's record: best-so-far fitness per iteration, the final
    best candidate, and optional full position snapshots."""

    algorithm_id: str
    objective_id: str
    seed: int
    best_per_iteration: np.ndarray
    final_best: Candidate
    evaluations: int = 0
    generator: str = RngStream.generator_name
    initial_positions: np.ndarray | None = None
    snapshots: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.best_per_iteration = _as_float_vector(self.best_per_iteration, "best_per_iteration").copy()
        b = self.best_per_iteration
        if b.size and np.any(b[1:] > b[:-1]):
            raise ValueError("best_per_iteration must be non-increasing (best-so-far semantics)")
        if self.snapshots is not None:
            self.snapshots = np.asarray(self.snapshots, dtype=np.float64)
            if self.snapshots.ndim != 3 or self.snapshots.shape[0] != b.size:
                raise DimensionError(
                    "snapshots must have shape (iterations, members, dimension) "
                    f"with {b.size} iterations, got {self.snapshots.shape}"
                )
        if self.initial_positions is not None:
            self.initial_positions = np.asarray(self.initial_positions, dtype=np.float64)

    @property
    def iterations(self) -> int:
        return self.best_per_iteration.size

    def to_json_dict(self) -> dict:
        d = {
            "algorithm_id": self.algorithm_id,
            "objective_id": self.objective_id,
            "seed": self.seed,
            "generator": self.generator,
            "evaluations": self.evaluations,
            "best_per_iteration": [float(v) for v in self.best_per_iteration],
            "final_best": {
                "position": [float(v) for v in self.final_best.position],
                "fitness": self.final_best.fitness,
            },
        }
        if self.initial_positions is not None:
            d["initial_positions"] = self.initial_positions.tolist()
        if self.snapshots is not None:
            d["snapshots"] = self.snapshots.tolist()
        return d

    @classmethod
    def from_json_dict(cls, d: dict) -> "RunTrace":
        fb = d["final_best"]
        return cls(
            algorithm_id=d["algorithm_id"],
            objective_id=d["objective_id"],
            seed=int(d["seed"]),
            best_per_iteration=np.asarray(d["best_per_iteration"], dtype=np.float64),
            final_best=Candidate(np.asarray(fb["position"], dtype=np.float64), fb["fitness"]),
            evaluations=int(d.get("evaluations", 0)),
            generator=d.get("generator", RngStream.generator_name),
            initial_positions=None if d.get("initial_positions") is None
            else np.asarray(d["initial_positions"], dtype=np.float64),
            snapshots=None if d.get("snapshots") is None
            else np.asarray(d["snapshots"], dtype=np.float64),
        )

    def to_json(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    def to_csv(self, path):
        """Columns: iteration (1-based), best_fitness."""
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("iteration,best_fitness\n")
            for i, v in enumerate(self.best_per_iteration, start=1):
                fh.write(f"{i},{float(v)!r}\n")
