"""Objective-function registry: standard benchmarks, a random-fitness probe,
and a shift transform that translates both the landscape and the box.

All objectives are minimized and reach 0 at their (possibly shifted) optimum.
Default boxes: sphere/ackley/rastrigin [-100, 100]^D, rosenbrock [-30, 30]^D,
alpine [-10, 10]^D.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from . import backend
from .core import Bounds, ConfigurationError, DimensionError, RngStream, _as_float_vector


def _vector(x):
    v = _as_float_vector(x, "x")
    return np.ascontiguousarray(v)


def _batch(x):
    return np.ascontiguousarray(np.asarray(x, dtype=np.float64))


def sphere(x) -> float:
    """Sum of squares; optimum 0 at the origin."""
    return float(backend.kernels.sphere_batch(_vector(x)[None, :])[0])


def rosenbrock(x) -> float:
    """Banana valley; optimum 0 at all-ones. Needs D >= 2."""
    v = _vector(x)
    if v.size < 2:
        raise DimensionError("rosenbrock needs at least 2 dimensions")
    return float(backend.kernels.rosenbrock_batch(v[None, :])[0])


def ackley(x) -> float:
    """-20 exp(-0.2 rms(x)) - exp(mean cos(2 pi x)) + 20 + e; optimum 0 at the origin."""
    return float(backend.kernels.ackley_batch(_vector(x)[None, :])[0])


def alpine(x) -> float:
    """Sum of |x sin(x) + 0.1 x|; optimum 0 at the origin."""
    return float(backend.kernels.alpine_batch(_vector(x)[None, :])[0])


def rastrigin(x) -> float:
    """10 D + sum(x^2 - 10 cos(2 pi x)); optimum 0 at the origin."""
    return float(backend.kernels.rastrigin_batch(_vector(x)[None, :])[0])


def random_fitness(x, rng: RngStream) -> float:
    """A fresh uniform draw in [0, 1), independent of x."""
    return float(rng.random())


@dataclass
class ObjectiveSpec:
    """A named objective with its box and accumulated shift.

    ``evaluator`` maps one position to a fitness value and already includes
    any shift applied via ``shifted``; ``batch_evaluator`` (optional) maps an
    (n, D) matrix to n fitness values and must agree with ``evaluator``
    row-wise. Effective bounds are ``base_bounds`` translated by ``shift``.
    """

    name: str
    dimension: int
    base_bounds: Bounds
    evaluator: Callable[[np.ndarray], float]
    batch_evaluator: Callable[[np.ndarray], np.ndarray] | None = None
    shift: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        self.dimension = int(self.dimension)
        if self.dimension < 1:
            raise ConfigurationError("objective dimension must be >= 1")
        if self.base_bounds.dimension != self.dimension:
            raise DimensionError(
                f"bounds dimension {self.base_bounds.dimension} != objective dimension {self.dimension}"
            )
        if self.shift is None:
            self.shift = np.zeros(self.dimension)
        self.shift = _as_float_vector(self.shift, "shift").copy()
        if self.shift.size != self.dimension:
            raise DimensionError(
                f"shift has length {self.shift.size}, objective dimension is {self.dimension}"
            )

    @property
    def bounds(self) -> Bounds:
        if np.any(self.shift != 0.0):
            return self.base_bounds.shifted(self.shift)
        return self.base_bounds

    def evaluate(self, x) -> float:
        return float(self.evaluator(np.asarray(x, dtype=np.float64)))

    def evaluate_batch(self, positions) -> np.ndarray:
        x = _batch(positions)
        if self.batch_evaluator is not None:
            return np.asarray(self.batch_evaluator(x), dtype=np.float64)
        return np.array([self.evaluator(row) for row in x], dtype=np.float64)


def _shift_tag(s: np.ndarray) -> str:
    if np.all(s == s[0]):
        return format(float(s[0]), "g").replace("+", "")
    return "vec"


def as_shift_vector(s, dimension: int) -> np.ndarray:
    """Scalar shifts broadcast to every coordinate; vectors must match D."""
    s = np.asarray(s, dtype=np.float64)
    if s.ndim == 0:
        return np.full(dimension, float(s))
    if s.shape != (dimension,):
        raise DimensionError(f"shift has shape {s.shape}, objective dimension is {dimension}")
    return s.copy()


def shifted(spec: ObjectiveSpec, s) -> ObjectiveSpec:
    """Translate an objective: the new evaluator is x -> old(x - s) and the new
    box is the old box translated by s, so the optimum moves by s."""
    s = as_shift_vector(s, spec.dimension)
    base_eval = spec.evaluator
    base_batch = spec.batch_evaluator

    def eval_shifted(x):
        return base_eval(np.asarray(x, dtype=np.float64) - s)

    batch_shifted = None
    if base_batch is not None:
        def batch_shifted(positions):
            return base_batch(_batch(positions) - s)

    return replace(
        spec,
        name=f"{spec.name}_shift{_shift_tag(s)}",
        evaluator=eval_shifted,
        batch_evaluator=batch_shifted,
        shift=spec.shift + s,
    )


def random_objective(dimension, rng: RngStream, bounds: Bounds | None = None) -> ObjectiveSpec:
    """Uniform-noise objective owning its stream; batch evaluation draws one
    value per row in row order."""
    dimension = int(dimension)
    if bounds is None:
        bounds = Bounds.symmetric(100.0, dimension)

    def evaluator(x):
        return random_fitness(x, rng)

    def batch_evaluator(positions):
        return rng.random(positions.shape[0])

    return ObjectiveSpec("random", dimension, bounds, evaluator, batch_evaluator)


def _kernel_batch(kernel_name):
    def call(positions):
        return getattr(backend.kernels, kernel_name)(_batch(positions))
    return call


_DEFAULT_BOX = {
    "sphere": 100.0,
    "ackley": 100.0,
    "rastrigin": 100.0,
    "rosenbrock": 30.0,
    "alpine": 10.0,
}


def _standard_factory(name, single, kernel_name, min_dimension=1):
    def factory(dimension, bounds, seed):
        dimension = int(dimension)
        if dimension < min_dimension:
            raise DimensionError(f"{name} needs at least {min_dimension} dimensions")
        if bounds is None:
            half = _DEFAULT_BOX[name]
            bounds = Bounds.cube(-half, half, dimension)
        return ObjectiveSpec(name, dimension, bounds, single, _kernel_batch(kernel_name))
    return factory


_REGISTRY: dict[str, Callable] = {
    "sphere": _standard_factory("sphere", sphere, "sphere_batch"),
    "rosenbrock": _standard_factory("rosenbrock", rosenbrock, "rosenbrock_batch", min_dimension=2),
    "ackley": _standard_factory("ackley", ackley, "ackley_batch"),
    "alpine": _standard_factory("alpine", alpine, "alpine_batch"),
    "rastrigin": _standard_factory("rastrigin", rastrigin, "rastrigin_batch"),
    "random": lambda dimension, bounds, seed: random_objective(
        dimension, RngStream(0 if seed is None else seed), bounds
    ),
}


def register_objective(name: str, factory: Callable):
    """Extension point: ``factory(dimension, bounds, seed) -> ObjectiveSpec``.
    Externally defined landscapes (e.g. from shift/rotation data files) can be
    registered here and then used by name everywhere."""
    _REGISTRY[str(name)] = factory


def objective_names() -> tuple[str, ...]:
    return tuple(sorted(_REGISTRY))


def get_objective(name, dimension, shift=None, bounds=None, seed=None) -> ObjectiveSpec:
    """Look up an objective by name; ``shift`` (scalar broadcast or vector)
    translates landscape and box. ``seed`` feeds stochastic objectives only."""
    if name not in _REGISTRY:
        raise ConfigurationError(
            f"unknown objective name: {name!r} (known: {', '.join(objective_names())})"
        )
    spec = _REGISTRY[name](dimension, bounds, seed)
    if shift is not None:
        spec = shifted(spec, shift)
    return spec
