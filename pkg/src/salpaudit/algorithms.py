"""The salp-swarm optimizer family plus Random Search and Differential
Evolution, behind one step/run interface.

Variant axes captured by SsoConfig:

* leader_rule -- "published" perturbs the food position by
  c1*((ub-lb)*c2 + lb), whose lower-bound term grows with the distance of the
  box from the origin; "amended" drops that term, leaving (c1*c2)*(ub-lb),
  which depends on box widths only and is therefore translation-equivariant.
* population_split -- "paper_chain" updates member 1 with the leader rule and
  everyone else with the midpoint rule; "code_halves" updates the first half
  of the population with the leader rule (as the reference implementation
  does) and the second half with the midpoint rule.
* c3_threshold -- per-coordinate sign gate: "+" when c3 >= threshold. At 0.0
  the "-" branch is dead because draws lie in [0, 1); 0.5 makes the signs
  fair coin flips.
* food_attraction -- when off, the leader rule perturbs around the zero
  vector instead of the best-so-far position (isolates the origin pull).

Leader updates are returned pre-clip; clipping onto the box is a separate
step so probes can observe boundary violations before repair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .benchmarks import ObjectiveSpec
from .core import (
    Bounds,
    Candidate,
    ConfigurationError,
    DimensionError,
    RngStream,
    RunTrace,
    SalpChain,
    _as_float_vector,
    uniform_init,
    uniform_positions,
)

LEADER_RULES = ("published", "amended")
POPULATION_SPLITS = ("paper_chain", "code_halves")


@dataclass(frozen=True)
class SsoConfig:
    leader_rule: str = "published"
    population_split: str = "paper_chain"
    c3_threshold: float = 0.5
    food_attraction: bool = True
    population_size: int = 50
    iterations: int = 100

    def __post_init__(self):
        if self.leader_rule not in LEADER_RULES:
            raise ConfigurationError(f"leader_rule must be one of {LEADER_RULES}, got {self.leader_rule!r}")
        if self.population_split not in POPULATION_SPLITS:
            raise ConfigurationError(
                f"population_split must be one of {POPULATION_SPLITS}, got {self.population_split!r}"
            )
        if not 0.0 <= self.c3_threshold <= 1.0:
            raise ConfigurationError(f"c3_threshold must lie in [0, 1], got {self.c3_threshold}")
        if self.population_size < 2:
            raise ConfigurationError("population_size must be at least 2")
        if self.iterations < 1:
            raise ConfigurationError("iterations must be at least 1")

    def leader_count(self, n: int) -> int:
        # code_halves: first ceil(n/2) members use the leader rule
        return 1 if self.population_split == "paper_chain" else (n + 1) // 2


@dataclass(frozen=True)
class DeConfig:
    weight: float = 0.3
    crossover_rate: float = 0.5
    population_size: int = 50
    iterations: int = 100

    def __post_init__(self):
        if not 0.0 < self.weight <= 2.0:
            raise ConfigurationError(f"weight must lie in (0, 2], got {self.weight}")
        if not 0.0 <= self.crossover_rate <= 1.0:
            raise ConfigurationError(f"crossover_rate must lie in [0, 1], got {self.crossover_rate}")
        if self.population_size < 4:
            raise ConfigurationError("DE needs population_size >= 4")
        if self.iterations < 1:
            raise ConfigurationError("iterations must be at least 1")


@dataclass(frozen=True)
class RsConfig:
    population_size: int = 50
    iterations: int = 100

    def __post_init__(self):
        if self.population_size < 1:
            raise ConfigurationError("population_size must be at least 1")
        if self.iterations < 1:
            raise ConfigurationError("iterations must be at least 1")


SSO_PRESETS: dict[str, dict] = {
    "sso": dict(leader_rule="published", population_split="paper_chain",
                c3_threshold=0.5, food_attraction=True),
    "sso-strict": dict(leader_rule="published", population_split="paper_chain",
                       c3_threshold=0.0, food_attraction=True),
    "sso-code": dict(leader_rule="published", population_split="code_halves",
                     c3_threshold=0.5, food_attraction=True),
    "asso": dict(leader_rule="amended", population_split="code_halves",
                 c3_threshold=0.5, food_attraction=True),
    "sso-nofood": dict(leader_rule="published", population_split="paper_chain",
                       c3_threshold=0.5, food_attraction=False),
    "sso-code-nofood": dict(leader_rule="published", population_split="code_halves",
                            c3_threshold=0.5, food_attraction=False),
}

ALGORITHM_IDS = tuple(SSO_PRESETS) + ("rs", "de")


def config_for(algorithm_id: str, population_size: int = 50, iterations: int = 100, **overrides):
    """Build the canonical config for an algorithm id."""
    if algorithm_id in SSO_PRESETS:
        fields = dict(SSO_PRESETS[algorithm_id])
        fields.update(overrides)
        return SsoConfig(population_size=population_size, iterations=iterations, **fields)
    if algorithm_id == "de":
        return DeConfig(population_size=population_size, iterations=iterations, **overrides)
    if algorithm_id == "rs":
        if overrides:
            raise ConfigurationError(f"random search takes no extra parameters, got {sorted(overrides)}")
        return RsConfig(population_size=population_size, iterations=iterations)
    raise ConfigurationError(f"unknown algorithm id: {algorithm_id!r} (known: {', '.join(ALGORITHM_IDS)})")


def c1_coefficient(iteration: int, total: int) -> float:
    """Exploration coefficient 2 exp(-(4 l / L)^2): 2 at l=0, 2e^-16 at l=L,
    strictly decreasing in between."""
    if total < 1:
        raise ConfigurationError("total iteration count must be at least 1")
    r = 4.0 * iteration / total
    return 2.0 * math.exp(-(r * r))


def _leader_block(base, bounds: Bounds, c1, rng: RngStream, threshold, amended):
    """Pre-clip leader-rule positions for a block of members; consumes two
    draws per coordinate, member-major, c2 before c3 within a coordinate."""
    m, d = base.shape
    u = rng.random((m, d, 2))
    c2 = np.ascontiguousarray(u[:, :, 0])
    c3 = np.ascontiguousarray(u[:, :, 1])
    return backend.kernels.leader_positions(
        base, bounds.lower, bounds.upper, float(c1), c2, c3, float(threshold), bool(amended)
    )


def leader_update_published(food, bounds: Bounds, c1: float, rng: RngStream,
                            c3_threshold: float = 0.5) -> np.ndarray:
    """One leader position under the rule as published (pre-clip): per
    coordinate, food +/- c1*((ub-lb)*c2 + lb) with the sign gated by c3."""
    base = _as_float_vector(food, "food").reshape(1, -1).copy()
    if base.shape[1] != bounds.dimension:
        raise DimensionError("food and bounds dimensions differ")
    return _leader_block(base, bounds, c1, rng, c3_threshold, amended=False)[0]


def leader_update_amended(food, bounds: Bounds, c1: float, rng: RngStream,
                          c3_threshold: float = 0.5) -> np.ndarray:
    """One leader position under the amended rule (pre-clip): the perturbation
    is (c1*c2)*(ub-lb), so it depends on box widths only."""
    base = _as_float_vector(food, "food").reshape(1, -1).copy()
    if base.shape[1] != bounds.dimension:
        raise DimensionError("food and bounds dimensions differ")
    return _leader_block(base, bounds, c1, rng, c3_threshold, amended=True)[0]


def follower_update(current, predecessor) -> np.ndarray:
    """Coordinate-wise midpoint of a member and its predecessor."""
    a = _as_float_vector(current, "current")
    b = _as_float_vector(predecessor, "predecessor")
    if a.size != b.size:
        raise DimensionError(f"length mismatch: {a.size} vs {b.size}")
    return 0.5 * (a + b)


def sso_step(chain: SalpChain, objective: ObjectiveSpec, cfg: SsoConfig,
             iteration: int, rng: RngStream, preclip_out: list | None = None) -> SalpChain:
    """One iteration: leader-rule block, midpoint cascade for the rest, clip,
    evaluate, and update the food source on strict improvement.

    ``preclip_out``, when given, receives a copy of the leader block before
    clipping (boundary-bounce instrumentation).
    """
    if chain.food is None:
        raise ConfigurationError("chain has no food source; evaluate it before stepping")
    if not 1 <= iteration <= cfg.iterations:
        raise ConfigurationError(f"iteration must lie in [1, {cfg.iterations}], got {iteration}")
    bounds = objective.bounds
    if bounds.dimension != chain.dimension:
        raise DimensionError("chain and objective dimensions differ")

    n = chain.size
    n_lead = cfg.leader_count(n)
    c1 = c1_coefficient(iteration, cfg.iterations)
    if cfg.food_attraction:
        base = np.repeat(chain.food.position[None, :], n_lead, axis=0)
    else:
        base = np.zeros((n_lead, chain.dimension))
    pre = _leader_block(base, bounds, c1, rng, cfg.c3_threshold, cfg.leader_rule == "amended")
    if preclip_out is not None:
        preclip_out.append(pre.copy())

    positions = chain.positions.copy()
    positions[:n_lead] = pre
    positions = backend.kernels.follower_sweep(positions, n_lead)
    positions = backend.kernels.clip_positions(positions, bounds.lower, bounds.upper)

    fitness = objective.evaluate_batch(positions)
    out = SalpChain(positions, fitness, food=chain.food)
    out.update_food()
    return out


def random_search_step(best: Candidate | None, objective: ObjectiveSpec,
                       n: int, rng: RngStream) -> Candidate:
    """Evaluate n fresh uniform positions; return the better of the incumbent
    and the batch best (incumbent kept on ties)."""
    positions = uniform_positions(objective.bounds, n, rng)
    fitness = objective.evaluate_batch(positions)
    i = int(np.argmin(fitness))
    if best is None or fitness[i] < best.fitness:
        return Candidate(positions[i], float(fitness[i]))
    return best


def de_step(population: SalpChain, objective: ObjectiveSpec, cfg: DeConfig,
            rng: RngStream) -> SalpChain:
    """One DE/rand/1/bin generation with greedy selection (trial replaces its
    target when not worse).

    Stream order per target: r1, r2, r3 by rejection sampling over uniform
    integers in [0, N), then j_rand in [0, D), then D crossover uniforms.
    """
    if population.fitness is None:
        raise ConfigurationError("population must be evaluated before stepping")
    n, d = population.positions.shape
    if n < 4:
        raise ConfigurationError(f"DE needs at least 4 members, got {n}")
    bounds = objective.bounds

    r1 = np.empty(n, dtype=np.int64)
    r2 = np.empty(n, dtype=np.int64)
    r3 = np.empty(n, dtype=np.int64)
    j_rand = np.empty(n, dtype=np.int64)
    cross_u = np.empty((n, d))
    for i in range(n):
        a = rng.integers(n)
        while a == i:
            a = rng.integers(n)
        b = rng.integers(n)
        while b == i or b == a:
            b = rng.integers(n)
        c = rng.integers(n)
        while c == i or c == a or c == b:
            c = rng.integers(n)
        r1[i], r2[i], r3[i] = a, b, c
        j_rand[i] = rng.integers(d)
        cross_u[i] = rng.random(d)

    trials = backend.kernels.de_trials(
        population.positions, r1, r2, r3, float(cfg.weight), float(cfg.crossover_rate),
        cross_u, j_rand, bounds.lower, bounds.upper,
    )
    trial_fitness = objective.evaluate_batch(trials)
    accept = trial_fitness <= population.fitness
    positions = np.where(accept[:, None], trials, population.positions)
    fitness = np.where(accept, trial_fitness, population.fitness)
    out = SalpChain(positions, fitness, food=population.food)
    out.update_food()
    return out


def _run_rs(objective, cfg: RsConfig, rng, snapshot):
    n, length = cfg.population_size, cfg.iterations
    best = None
    bests = np.empty(length)
    snaps = [] if snapshot else None
    evaluations = 0
    for iteration in range(length):
        # same draws and selection as random_search_step, with the batch kept
        positions = uniform_positions(objective.bounds, n, rng)
        fitness = objective.evaluate_batch(positions)
        evaluations += n
        i = int(np.argmin(fitness))
        if best is None or fitness[i] < best.fitness:
            best = Candidate(positions[i], float(fitness[i]))
        bests[iteration] = best.fitness
        if snaps is not None:
            snaps.append(positions)
    return bests, best, evaluations, None, snaps


def _run_population(algorithm_id, objective, cfg, rng, snapshot):
    n, length = cfg.population_size, cfg.iterations
    chain = uniform_init(objective.bounds, n, rng)
    chain.fitness = objective.evaluate_batch(chain.positions)
    chain.update_food()
    evaluations = n
    initial = chain.positions.copy()
    bests = np.empty(length)
    snaps = [] if snapshot else None
    for iteration in range(1, length + 1):
        if algorithm_id == "de":
            chain = de_step(chain, objective, cfg, rng)
        else:
            chain = sso_step(chain, objective, cfg, iteration, rng)
        evaluations += n
        bests[iteration - 1] = chain.food.fitness
        if snaps is not None:
            snaps.append(chain.positions.copy())
    return bests, chain.food, evaluations, initial, snaps


def run(algorithm_id: str, objective: ObjectiveSpec, cfg=None, seed: int = 0,
        snapshot: bool = False) -> RunTrace:
    """Run one repetition from a seed and record the best-so-far curve.

    Population methods spend N*(L+1) evaluations (initial sweep plus L steps);
    random search spends N*L. The trace has one entry per step, so iteration
    indices are 1..L.
    """
    if algorithm_id not in ALGORITHM_IDS:
        raise ConfigurationError(
            f"unknown algorithm id: {algorithm_id!r} (known: {', '.join(ALGORITHM_IDS)})"
        )
    if cfg is None:
        cfg = config_for(algorithm_id)
    expected = {"rs": RsConfig, "de": DeConfig}.get(algorithm_id, SsoConfig)
    if not isinstance(cfg, expected):
        raise ConfigurationError(
            f"algorithm {algorithm_id!r} needs a {expected.__name__}, got {type(cfg).__name__}"
        )

    rng = RngStream(seed)
    if algorithm_id == "rs":
        bests, best, evaluations, initial, snaps = _run_rs(objective, cfg, rng, snapshot)
    else:
        bests, best, evaluations, initial, snaps = _run_population(
            algorithm_id, objective, cfg, rng, snapshot
        )
    return RunTrace(
        algorithm_id=algorithm_id,
        objective_id=objective.name,
        seed=int(seed),
        best_per_iteration=bests,
        final_best=best,
        evaluations=evaluations,
        initial_positions=initial if snapshot else None,
        snapshots=np.asarray(snaps) if snapshot else None,
    )
