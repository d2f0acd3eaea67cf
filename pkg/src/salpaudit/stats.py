"""Nonparametric comparison machinery: average-best-fitness curves,
Mann-Whitney U with Bonferroni correction, and the asterisk convention.

Conventions: the U statistic reported for (a, b) is the one for sample a,
computed from midranks (ties get the average rank). Tests are two-sided;
direction is reported separately via per-sample medians. The exact null
distribution is used for small tie-free samples (min(n, m) <= 10), the
tie-corrected normal approximation with continuity correction 0.5 otherwise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .core import DimensionError, RngStream
from . import backend

SIGNIFICANCE_LEVELS = (
    (0.0001, "****"),
    (0.001, "***"),
    (0.01, "**"),
    (0.05, "*"),
)

EXACT_SIZE_CUTOFF = 10


@dataclass(frozen=True)
class SampleSet:
    """Final best fitnesses over repetitions for one algorithm."""

    values: np.ndarray
    label: str

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64).copy()
        if values.ndim != 1 or values.size < 2:
            raise ValueError("a sample set needs at least 2 values")
        if not np.all(np.isfinite(values)):
            raise ValueError("sample values must be finite")
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def median(self) -> float:
        return float(np.median(self.values))


def abf(traces) -> np.ndarray:
    """Average best fitness: element-wise mean of best-so-far curves across
    repetitions of one (algorithm, objective) cell."""
    traces = list(traces)
    if not traces:
        raise ValueError("abf needs at least one trace")
    lengths = {t.best_per_iteration.size for t in traces}
    if len(lengths) != 1:
        raise DimensionError(f"traces have mixed lengths: {sorted(lengths)}")
    cells = {(t.algorithm_id, t.objective_id) for t in traces}
    if len(cells) != 1:
        raise ValueError(f"traces mix (algorithm, objective) cells: {sorted(cells)}")
    return np.mean(np.stack([t.best_per_iteration for t in traces]), axis=0)


def _midranks(pooled: np.ndarray) -> np.ndarray:
    order = np.argsort(pooled, kind="stable")
    ranks = np.empty(pooled.size)
    sorted_vals = pooled[order]
    i = 0
    while i < pooled.size:
        j = i
        while j + 1 < pooled.size and sorted_vals[j + 1] == sorted_vals[i]:
            j += 1
        ranks[order[i:j + 1]] = 0.5 * (i + j) + 1.0  # average of ranks i+1..j+1
        i = j + 1
    return ranks


def _u_null_counts(n: int, m: int) -> np.ndarray:
    """counts[u] = number of the C(n+m, n) rank splits with U statistic u.

    Items are processed in rank order; assigning the next item to the first
    sample adds (number of second-sample items already placed) to U. Counts
    are held as float64: exact up to 2^53, ample for any exact-branch sizes.
    """
    max_u = n * m
    f = np.zeros((n + 1, max_u + 1))
    f[0, 0] = 1.0
    for t in range(1, n + m + 1):
        for k in range(min(n, t), 0, -1):
            gain = t - k  # second-sample items among the first t-1
            if gain > 0:
                f[k, gain:] += f[k - 1, :max_u + 1 - gain]
            else:
                f[k] += f[k - 1]
    return f[n]


def _exact_two_sided_p(u: float, n: int, m: int) -> float:
    u_lo = min(u, n * m - u)
    u_hi = n * m - u_lo
    counts = _u_null_counts(n, m)
    total = counts.sum()
    lo_idx = int(math.floor(u_lo + 1e-9))
    hi_idx = int(math.ceil(u_hi - 1e-9))
    extreme = counts[: lo_idx + 1].sum() + counts[hi_idx:].sum()
    return min(1.0, float(extreme) / float(total))


def _normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def mann_whitney_u(a: SampleSet, b: SampleSet, method: str = "auto") -> tuple[float, float]:
    """U statistic (for a: number of (a, b) pairs with the a-value larger,
    ties counted half) and two-sided p-value.

    method "auto" uses the exact null distribution for tie-free samples with
    min(n, m) <= 10 and the normal approximation otherwise; "exact" and
    "asymptotic" force one route.
    """
    if method not in ("auto", "exact", "asymptotic"):
        raise ValueError(f"method must be auto, exact or asymptotic, got {method!r}")
    x, y = a.values, b.values
    n, m = x.size, y.size
    pooled = np.concatenate([x, y])
    ranks = _midranks(pooled)
    u = float(np.sum(ranks[:n])) - n * (n + 1) / 2.0

    _, tie_counts = np.unique(pooled, return_counts=True)
    has_ties = bool(np.any(tie_counts > 1))
    if tie_counts.size == 1:
        return u, 1.0  # all values identical across both samples

    use_exact = method == "exact" or (
        method == "auto" and min(n, m) <= EXACT_SIZE_CUTOFF and not has_ties
    )
    if use_exact:
        if has_ties:
            raise ValueError("exact method is defined for tie-free samples")
        return u, _exact_two_sided_p(u, n, m)

    total = n + m
    tie_term = float(np.sum(tie_counts.astype(np.float64) ** 3 - tie_counts))
    variance = (n * m / 12.0) * ((total + 1) - tie_term / (total * (total - 1)))
    if variance <= 0.0:
        return u, 1.0
    # continuity correction: shrink |U - nm/2| by 0.5, floored at zero
    d = abs(u - n * m / 2.0)
    d = max(0.0, d - 0.5)
    z = d / math.sqrt(variance)
    return u, min(1.0, 2.0 * _normal_sf(z))


def bonferroni(p: float, m: int) -> float:
    """min(1, m * p)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if m < 1:
        raise ValueError(f"correction factor must be >= 1, got {m}")
    return min(1.0, m * p)


def significance_class(p_adjusted: float) -> str:
    """Asterisk convention: **** for p <= 1e-4 down to ns above 0.05."""
    if not 0.0 <= p_adjusted <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p_adjusted}")
    for threshold, label in SIGNIFICANCE_LEVELS:
        if p_adjusted <= threshold:
            return label
    return "ns"


@dataclass(frozen=True)
class PairComparison:
    a: str
    b: str
    u: float
    p_raw: float
    p_adjusted: float
    significance: str


@dataclass
class ComparisonReport:
    """All pairwise tests within one objective, Bonferroni-corrected by the
    number of pairs actually performed."""

    objective_id: str
    pairs: list[PairComparison]
    correction_factor: int
    medians: dict[str, float]

    @property
    def algorithms(self) -> list[str]:
        return list(self.medians)

    def pair(self, a: str, b: str) -> PairComparison:
        for p in self.pairs:
            if {p.a, p.b} == {a, b}:
                return p
        raise KeyError(f"no comparison between {a!r} and {b!r}")

    def to_json_dict(self) -> dict:
        return {
            "objective_id": self.objective_id,
            "correction_factor": self.correction_factor,
            "generator": RngStream.generator_name,
            "backend": backend.name,
            "medians": {k: float(v) for k, v in self.medians.items()},
            "pairs": [
                {
                    "a": p.a,
                    "b": p.b,
                    "u": p.u,
                    "p_raw": p.p_raw,
                    "p_adjusted": p.p_adjusted,
                    "significance": p.significance,
                }
                for p in self.pairs
            ],
        }

    def to_json(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    def to_csv(self, path):
        """Matrix form: rows/columns are algorithms, cells adjusted p + class."""
        names = self.algorithms
        cell = {}
        for p in self.pairs:
            text = f"{p.p_adjusted:.6g} ({p.significance})"
            cell[(p.a, p.b)] = text
            cell[(p.b, p.a)] = text
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("algorithm," + ",".join(names) + "\n")
            for row in names:
                cells = [cell.get((row, col), "") for col in names]
                fh.write(row + "," + ",".join(cells) + "\n")


def compare_samples(samples: list[SampleSet], objective_id: str = "",
                    correction_factor: int | None = None) -> ComparisonReport:
    """Pairwise Mann-Whitney over all sample sets; the default correction
    factor is the number of pairs performed."""
    if len(samples) < 2:
        raise ValueError("need at least two sample sets to compare")
    pairs = list(combinations(samples, 2))
    m = len(pairs) if correction_factor is None else int(correction_factor)
    results = []
    for a, b in pairs:
        u, p_raw = mann_whitney_u(a, b)
        p_adj = bonferroni(p_raw, m)
        results.append(PairComparison(a.label, b.label, u, p_raw, p_adj, significance_class(p_adj)))
    medians = {s.label: s.median for s in samples}
    return ComparisonReport(objective_id, results, m, medians)
