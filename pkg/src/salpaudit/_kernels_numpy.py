"""Pure-numpy kernel implementations (fallback backend).

Same signatures as the numba backend. Update kernels keep the exact same
operation order as their numba twins so both backends produce bit-identical
positions; batch objective kernels may differ from the numba loops in the
last ulps of the reduction.
"""

from __future__ import annotations

import numpy as np

TWO_PI = 2.0 * np.pi


def leader_positions(base, lower, upper, c1, c2, c3, threshold, amended):
    """Pre-clip leader-rule positions for a block of members.

    base: (m, D) attractor rows (food position, or zeros when food attraction
    is off). c2, c3: (m, D) uniform draws. The published rule perturbs by
    c1*((upper-lower)*c2 + lower); the amended rule by (c1*c2)*(upper-lower).
    c3 >= threshold selects the "+" branch, otherwise "-".
    """
    if amended:
        step = (c1 * c2) * (upper - lower)
    else:
        step = c1 * ((upper - lower) * c2 + lower)
    sign = np.where(c3 >= threshold, 1.0, -1.0)
    return base + sign * step


def follower_sweep(positions, start):
    """Midpoint cascade: each member from ``start`` on moves to the mean of
    itself and its predecessor's already-updated position. Returns a copy."""
    out = positions.copy()
    for i in range(start, out.shape[0]):
        out[i] = 0.5 * (out[i] + out[i - 1])
    return out


def clip_positions(positions, lower, upper):
    return np.minimum(upper, np.maximum(lower, positions))


def de_trials(positions, r1, r2, r3, weight, crossover_rate, cross_u, j_rand, lower, upper):
    """DE/rand/1/bin trial vectors, clipped to the box.

    Mutant v_i = x_{r1[i]} + weight * (x_{r2[i]} - x_{r3[i]}); the trial takes
    the mutant coordinate when cross_u < crossover_rate or at j_rand[i].
    """
    n = positions.shape[0]
    mutant = positions[r1] + weight * (positions[r2] - positions[r3])
    take = cross_u < crossover_rate
    take[np.arange(n), j_rand] = True
    trial = np.where(take, mutant, positions)
    return np.minimum(upper, np.maximum(lower, trial))


def sphere_batch(x):
    return np.sum(x * x, axis=1)


def rosenbrock_batch(x):
    a = x[:, 1:] - x[:, :-1] ** 2
    b = 1.0 - x[:, :-1]
    return np.sum(100.0 * (a * a) + b * b, axis=1)


def ackley_batch(x):
    rms = np.sqrt(np.mean(x * x, axis=1))
    mean_cos = np.mean(np.cos(TWO_PI * x), axis=1)
    return -20.0 * np.exp(-0.2 * rms) - np.exp(mean_cos) + 20.0 + np.e


def alpine_batch(x):
    return np.sum(np.abs(x * np.sin(x) + 0.1 * x), axis=1)


def rastrigin_batch(x):
    d = x.shape[1]
    return 10.0 * d + np.sum(x * x - 10.0 * np.cos(TWO_PI * x), axis=1)
