"""Numba-jitted kernels (default backend when numba is importable).

Update kernels mirror the numpy fallback operation-for-operation; the batch
objective kernels use serial loops, which can differ from numpy's pairwise
reductions in the last ulps.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

TWO_PI = 2.0 * math.pi


@njit(cache=True)
def leader_positions(base, lower, upper, c1, c2, c3, threshold, amended):
    m, d = base.shape
    out = np.empty((m, d))
    for i in range(m):
        for j in range(d):
            if amended:
                step = (c1 * c2[i, j]) * (upper[j] - lower[j])
            else:
                step = c1 * ((upper[j] - lower[j]) * c2[i, j] + lower[j])
            if c3[i, j] >= threshold:
                out[i, j] = base[i, j] + step
            else:
                out[i, j] = base[i, j] - step
    return out


@njit(cache=True)
def follower_sweep(positions, start):
    out = positions.copy()
    n, d = out.shape
    for i in range(start, n):
        for j in range(d):
            out[i, j] = 0.5 * (out[i, j] + out[i - 1, j])
    return out


@njit(cache=True)
def clip_positions(positions, lower, upper):
    n, d = positions.shape
    out = np.empty((n, d))
    for i in range(n):
        for j in range(d):
            out[i, j] = min(upper[j], max(lower[j], positions[i, j]))
    return out


@njit(cache=True)
def de_trials(positions, r1, r2, r3, weight, crossover_rate, cross_u, j_rand, lower, upper):
    n, d = positions.shape
    out = np.empty((n, d))
    for i in range(n):
        for j in range(d):
            if cross_u[i, j] < crossover_rate or j == j_rand[i]:
                v = positions[r1[i], j] + weight * (positions[r2[i], j] - positions[r3[i], j])
            else:
                v = positions[i, j]
            out[i, j] = min(upper[j], max(lower[j], v))
    return out


@njit(cache=True)
def sphere_batch(x):
    n, d = x.shape
    out = np.empty(n)
    for i in range(n):
        acc = 0.0
        for j in range(d):
            acc += x[i, j] * x[i, j]
        out[i] = acc
    return out


@njit(cache=True)
def rosenbrock_batch(x):
    n, d = x.shape
    out = np.empty(n)
    for i in range(n):
        acc = 0.0
        for j in range(d - 1):
            a = x[i, j + 1] - x[i, j] ** 2
            b = 1.0 - x[i, j]
            acc += 100.0 * (a * a) + b * b
        out[i] = acc
    return out


@njit(cache=True)
def ackley_batch(x):
    n, d = x.shape
    out = np.empty(n)
    for i in range(n):
        sq = 0.0
        cs = 0.0
        for j in range(d):
            sq += x[i, j] * x[i, j]
            cs += math.cos(TWO_PI * x[i, j])
        rms = math.sqrt(sq / d)
        out[i] = -20.0 * math.exp(-0.2 * rms) - math.exp(cs / d) + 20.0 + math.e
    return out


@njit(cache=True)
def alpine_batch(x):
    n, d = x.shape
    out = np.empty(n)
    for i in range(n):
        acc = 0.0
        for j in range(d):
            acc += abs(x[i, j] * math.sin(x[i, j]) + 0.1 * x[i, j])
        out[i] = acc
    return out


@njit(cache=True)
def rastrigin_batch(x):
    n, d = x.shape
    out = np.empty(n)
    for i in range(n):
        acc = 10.0 * d
        for j in range(d):
            acc += x[i, j] * x[i, j] - 10.0 * math.cos(TWO_PI * x[i, j])
        out[i] = acc
    return out
