"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line
(run with ``pytest tests/test_acceptance.py -v -s`` to see them).

Criteria 1 and 3 contain clauses that the implemented dynamics genuinely
contradict; those tests fail by design rather than being loosened. The
failure messages carry the measured numbers, and the README's testing
section explains the mechanics behind both.
"""

import math

import numpy as np
import pytest

import salpaudit as sa
from salpaudit.algorithms import c1_coefficient, config_for, leader_update_published, run
from salpaudit.benchmarks import get_objective
from salpaudit.core import Bounds, RngStream, clip
from salpaudit.harness import (
    ExperimentConfig,
    ObjectiveRequest,
    bounce_probe,
    counted,
    dynamics_probe,
    load_result_set,
    rerun_cell_repetition,
    run_experiment,
    shift_invariance_probe,
)
from salpaudit.stats import SampleSet, mann_whitney_u


def report_line(number, ok, detail):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {number}: {status} - {detail}")
    return ok


@pytest.fixture(scope="module")
def shifted_benchmark_results():
    config = ExperimentConfig(
        algorithms=["rs", "sso", "sso-code", "asso"],
        objectives=[ObjectiveRequest(name, 2, 1e9)
                    for name in ("sphere", "ackley", "alpine", "rosenbrock")],
        population_size=50,
        iterations=100,
        repetitions=30,
        base_seed=1000,
    )
    return run_experiment(config)


def test_criterion_1_shifted_benchmark_ordering(shifted_benchmark_results):
    """Ordering of the four arms on four 2-D benchmarks shifted by 1e9."""
    assert len(shifted_benchmark_results.cells) == 16  # 4 algorithms x 4 objectives
    assert sum(len(c.traces) for c in shifted_benchmark_results.cells.values()) == 480
    failures = []
    details = []
    for label in shifted_benchmark_results.objective_labels:
        report = shifted_benchmark_results.report_for(label)
        med = report.medians
        if not med["asso"] < med["rs"]:
            failures.append(f"{label}: median(asso)={med['asso']:.3g} not < median(rs)={med['rs']:.3g}")
        for other in ("sso", "sso-code"):
            pair = report.pair("rs", other)
            if not (med["rs"] < med[other] or pair.p_adjusted > 0.05):
                failures.append(
                    f"{label}: rs (median {med['rs']:.3g}) neither lower than nor "
                    f"indistinguishable from {other} (median {med[other]:.3g}, "
                    f"p_adj {pair.p_adjusted:.3g})"
                )
        for other in ("rs", "sso", "sso-code"):
            pair = report.pair("asso", other)
            if not pair.p_adjusted <= 0.05:
                failures.append(f"{label}: asso vs {other} p_adj {pair.p_adjusted:.3g} > 0.05")
        details.append(f"{label} medians " + str({k: float(f'{v:.3g}') for k, v in med.items()}))
    ok = report_line(1, not failures, "; ".join(details))
    assert ok, (
        "shifted-benchmark ordering clauses failed:\n  " + "\n  ".join(failures)
        + "\n(known conflict, failing by design: the bouncing leader plus midpoint "
        "cascade samples the box center densely, and the center is the optimum when "
        "landscape and box are translated together; see README, testing section)"
    )


def test_criterion_2_bounce_bound():
    fractions = [bounce_probe(7.0, iterations=100, seed=seed) for seed in range(30)]
    low_k = [bounce_probe(0.0, iterations=100, seed=seed) for seed in range(5)]
    ok = all(f == 1.0 for f in fractions) and all(f < 1.0 for f in low_k)
    report_line(2, ok, f"k=7 fractions all 1.0 over 30 seeds; k=0 max {max(low_k):.3f} < 1")
    assert all(f == 1.0 for f in fractions)
    assert all(f < 1.0 for f in low_k)


def test_criterion_3_origin_collapse():
    bounds = Bounds.symmetric(100.0, 2)
    leader_cap = 2.0 * math.exp(-16.0) * 100.0 * 11.0  # 10x follower-lag slack
    failures = []
    summaries = []
    for preset in ("sso-nofood", "sso-code-nofood"):
        centroids, leader_mags = [], []
        for seed in range(30):
            probe = dynamics_probe(preset, bounds, 100, seed=seed,
                                   population_size=50, iterations=100)
            centroids.append(probe.final_centroid_norm)
            leader_mags.append(probe.final_leader_magnitude())
        if max(centroids) > 1e-2:
            failures.append(
                f"{preset}: centroid norms {min(centroids):.3g}..{max(centroids):.3g} exceed 1e-2"
            )
        if max(leader_mags) > leader_cap:
            failures.append(f"{preset}: leader magnitude {max(leader_mags):.3g} > {leader_cap:.3g}")
        summaries.append(f"{preset} worst centroid {max(centroids):.3g}, "
                         f"worst leader |coord| {max(leader_mags):.3g}")
    ok = report_line(3, not failures, "; ".join(summaries))
    assert ok, (
        "origin-collapse clauses failed:\n  " + "\n  ".join(failures)
        + "\n(known conflict, failing by design: a 49-deep midpoint chain lags the "
        "leader by ~1 member/iteration, so at L=100 the tail still carries mid-run "
        "excursions; the same seeds collapse below 1e-2 by L=150; see README, "
        "testing section)"
    )


def test_criterion_4_asso_shift_equivariance():
    worst = {}
    for shift in (10.0, 1e3, 1e6):
        report = shift_invariance_probe("asso", "sphere", shift, seed=7,
                                        dimension=2, population_size=50, iterations=100)
        tolerance = 1e-6 * max(1.0, shift)
        worst[shift] = report.max_deviation
        assert report.max_deviation <= tolerance, (
            f"shift {shift:g}: deviation {report.max_deviation:.3g} > {tolerance:g}"
        )
    report_line(4, True, "max per-coordinate deviations " +
                ", ".join(f"s={s:g}: {d:.2e}" for s, d in worst.items()))


def test_criterion_5_expected_value_bias():
    results = []
    for low, high in ((-100.0, 100.0), (10.0, 20.0)):
        draws = RngStream(123).random(10 ** 6)
        values = draws * (high - low) + low
        target = (high + low) / 2.0
        standard_error = (high - low) / math.sqrt(12.0) / math.sqrt(10 ** 6)
        deviation = abs(float(values.mean()) - target)
        results.append((low, high, deviation, 3 * standard_error))
        assert deviation <= 3 * standard_error, (
            f"bounds ({low}, {high}): |mean - {target}| = {deviation:.4g} "
            f"> 3 SE = {3 * standard_error:.4g}"
        )
    report_line(5, True, "; ".join(
        f"({lo:g},{hi:g}): |dev| {d:.2e} <= 3SE {s:.2e}" for lo, hi, d, s in results
    ))


def test_criterion_6_mann_whitney_oracle():
    _, p_exact = mann_whitney_u(SampleSet([1, 2, 3], "a"), SampleSet([4, 5, 6], "b"))
    assert p_exact == 0.1

    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(5, 11))
        a = SampleSet(rng.random(n) * 10.0, "a")
        b = SampleSet(rng.random(n) * 10.0 + rng.normal() * 2.0, "b")
        _, exact = mann_whitney_u(a, b, method="exact")
        _, approx = mann_whitney_u(a, b, method="asymptotic")
        worst = max(worst, abs(exact - approx))
    assert worst <= 0.02, f"normal approximation off by {worst:.4f} > 0.02"
    report_line(6, True, f"exact p = 0.1; worst |approx - exact| over 200 instances = {worst:.4f}")


@pytest.fixture(scope="module")
def desk_scale_de_results():
    config = ExperimentConfig(
        algorithms=["de", "sso", "sso-strict", "sso-code", "asso"],
        objectives=[ObjectiveRequest("sphere", 10, 50.0),
                    ObjectiveRequest("rastrigin", 10, 50.0)],
        population_size=50,
        iterations=200,
        repetitions=30,
        base_seed=2000,
    )
    return run_experiment(config)


def test_criterion_7_de_dominance(desk_scale_de_results):
    failures = []
    details = []
    for label in desk_scale_de_results.objective_labels:
        report = desk_scale_de_results.report_for(label)
        med = report.medians
        for preset in ("sso", "sso-strict", "sso-code", "asso"):
            pair = report.pair("de", preset)
            if not (med["de"] < med[preset] and pair.p_adjusted <= 0.05):
                failures.append(
                    f"{label}: de (median {med['de']:.3g}) vs {preset} "
                    f"(median {med[preset]:.3g}, p_adj {pair.p_adjusted:.3g})"
                )
        details.append(f"{label}: de median {med['de']:.3g}, "
                       f"worst preset median {max(med[p] for p in med if p != 'de'):.3g}")
    ok = report_line(7, not failures, "; ".join(details))
    assert ok, "DE dominance clauses failed:\n  " + "\n  ".join(failures)


def test_criterion_8_determinism(tmp_path):
    config = ExperimentConfig(
        algorithms=["asso", "rs"],
        objectives=[ObjectiveRequest("sphere", 2, 1e9)],
        population_size=20,
        iterations=40,
        repetitions=3,
        base_seed=4242,
    )
    for attempt in range(2):  # repeated twice
        out = tmp_path / f"attempt{attempt}"
        run_experiment(config).save(out)
        manifest, cells = load_result_set(out)
        for (label, algorithm), cell in cells.items():
            for repetition in range(3):
                trace = rerun_cell_repetition(manifest, label, algorithm, repetition)
                assert np.array_equal(trace.best_per_iteration, cell.best_curves[repetition]), (
                    f"cell ({label}, {algorithm}) repetition {repetition} did not reproduce"
                )
    report_line(8, True, "all cells reproduce bit-exactly from recorded seeds, twice")


def test_criterion_9_invariant_suite():
    rng = np.random.default_rng(99)

    # clipping idempotence and shift equivariance
    for _ in range(100):
        d = int(rng.integers(1, 5))
        lo = rng.uniform(-1e4, 1e4, d)
        b = Bounds(lo, lo + rng.uniform(0.01, 1e4, d))
        x = rng.uniform(-1e5, 1e5, d)
        once = clip(x, b)
        assert np.array_equal(clip(once, b), once)
        s = float(rng.uniform(-1e6, 1e6))
        lhs = clip(x + s, b.shifted(s))
        rhs = clip(x, b) + s
        assert np.all(np.abs(lhs - rhs) <= 4 * np.spacing(np.maximum(np.abs(lhs), np.abs(rhs))))

    # evaluation budgets and monotone best-so-far across all algorithms
    algorithms = list(sa.ALGORITHM_IDS)
    for i in range(100):
        algorithm = algorithms[i % len(algorithms)]
        n = int(rng.integers(4, 9))
        length = int(rng.integers(1, 5))
        spec, counter = counted(get_objective("sphere", int(rng.integers(1, 4))))
        trace = run(algorithm, spec, config_for(algorithm, n, length), seed=int(rng.integers(1 << 20)))
        expected = n * length if algorithm == "rs" else n * (length + 1)
        assert counter.count == expected, f"{algorithm}: {counter.count} != {expected}"
        assert np.all(np.diff(trace.best_per_iteration) <= 0.0)

    # c1 is strictly decreasing and bounded in (0, 2]
    for _ in range(100):
        total = int(rng.integers(1, 1000))
        l1, l2 = sorted(rng.choice(total + 1, size=2, replace=False))
        a, b2 = c1_coefficient(int(l1), total), c1_coefficient(int(l2), total)
        assert 0.0 < b2 < a <= 2.0

    # threshold 0 never takes the "-" branch
    for seed in range(100):
        d = int(rng.integers(1, 4))
        lo = rng.uniform(-50, 50, d)
        bounds = Bounds(lo, lo + rng.uniform(0.1, 100, d))
        food = bounds.lower + rng.random(d) * bounds.width
        c1 = float(rng.uniform(0.0, 2.0))
        got = leader_update_published(food, bounds, c1, RngStream(seed), c3_threshold=0.0)
        ref = RngStream(seed).random((1, d, 2))
        plus_branch = food + c1 * (bounds.width * ref[0, :, 0] + bounds.lower)
        assert np.array_equal(got, plus_branch)

    # U + U' = n*m, ties included
    for _ in range(100):
        n, m = int(rng.integers(2, 20)), int(rng.integers(2, 20))
        a = SampleSet(rng.integers(0, 6, n).astype(float), "a")
        b3 = SampleSet(rng.integers(0, 6, m).astype(float), "b")
        u_ab, _ = mann_whitney_u(a, b3)
        u_ba, _ = mann_whitney_u(b3, a)
        assert u_ab + u_ba == pytest.approx(n * m, abs=1e-9)

    report_line(9, True, "clip, budget, monotonicity, c1, c3-branch, U-sum invariants "
                         "hold over 100 random instances each")
