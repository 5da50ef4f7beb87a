"""Monte-Carlo experiment harness.

Runs seeded grids over (prime bit length, number of primes, max exponent),
factoring every generated instance from a single (exact or simulated) order
and comparing the empirical complete-factorization failure rate per cell
against the theoretical bound. Reports are deterministic for a fixed seed:
every trial owns a private random stream derived by hashing
(seed, cell, trial), so cells can be run independently or in parallel
without changing any number.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import json
import logging
import math
import random
import time
from dataclasses import dataclass
from typing import Callable, Sequence

from ordersplit.engine import (
    default_iteration_cap,
    guess_multiple,
    recover_factors,
    shor_split,
    theoretical_failure_bound,
)
from ordersplit.oracle import (
    InfeasibleParametersError,
    Instance,
    exact_order,
    generate_instance,
    sample_unit,
    simulate_order,
)

__all__ = [
    "ExperimentConfig",
    "CellReport",
    "run_cell",
    "run_shor_baseline_cell",
    "run_grid",
    "cell_passes",
    "write_csv",
    "write_json",
    "CSV_COLUMNS",
]

logger = logging.getLogger(__name__)

EXACT_ORDER_BIT_LIMIT = 64  # factoring p-1 beyond this is not desk-scale

CSV_COLUMNS = [
    "l", "n", "e_max", "c", "k_policy", "B_s", "trials", "successes",
    "failure_rate", "theoretical_bound", "mean_iterations",
    "mean_gcd_calls", "wall_time_s",
]


@dataclass(frozen=True)
class ExperimentConfig:
    """Grid definition plus the shared algorithm parameters."""

    l_values: tuple[int, ...]
    n_values: tuple[int, ...]
    emax_values: tuple[int, ...]
    c: int = 1
    k: int | None = None  # None: run to completion under the engine's cap
    B_s: int = 10**6
    trials_per_cell: int = 200
    seed: int = 0
    order_mode: str = "simulate"  # "exact" | "simulate"

    def __post_init__(self):
        if self.trials_per_cell < 1:
            raise ValueError("trials_per_cell must be >= 1")
        if self.c < 1:
            raise ValueError("c must be >= 1")
        if self.k is not None and self.k < 1:
            raise ValueError("k must be >= 1 when fixed")
        if self.B_s < 2:
            raise ValueError("B_s must be >= 2")
        if self.order_mode not in ("exact", "simulate"):
            raise ValueError("order_mode must be 'exact' or 'simulate'")

    @property
    def k_policy(self) -> str:
        return "auto" if self.k is None else str(self.k)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        extra = set(data) - known
        if extra:
            raise ValueError(f"unknown config fields: {sorted(extra)}")
        data = dict(data)
        for key in ("l_values", "n_values", "emax_values"):
            if key in data:
                data[key] = tuple(int(v) for v in data[key])
        return cls(**data)

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        for key in ("l_values", "n_values", "emax_values"):
            out[key] = list(out[key])
        return out


@dataclass(frozen=True)
class CellReport:
    """Aggregated results for one grid cell."""

    l: int
    n: int
    e_max: int
    c: int
    k_policy: str
    B_s: int
    trials: int
    complete_successes: int
    mean_iterations: float
    mean_gcd_calls: float
    empirical_failure_rate: float
    theoretical_bound: float
    unlucky_events_observed: int
    wall_time_seconds: float

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    def to_row(self) -> dict:
        return {
            "l": self.l, "n": self.n, "e_max": self.e_max, "c": self.c,
            "k_policy": self.k_policy, "B_s": self.B_s,
            "trials": self.trials, "successes": self.complete_successes,
            "failure_rate": self.empirical_failure_rate,
            "theoretical_bound": self.theoretical_bound,
            "mean_iterations": self.mean_iterations,
            "mean_gcd_calls": self.mean_gcd_calls,
            "wall_time_s": self.wall_time_seconds,
        }


def _trial_rng(seed: int, cell, trial: int) -> random.Random:
    """Private stream for one trial: SHA-256 over (seed, cell, trial)."""
    tag = "|".join(str(part) for part in (seed, *cell, trial))
    digest = hashlib.sha256(tag.encode()).digest()
    return random.Random(int.from_bytes(digest, "big"))


def _count_missed_primes(instance: Instance, r_prime: int) -> int:
    """How many instance primes p have p - 1 not dividing r'."""
    return sum(1 for p in instance.primes if r_prime % (p - 1) != 0)


def _verified(instance: Instance, factorization) -> bool:
    """Ground-truth check: pairs match the instance and multiply to N."""
    if factorization is None:
        return False
    expected = tuple(sorted(zip(instance.primes, instance.exponents)))
    return (factorization.pairs == expected
            and factorization.product() == instance.modulus)


def run_cell(l: int, n: int, e_max: int, config: ExperimentConfig,
             on_failure: Callable[[dict], object] | None = None) -> CellReport:
    """Run trials_per_cell seeded trials for one (l, n, e_max) cell.

    Each trial generates an instance, obtains an order for a random unit
    (exactly, or heuristically with bound B_s), runs the recovery engine,
    and verifies any claimed factorization against the instance ground
    truth; the engine's own completeness flag is never trusted alone.
    Failed trials are logged together with the number of instance primes
    whose p - 1 the grown exponent missed, and reported to ``on_failure``
    when given.
    """
    if config.order_mode == "exact" and l > EXACT_ORDER_BIT_LIMIT:
        raise InfeasibleParametersError(
            f"exact order finding is limited to l <= {EXACT_ORDER_BIT_LIMIT}")
    start = time.perf_counter()
    successes = 0
    sum_iterations = 0
    sum_gcd_calls = 0
    sum_bits = 0
    unlucky_events = 0
    for trial in range(config.trials_per_cell):
        rng = _trial_rng(config.seed, (l, n, e_max), trial)
        instance = generate_instance(l, n, e_max, rng)
        if config.order_mode == "exact":
            g = sample_unit(instance.modulus, rng, exclude_one=True)
            order_result = exact_order(instance, g)
        else:
            order_result = simulate_order(instance, config.B_s, rng)
        result = recover_factors(instance.modulus, order_result.order,
                                 c=config.c, k=config.k, rng=rng)
        ok = result.complete and _verified(instance, result.factorization)
        r_prime = guess_multiple(order_result.order, instance.bit_length,
                                 config.c).r_prime
        missed = _count_missed_primes(instance, r_prime)
        if missed >= 2:
            unlucky_events += 1
        if ok:
            successes += 1
        else:
            detail = {
                "l": l, "n": n, "e_max": e_max, "trial": trial,
                "instance": instance, "order": order_result,
                "missed_primes": missed, "iterations": result.iterations,
            }
            # under a fixed k a failure is the quantity being measured;
            # under run-to-complete it is an anomaly worth surfacing
            level = logging.DEBUG if config.k is not None else logging.WARNING
            logger.log(
                level,
                "trial %d failed for N=%d (primes with p-1 not dividing "
                "r': %d, iterations: %d)", trial, instance.modulus, missed,
                result.iterations)
            if on_failure is not None:
                on_failure(detail)
        sum_iterations += result.iterations
        sum_gcd_calls += result.gcd_calls
        sum_bits += instance.bit_length
    trials = config.trials_per_cell
    mean_bits = sum_bits / trials
    bound_k = config.k if config.k is not None else default_iteration_cap(
        round(mean_bits))
    bound = theoretical_failure_bound(n, mean_bits, config.c, bound_k)
    return CellReport(
        l=l, n=n, e_max=e_max, c=config.c, k_policy=config.k_policy,
        B_s=config.B_s, trials=trials, complete_successes=successes,
        mean_iterations=sum_iterations / trials,
        mean_gcd_calls=sum_gcd_calls / trials,
        empirical_failure_rate=1.0 - successes / trials,
        theoretical_bound=bound,
        unlucky_events_observed=unlucky_events,
        wall_time_seconds=time.perf_counter() - start,
    )


def run_shor_baseline_cell(l: int, trials: int, seed: int) -> CellReport:
    """Classic even-order split on random squarefree semiprimes.

    Per trial: draw two distinct l-bit primes, a uniform unit g, compute
    the exact order and attempt gcd(g^(r/2) +- 1, N). ``complete_successes``
    counts nontrivial splits; the bound column carries 1/4, the semiprime
    failure ceiling.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    start = time.perf_counter()
    successes = 0
    gcd_calls = 0
    for trial in range(trials):
        rng = _trial_rng(seed, ("shor-baseline", l), trial)
        instance = generate_instance(l, 2, 1, rng)
        g = sample_unit(instance.modulus, rng)
        order = exact_order(instance, g).order
        outcome = shor_split(instance.modulus, g, order)
        if outcome.factors is not None:
            gcd_calls += 2
            a, b = outcome.factors
            if 1 < a < instance.modulus and 1 < b < instance.modulus:
                successes += 1
    return CellReport(
        l=l, n=2, e_max=1, c=1, k_policy="1", B_s=0, trials=trials,
        complete_successes=successes,
        mean_iterations=1.0,
        mean_gcd_calls=gcd_calls / trials,
        empirical_failure_rate=1.0 - successes / trials,
        theoretical_bound=0.25,
        unlucky_events_observed=0,
        wall_time_seconds=time.perf_counter() - start,
    )


def cell_passes(report: CellReport) -> bool:
    """One-sided check: failure rate within bound plus 3-sigma binomial slack."""
    b = min(report.theoretical_bound, 1.0)
    slack = 3.0 * math.sqrt(b * (1.0 - b) / report.trials)
    return report.empirical_failure_rate <= report.theoretical_bound + slack


def run_grid(config: ExperimentConfig) -> tuple[list[CellReport], dict]:
    """Run every (l, n, e_max) combination; infeasible cells are skipped.

    Returns the cell reports in grid order plus a summary with per-cell
    bound outcomes and any skip diagnostics.
    """
    reports: list[CellReport] = []
    skipped: list[dict] = []
    for l in config.l_values:
        for n in config.n_values:
            for e_max in config.emax_values:
                try:
                    report = run_cell(l, n, e_max, config)
                except InfeasibleParametersError as exc:
                    logger.warning("skipping cell (l=%d, n=%d, e_max=%d): %s",
                                   l, n, e_max, exc)
                    skipped.append(
                        {"l": l, "n": n, "e_max": e_max, "reason": str(exc)})
                    continue
                reports.append(report)
    summary = {
        "cells": len(reports),
        "skipped": skipped,
        "all_within_bound": all(cell_passes(r) for r in reports),
    }
    return reports, summary


def write_csv(reports: Sequence[CellReport], path) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for report in reports:
            writer.writerow(report.to_row())


def write_json(reports: Sequence[CellReport], path) -> None:
    with open(path, "w") as handle:
        json.dump([report.to_dict() for report in reports], handle, indent=2)
        handle.write("\n")
