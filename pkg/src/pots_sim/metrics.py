"""Statistical reductions over simulation output."""

from __future__ import annotations

import math
from typing import Iterable, Mapping, Sequence

import numpy as np

NceTable = dict[int, float]  # team size -> T_1 / T_N


def max_consecutive_wins(outcomes: Iterable[bool]) -> int:
    best = run = 0
    for won in outcomes:
        if won:
            run += 1
            if run > best:
                best = run
        else:
            run = 0
    return best


def compute_nce(totals_by_team_size: Mapping[int, float]) -> NceTable:
    """Normalized computation efficiency ``T_1 / T_N`` for every team size present."""
    if 1 not in totals_by_team_size:
        raise KeyError("NCE needs the N=1 total as its reference")
    t1 = totals_by_team_size[1]
    return {n: (1.0 if n == 1 else t1 / total) for n, total in totals_by_team_size.items()}


def mean_and_std(values: Sequence[float]) -> tuple[float, float]:
    """Arithmetic mean and sample standard deviation (divisor ``len - 1``).

    A single value has std 0.
    """
    n = len(values)
    if n == 0:
        raise ValueError("mean_and_std of an empty sequence")
    mean = math.fsum(values) / n
    if n == 1:
        return mean, 0.0
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var)


def expected_min_uniform(count: int, low: float, high: float) -> float:
    """E[min] of ``count`` iid U(low, high) draws."""
    return low + (high - low) / (count + 1)


def nce_order_statistics_oracle(
    team_size: int,
    total_nodes: int = 1600,
    workload_seconds: float = 600.0,
    gamma_low: float = 0.8,
    gamma_high: float = 1.2,
    trials: int = 100_000,
    rng: np.random.Generator | None = None,
) -> float:
    """Predicted NCE(N) from order statistics alone.

    Total computation per round is ``M * t_round`` and ``t_round`` is the
    minimum of ``M`` team sums, so NCE(N) = n E[min_1] / (M E[min_N]).  The
    N=1 expectation is closed form; the N>1 one is estimated by sampling team
    sums directly, bypassing partitions and truncation entirely.
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    m = total_nodes // team_size
    e1 = workload_seconds * expected_min_uniform(total_nodes, gamma_low, gamma_high)
    if team_size == 1:
        return 1.0
    base = workload_seconds / team_size
    mins = np.empty(trials)
    chunk = max(1, 4_000_000 // (m * team_size))
    for i in range(0, trials, chunk):
        k = min(chunk, trials - i)
        g = rng.uniform(gamma_low, gamma_high, size=(k, m, team_size))
        mins[i : i + k] = (base * g.sum(axis=2)).min(axis=1)
    return total_nodes * e1 / (m * float(mins.mean()))
