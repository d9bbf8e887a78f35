"""Closed-form and brute-force references for attacker success."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import round_half_away
from .rng import RandomStream

STREAK_QUANTILE_LEVELS = (0.005, 0.025, 0.25, 0.5, 0.75, 0.975, 0.995)


def attack_probability_independent(alpha: float, team_size: int) -> float:
    """alpha ** N: every member of a team drawn with replacement is hostile."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    if team_size < 1:
        raise ValueError(f"team_size must be >= 1, got {team_size}")
    return alpha**team_size


def attack_probability_exact(total_nodes: int, attacker_count: int, team_size: int) -> float:
    """Probability a team drawn without replacement is all-attacker.

    prod_{i<N} (A - i) / (n - i); zero when A < N.
    """
    if not 0 <= attacker_count <= total_nodes:
        raise ValueError(f"need 0 <= A <= n, got A={attacker_count}, n={total_nodes}")
    if not 1 <= team_size <= total_nodes:
        raise ValueError(f"need 1 <= N <= n, got N={team_size}, n={total_nodes}")
    if attacker_count < team_size:
        return 0.0
    p = 1.0
    for i in range(team_size):
        p *= (attacker_count - i) / (total_nodes - i)
    return p


@dataclass(frozen=True)
class TheoryPrediction:
    alpha: float
    team_size: int
    p_independent: float
    p_exact: float

    @property
    def expected_win_rate_percent(self) -> float:
        return 100.0 * self.p_exact


def predict(alpha: float, team_size: int, total_nodes: int = 1600) -> TheoryPrediction:
    attackers = round_half_away(alpha * total_nodes)
    return TheoryPrediction(
        alpha,
        team_size,
        attack_probability_independent(alpha, team_size),
        attack_probability_exact(total_nodes, attackers, team_size),
    )


def longest_runs(wins: np.ndarray) -> np.ndarray:
    """Longest run of True along the last axis of a 2-D boolean array."""
    wins = np.asarray(wins, dtype=bool)
    best = np.zeros(wins.shape[0], dtype=np.int64)
    run = np.zeros(wins.shape[0], dtype=np.int64)
    for col in wins.T:
        run = np.where(col, run + 1, 0)
        np.maximum(best, run, out=best)
    return best


def streak_quantiles_oracle(
    p: float,
    rounds: int,
    trials: int,
    stream: RandomStream,
    levels=STREAK_QUANTILE_LEVELS,
) -> dict[float, float]:
    """Quantiles of the longest success run in ``rounds`` Bernoulli(p) trials.

    Pure simulation: draws ``trials`` independent sequences and measures
    each one's longest run.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    runs = np.empty(trials, dtype=np.int64)
    chunk = max(1, 2_000_000 // rounds)
    for i in range(0, trials, chunk):
        k = min(chunk, trials - i)
        runs[i : i + k] = longest_runs(stream.generator.random((k, rounds)) < p)
    qs = np.quantile(runs, levels, method="inverted_cdf")
    return {float(lv): float(q) for lv, q in zip(levels, qs)}
