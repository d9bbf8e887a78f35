"""One consensus round of team-sprint block generation.

Nodes are shuffled into ``M = n / N`` teams, each node draws an execution
time ``T_base * gamma`` and teams work through their members sequentially.
The fastest team fixes the round time; every other team is cut off at that
instant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .rng import RandomStream, next_uniform


class ConfigError(ValueError):
    """Invalid scenario or experiment configuration."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


def round_half_away(x: float) -> int:
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


@dataclass(frozen=True)
class Scenario:
    team_size: int
    attacker_ratio: float
    total_nodes: int = 1600
    workload_seconds: float = 600.0
    gamma_low: float = 0.8
    gamma_high: float = 1.2

    def __post_init__(self):
        if self.team_size < 1:
            raise ConfigError("team_size", f"must be >= 1, got {self.team_size}")
        if self.total_nodes < 1:
            raise ConfigError("total_nodes", f"must be >= 1, got {self.total_nodes}")
        if self.total_nodes % self.team_size:
            raise ConfigError(
                "team_sizes",
                f"total_nodes={self.total_nodes} is not divisible by team size {self.team_size}",
            )
        if not 0.0 <= self.attacker_ratio <= 1.0:
            raise ConfigError("attacker_ratios", f"{self.attacker_ratio} is outside [0, 1]")
        if not self.workload_seconds > 0:
            raise ConfigError("workload_seconds", f"must be > 0, got {self.workload_seconds}")
        if not 0 < self.gamma_low < self.gamma_high:
            raise ConfigError(
                "gamma_low",
                f"need 0 < gamma_low < gamma_high, got {self.gamma_low}, {self.gamma_high}",
            )

    @property
    def attacker_count(self) -> int:
        return round_half_away(self.attacker_ratio * self.total_nodes)

    @property
    def team_count(self) -> int:
        return self.total_nodes // self.team_size

    @property
    def base_time(self) -> float:
        return self.workload_seconds / self.team_size

    @cached_property
    def attacker_flags(self) -> np.ndarray:
        # fixed identities 0..A-1; the per-round shuffle spreads them over teams
        flags = np.zeros(self.total_nodes, dtype=bool)
        flags[: self.attacker_count] = True
        flags.flags.writeable = False
        return flags


@dataclass
class TeamAssignment:
    teams: np.ndarray  # (M, N) node indices
    is_attacker: np.ndarray  # (n,) bool


@dataclass(frozen=True)
class RoundResult:
    t_round: float
    winner_index: int
    attacker_won: bool
    round_computation: float


def partition_into_teams(scenario: Scenario, rng: RandomStream) -> TeamAssignment:
    perm = rng.generator.permutation(scenario.total_nodes)
    return TeamAssignment(
        teams=perm.reshape(scenario.team_count, scenario.team_size),
        is_attacker=scenario.attacker_flags,
    )


def sample_node_time(
    base_time: float,
    rng: RandomStream,
    gamma_low: float = 0.8,
    gamma_high: float = 1.2,
    size=None,
):
    """Execution time ``base_time * gamma`` with gamma ~ U[gamma_low, gamma_high).

    Pass ``size`` to draw a whole array at once (one value per node, in node
    index order).
    """
    if not base_time > 0:
        raise ValueError(f"base_time must be > 0, got {base_time}")
    return base_time * next_uniform(rng, gamma_low, gamma_high, size)


def team_total_time(node_times) -> float:
    total = 0.0
    for t in node_times:
        total += float(t)
    return total


def truncate_team(node_times, t_round):
    """Executed time per member when all teams stop at ``t_round``.

    Members run one after another.  A member whose start time is at or past
    ``t_round`` never starts (0); otherwise it runs until it finishes or the
    round ends.  Works on a single team (1-D) or a stack of teams along the
    last axis, with ``t_round`` broadcast across teams.
    """
    d = np.asarray(node_times, dtype=float)
    cum = np.cumsum(d, axis=-1)
    # running prefix (not cum - d) so start times match a sequential walk
    start = np.zeros_like(d)
    start[..., 1:] = cum[..., :-1]
    t = np.asarray(t_round, dtype=float)
    if t.ndim:
        t = t[..., None]
    return np.where(start >= t, 0.0, np.minimum(d, t - start))


def _sequential_sum(values: np.ndarray) -> float:
    # np.sum uses pairwise summation; cumsum walks strictly left to right
    return float(np.cumsum(values, axis=None)[-1])


def execute_round(scenario: Scenario, rng: RandomStream, check: bool = False) -> RoundResult:
    assignment = partition_into_teams(scenario, rng)
    times = sample_node_time(
        scenario.base_time, rng, scenario.gamma_low, scenario.gamma_high,
        size=scenario.total_nodes,
    )
    team_times = times[assignment.teams]
    totals = np.cumsum(team_times, axis=1)[:, -1]
    winner = int(np.argmin(totals))  # first minimum => lowest team index on ties
    t_round = float(totals[winner])
    attacker_won = bool(assignment.is_attacker[assignment.teams[winner]].all())
    executed = truncate_team(team_times, t_round)
    round_computation = _sequential_sum(executed)
    if check:
        expected = scenario.team_count * t_round
        if abs(round_computation - expected) > 1e-6 * expected:
            raise AssertionError(
                f"round computation {round_computation} != M * t_round = {expected}"
            )
    return RoundResult(t_round, winner, attacker_won, round_computation)
