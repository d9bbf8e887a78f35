"""Grid sweeps: scenarios x repetitions x rounds."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .core import ConfigError, Scenario, execute_round
from .metrics import compute_nce, max_consecutive_wins, mean_and_std
from .rng import DEFAULT_BASE_SEED, RandomStream, derive_stream
from .theory import predict

DEFAULT_TEAM_SIZES = (1, 2, 4, 8, 16, 32, 64)
DEFAULT_ATTACKER_RATIOS = tuple(i / 10 for i in range(11))


@dataclass
class SimConfig:
    total_nodes: int = 1600
    rounds: int = 1000
    workload_seconds: float = 600.0
    team_sizes: list[int] = field(default_factory=lambda: list(DEFAULT_TEAM_SIZES))
    attacker_ratios: list[float] = field(default_factory=lambda: list(DEFAULT_ATTACKER_RATIOS))
    repetitions: int = 100
    base_seed: int = DEFAULT_BASE_SEED
    gamma_low: float = 0.8
    gamma_high: float = 1.2

    def validate(self) -> None:
        if self.total_nodes < 1:
            raise ConfigError("total_nodes", f"must be >= 1, got {self.total_nodes}")
        if self.rounds < 1:
            raise ConfigError("rounds", f"must be >= 1, got {self.rounds}")
        if self.repetitions < 1:
            raise ConfigError("repetitions", f"must be >= 1, got {self.repetitions}")
        if not self.team_sizes:
            raise ConfigError("team_sizes", "must not be empty")
        if not self.attacker_ratios:
            raise ConfigError("attacker_ratios", "must not be empty")
        if not 0 <= self.base_seed < 1 << 64:
            raise ConfigError("base_seed", "must be an unsigned 64-bit integer")
        for n in self.team_sizes:
            if n < 1 or self.total_nodes % n:
                raise ConfigError(
                    "team_sizes",
                    f"total_nodes={self.total_nodes} is not divisible by team size {n}",
                )
        for a in self.attacker_ratios:
            if not 0.0 <= a <= 1.0:
                raise ConfigError("attacker_ratios", f"{a} is outside [0, 1]")
        if not self.workload_seconds > 0:
            raise ConfigError("workload_seconds", f"must be > 0, got {self.workload_seconds}")
        if not 0 < self.gamma_low < self.gamma_high:
            raise ConfigError("gamma_low", "need 0 < gamma_low < gamma_high")

    def scenario(self, team_size: int, attacker_ratio: float) -> Scenario:
        return Scenario(
            team_size=team_size,
            attacker_ratio=attacker_ratio,
            total_nodes=self.total_nodes,
            workload_seconds=self.workload_seconds,
            gamma_low=self.gamma_low,
            gamma_high=self.gamma_high,
        )

    def scenarios(self) -> Iterator[tuple[int, Scenario]]:
        """(ordinal, scenario) pairs, row-major over (team size, ratio) in config order."""
        ordinal = 0
        for n in self.team_sizes:
            for a in self.attacker_ratios:
                yield ordinal, self.scenario(n, a)
                ordinal += 1

    def ordinal_of(self, team_size: int, attacker_ratio: float) -> int | None:
        for ordinal, sc in self.scenarios():
            if sc.team_size == team_size and sc.attacker_ratio == attacker_ratio:
                return ordinal
        return None


@dataclass(frozen=True)
class RepetitionResult:
    attacker_wins: int
    rounds: int
    max_streak: int
    total_computation_seconds: float

    @property
    def win_rate_percent(self) -> float:
        return 100.0 * self.attacker_wins / self.rounds


@dataclass
class ScenarioSummary:
    scenario: Scenario
    win_rate_mean: float
    win_rate_std: float
    max_streak_max: int
    max_streak_mean: float
    total_computation_mean: float
    theory_win_rate_percent: float
    theory_exact_percent: float
    nce: float | None = None
    repetitions: list[RepetitionResult] = field(default_factory=list, repr=False)

    @property
    def team_size(self) -> int:
        return self.scenario.team_size

    @property
    def attacker_ratio(self) -> float:
        return self.scenario.attacker_ratio


def run_repetition(scenario: Scenario, stream: RandomStream, rounds: int) -> RepetitionResult:
    outcomes = []
    total = 0.0
    for _ in range(rounds):
        result = execute_round(scenario, stream)
        outcomes.append(result.attacker_won)
        total += result.round_computation
    return RepetitionResult(
        attacker_wins=sum(outcomes),
        rounds=rounds,
        max_streak=max_consecutive_wins(outcomes),
        total_computation_seconds=total,
    )


def summarize(scenario: Scenario, reps: Sequence[RepetitionResult]) -> ScenarioSummary:
    win_mean, win_std = mean_and_std([r.win_rate_percent for r in reps])
    streaks = [r.max_streak for r in reps]
    comp_mean, _ = mean_and_std([r.total_computation_seconds for r in reps])
    theory = predict(scenario.attacker_ratio, scenario.team_size, scenario.total_nodes)
    return ScenarioSummary(
        scenario=scenario,
        win_rate_mean=win_mean,
        win_rate_std=win_std,
        max_streak_max=max(streaks),
        max_streak_mean=sum(streaks) / len(streaks),
        total_computation_mean=comp_mean,
        theory_win_rate_percent=100.0 * theory.p_independent,
        theory_exact_percent=100.0 * theory.p_exact,
        repetitions=list(reps),
    )


def _run_tasks(tasks, threads: int) -> list[RepetitionResult]:
    def work(task):
        scenario, base_seed, ordinal, rep, rounds = task
        return run_repetition(scenario, derive_stream(base_seed, ordinal, rep), rounds)

    if threads <= 1:
        return [work(t) for t in tasks]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        # map() yields in submission order whatever the completion order
        return list(pool.map(work, tasks))


def run_scenario(
    scenario: Scenario,
    config: SimConfig,
    scenario_ordinal: int,
    threads: int = 1,
    repetition_ordinals: Sequence[int] | None = None,
) -> ScenarioSummary:
    """Summarize one grid cell over its derived repetition streams.

    ``repetition_ordinals`` selects a subset of repetitions (default: all of
    ``range(config.repetitions)``); each repetition's stream depends only on
    its ordinal, so subsets can be pooled afterwards.
    """
    config.validate()
    reps = range(config.repetitions) if repetition_ordinals is None else repetition_ordinals
    tasks = [(scenario, config.base_seed, scenario_ordinal, r, config.rounds) for r in reps]
    return summarize(scenario, _run_tasks(tasks, threads))


def attach_nce(summaries: Sequence[ScenarioSummary]) -> None:
    """Fill ``nce`` on each summary from the N=1 cell at the same ratio."""
    by_ratio: dict[float, dict[int, ScenarioSummary]] = {}
    for s in summaries:
        by_ratio.setdefault(s.attacker_ratio, {})[s.team_size] = s
    for cells in by_ratio.values():
        if 1 not in cells:
            continue
        table = compute_nce({n: s.total_computation_mean for n, s in cells.items()})
        for n, s in cells.items():
            s.nce = table[n]


def per_repetition_nce(summaries: Sequence[ScenarioSummary]) -> dict[tuple[float, int], list[float]]:
    """Diagnostic NCE per repetition ordinal, pairing rep r at N=1 with rep r at N."""
    ref = {s.attacker_ratio: s for s in summaries if s.team_size == 1}
    out = {}
    for s in summaries:
        base = ref.get(s.attacker_ratio)
        if base is None:
            continue
        out[(s.attacker_ratio, s.team_size)] = [
            b.total_computation_seconds / r.total_computation_seconds
            for b, r in zip(base.repetitions, s.repetitions)
        ]
    return out


def run_sweep(config: SimConfig, threads: int = 1) -> list[ScenarioSummary]:
    config.validate()
    cells = list(config.scenarios())
    tasks = [
        (sc, config.base_seed, ordinal, r, config.rounds)
        for ordinal, sc in cells
        for r in range(config.repetitions)
    ]
    results = _run_tasks(tasks, threads)
    k = config.repetitions
    summaries = [summarize(sc, results[i * k : (i + 1) * k]) for i, (_, sc) in enumerate(cells)]
    attach_nce(summaries)
    return summaries
