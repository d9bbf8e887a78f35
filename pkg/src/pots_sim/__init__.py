"""Monte Carlo simulator for team-sprint consensus under adversarial nodes."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source checkout
    __version__ = "0.1.0"

from .core import ConfigError, RoundResult, Scenario, execute_round
from .harness import RepetitionResult, ScenarioSummary, SimConfig, run_repetition, run_scenario, run_sweep
from .rng import RandomStream, derive_stream

__all__ = [
    "ConfigError",
    "RandomStream",
    "RepetitionResult",
    "RoundResult",
    "Scenario",
    "ScenarioSummary",
    "SimConfig",
    "derive_stream",
    "execute_round",
    "run_repetition",
    "run_scenario",
    "run_sweep",
]
