"""Config ingestion and result emission (CSV, JSON, SVG, theory comparison)."""

from __future__ import annotations

import csv
import json
import logging
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Sequence

import yaml

from .core import ConfigError
from .harness import ScenarioSummary, SimConfig, per_repetition_nce
from .rng import generator_identity

log = logging.getLogger(__name__)

CSV_COLUMNS = (
    "team_size",
    "attacker_ratio",
    "win_rate_mean_pct",
    "win_rate_std_pct",
    "theory_alpha_pow_n_pct",
    "theory_exact_pct",
    "max_streak_max",
    "max_streak_mean",
    "total_computation_mean_s",
    "nce",
)
_INT_COLUMNS = {"team_size", "max_streak_max"}

Z_THRESHOLD = 4.0


class ConfigParseError(ValueError):
    """The config file is not a valid YAML mapping."""


def load_config(path) -> SimConfig:
    """Read a YAML mapping of SimConfig fields; absent keys keep their defaults.

    Raises FileNotFoundError for a missing file, ConfigParseError for
    malformed content and ConfigError (naming the key) for invalid values.
    """
    text = Path(path).read_text()
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigParseError(f"{path}: {exc}") from exc
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigParseError(f"{path}: top level must be a mapping, got {type(data).__name__}")
    return config_from_mapping(data)


def config_from_mapping(data: dict) -> SimConfig:
    known = {f.name: f for f in fields(SimConfig)}
    kwargs = {}
    for key, value in data.items():
        if key not in known:
            raise ConfigError(key, "unknown key")
        kwargs[key] = _coerce(key, value)
    config = SimConfig(**kwargs)
    config.validate()
    return config


def _coerce(key: str, value):
    try:
        if key in ("team_sizes",):
            if not isinstance(value, list):
                raise TypeError("expected a list")
            return [_as_int(v) for v in value]
        if key == "attacker_ratios":
            if not isinstance(value, list):
                raise TypeError("expected a list")
            return [_as_float(v) for v in value]
        if key in ("total_nodes", "rounds", "repetitions", "base_seed"):
            return _as_int(value)
        return _as_float(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(key, str(exc)) from None


def _as_int(v) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise TypeError(f"expected an integer, got {v!r}")
    return v


def _as_float(v) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise TypeError(f"expected a number, got {v!r}")
    return float(v)


def format_percent(value: float) -> str:
    """Table-style rendering; magnitudes under 1e-4 % go to scientific notation."""
    if value == 0:
        return "0.0"
    if abs(value) < 1e-4:
        return f"{value:.1e}"
    return f"{value:.4g}"


def summary_row(s: ScenarioSummary) -> dict:
    return {
        "team_size": s.team_size,
        "attacker_ratio": s.attacker_ratio,
        "win_rate_mean_pct": s.win_rate_mean,
        "win_rate_std_pct": s.win_rate_std,
        "theory_alpha_pow_n_pct": s.theory_win_rate_percent,
        "theory_exact_pct": s.theory_exact_percent,
        "max_streak_max": s.max_streak_max,
        "max_streak_mean": s.max_streak_mean,
        "total_computation_mean_s": s.total_computation_mean,
        "nce": s.nce,
    }


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)  # shortest string that round-trips
    return str(value)


def emit_csv(summaries: Sequence[ScenarioSummary], path) -> None:
    if not summaries:
        raise ValueError("no summaries to write")
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, delimiter=",", lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for s in summaries:
            row = summary_row(s)
            writer.writerow([_fmt(row[c]) for c in CSV_COLUMNS])


def read_csv(path) -> list[dict]:
    rows = []
    with Path(path).open(newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        for raw in reader:
            row = {}
            for key, text in raw.items():
                if text == "":
                    row[key] = None
                elif key in _INT_COLUMNS:
                    row[key] = int(text)
                else:
                    row[key] = float(text)
            rows.append(row)
    return rows


def emit_json(summaries: Sequence[ScenarioSummary], path, config: SimConfig | None = None) -> None:
    diag = per_repetition_nce(summaries)
    doc = {
        "config": asdict(config) if config is not None else None,
        "columns": list(CSV_COLUMNS),
        "rows": [],
    }
    for s in summaries:
        row = summary_row(s)
        row["repetitions"] = [
            {
                "attacker_wins": r.attacker_wins,
                "win_rate_percent": r.win_rate_percent,
                "max_streak": r.max_streak,
                "total_computation_seconds": r.total_computation_seconds,
            }
            for r in s.repetitions
        ]
        row["nce_per_repetition"] = diag.get((s.attacker_ratio, s.team_size))
        doc["rows"].append(row)
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


@dataclass
class RunManifest:
    config: dict
    base_seed: int
    generator: str
    code_version: str
    started: str
    finished: str = ""
    outputs: dict[str, str] = field(default_factory=dict)

    def write(self, path) -> None:
        Path(path).write_text(json.dumps(asdict(self), indent=1) + "\n")

    @classmethod
    def read(cls, path) -> "RunManifest":
        return cls(**json.loads(Path(path).read_text()))

    def sim_config(self) -> SimConfig:
        return config_from_mapping(self.config)


def new_manifest(config: SimConfig, started: str) -> RunManifest:
    from . import __version__

    return RunManifest(
        config=asdict(config),
        base_seed=config.base_seed,
        generator=generator_identity(),
        code_version=__version__,
        started=started,
    )


# -- theory comparison -------------------------------------------------------


@dataclass(frozen=True)
class Comparison:
    team_size: int
    attacker_ratio: float
    win_rate_mean: float
    theory_exact: float
    z: float | None
    flagged: bool
    note: str = ""


def compare_to_theory(rows, repetitions: int, rounds: int) -> list[Comparison]:
    """z-score of each cell's mean win rate against the exact probability.

    The standard error is ``std / sqrt(repetitions)``.  When every repetition
    agreed (std 0) the binomial standard error of the exact probability is
    used instead; if that is also 0 the mean must match exactly.
    """
    out = []
    for r in rows:
        r = summary_row(r) if isinstance(r, ScenarioSummary) else r
        mean, std, exact = r["win_rate_mean_pct"], r["win_rate_std_pct"], r["theory_exact_pct"]
        note = ""
        se = std / math.sqrt(repetitions)
        if se == 0:
            p = exact / 100.0
            se = 100.0 * math.sqrt(p * (1 - p) / (rounds * repetitions))
            note = "binomial se"
        if se == 0:
            z = None
            flagged = mean != exact
            note = "exact match required"
        else:
            z = (mean - exact) / se
            flagged = abs(z) > Z_THRESHOLD
        out.append(
            Comparison(r["team_size"], r["attacker_ratio"], mean, exact, z, flagged, note)
        )
    return out


def format_comparison(report: Sequence[Comparison]) -> str:
    lines = [f"{'N':>4} {'alpha':>5} {'sim %':>10} {'exact %':>10} {'z':>7}  flag"]
    for c in report:
        z = "-" if c.z is None else f"{c.z:+.2f}"
        lines.append(
            f"{c.team_size:>4} {c.attacker_ratio:>5.2f} {format_percent(c.win_rate_mean):>10} "
            f"{format_percent(c.theory_exact):>10} {z:>7}  {'FLAG' if c.flagged else ''}"
        )
    return "\n".join(lines)


# -- plots -------------------------------------------------------------------


def _series(summaries, ratio, attr):
    cells = sorted((s for s in summaries if s.attacker_ratio == ratio), key=lambda s: s.team_size)
    return [s.team_size for s in cells], [getattr(s, attr) for s in cells]


def emit_plots(
    summaries: Sequence[ScenarioSummary],
    out_dir,
    log_scale: bool = False,
    nce_ratio: float = 0.5,
) -> tuple[list[Path], list[str]]:
    """Write win-rate, NCE and max-streak plots as SVG.

    Returns (written files, warnings).  A plot is skipped with a warning when
    it would have fewer than two team sizes.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plt.rcParams["svg.hashsalt"] = "pots-sim"
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written, warnings = [], []
    ratios = sorted({s.attacker_ratio for s in summaries})

    def save(fig, name):
        path = out_dir / name
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
        written.append(path)

    # win rate; the alpha=0 and alpha=1 lines are trivial and left out
    win_ratios = [a for a in ratios if 0.0 < a < 1.0]
    lines = [(a, *_series(summaries, a, "win_rate_mean")) for a in win_ratios]
    lines = [ln for ln in lines if len(ln[1]) >= 2]
    if lines:
        fig, ax = plt.subplots(figsize=(7, 4.5))
        for a, xs, ys in lines:
            ax.plot(xs, ys, marker="o", label=f"alpha={a:.1f}")
        ax.set_xscale("log", base=2)
        if log_scale:
            ax.set_yscale("symlog", linthresh=1e-2)
        ax.set_xlabel("team size N")
        ax.set_ylabel("attacker win rate (%)")
        ax.legend(fontsize="small")
        save(fig, "win_rate_vs_team_size.svg")
    else:
        warnings.append("win-rate plot skipped: need a ratio in (0, 1) with >= 2 team sizes")

    nce_ratio_used = nce_ratio if nce_ratio in ratios else (ratios[0] if len(ratios) == 1 else None)
    xs, ys = _series(summaries, nce_ratio_used, "nce") if nce_ratio_used is not None else ([], [])
    pts = [(x, y) for x, y in zip(xs, ys) if y is not None]
    if len(pts) >= 2:
        fig, ax = plt.subplots(figsize=(7, 4.5))
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label="NCE")
        ax.plot([p[0] for p in pts], [p[0] for p in pts], ls="--", color="grey", label="N (ideal)")
        ax.set_xscale("log", base=2)
        ax.set_yscale("log", base=2)
        ax.set_xlabel("team size N")
        ax.set_ylabel(f"NCE = T_1 / T_N (alpha={nce_ratio_used:.1f})")
        ax.legend(fontsize="small")
        save(fig, "nce_vs_team_size.svg")
    else:
        warnings.append("NCE plot skipped: need N=1 and >= 2 team sizes at the NCE ratio")

    streak = [(a, *_series(summaries, a, "max_streak_max"), _series(summaries, a, "max_streak_mean")[1])
              for a in ratios if 0.0 < a < 1.0]
    streak = [ln for ln in streak if len(ln[1]) >= 2]
    if streak:
        fig, ax = plt.subplots(figsize=(7, 4.5))
        for a, xs, ys_max, ys_mean in streak:
            (line,) = ax.plot(xs, ys_max, marker="o", label=f"alpha={a:.1f} max")
            ax.plot(xs, ys_mean, ls=":", color=line.get_color(), label=f"alpha={a:.1f} mean")
        ax.set_xscale("log", base=2)
        ax.set_xlabel("team size N")
        ax.set_ylabel("max consecutive attacker wins")
        ax.legend(fontsize="x-small", ncol=2)
        save(fig, "max_streak_vs_team_size.svg")
    else:
        warnings.append("streak plot skipped: need a ratio in (0, 1) with >= 2 team sizes")

    for w in warnings:
        log.warning(w)
    return written, warnings
