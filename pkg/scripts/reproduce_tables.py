"""Print the alpha = 0.2 / 0.5 / 0.8 comparison tables next to the published numbers.

    python scripts/reproduce_tables.py                  # 30 reps x 1000 rounds
    python scripts/reproduce_tables.py --repetitions 100
"""

import argparse
import time

from pots_sim.harness import SimConfig, run_sweep
from pots_sim.report import format_percent

# (mean, std, theory) as published, keyed by (alpha, N)
PUBLISHED = {
    (0.2, 1): (20.32, 5.87, "20.0"), (0.2, 2): (3.87, 1.04, "4.0"), (0.2, 4): (0.17, 0.13, "0.16"),
    (0.2, 8): (0.001, 0.01, "0.0003"), (0.2, 16): (0.0, 0.0, "1e-9"), (0.2, 32): (0.0, 0.0, "1e-21"),
    (0.2, 64): (0.0, 0.0, "1e-43"),
    (0.5, 1): (50.70, 5.89, "50.0"), (0.5, 2): (24.99, 2.83, "25.0"), (0.5, 4): (6.22, 1.04, "6.25"),
    (0.5, 8): (0.40, 0.21, "0.39"), (0.5, 16): (0.0, 0.0, "1.5e-3"), (0.5, 32): (0.0, 0.0, "2.3e-8"),
    (0.5, 64): (0.0, 0.0, "5.4e-18"),
    (0.8, 1): (80.47, 5.34, "80.0"), (0.8, 2): (64.06, 3.88, "64.0"), (0.8, 4): (40.93, 3.39, "40.96"),
    (0.8, 8): (17.04, 1.70, "16.78"), (0.8, 16): (2.79, 0.61, "2.81"), (0.8, 32): (0.07, 0.08, "0.079"),
    (0.8, 64): (0.0, 0.0, "6.3e-5"),
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repetitions", type=int, default=30)
    ap.add_argument("--rounds", type=int, default=1000)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--seed", type=int)
    args = ap.parse_args()

    config = SimConfig(rounds=args.rounds, repetitions=args.repetitions, attacker_ratios=[0.2, 0.5, 0.8])
    if args.seed is not None:
        config.base_seed = args.seed
    t0 = time.perf_counter()
    summaries = run_sweep(config, threads=args.threads)
    print(f"# {config.repetitions} reps x {config.rounds} rounds, seed {config.base_seed}, "
          f"{time.perf_counter() - t0:.0f} s\n")

    for alpha in config.attacker_ratios:
        print(f"alpha = {alpha}")
        print(f"{'N':>4} | {'mean':>8} {'std':>6} {'a^N %':>9} {'exact %':>9} | {'pub mean':>8} {'pub std':>7} {'pub th':>7}")
        for s in (s for s in summaries if s.attacker_ratio == alpha):
            pm, ps, pt = PUBLISHED[(alpha, s.team_size)]
            print(f"{s.team_size:>4} | {s.win_rate_mean:8.3f} {s.win_rate_std:6.2f} "
                  f"{format_percent(s.theory_win_rate_percent):>9} {format_percent(s.theory_exact_percent):>9} | "
                  f"{pm:8.3f} {ps:7.2f} {pt:>7}")
        print()

    print("NCE at alpha=0.5: " + ", ".join(
        f"N={s.team_size}: {s.nce:.2f}" for s in summaries if s.attacker_ratio == 0.5))


if __name__ == "__main__":
    main()
