"""Run a sweep under several thread counts and compare the CSV bytes.

    python scripts/check_determinism.py --out-dir /tmp/det            # paper defaults
    python scripts/check_determinism.py --repetitions 5 --rounds 50   # quick
"""

import argparse
import hashlib
import time
from pathlib import Path

from pots_sim.harness import SimConfig, run_sweep
from pots_sim.report import emit_csv


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out-dir", default="determinism")
    ap.add_argument("--threads", type=int, nargs="+", default=[1, 4, 16])
    ap.add_argument("--repetitions", type=int)
    ap.add_argument("--rounds", type=int)
    args = ap.parse_args()

    config = SimConfig()
    if args.repetitions:
        config.repetitions = args.repetitions
    if args.rounds:
        config.rounds = args.rounds
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    digests = {}
    for t in args.threads:
        t0 = time.perf_counter()
        path = out / f"results_threads{t}.csv"
        emit_csv(run_sweep(config, threads=t), path)
        digests[t] = hashlib.sha256(path.read_bytes()).hexdigest()
        print(f"threads={t:>2}  {time.perf_counter() - t0:7.1f} s  sha256={digests[t]}", flush=True)
    same = len(set(digests.values())) == 1
    print("IDENTICAL" if same else "MISMATCH")
    raise SystemExit(0 if same else 1)


if __name__ == "__main__":
    main()
