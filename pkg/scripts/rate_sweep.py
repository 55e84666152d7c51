"""Kolmogorov-rate and envelope sweep at desk scale.

    python3 scripts/rate_sweep.py --ensemble gaussian --out results/gaussian.csv
"""

import argparse
import logging
import time

from wignerlab.ensemble import EntryLaw, WignerSpec
from wignerlab.harness import (ExperimentConfig, emit, emit_stieltjes, fit_exponent,
                               run_rate_sweep, run_stieltjes_sweep)
from wignerlab.region import RegionSpec


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--ensemble", default="gaussian")
    ap.add_argument("--n-list", default="128,256,512,1024")
    ap.add_argument("--replicates", type=int, default=None)
    ap.add_argument("--seed", type=int, default=20240601)
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out", default=None)
    ap.add_argument("--stieltjes-out", default=None)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    cfg = ExperimentConfig(
        n_list=tuple(int(x) for x in args.n_list.split(",")),
        replicates=args.replicates,
        ensemble=WignerSpec(n=1, law=EntryLaw.parse(args.ensemble)),
        seed=args.seed,
        threads=args.threads,
    )
    cache = {}
    t0 = time.perf_counter()
    records = run_rate_sweep(cfg, spectra_cache=cache)
    for r in records:
        print(f"n={r.n:5d} R={r.replicates:5d} delta={r.delta_n:.5g} "
              f"n*delta={r.n_times_delta:.4f} se={r.bootstrap_se:.2g} delta*={r.delta_star_mean:.4g}")
    slope, icpt, r2 = fit_exponent(records)
    nd = [r.n_times_delta for r in records]
    print(f"slope={slope:.4f} r2={r2:.4f} max/min n*delta={max(nd) / min(nd):.3f}")
    if args.out:
        emit(records, "json" if args.out.endswith(".json") else "csv", args.out)

    sweep = run_stieltjes_sweep(cfg, RegionSpec(n=cfg.n_list[0], A0=cfg.A0), spectra_cache=cache)
    for n, recs in sweep.items():
        worst = max(recs, key=lambda r: r.envelope_ratio)
        print(f"n={n:5d} max envelope ratio={worst.envelope_ratio:.4f} at z={worst.u:.4f}+{worst.v:.3g}i")
    if args.stieltjes_out:
        emit_stieltjes(sweep, args.stieltjes_out)
    print(f"total {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
