"""Command line entry point: ``wignerlab <subcommand> [options]``.

Settings resolve in increasing priority: built-in defaults, a flat
``key = value`` config file (``--config``), ``WIGNERLAB_<KEY>`` environment
variables, explicit flags.

Exit codes: 0 success, 1 identity or inequality failure, 2 I/O or config error.
"""

import argparse
import csv
import logging
import os
import sys

import numpy as np

from . import semicircle
from .ensemble import EntryLaw, check_symmetric, WignerSpec, assemble, dump_matrix, load_matrix, sample_entries
from .harness import (ExperimentConfig, emit, emit_stieltjes, fit_exponent, max_threads,
                      run_rate_sweep, run_stieltjes_sweep)
from .region import RegionSpec, calibrate_constants, smoothing_bound
from .resolvent import identity_report, load_z_grid
from .spectral import Spectrum, dump_spectrum, kolmogorov_distance, load_spectrum
from .suites import IDENTITY_NAMES, identity_suite, inequality_suite

EXIT_OK, EXIT_IDENTITY, EXIT_IO = 0, 1, 2
ENV_PREFIX = "WIGNERLAB_"
IDENTITY_TOL = 1e-9

DEFAULTS = {
    "n_list": "128,256,512,1024",
    "replicates": None,
    "ensemble": "gaussian",
    "seed": 20240601,
    "a0": 1.0,
    "c1": 1.0,
    "c2": 1.0,
    "out": None,
    "format": "csv",
    "threads": 1,
}
CASTS = {"seed": int, "a0": float, "c1": float, "c2": float, "threads": int}


class ConfigError(ValueError):
    pass


def read_config(path):
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for num, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().lower().replace("-", "_")
        if not sep or key not in DEFAULTS:
            raise ConfigError(f"{path}:{num}: expected one of {sorted(DEFAULTS)} as key = value")
        out[key] = value.strip()
    return out


def resolve_settings(args, environ=None):
    environ = os.environ if environ is None else environ
    merged = dict(DEFAULTS)
    if getattr(args, "config", None):
        merged.update(read_config(args.config))
    for key in DEFAULTS:
        env = environ.get(ENV_PREFIX + key.upper())
        if env is not None:
            merged[key] = env
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    try:
        for key, cast in CASTS.items():
            merged[key] = cast(merged[key])
        if merged["threads"] == 0:
            merged["threads"] = max_threads()
        if isinstance(merged["n_list"], str):
            merged["n_list"] = tuple(int(x) for x in merged["n_list"].split(",") if x.strip())
        if isinstance(merged["replicates"], str):
            parts = [int(x) for x in merged["replicates"].split(",") if x.strip()]
            merged["replicates"] = parts[0] if len(parts) == 1 else tuple(parts)
        merged["law"] = EntryLaw.parse(merged["ensemble"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return merged


def experiment_config(settings):
    try:
        return ExperimentConfig(
            n_list=settings["n_list"],
            replicates=settings["replicates"],
            ensemble=WignerSpec(n=1, law=settings["law"]),
            A0=settings["a0"],
            seed=settings["seed"],
            output=settings["out"],
            format=settings["format"],
            threads=settings["threads"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


# ---------------------------------------------------------------------------
# subcommands

def cmd_sample(args, st):
    n = st["n_list"][0] if args.n is None else args.n
    spec = WignerSpec(n=n, law=st["law"], seed=st["seed"], D0=args.d0, apply_pipeline=args.pipeline)
    X = sample_entries(spec)
    S = Spectrum(np.linalg.eigvalsh(assemble(X)))
    if st["out"]:
        dump_matrix(X, st["out"])
    if args.spectrum_out:
        dump_spectrum(S, args.spectrum_out)
    print(f"n={n} law={st['law'].tag} seed={st['seed']} pipeline={args.pipeline}")
    print(f"lambda_min={float(S.lambdas[0])!r} lambda_max={float(S.lambdas[-1])!r}")
    print(f"kolmogorov_distance={kolmogorov_distance(S.esd())!r}")
    return EXIT_OK


def cmd_verify(args, st):
    if args.matrix:
        X = check_symmetric(load_matrix(args.matrix))
        report = identity_report(assemble(X), load_z_grid(), source=args.matrix)
    else:
        ns = tuple(int(x) for x in args.identity_n.split(","))
        report = identity_suite(ns, seeds=args.seeds, master_seed=st["seed"])
    sys.stdout.write(report.to_text())
    worst = report.max_residual(IDENTITY_NAMES)
    ok = worst <= IDENTITY_TOL
    print(f"identities: max relative residual {worst:.3e} ({'ok' if ok else 'FAIL'})")
    if args.spectrum:
        S = load_spectrum(args.spectrum)
        print(f"kolmogorov_distance={kolmogorov_distance(S.esd())!r}")
    if args.inequalities:
        battery = inequality_suite(draws=args.inequalities, master_seed=st["seed"])
        for name in sorted(battery.worst):
            print(f"{name}\tviolations={battery.violations[name]}\tworst_excess={battery.worst[name][0]:.3e}")
        ok = ok and not battery.failed
    return EXIT_OK if ok else EXIT_IDENTITY


def cmd_sweep_rate(args, st):
    cfg = experiment_config(st)
    records = run_rate_sweep(cfg)
    if cfg.output:
        emit(records, cfg.format, cfg.output)
    for r in records:
        print(f"n={r.n} replicates={r.replicates} delta_n={r.delta_n:.6g} "
              f"n_times_delta={r.n_times_delta:.4f} bootstrap_se={r.bootstrap_se:.3g}")
    if len(records) >= 3:
        slope, _, r2 = fit_exponent(records)
        print(f"slope={slope:.4f} r2={r2:.4f}")
    return EXIT_OK


def cmd_sweep_stieltjes(args, st):
    cfg = experiment_config(st)
    region = RegionSpec(n=cfg.n_list[0], A0=cfg.A0, u_count=args.u_count, v_count=args.v_count)
    sweep = run_stieltjes_sweep(cfg, region)
    if cfg.output:
        emit_stieltjes(sweep, cfg.output)
    for n, recs in sweep.items():
        worst = max(recs, key=lambda r: r.envelope_ratio)
        print(f"n={n} max_envelope_ratio={worst.envelope_ratio:.4f} at u={worst.u:.4f} v={worst.v:.4g}")
    return EXIT_OK


def _shift_distance(shift, points=200001):
    x = np.linspace(-2.5 - abs(shift), 2.5 + abs(shift), points)
    return float(np.max(np.abs(semicircle.cdf(x - shift) - semicircle.cdf(x))))


def cmd_bound(args, st):
    if args.spectrum:
        S = load_spectrum(args.spectrum)
        F = S.esd()
        S_F, delta = F.stieltjes, kolmogorov_distance(F)
        n = args.n or S.n
    else:
        S_F = semicircle.shifted(semicircle.stieltjes, args.shift)
        delta = _shift_distance(args.shift)
        n = args.n or 1000
    params = semicircle.smoothing_params(n, st["a0"])
    bd = smoothing_bound(S_F, params, C1=st["c1"], C2=st["c2"], V=args.v)
    for key, val in bd.as_dict().items():
        print(f"{key} = {val!r}")
    print(f"delta_direct = {delta!r}")
    if args.calibrate:
        print(f"calibrated_C = {calibrate_constants(bd, params, delta)!r}")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "integral_vertical", "integral_top", "term_c1v0", "term_c2eps"])
            for x, val in bd.profile:
                w.writerow([repr(x), repr(val), repr(bd.integral_top), repr(bd.term_c1v0),
                            repr(bd.term_c2eps)])
    return EXIT_OK


COMMANDS = {
    "sample": cmd_sample,
    "verify": cmd_verify,
    "sweep-rate": cmd_sweep_rate,
    "sweep-stieltjes": cmd_sweep_stieltjes,
    "bound": cmd_bound,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value settings file")
    common.add_argument("--n-list", dest="n_list")
    common.add_argument("--replicates", help="count, or comma list aligned with --n-list")
    common.add_argument("--ensemble", help="gaussian | rademacher | uniform-scaled | custom-discrete:v@p,...")
    common.add_argument("--seed", type=int)
    common.add_argument("--a0", type=float)
    common.add_argument("--c1", type=float)
    common.add_argument("--c2", type=float)
    common.add_argument("--out")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--threads", type=int, help="worker threads; 0 means all cores")
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="wignerlab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", parents=[common], help="draw one matrix and summarize its spectrum")
    p.add_argument("--n", type=int)
    p.add_argument("--pipeline", action="store_true", help="apply truncation and standardization")
    p.add_argument("--d0", type=float, default=2.0)
    p.add_argument("--spectrum-out")

    p = sub.add_parser("verify", parents=[common], help="resolvent identity and inequality suites")
    p.add_argument("--matrix", help="check a single matrix file instead of random draws")
    p.add_argument("--spectrum", help="also report the Kolmogorov distance of a spectrum file")
    p.add_argument("--identity-n", default="4,8,16,32")
    p.add_argument("--seeds", type=int, default=100)
    p.add_argument("--inequalities", type=int, default=0, metavar="DRAWS")

    sub.add_parser("sweep-rate", parents=[common], help="Kolmogorov rate sweep over n")

    p = sub.add_parser("sweep-stieltjes", parents=[common], help="Stieltjes envelope sweep over the region")
    p.add_argument("--u-count", type=int, default=33)
    p.add_argument("--v-count", type=int, default=12)

    p = sub.add_parser("bound", parents=[common], help="evaluate the smoothing bound")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--shift", type=float, default=0.05)
    src.add_argument("--spectrum")
    p.add_argument("--n", type=int, help="dimension setting v0 = a0 / n")
    p.add_argument("--v", type=float, default=4.0, help="height of the top segment")
    p.add_argument("--csv", help="write the vertical-term profile over x")
    p.add_argument("--calibrate", action="store_true")
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(levelname)s %(message)s")
    try:
        settings = resolve_settings(args)
        return COMMANDS[args.command](args, settings)
    except (ConfigError, OSError) as exc:
        print(f"wignerlab: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"wignerlab: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
