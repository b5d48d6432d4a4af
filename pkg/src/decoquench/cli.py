"""Command-line entry point.

Subcommands: theory, evolve, sweep, goe-check.  Exit codes: 0 success,
2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .config import apply_overrides, load_config
from .errors import ConfigError, DiagonalizationError
from .harness import run_evolve, run_sweep, run_theory
from .sampling import GOE_CONVENTIONS, sample_goe

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _add_override_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file (defaults apply when omitted)")
    parser.add_argument("--seed", type=int, help="override model.seed")
    parser.add_argument("--epsilon", type=float, help="override model.epsilon")
    parser.add_argument("--env-dim", type=int, help="override model.env_dim")
    parser.add_argument("--offdiag-scale", type=float, help="override model.offdiag_coupling_scale")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decoquench",
        description="Qubit decoherence in a random-matrix environment: theory, runs, sweeps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_theory = sub.add_parser("theory", help="print the closed-form timescale report as JSON")
    _add_override_flags(p_theory)

    p_evolve = sub.add_parser("evolve", help="single decay run; writes evolve.csv / evolve.json")
    _add_override_flags(p_evolve)
    p_evolve.add_argument("--out", help="output directory (overrides config outputs)")

    p_sweep = sub.add_parser("sweep", help="coupling sweep; writes sweep.csv / sweep.json")
    _add_override_flags(p_sweep)
    p_sweep.add_argument("--out", help="output directory (overrides config outputs)")

    p_goe = sub.add_parser("goe-check", help="sample a matrix and report entry statistics")
    p_goe.add_argument("--dim", type=int, required=True)
    p_goe.add_argument("--seed", type=int, required=True)
    p_goe.add_argument("--convention", default="literal-paper", choices=GOE_CONVENTIONS)

    return parser


def _load(args) -> "ExperimentConfig":
    config = load_config(args.config)
    return apply_overrides(
        config,
        seed=args.seed,
        epsilon=args.epsilon,
        env_dim=getattr(args, "env_dim", None),
        offdiag_scale=getattr(args, "offdiag_scale", None),
        outputs=getattr(args, "out", None),
    )


def _out_dir(config) -> str:
    if config.outputs is None:
        raise ConfigError("outputs: no output directory given (config 'outputs' or --out)")
    return config.outputs


def _goe_check(args) -> int:
    m = sample_goe(args.dim, args.seed, args.convention).entries
    dim = args.dim
    report = {"dim": dim, "seed": args.seed, "convention": args.convention}
    iu = np.triu_indices(dim, k=1)
    expected_off = 1.0
    expected_diag = 1.0 if args.convention == "literal-paper" else 2.0
    report["diag_variance"] = float(np.var(np.diag(m), ddof=1)) if dim > 1 else None
    report["offdiag_variance"] = float(np.var(m[iu], ddof=1)) if dim > 1 else None
    report["max_asymmetry"] = float(np.max(np.abs(m - m.T)))
    ok = report["max_asymmetry"] == 0.0
    if dim > 1:
        k = iu[0].size
        # 3.5-sigma gate on the variance estimator: loose enough that healthy
        # seeds essentially never trip it, tight enough to flag any wrong
        # normalization convention (a sqrt(2) scale error sits at ~40 sigma)
        half_width = 3.5 * math.sqrt(2.0 / k) * expected_off
        band = (expected_off - half_width, expected_off + half_width)
        report["offdiag_expected_variance"] = expected_off
        report["diag_expected_variance"] = expected_diag
        report["offdiag_band"] = list(band)
        ok = ok and band[0] <= report["offdiag_variance"] <= band[1]
    report["ok"] = bool(ok)
    print(json.dumps(report, indent=2))
    return EXIT_OK if ok else EXIT_NUMERICAL


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "goe-check":
            return _goe_check(args)
        config = _load(args)
        if args.command == "theory":
            print(json.dumps(run_theory(config), indent=2))
            return EXIT_OK
        if args.command == "evolve":
            record = run_evolve(config, _out_dir(config))
            print(json.dumps({"written": ["evolve.csv", "evolve.json"], "config_hash": record["config_hash"]}))
            return EXIT_OK
        if args.command == "sweep":
            summary = run_sweep(
                config, _out_dir(config), progress=lambda msg: print(msg, file=sys.stderr)
            )
            print(json.dumps({"written": ["sweep.csv", "sweep.json"], "slopes": summary["slopes"]}))
            return EXIT_OK
        raise AssertionError(f"unreachable command {args.command}")
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DiagonalizationError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, FloatingPointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
