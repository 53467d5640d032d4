"""Command-line interface.

One subcommand per experiment kind; each accepts the shared flags
--config/--seed/--trials/--out/--format/--workers.  Every run writes into
<out>/<config-hash>/ a config echo (config.yaml) plus results.csv or
results.json, and prints a short summary.  Exit code 0 on success, 1 with a
diagnostic on validation or I/O failure.
"""

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import yaml

from ..exceptions import ConfigError
from .config import config_hash, config_to_dict, default_config, load_config
from .results import emit_complexity, emit_results
from .runners import run_experiment

SUBCOMMANDS = (
    "convergence",
    "ber-sweep",
    "csi-error",
    "oracle-gap",
    "psk-sweep",
    "complexity-table",
)

# config kinds each subcommand accepts (ber-sweep also runs iui-sweep configs)
_ACCEPTED_KINDS = {name: (name,) for name in SUBCOMMANDS}
_ACCEPTED_KINDS["ber-sweep"] = ("ber-sweep", "iui-sweep")


def _add_common(parser):
    parser.add_argument("--config", type=Path, help="YAML experiment config")
    parser.add_argument("--seed", type=int, help="master seed override")
    parser.add_argument("--trials", type=int, help="trial count override")
    parser.add_argument("--out", type=Path, default=Path("results"), help="output root")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")
    parser.add_argument("--workers", type=int, default=1, help="parallel workers")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="faprecode",
        description="Finite-alphabet precoding experiments for the MU-MIMO downlink",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        _add_common(p)
    return parser


def _resolve_config(args):
    cfg = default_config(args.command)
    if args.config is not None:
        cfg = load_config(args.config, base=cfg)
        if cfg.kind not in _ACCEPTED_KINDS[args.command]:
            raise ConfigError(
                f"config kind {cfg.kind!r} cannot run under {args.command!r}"
            )
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.trials is not None:
        overrides["trials"] = args.trials
    if overrides:
        cfg = replace(cfg, **overrides).validate()
    return cfg


def _run_dir(cfg, out_root):
    run_dir = Path(out_root) / config_hash(cfg)
    run_dir.mkdir(parents=True, exist_ok=True)
    with open(run_dir / "config.yaml", "w", encoding="utf-8") as fh:
        yaml.safe_dump(config_to_dict(cfg), fh, sort_keys=True)
    return run_dir


def _print_complexity(rows):
    print(f"{'algorithm':<10} {'N':>5} {'K':>4} {'T':>6} {'L':>4}  multiplications")
    for row in rows:
        t = row["iterations"] if row["iterations"] is not None else "-"
        L = row["memory_length"] if row["memory_length"] is not None else "-"
        print(
            f"{row['algorithm']:<10} {row['n_antennas']:>5} {row['n_users']:>4} "
            f"{t:>6} {L:>4}  {row['multiplications']:.2E}"
        )


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = _resolve_config(args)
        result = run_experiment(cfg, workers=args.workers)
        run_dir = _run_dir(cfg, args.out)
        out_path = run_dir / f"results.{args.format}"
        if cfg.kind == "complexity-table":
            emit_complexity(result, out_path, args.format)
            _print_complexity(result)
        else:
            emit_results(result, out_path, args.format)
            print(f"{cfg.kind}: {len(result.rows)} rows over {cfg.trials} trial(s)")
            for key in sorted(result.notes):
                print(f"  {key} = {result.notes[key]}")
        print(f"results written to {out_path}")
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
