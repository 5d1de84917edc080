"""Command-line front end.  Subcommands mirror the harness runners; every
command takes --config (key=value file), repeated --set overrides, --seed,
and --out.  Report commands render a PNG next to the CSV with --plot."""
from __future__ import annotations

import argparse
import sys

from . import harness, plotting
from .errors import WorkbenchError


def _add_common(sub):
    sub.add_argument("--config", help="key=value config file")
    sub.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                     help="override one config key (repeatable)")
    sub.add_argument("--seed", type=int, help="master seed")
    sub.add_argument("--out", help="output CSV path")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bmst",
                                     description="block Markov superposition "
                                                 "transmission workbench")
    subs = parser.add_subparsers(dest="command", required=True)
    for name, doc in [
            ("encode", "encode seeded payload frames"),
            ("ber", "Monte Carlo BER sweep"),
            ("threshold", "EXIT-chart decoding threshold"),
            ("bound", "genie-aided BER lower bound"),
            ("design-memory", "encoding memory design table"),
            ("compare", "equal-latency family comparison"),
            ("complexity", "latency and ops/bit accounting")]:
        sub = subs.add_parser(name, help=doc)
        _add_common(sub)
        if name in ("ber", "bound", "compare"):
            sub.add_argument("--plot", action="store_true",
                             help="render a PNG next to the CSV")
    return parser


def resolve_config(args) -> harness.SimConfig:
    mapping = {}
    if args.config:
        mapping.update(harness.parse_config_file(args.config))
    for item in args.set:
        if "=" not in item:
            raise harness.ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, _, value = item.partition("=")
        mapping[key.strip()] = value.strip()
    if args.seed is not None:
        mapping["seed"] = args.seed
    if args.out is not None:
        mapping["out"] = args.out
    return harness.config_from_mapping(mapping)


def _out_or_stdout(cfg, write):
    if cfg.out:
        write(cfg.out)
        return cfg.out
    write(sys.stdout)
    return None


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        if args.command == "encode":
            rows = harness.run_encode(cfg)
            _out_or_stdout(cfg, lambda dst: harness.encode_to_csv(dst, cfg, rows))
        elif args.command == "ber":
            report = harness.run_ber_sweep(cfg)
            path = _out_or_stdout(cfg, report.to_csv)
            if args.plot and path:
                print(plotting.plot_ber(path), file=sys.stderr)
        elif args.command == "threshold":
            record = harness.run_threshold(cfg)
            _out_or_stdout(cfg, lambda dst: record.to_csv(dst, cfg.echo()))
        elif args.command == "bound":
            rows = harness.run_bound(cfg)
            path = _out_or_stdout(cfg, lambda dst: harness.bound_to_csv(dst, cfg, rows))
            if args.plot and path:
                print(plotting.plot_bound(path), file=sys.stderr)
        elif args.command == "design-memory":
            rows = harness.run_design_memory(cfg)
            _out_or_stdout(cfg, lambda dst: harness.design_memory_to_csv(dst, cfg, rows))
        elif args.command == "compare":
            pairs = harness.run_equal_latency_compare(cfg)
            path = _out_or_stdout(cfg, lambda dst: harness.compare_to_csv(dst, cfg, pairs))
            if args.plot and path:
                print(plotting.plot_compare(path), file=sys.stderr)
        elif args.command == "complexity":
            record = harness.run_complexity(cfg)
            _out_or_stdout(cfg, lambda dst: harness.complexity_to_csv(dst, cfg, record))
    except WorkbenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
