"""Batch front end: ``sim <command> --config PATH [--seed N] [--workers N] [--out PATH]``.

Commands
--------
sweep     outage-probability curves -> variation_rate,snr_db,trials,outage_point,outage_lo,outage_hi
select    best relay per D2D pair (max estimated min-rate) -> pair_id,relay_id,utility
match     optimal one-to-one relay allocation -> pair_id,relay_id,utility
validate  built-in invariant checks, one PASS/FAIL line each

Exit status: 0 success, 1 configuration error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .config import COMMANDS, ConfigError, RunConfig, parse_config
from .csvio import atomic_write_text, format_assignment_csv, format_outage_csv
from .montecarlo import sweep
from .selection import (
    allocate_relays,
    estimated_pair_rate,
    filter_candidates,
    rate_utility,
    select_max_rate,
)
from .validation import run_invariant_suite

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 1, 2


def _select_rows(config: RunConfig, err):
    topo, params = config.topology, config.scenario.link
    rows = []
    for pair in config.pairs:
        relay_ids = filter_candidates(topo, pair.source_id, pair.dest_id, config.max_distance_m)
        if not relay_ids:
            print(f"sim: pair {pair.id!r} has no relay within {config.max_distance_m:g} m", file=err)
            continue
        candidates = [
            (rid, topo.mean_gain(pair.source_id, rid), topo.mean_gain(rid, pair.dest_id))
            for rid in relay_ids
        ]
        best = select_max_rate(candidates, params)
        _, h0_sq, g0_sq = next(c for c in candidates if c[0] == best)
        rows.append((pair.id, best, estimated_pair_rate(params, h0_sq, g0_sq)))
    return rows


def _match_rows(config: RunConfig):
    topo, params = config.topology, config.scenario.link
    relays = [n.id for n in topo.relays]
    utility = rate_utility(topo, params)
    by_id = {p.id: p for p in config.pairs}
    assignment = allocate_relays(list(config.pairs), relays, utility)
    return [(pid, rid, utility(by_id[pid], rid)) for pid, rid in assignment.pairs]


def run(config: RunConfig, out=None, err=None) -> int:
    """Execute one configured command and return the exit status."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        if config.command == "validate":
            results = run_invariant_suite(config.scenario)
            for name, ok, detail in results:
                print(f"{'PASS' if ok else 'FAIL'}  {name}  [{detail}]", file=out)
            failed = sum(not ok for _, ok, _ in results)
            if failed:
                print(f"sim: {failed} invariant check(s) failed", file=err)
                return EXIT_RUNTIME
            return EXIT_OK

        if config.command == "sweep":
            text = format_outage_csv(sweep(config.scenario, workers=config.workers))
        elif config.command == "select":
            text = format_assignment_csv(_select_rows(config, err))
        elif config.command == "match":
            text = format_assignment_csv(_match_rows(config))
        else:
            print(f"sim: unknown command {config.command!r}", file=err)
            return EXIT_CONFIG
        atomic_write_text(config.output_path, text)
    except OSError as exc:
        print(f"sim: I/O error: {exc}", file=err)
        return EXIT_RUNTIME
    except Exception as exc:
        print(f"sim: {type(exc).__name__}: {exc}", file=err)
        return EXIT_RUNTIME
    print(f"sim: wrote {config.output_path}", file=err)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sim", description="Relay-assisted D2D outage and relay-selection simulator."
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="path to the experiment config")
    parser.add_argument("--seed", type=int, help="override [scenario] master_seed")
    parser.add_argument("--workers", type=int, help="override [run] workers")
    parser.add_argument("--out", help="override [run] output_path")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        print(f"sim: cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        config = parse_config(text, command=args.command)
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise ConfigError("seed must fit in 64 bits", key="--seed")
            config = replace(config, scenario=replace(config.scenario, master_seed=args.seed))
        if args.workers is not None:
            if args.workers < 1:
                raise ConfigError("workers must be >= 1", key="--workers")
            config = replace(config, workers=args.workers)
        if args.out is not None:
            config = replace(config, output_path=args.out)
    except ConfigError as exc:
        print(f"sim: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
