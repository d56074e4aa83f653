"""Flat sectioned key-value experiment configuration.

Example::

    [link]
    r_threshold = 5

    [scenario]
    variation_rates = 0.998, 0.899, 0.799
    snr_min_db = 0
    snr_max_db = 30
    snr_step_db = 2
    trials = 100000

    [topology]
    cell_radius_m = 500
    max_distance_m = 200
    node.bs = base_station, 0, 0
    node.s1 = d2d_endpoint, 400, 0
    node.r1 = candidate_relay, 250, 30
    pair.p1 = s1, bs

    [run]
    output_path = outage.csv
    workers = 4
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field, fields
from typing import Optional

import numpy as np

from .montecarlo import (
    DEFAULT_CHANNEL_VARIANCE,
    DEFAULT_SEED,
    DEFAULT_TRIALS,
    DEFAULT_VARIATION_RATES,
    Scenario,
)
from .relay_link import LinkParams
from .selection import D2DPair, Node, Topology

COMMANDS = ("sweep", "select", "match", "validate")
SECTIONS = ("link", "scenario", "topology", "run")

_LINK_KEYS = {f.name for f in fields(LinkParams)}
_SCENARIO_KEYS = {
    "channel_variance_h",
    "channel_variance_g",
    "snr_grid_db",
    "snr_min_db",
    "snr_max_db",
    "snr_step_db",
    "variation_rates",
    "trials",
    "master_seed",
    "aging_steps",
}
_TOPOLOGY_KEYS = {"cell_radius_m", "pathloss_exponent", "reference_gain", "max_distance_m"}
_RUN_KEYS = {"command", "output_path", "workers"}


class ConfigError(ValueError):
    """Invalid configuration; carries the offending key and line when known."""

    def __init__(self, message: str, key: Optional[str] = None, line: Optional[int] = None):
        self.key = key
        self.line = line
        where = ""
        if key is not None:
            where += f"key {key!r}"
        if line is not None:
            where += f"{' ' if where else ''}(line {line})"
        super().__init__(f"{where}: {message}" if where else message)


@dataclass(frozen=True)
class RunConfig:
    scenario: Scenario = field(default_factory=Scenario)
    topology: Optional[Topology] = None
    pairs: tuple = ()
    max_distance_m: float = math.inf
    command: str = "sweep"
    output_path: str = "out.csv"
    workers: int = 1


def _key_lines(text: str) -> dict:
    """Map (section, key) to the 1-based line where it is defined."""
    lines = {}
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in "#;":
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            lines[(section, None)] = lineno
            continue
        for sep in ("=", ":"):
            if sep in line:
                lines[(section, line.split(sep, 1)[0].strip())] = lineno
                break
    return lines


class _Reader:
    def __init__(self, parser: configparser.ConfigParser, lines: dict):
        self.parser = parser
        self.lines = lines

    def error(self, section: str, key: Optional[str], message: str) -> ConfigError:
        return ConfigError(message, key=key, line=self.lines.get((section, key)))

    def raw(self, section: str, key: str) -> Optional[str]:
        if not self.parser.has_section(section) or not self.parser.has_option(section, key):
            return None
        return self.parser.get(section, key)

    def number(self, section, key, default, *, lo=-math.inf, hi=math.inf, lo_open=False, desc=None):
        text = self.raw(section, key)
        if text is None:
            return default
        try:
            value = float(text)
        except ValueError:
            raise self.error(section, key, f"expected a number, got {text!r}") from None
        below = value <= lo if lo_open else value < lo
        if not math.isfinite(value) or below or value > hi:
            rng = desc or f"{'(' if lo_open else '['}{lo:g}, {hi:g}]"
            raise self.error(section, key, f"value {value:g} outside allowed range {rng}")
        return value

    def integer(self, section, key, default, *, lo=0, hi=2**64 - 1):
        text = self.raw(section, key)
        if text is None:
            return default
        try:
            value = int(text, 0)
        except ValueError:
            raise self.error(section, key, f"expected an integer, got {text!r}") from None
        if not lo <= value <= hi:
            raise self.error(section, key, f"value {value} outside allowed range [{lo}, {hi}]")
        return value

    def float_list(self, section, key):
        text = self.raw(section, key)
        if text is None:
            return None
        try:
            values = [float(v) for v in text.replace(",", " ").split()]
        except ValueError:
            raise self.error(section, key, f"expected a list of numbers, got {text!r}") from None
        if not values:
            raise self.error(section, key, "list must not be empty")
        return values


def _parse_link(r: _Reader) -> LinkParams:
    kw = {}
    for name in ("p1", "p2", "p_relay", "r_threshold"):
        kw[name] = r.number("link", name, getattr(LinkParams, name), lo=0.0)
    for name in ("sigma_r2", "sigma_1_2", "sigma_2_2"):
        kw[name] = r.number("link", name, getattr(LinkParams, name), lo=0.0, lo_open=True)
    for name in ("a1", "a2"):
        kw[name] = r.number("link", name, getattr(LinkParams, name), lo=-1.0, hi=1.0)
    return LinkParams(**kw)


def _parse_scenario(r: _Reader, link: LinkParams) -> Scenario:
    s = "scenario"
    grid = r.float_list(s, "snr_grid_db")
    ranged = [r.raw(s, k) is not None for k in ("snr_min_db", "snr_max_db", "snr_step_db")]
    if grid is not None and any(ranged):
        raise r.error(s, "snr_grid_db", "give either snr_grid_db or snr_min/max/step_db, not both")
    if grid is None:
        lo = r.number(s, "snr_min_db", 0.0)
        hi = r.number(s, "snr_max_db", 30.0)
        step = r.number(s, "snr_step_db", 2.0, lo=0.0, lo_open=True)
        if hi < lo:
            raise r.error(s, "snr_max_db", f"snr_max_db {hi:g} is below snr_min_db {lo:g}")
        count = int(math.floor((hi - lo) / step + 1e-9)) + 1
        grid = [float(np.round(lo + k * step, 10)) for k in range(count)]
    elif any(b <= a for a, b in zip(grid, grid[1:])):
        raise r.error(s, "snr_grid_db", "SNR grid must be strictly increasing")

    rates = r.float_list(s, "variation_rates")
    if rates is None:
        rates = list(DEFAULT_VARIATION_RATES)
    for a in rates:
        if not (math.isfinite(a) and -1.0 <= a <= 1.0):
            raise r.error(s, "variation_rates", f"rate {a:g} outside allowed range [-1, 1]")
    if len(set(rates)) != len(rates):
        raise r.error(s, "variation_rates", "rates must be distinct")

    return Scenario(
        link=link,
        channel_variance_h=r.number(s, "channel_variance_h", DEFAULT_CHANNEL_VARIANCE, lo=0.0),
        channel_variance_g=r.number(s, "channel_variance_g", DEFAULT_CHANNEL_VARIANCE, lo=0.0),
        snr_grid_db=tuple(grid),
        variation_rates=tuple(rates),
        trials=r.integer(s, "trials", DEFAULT_TRIALS, lo=1),
        master_seed=r.integer(s, "master_seed", DEFAULT_SEED),
        aging_steps=r.integer(s, "aging_steps", 1, lo=1),
    )


def _parse_topology(r: _Reader):
    s = "topology"
    nodes, pairs = [], []
    for key in r.parser.options(s):
        text = r.parser.get(s, key)
        if key.startswith("node."):
            parts = [p.strip() for p in text.split(",")]
            if len(parts) != 3:
                raise r.error(s, key, "expected 'role, x, y'")
            try:
                nodes.append(Node(id=key[5:], role=parts[0], x=float(parts[1]), y=float(parts[2])))
            except ValueError as exc:
                raise r.error(s, key, str(exc)) from None
        elif key.startswith("pair."):
            parts = [p.strip() for p in text.split(",")]
            if len(parts) != 2:
                raise r.error(s, key, "expected 'source_id, dest_id'")
            pairs.append(D2DPair(id=key[5:], source_id=parts[0], dest_id=parts[1]))
    try:
        topology = Topology(
            nodes=tuple(nodes),
            cell_radius_m=r.number(s, "cell_radius_m", 500.0, lo=0.0, lo_open=True),
            pathloss_exponent=r.number(s, "pathloss_exponent", 3.5, lo=2.0),
            reference_gain=r.number(s, "reference_gain", 1.0, lo=0.0, lo_open=True),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise r.error(s, None, str(exc)) from None
    ids = {n.id for n in nodes}
    for p in pairs:
        for end in (p.source_id, p.dest_id):
            if end not in ids:
                raise r.error(s, f"pair.{p.id}", f"unknown node id {end!r}")
    max_distance = r.number(s, "max_distance_m", math.inf, lo=0.0, hi=math.inf)
    return topology, tuple(pairs), max_distance


def parse_config(text: str, command: Optional[str] = None) -> RunConfig:
    """Parse and validate a configuration document.

    `command`, when given, overrides ``[run] command``. Missing sections
    and keys fall back to defaults, except that ``select`` and ``match``
    need a ``[topology]`` section with at least one ``pair.*`` entry.

    Raises
    ------
    ConfigError
        Unknown section or key, malformed or out-of-range value, or a
        missing required section.
    """
    lines = _key_lines(text)
    parser = configparser.ConfigParser(interpolation=None, strict=True)
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.DuplicateOptionError as exc:
        raise ConfigError("duplicate key", key=exc.option, line=exc.lineno) from None
    except configparser.DuplicateSectionError as exc:
        raise ConfigError(f"duplicate section [{exc.section}]", line=exc.lineno) from None
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError("key outside of any [section]", line=exc.lineno) from None
    except configparser.ParsingError as exc:
        lineno = exc.errors[0][0] if exc.errors else None
        raise ConfigError("malformed line", line=lineno) from None

    reader = _Reader(parser, lines)
    allowed = {"link": _LINK_KEYS, "scenario": _SCENARIO_KEYS, "topology": _TOPOLOGY_KEYS, "run": _RUN_KEYS}
    for section in parser.sections():
        if section not in SECTIONS:
            raise ConfigError(f"unknown section [{section}]", line=lines.get((section, None)))
        for key in parser.options(section):
            if section == "topology" and key.startswith(("node.", "pair.")) and len(key) > 5:
                continue
            if key not in allowed[section]:
                raise reader.error(section, key, f"unknown key in [{section}]")

    run_command = command or reader.raw("run", "command") or "sweep"
    if run_command not in COMMANDS:
        raise reader.error("run", "command", f"command must be one of {COMMANDS}")

    link = _parse_link(reader)
    try:
        scenario = _parse_scenario(reader, link)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    topology, pairs, max_distance = None, (), math.inf
    if parser.has_section("topology"):
        topology, pairs, max_distance = _parse_topology(reader)
    if run_command in ("select", "match"):
        if topology is None:
            raise ConfigError(f"command {run_command!r} requires a [topology] section", key="topology")
        if not pairs:
            raise ConfigError(
                f"command {run_command!r} requires at least one pair.<id> entry",
                key="pair",
                line=lines.get(("topology", None)),
            )

    output_path = reader.raw("run", "output_path") or "out.csv"
    workers = reader.integer("run", "workers", 1, lo=1, hi=1024)
    return RunConfig(
        scenario=scenario,
        topology=topology,
        pairs=pairs,
        max_distance_m=max_distance,
        command=run_command,
        output_path=output_path,
        workers=workers,
    )
