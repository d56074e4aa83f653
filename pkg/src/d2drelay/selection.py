"""Relay selection and one-to-one relay allocation policies.

Policies provided:

* distance-threshold candidate filtering,
* max-estimated-rate selection (utility = min(R1, R2) of the two-way AF link),
* timer-based distributed selection (backoff proportional to interference),
* optimal bipartite assignment of D2D pairs to relays (Hungarian method),
* a greedy "best remaining bid" baseline standing in for auction allocation.

Ties are always broken towards the smallest id so results are reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .relay_link import (
    LinkParams,
    LinkRealization,
    achievable_rate,
    amplification_factor,
    sinr_bs,
    sinr_s1,
)

__all__ = [
    "Assignment",
    "D2DPair",
    "Node",
    "SelectionError",
    "Topology",
    "allocate_relays",
    "estimated_pair_rate",
    "filter_candidates",
    "greedy_allocate",
    "hungarian_match",
    "rate_utility",
    "select_max_rate",
    "timer_based_select",
]

ROLES = ("d2d_endpoint", "candidate_relay", "base_station")


class SelectionError(ValueError):
    """No relay can be chosen (e.g. empty candidate list)."""


@dataclass(frozen=True)
class Node:
    id: str
    x: float
    y: float
    role: str

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"node {self.id!r}: role must be one of {ROLES}, got {self.role!r}")
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"node {self.id!r}: coordinates must be finite")

    def distance_to(self, other: "Node") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class D2DPair:
    """A D2D source/destination couple identified by `id`."""

    id: str
    source_id: str
    dest_id: str


@dataclass(frozen=True)
class Topology:
    nodes: tuple
    cell_radius_m: float = 500.0
    pathloss_exponent: float = 3.5
    reference_gain: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        if not (math.isfinite(self.cell_radius_m) and self.cell_radius_m > 0):
            raise ValueError(f"cell_radius_m must be > 0, got {self.cell_radius_m!r}")
        if not (math.isfinite(self.pathloss_exponent) and self.pathloss_exponent >= 2):
            raise ValueError(f"pathloss_exponent must be >= 2, got {self.pathloss_exponent!r}")
        if not (math.isfinite(self.reference_gain) and self.reference_gain > 0):
            raise ValueError(f"reference_gain must be > 0, got {self.reference_gain!r}")
        ids = [n.id for n in self.nodes]
        if len(set(ids)) != len(ids):
            raise ValueError("node ids must be unique")
        for n in self.nodes:
            if math.hypot(n.x, n.y) > self.cell_radius_m:
                raise ValueError(f"node {n.id!r} lies outside the cell radius")
        if not any(n.role == "base_station" for n in self.nodes):
            raise ValueError("topology needs at least one base_station")

    def node(self, node_id: str) -> Node:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(f"unknown node id {node_id!r}")

    @property
    def relays(self) -> list:
        return [n for n in self.nodes if n.role == "candidate_relay"]

    def mean_gain(self, a_id: str, b_id: str) -> float:
        """Log-distance mean power gain reference_gain * d**-exponent (d >= 1 m)."""
        d = max(self.node(a_id).distance_to(self.node(b_id)), 1.0)
        return self.reference_gain * d ** (-self.pathloss_exponent)


@dataclass(frozen=True)
class Assignment:
    pairs: tuple
    objective_value: float

    def __post_init__(self):
        rows = [r for r, _ in self.pairs]
        cols = [c for _, c in self.pairs]
        if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
            raise ValueError("assignment must be one-to-one")

    def as_dict(self) -> dict:
        return dict(self.pairs)


# ---------------------------------------------------------------------------
# Candidate filtering and single-relay selection
# ---------------------------------------------------------------------------


def filter_candidates(
    topology: Topology, source_id: str, dest_id: str, max_distance_m: float
) -> list:
    """Relays whose farther endpoint is within `max_distance_m`.

    Sorted by that farther distance, then by id.
    """
    if not max_distance_m >= 0:
        raise ValueError(f"max_distance_m must be >= 0, got {max_distance_m!r}")
    src = topology.node(source_id)
    dst = topology.node(dest_id)
    scored = []
    for relay in topology.relays:
        if relay.id in (source_id, dest_id):
            continue
        reach = max(relay.distance_to(src), relay.distance_to(dst))
        if reach <= max_distance_m:
            scored.append((reach, relay.id))
    scored.sort()
    return [relay_id for _, relay_id in scored]


def estimated_pair_rate(params: LinkParams, h0_sq: float, g0_sq: float) -> float:
    """min(R1, R2) of the two-way AF link for given estimated gains."""
    beta = float(amplification_factor(params, h0_sq, g0_sq))
    real = LinkRealization(h0_sq=h0_sq, g0_sq=g0_sq, beta=beta)
    return min(achievable_rate(sinr_s1(params, real)), achievable_rate(sinr_bs(params, real)))


def select_max_rate(candidates: Sequence, params: LinkParams):
    """Pick the relay with the highest estimated min-rate.

    `candidates` holds ``(relay_id, h0_sq, g0_sq)`` tuples.
    """
    if not candidates:
        raise SelectionError("no candidate relays")
    best_id, best_rate = None, -math.inf
    for relay_id, h0_sq, g0_sq in sorted(candidates, key=lambda c: c[0]):
        rate = estimated_pair_rate(params, h0_sq, g0_sq)
        if rate > best_rate:
            best_id, best_rate = relay_id, rate
    return best_id


def timer_based_select(candidates: Sequence, timer_scale: float):
    """Distributed contention outcome: each relay backs off for
    ``timer_scale * interference_level`` and the first to expire forwards.

    Returns ``(relay_id, backoff)``.
    """
    if not candidates:
        raise SelectionError("no candidate relays")
    if not (math.isfinite(timer_scale) and timer_scale > 0):
        raise ValueError(f"timer_scale must be > 0, got {timer_scale!r}")
    for relay_id, level in candidates:
        if not (math.isfinite(level) and level >= 0):
            raise ValueError(f"relay {relay_id!r}: interference level must be >= 0")
    backoffs = sorted((timer_scale * level, relay_id) for relay_id, level in candidates)
    backoff, winner = backoffs[0]
    return winner, backoff


# ---------------------------------------------------------------------------
# Assignment
# ---------------------------------------------------------------------------


def _solve_min(cost: np.ndarray) -> float:
    """Optimal total cost of a rectangular assignment (Kuhn-Munkres with
    potentials, O(n^2 m)); matches min(n, m) pairs."""
    n, m = cost.shape
    if n == 0 or m == 0:
        return 0.0
    if n > m:
        cost = cost.T
        n, m = m, n
    inf = math.inf
    u = [0.0] * (n + 1)
    v = [0.0] * (m + 1)
    match = [0] * (m + 1)  # match[j] = row (1-based) assigned to column j
    way = [0] * (m + 1)
    c = cost.tolist()
    for i in range(1, n + 1):
        match[0] = i
        j0 = 0
        minv = [inf] * (m + 1)
        used = [False] * (m + 1)
        while True:
            used[j0] = True
            i0 = match[j0]
            delta = inf
            j1 = 0
            row = c[i0 - 1]
            ui0 = u[i0]
            for j in range(1, m + 1):
                if not used[j]:
                    cur = row[j - 1] - ui0 - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(m + 1):
                if used[j]:
                    u[match[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while True:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1
            if j0 == 0:
                break
    return math.fsum(c[match[j] - 1][j - 1] for j in range(1, m + 1) if match[j])


def hungarian_match(cost, maximize: bool = False) -> Assignment:
    """Optimal one-to-one assignment of rows to columns.

    Minimizes (or maximizes) the summed entries over ``min(rows, cols)``
    pairs. Among equally good assignments the lexicographically smallest
    list of ``(row, col)`` pairs is returned.

    Raises
    ------
    ValueError
        Empty, ragged or non-finite matrix.
    """
    matrix = np.asarray(cost, dtype=float)
    if matrix.ndim != 2 or matrix.size == 0:
        raise ValueError("cost must be a non-empty 2-D matrix")
    if not np.all(np.isfinite(matrix)):
        raise ValueError("cost entries must be finite")
    work = -matrix if maximize else matrix
    n, m = work.shape

    best = _solve_min(work)
    tol = 1e-9 * max(1.0, float(np.abs(work).sum()))

    # Fix rows in order, each to its smallest column that still admits an
    # optimal completion; a row may only stay unmatched when rows > cols.
    pairs = []
    spent = 0.0
    free_rows = list(range(n))
    free_cols = list(range(m))
    need = min(n, m)
    for i in range(n):
        free_rows.remove(i)
        if need == 0:
            break
        chosen = None
        for j in free_cols:
            rest_cols = [c for c in free_cols if c != j]
            if min(len(free_rows), len(rest_cols)) != need - 1:
                continue
            sub = work[np.ix_(free_rows, rest_cols)]
            total = spent + work[i, j] + _solve_min(sub)
            if total <= best + tol:
                chosen = j
                break
        if chosen is None:
            # leaving row i out must still be optimal
            continue
        pairs.append((i, chosen))
        spent += work[i, chosen]
        free_cols.remove(chosen)
        need -= 1

    objective = math.fsum(matrix[i, j] for i, j in pairs)
    return Assignment(pairs=tuple(pairs), objective_value=objective)


def rate_utility(topology: Topology, params: LinkParams) -> Callable:
    """Default pair/relay utility: estimated min-rate on pathloss mean gains.

    |h0|^2 is the source-relay mean gain and |g0|^2 the relay-destination one.
    """

    def utility(pair: D2DPair, relay_id: str) -> float:
        return estimated_pair_rate(
            params,
            topology.mean_gain(pair.source_id, relay_id),
            topology.mean_gain(relay_id, pair.dest_id),
        )

    return utility


def _utility_matrix(pairs, relays, utility) -> np.ndarray:
    values = np.array([[float(utility(p, r)) for r in relays] for p in pairs], dtype=float)
    if not np.all(np.isfinite(values)):
        raise ValueError("utility must be finite on every (pair, relay)")
    return values


def _resolve_utility(utility, topology, params):
    if utility is not None:
        return utility
    if topology is None or params is None:
        raise ValueError("the default utility needs both topology and params")
    return rate_utility(topology, params)


def allocate_relays(
    pairs: Sequence[D2DPair],
    relays: Sequence[str],
    utility: Optional[Callable] = None,
    *,
    topology: Optional[Topology] = None,
    params: Optional[LinkParams] = None,
) -> Assignment:
    """Maximum-utility one-to-one allocation of relays to D2D pairs.

    Returns an Assignment whose pairs are ``(pair.id, relay_id)``.
    """
    if not pairs or not relays:
        raise SelectionError("need at least one pair and one relay")
    utility = _resolve_utility(utility, topology, params)
    result = hungarian_match(_utility_matrix(pairs, relays, utility), maximize=True)
    return Assignment(
        pairs=tuple((pairs[i].id, relays[j]) for i, j in result.pairs),
        objective_value=result.objective_value,
    )


def greedy_allocate(
    pairs: Sequence[D2DPair],
    relays: Sequence[str],
    utility: Optional[Callable] = None,
    *,
    topology: Optional[Topology] = None,
    params: Optional[LinkParams] = None,
) -> Assignment:
    """Baseline for auction-style allocation: repeatedly award the highest
    remaining (pair, relay) bid until pairs or relays run out.

    Generally suboptimal; useful to measure what optimal matching gains.
    """
    if not pairs or not relays:
        raise SelectionError("need at least one pair and one relay")
    utility = _resolve_utility(utility, topology, params)
    values = _utility_matrix(pairs, relays, utility)
    bids = sorted(
        ((-values[i, j], i, j) for i in range(len(pairs)) for j in range(len(relays))),
    )
    taken_rows, taken_cols, chosen = set(), set(), []
    for _, i, j in bids:
        if i in taken_rows or j in taken_cols:
            continue
        chosen.append((i, j))
        taken_rows.add(i)
        taken_cols.add(j)
    chosen.sort()
    return Assignment(
        pairs=tuple((pairs[i].id, relays[j]) for i, j in chosen),
        objective_value=math.fsum(values[i, j] for i, j in chosen),
    )
