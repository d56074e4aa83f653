"""
Choosing relays
===============

Candidate filtering by distance, single-pair selection by estimated
min-rate, timer-based contention, and one-to-one allocation of relays to
several D2D pairs.
"""

# %%
from d2drelay import (
    D2DPair,
    LinkParams,
    Node,
    Topology,
    allocate_relays,
    filter_candidates,
    greedy_allocate,
    hungarian_match,
    select_max_rate,
    timer_based_select,
)

topo = Topology(
    nodes=(
        Node("bs", 0, 0, "base_station"),
        Node("s1", 420, 60, "d2d_endpoint"),
        Node("s2", -80, 410, "d2d_endpoint"),
        Node("r1", 230, 40, "candidate_relay"),
        Node("r2", -40, 220, "candidate_relay"),
        Node("r3", 120, 160, "candidate_relay"),
        Node("r4", 300, -200, "candidate_relay"),
    ),
    reference_gain=1e9,
)
params = LinkParams(a1=0.95)

# %%
# Relays whose farther endpoint is within 300 m of them.
cands = filter_candidates(topo, "s1", "bs", 300.0)
print("candidates for s1 -> bs:", cands)

# %%
# Best single relay by estimated min(R1, R2) on pathloss mean gains.
gains = [(r, topo.mean_gain("s1", r), topo.mean_gain(r, "bs")) for r in cands]
print("max-rate relay:", select_max_rate(gains, params))

# %%
# Timer-based contention: backoff proportional to measured interference.
print("timer winner:", timer_based_select([("r1", 0.4), ("r3", 0.1), ("r4", 0.7)], timer_scale=1e-3))

# %%
# Optimal one-to-one allocation and the greedy baseline.
pairs = [D2DPair("p1", "s1", "bs"), D2DPair("p2", "s2", "bs")]
relays = [n.id for n in topo.relays]
best = allocate_relays(pairs, relays, topology=topo, params=params)
greedy = greedy_allocate(pairs, relays, topology=topo, params=params)
print("hungarian:", best.pairs, round(best.objective_value, 4))
print("greedy:   ", greedy.pairs, round(greedy.objective_value, 4))

# %%
# Where greedy loses: the single best bid blocks a better overall pairing.
util = [[10, 9], [9, 0]]
print(hungarian_match(util, maximize=True))
