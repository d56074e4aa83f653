"""Link-level simulator for relay-assisted D2D communication with channel aging."""

from .channel import ChannelProcess, DopplerSpec, doppler_correlation, init_channel, step_channel
from .montecarlo import OutageCurve, OutagePoint, Scenario, estimate_outage, run_trial, sweep
from .numerics import (
    ConfidenceInterval,
    RandomStream,
    bessel_j0,
    sample_complex_gaussian,
    wilson_interval,
)
from .relay_link import (
    LinkParams,
    LinkRealization,
    SinrPair,
    achievable_rate,
    amplification_factor,
    outage_indicator,
    sinr_bs,
    sinr_s1,
)
from .selection import (
    Assignment,
    D2DPair,
    Node,
    SelectionError,
    Topology,
    allocate_relays,
    estimated_pair_rate,
    filter_candidates,
    greedy_allocate,
    hungarian_match,
    select_max_rate,
    timer_based_select,
)

__version__ = "0.1.0"
