"""
Outage probability versus SNR
=============================

Monte Carlo estimate of P(min(R1, R2) < 5 bit/s/Hz) for three variation
rates of the relay channel. Each grid point uses 10^5 independent trials
with its own counter-based random streams.
"""

# %%
import time

from d2drelay import Scenario, sweep
from d2drelay.csvio import format_outage_csv

scenario = Scenario()
t0 = time.perf_counter()
curves = sweep(scenario)
print(f"{len(curves)} curves x {len(scenario.snr_grid_db)} points in {time.perf_counter() - t0:.1f} s")

print("SNR dB " + "".join(f"  a1={c.variation_rate:<6}" for c in curves))
for i, snr in enumerate(scenario.snr_grid_db):
    print(f"{snr:6.0f} " + "".join(f"  {c.points[i].estimate.point:10.4f}" for c in curves))

# %%
# Faster fading (smaller a1) raises the outage floor: the residual
# self-interference from the stale estimate does not shrink with power.

# %%
# The CSV is the plotting interface.
csv_text = format_outage_csv(curves)
print(csv_text.splitlines()[0])
print(csv_text.splitlines()[1])

# %%
# Optional figure.
try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for c in curves:
        lo = [p.estimate.lo for p in c.points]
        hi = [p.estimate.hi for p in c.points]
        ax.semilogy(c.snr_db, c.outage, marker="o", ms=3, label=f"a1 = {c.variation_rate}")
        ax.fill_between(c.snr_db, lo, hi, alpha=0.2)
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("outage probability")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig("outage_vs_snr.png", dpi=120)
    print("saved outage_vs_snr.png")
