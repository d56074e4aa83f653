"""
Channel aging at a mobile relay
===============================

A relay that moves between channel estimation and use sees a channel that
has drifted. The drift is modelled as a first-order Gauss-Markov process
whose one-step correlation comes from the maximum Doppler shift.
"""

# %%
# From Doppler shift to variation rate
# ------------------------------------
# The correlation between consecutive slots is J0(2 pi f_D T). We look up
# which normalized Doppler gives the three variation rates used in the
# outage experiment.
import math

import numpy as np
from scipy.optimize import brentq

from d2drelay import DopplerSpec, RandomStream, bessel_j0, doppler_correlation, init_channel, step_channel

T = 0.5e-3  # slot duration, s
for target in (0.998, 0.899, 0.799):
    x = brentq(lambda v: bessel_j0(v) - target, 0.0, 2.4)
    fd = x / (2 * math.pi * T)
    a = doppler_correlation(DopplerSpec(doppler_hz=fd, symbol_period_s=T))
    print(f"a = {target}: 2*pi*f_D*T = {x:.4f}, f_D = {fd:7.1f} Hz at T = {T * 1e3} ms -> {a:.6f}")

# %%
# J0 oscillates, so very fast fading gives a negative correlation. The AR(1)
# recursion still works with it.
spec = DopplerSpec(doppler_hz=1200.0, symbol_period_s=T)
print("2*pi*f_D*T =", round(spec.normalized_doppler, 3), "-> a =", round(doppler_correlation(spec), 4))

# %%
# A trajectory and its stale estimate
# -----------------------------------
# The receiver knows h0 only. The squared estimation error grows toward
# 2 * variance as the process forgets its starting point.
rng = RandomStream(1, 0)
ch = init_channel(0.899, 1.0, rng)
errors = []
for _ in range(20):
    ch = step_channel(ch, rng)
    errors.append(abs(ch.estimation_error) ** 2)
print("estimate stays", ch.estimate)
print("|h(n) - h0|^2 for n = 1..20:", np.round(errors, 3))

# %%
# Averaged over many trajectories, the error after n steps is
# 2 * variance * (1 - a**n).
a, n_traj, n_steps = 0.899, 20_000, 5
err = np.zeros(n_steps)
for t in range(n_traj):
    r = RandomStream(2, t)
    c = init_channel(a, 1.0, r)
    for k in range(n_steps):
        c = step_channel(c, r)
        err[k] += abs(c.estimation_error) ** 2
print("empirical:", np.round(err / n_traj, 3))
print("theory:   ", np.round([2 * (1 - a**k) for k in range(1, n_steps + 1)], 3))
