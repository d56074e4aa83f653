"""
SINR of the two-way amplify-and-forward link
============================================

s1 and the BS transmit to the relay together; the relay amplifies and
broadcasts. Both ends subtract their own echo with a stale estimate, and
the leftover shows up as (1 - a1**2) terms in the SINRs.
"""

# %%
import numpy as np

from d2drelay import LinkParams, LinkRealization, achievable_rate, amplification_factor, sinr_bs, sinr_s1

h0_sq, g0_sq = 1000.0, 1000.0  # 30 dB average link gains
print(" SNR  a1      gamma1   gamma2   min rate")
for snr_db in (0, 10, 20, 30, 40):
    P = 10 ** (snr_db / 10)
    for a1 in (0.998, 0.899, 0.799):
        p = LinkParams(p1=P, p2=P, p_relay=P, a1=a1)
        real = LinkRealization(h0_sq, g0_sq, float(amplification_factor(p, h0_sq, g0_sq)))
        g1, g2 = sinr_s1(p, real), sinr_bs(p, real)
        rate = min(achievable_rate(g1), achievable_rate(g2))
        print(f"{snr_db:4d}  {a1:.3f} {g1:8.1f} {g2:8.1f}   {rate:.3f}")

# %%
# Two things stand out. The SINR at s1 saturates because the residual echo
# grows with transmit power. The SINR at the BS is capped near a1^2 |h0|^2
# whatever the power, so the first-hop gain alone decides whether the
# 5 bit/s/Hz target can be met.
a1 = 0.899
for P in (1e0, 1e3, 1e6, 1e9):
    p = LinkParams(p1=P, p2=P, p_relay=P, a1=a1)
    real = LinkRealization(h0_sq, g0_sq, float(amplification_factor(p, h0_sq, g0_sq)))
    print(f"P = {P:.0e}: gamma_BS = {sinr_bs(p, real):8.2f}   cap a1^2|h0|^2 = {a1**2 * h0_sq:.2f}")

# %%
# Scaling every power and noise variance by the same factor leaves both
# SINRs unchanged.
p = LinkParams(p1=2.0, p2=0.5, p_relay=1.0, sigma_r2=0.3, a1=0.9)
for k in (1.0, 1e-3, 1e4):
    q = p.scaled(k)
    r = LinkRealization(3.0, 2.0, float(amplification_factor(q, 3.0, 2.0)))
    print(k, sinr_s1(q, r), sinr_bs(q, r))
