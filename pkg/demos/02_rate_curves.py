"""Rate curves along the damping axis at fixed dephasing.

For p = 0.15 this sweeps g and prints the one-letter coherent information,
the reverse coherent information, the recurrence yield, the best achievable
of those, and the half mutual information upper bound.  The tail near g = 1
is compared with the closed-form leading behaviour.
"""

import math

import numpy as np

from dampdeph import (
    ChannelParams,
    asymptotic_ir,
    g_max,
    half_mutual_info_bound,
    ic_channel,
    ir_channel,
    joint_channel,
    yield_rate,
)

p = 0.15
print(f"p = {p}, coherent information vanishes from g = {g_max(p):.4f}\n")
print(f"{'g':>5} {'I_c':>11} {'I_r':>11} {'yield':>11} {'lower':>11} {'MI/2':>11}")
for g in np.linspace(0, 0.95, 20):
    prm = ChannelParams(p, g)
    ic, ir, y = ic_channel(prm).value, ir_channel(prm).value, yield_rate(prm)
    half = half_mutual_info_bound(joint_channel(prm)).value
    print(f"{g:5.2f} {ic:11.4e} {ir:11.4e} {y:11.4e} {max(ir, y):11.4e} {half:11.4e}")

# I_r dies off much faster than the yield as g -> 1
print("\nnear g = 1")
q = 4 * p * (1 - p)
for dg in (1e-2, 3e-3, 1e-3):
    ir = ir_channel(ChannelParams(p, 1 - dg)).value
    lead = asymptotic_ir(p, dg) / math.log(2) * math.exp(-1 / (1 - q))
    print(f"  dg = {dg:.0e}: I_r = {ir:.4e}, closed-form asymptotic = {asymptotic_ir(p, dg):.4e}, "
          f"corrected leading term = {lead:.4e}")
