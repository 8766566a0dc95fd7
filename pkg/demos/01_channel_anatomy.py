"""Anatomy of the joint damping-dephasing channel.

Builds the Kraus channel at one operating point, checks completeness,
pushes a few Bloch vectors through it, and confirms that the anti-degrading
map recovers the channel output from the environment once g is past threshold.
"""

import numpy as np

from dampdeph import ChannelParams, antideg_threshold, antidegrading_map, joint_channel, joint_complement
from dampdeph.channels import antidegrading_parameters, params_from_times, times_from_params

prm = ChannelParams(p=0.15, g=0.5)
chan = joint_channel(prm)

# completeness: sum K^dag K = I
comp = sum(k.conj().T @ k for k in chan.kraus)
print("Kraus operators:", len(chan.kraus), " completeness error:", np.abs(comp - np.eye(2)).max())

sx = np.array([[0, 1], [1, 0]], dtype=complex)
sy = np.array([[0, -1j], [1j, 0]])
sz = np.diag([1.0 + 0j, -1.0])


def bloch(rho):
    return np.real([np.trace(rho @ s) for s in (sx, sy, sz)])


print("\nBloch vector in -> out")
for r in ([0, 0, 1], [0, 0, -1], [1, 0, 0], [0, 0.6, 0.8]):
    rho = 0.5 * (np.eye(2) + r[0] * sx + r[1] * sy + r[2] * sz)
    print(f"  {np.round(r, 3)} -> {np.round(bloch(chan(rho)), 4)}")

# physical times and back
tp = times_from_params(prm, t=1.0)
print(f"\nat t = 1: T1 = {tp.T1:.4f}, T2 = {tp.T2:.4f};  round trip ->", params_from_times(tp))

g_star = antideg_threshold(prm.p)
print(f"\nanti-degradable from g = {g_star:.4f} on (p = {prm.p})")
gamma, delta = antidegrading_parameters(prm)
back = antidegrading_map(prm)
comp_chan = joint_complement(prm)
rng = np.random.default_rng(1)
worst = 0.0
for _ in range(20):
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rho = a @ a.conj().T
    rho /= np.trace(rho)
    worst = max(worst, np.abs(back(comp_chan(rho)) - chan(rho)).max())
print(f"gamma = {gamma:.4f}, delta = {delta:.4f}, max |D(F^c(rho)) - F(rho)| = {worst:.1e}")
