"""One round of the modified recurrence protocol, then hashing.

Two channel uses carry the encoded pair; keeping only the outcome with no
decay leaves a dephased Bell state.  The kept fraction and the hashing yield
are printed for a few points, along with what happens when the input is not
balanced.
"""

import numpy as np

from dampdeph import ChannelParams, ProtocolConfig, recurrence_step, yield_rate
from dampdeph.entropic import binary_entropy

np.set_printoptions(precision=4, suppress=True)

for p, g in [(0.0, 0.3), (0.15, 0.2), (0.15, 0.5), (0.3, 0.8)]:
    out = recurrence_step(ProtocolConfig(ChannelParams(p, g)))
    print(f"p={p:.2f} g={g:.2f}: kept {out.success_prob:.3f}, q = {out.q:.4f}, "
          f"Bell fidelity {out.bell_fidelity:.4f}, yield {yield_rate(ChannelParams(p, g)):.5f}")

# the yield is half the kept fraction times the hashing rate of the kept pair
prm = ChannelParams(0.15, 0.5)
out = recurrence_step(ProtocolConfig(prm))
print("\nhashing check:", 0.5 * out.success_prob * (1 - binary_entropy(out.q / 2)), "vs", yield_rate(prm))

# unbalanced inputs: same kept fraction, but the kept pair is no longer maximally entangled
print("\ninput weight s, kept fraction, kept state diagonal")
for s in (0.1, 0.3, 0.5):
    out = recurrence_step(ProtocolConfig(prm, s))
    print(f"  s={s}: {out.success_prob:.3f}  {np.real(np.diag(out.post_state))}")

print("\nprojector and circuit simulations agree:",
      np.allclose(recurrence_step(ProtocolConfig(prm, 0.3)).post_state,
                  recurrence_step(ProtocolConfig(prm, 0.3), method="circuit").post_state))
