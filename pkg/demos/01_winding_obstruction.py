"""
The determinant winding obstruction
===================================

Embed the identity loop of the circle as scalar matrices s -> s I_n.  The
determinant is s^n, which winds n times, so no disk of unitaries can fill
the loop in.  Claimed fillings are rejected ring by ring.
"""

import numpy as np

from qnull.obstruction import WindingError, canonical_obstruction, obstruction_trace
from qnull.spaces import circle_loop
from qnull.verifier import fabricated_certificates, verify

# the winding is exactly n for every matrix size we support
for n in range(1, 9):
    print(f"n = {n}:  winding {canonical_obstruction(n, 256)}")

# the phase trace of det(s I_2) climbs by two full turns
w, dets = obstruction_trace(2, 256)
phase = np.unwrap(np.angle(dets))
print(f"\nphase runs from {phase[0]:.3f} to {phase[-1]:.3f} rad, winding {w}")

# too few samples: the winding is refused, never guessed
try:
    obstruction_trace(3, 8)
except WindingError as exc:
    print(f"coarse sampling refused: {exc}")

# three disks that pretend to fill in the embedded identity loop at n = 2
print()
for name, cert in fabricated_certificates(circle_loop(256)).items():
    rep = verify(cert)
    print(f"{name:<18} {rep.verdict}  boundary winding {rep.ring_windings[-1]}")
    print("    " + rep.failures[0])
