"""
Paired loops have nothing to obstruct
=====================================

The loop s -> diag(s, conj(s)) has determinant 1, so the winding obstruction
is silent.  Conjugating by a quarter-turn rotation gives an explicit disk of
unitaries that fills it in.
"""

import numpy as np

from qnull.constructor import pairing_nullhomotopy_demo
from qnull.cxmat import det
from qnull.obstruction import winding_number

grid = pairing_nullhomotopy_demo(N=64, R=64)
w = grid.values

defect = np.max(np.abs(np.conj(np.swapaxes(w, -1, -2)) @ w - np.eye(2)))
print(f"grid {grid.R + 1} rings x {grid.N} samples, unitarity defect {defect:.1e}")
print("centre ring is the identity:", np.allclose(w[0], np.eye(2)))
print("boundary at s = i:\n", w[-1, 16].round(12))

windings = [winding_number(det(w[i])) for i in range(grid.R + 1)]
print("ring windings:", sorted(set(windings)))
print("largest |det - 1|:", f"{np.max(np.abs(det(w) - 1)):.1e}")
