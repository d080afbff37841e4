"""Input generators shared by several test modules."""

import numpy as np

from qnull.spaces import RP2, S2, SampledLoop, canonical_rp2, random_points


def random_rp2_loop(rng, N=256, modes=3, amp=0.6):
    """A smooth based loop in RP2 built from a random Fourier curve on S2."""
    s = np.arange(N) / N
    v = np.zeros((N, 3))
    v[:, 0] = 1.0
    for k in range(1, modes + 1):
        c = rng.normal(size=(2, 3)) * amp / k
        v += (c[0] * (np.cos(2 * np.pi * k * s)[:, None] - 1)
              + c[1] * np.sin(2 * np.pi * k * s)[:, None])
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return SampledLoop(RP2, canonical_rp2(v))


def random_sphere(rng, n):
    return random_points(S2, n, rng)
