"""Reduced words in the free group on a, b (upper case is the inverse).

Used to certify, exactly, that a wedge loop is not nullhomotopic in the
ordinary sense: its word is read off from the branch excursions and then
freely reduced.
"""

from __future__ import annotations

import numpy as np

from .spaces import WEDGE, SampledLoop


def inverse_letter(c: str) -> str:
    return c.lower() if c.isupper() else c.upper()


def reduce_word(word: str) -> str:
    out: list[str] = []
    for c in word:
        if out and out[-1] == inverse_letter(c):
            out.pop()
        else:
            out.append(c)
    return "".join(out)


def inverse(word: str) -> str:
    return "".join(inverse_letter(c) for c in reversed(word))


def power(letter: str, k: int) -> str:
    return letter * k if k >= 0 else inverse_letter(letter) * (-k)


def commutator(u: str, v: str) -> str:
    """u v u^-1 v^-1, reduced."""
    return reduce_word(u + v + inverse(u) + inverse(v))


def loop_word(loop: SampledLoop) -> str:
    """Reduced word of a closed wedge loop based at the wedge point.

    Consecutive samples are joined by the shortest path in the wedge, the
    same convention :meth:`SampledLoop.at` uses.
    """
    if loop.space != WEDGE:
        raise ValueError("loop_word needs a wedge loop")
    ext = loop.extended
    letters: list[str] = []
    # track the net angle on each arm, emitting a letter whenever an arm
    # completes a full turn back to the wedge point
    acc = {"a": 0.0, "b": 0.0}
    arms = (("a", slice(0, 2)), ("b", slice(2, 4)))
    for p, q in zip(ext[:-1], ext[1:]):
        # the arm p sits on returns to the wedge point before the other leaves it
        order = arms if abs(p[0] - 1.0) + abs(p[1]) > 1e-12 else arms[::-1]
        for letter, sl in order:
            ang_p = np.arctan2(p[sl][1], p[sl][0])
            ang_q = np.arctan2(q[sl][1], q[sl][0])
            step = (ang_q - ang_p + np.pi) % (2 * np.pi) - np.pi
            if step == 0.0:
                continue
            acc[letter] += step
            while acc[letter] >= 2 * np.pi - 1e-9:
                letters.append(letter)
                acc[letter] -= 2 * np.pi
            while acc[letter] <= -2 * np.pi + 1e-9:
                letters.append(letter.upper())
                acc[letter] += 2 * np.pi
    return reduce_word("".join(letters))
