"""Reproducible random streams.

Every randomized quantity in this package is a pure function of
(inputs, seed, trial index).  Trial ``i`` of a run with master seed ``s``
uses a numpy PCG64 generator whose 128-bit state is filled from four
splitmix64 outputs of ``mix(s) XOR mix(i+1)``; nothing is drawn from a
shared stream, so results do not depend on worker count or scheduling.
"""
from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

# fixed odd increment for the PCG64 LCG; any odd 128-bit constant works,
# it only has to be the same for every trial
_PCG_INC = (0x5851F42D4C957F2D << 64) | 0x14057B7EF767814F


def splitmix64(z: int) -> int:
    """One output of the splitmix64 generator seeded at ``z``."""
    z = (z + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def substream_key(seed: int, index: int) -> int:
    """64-bit key for substream ``index`` of ``seed``."""
    return splitmix64(splitmix64(seed & _MASK64) ^ splitmix64((index + 1) & _MASK64))


def _splitmix_run(z: int, count: int) -> list[int]:
    out = []
    for _ in range(count):
        z = (z + _GOLDEN) & _MASK64
        w = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        w = ((w ^ (w >> 27)) * 0x94D049BB133111EB) & _MASK64
        out.append((w ^ (w >> 31)) & _MASK64)
    return out


def _pcg_state(seed: int, index: int) -> dict:
    key = substream_key(seed, index)
    a, b = _splitmix_run(key, 2)
    return {
        "bit_generator": "PCG64",
        "state": {"state": (a << 64) | b, "inc": _PCG_INC},
        "has_uint32": 0,
        "uinteger": 0,
    }


def trial_generator(seed: int, index: int) -> np.random.Generator:
    """Independent generator for one trial."""
    bg = np.random.PCG64()
    bg.state = _pcg_state(seed, index)
    return np.random.Generator(bg)


class TrialStream:
    """Reusable bit-generator shell for tight trial loops.

    generator(seed, i) re-seats the same PCG64 at trial i's substream
    state and hands back the shared Generator; the stream it produces is
    identical to trial_generator(seed, i)'s.  One TrialStream per worker,
    never shared across threads.
    """

    __slots__ = ("_bg", "_gen")

    def __init__(self):
        self._bg = np.random.PCG64()
        self._gen = np.random.Generator(self._bg)

    def generator(self, seed: int, index: int) -> np.random.Generator:
        self._bg.state = _pcg_state(seed, index)
        return self._gen
