"""SplitMix64 pseudo-random generator.

Chosen for reproducibility across languages, not statistical strength.  The
generator state is a 64-bit integer; each draw advances it by the golden-ratio
increment ``0x9E3779B97F4A7C15`` and returns the finalized (mixed) state::

    state = (state + GAMMA) mod 2**64
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9   mod 2**64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB   mod 2**64
    return z ^ (z >> 31)

Because the state advances by a constant, the n-th output is
``mix(seed + n * GAMMA)``, which lets arrays of draws be produced with numpy.

Derived values:

* uniform double in [0, 1): ``(u64 >> 11) * 2**-53``
* integer in [lo, hi]: ``lo + u64 % (hi - lo + 1)``
* standard normals: Box-Muller on consecutive uniform pairs ``(a, b)``,
  ``r = sqrt(-2 ln(1 - a))``, yielding ``r cos(2 pi b)`` then ``r sin(2 pi b)``
* child streams: ``derive_seed(seed, stream) = mix(seed ^ mix(stream + GAMMA))``
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def derive_seed(seed: int, stream: int) -> int:
    """Seed of an independent child stream, e.g. one per image index."""
    return mix64((seed & MASK64) ^ mix64(stream + GAMMA))


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        return mix64(self.state)

    def u64(self, n: int) -> np.ndarray:
        """The next ``n`` outputs as a uint64 array."""
        steps = np.arange(1, n + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            states = np.uint64(self.state) + steps * np.uint64(GAMMA)
            out = _mix64_array(states)
        self.state = (self.state + n * GAMMA) & MASK64
        return out

    def uniform(self, n: int | None = None):
        if n is None:
            return (self.next_u64() >> 11) * 2.0 ** -53
        return (self.u64(n) >> np.uint64(11)).astype(np.float64) * 2.0 ** -53

    def integer(self, lo: int, hi: int) -> int:
        """Integer in the closed range [lo, hi]."""
        if hi < lo:
            raise ValueError(f"empty range [{lo}, {hi}]")
        return lo + self.next_u64() % (hi - lo + 1)

    def normal(self, n: int) -> np.ndarray:
        pairs = (n + 1) // 2
        u = self.uniform(2 * pairs).reshape(pairs, 2)
        r = np.sqrt(-2.0 * np.log1p(-u[:, 0]))
        theta = 2.0 * np.pi * u[:, 1]
        z = np.empty((pairs, 2))
        z[:, 0] = r * np.cos(theta)
        z[:, 1] = r * np.sin(theta)
        return z.reshape(-1)[:n]

    def shuffle(self, items: list) -> list:
        """Fisher-Yates shuffle into a new list, drawing j in [0, i] for i from the end."""
        out = list(items)
        for i in range(len(out) - 1, 0, -1):
            j = self.integer(0, i)
            out[i], out[j] = out[j], out[i]
        return out
