"""Portable seeded randomness built on SplitMix64.

Every random decision in the package goes through :class:`SplitMix64`, so a
given seed produces the same stream on any platform or language.

State transition and output (all arithmetic modulo 2**64)::

    state += 0x9E3779B97F4A7C15
    z = state
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    return z ^ (z >> 31)

Derived quantities:

* ``below(n)``: draw ``r`` until ``r < 2**64 - (2**64 % n)``, return ``r % n``.
* ``random()``: ``(next() >> 11) * 2**-53``, uniform on [0, 1).
* ``normal()``: Box-Muller with ``u1 = 1 - random()``, ``u2 = random()``,
  returning ``sqrt(-2 ln u1) * cos(2 pi u2)`` (the sine partner is discarded).
* ``shuffle``: Fisher-Yates from the last position down, ``j = below(i + 1)``.
* ``derive_seed(seed, i)``: the i-th (0-based) output of ``SplitMix64(seed)``.
"""

import math

from .errors import ConfigError

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
MAX_SEED = MASK64


def check_seed(seed):
    if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed <= MAX_SEED:
        raise ConfigError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return seed


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed):
        self.state = check_seed(seed)

    def next(self):
        self.state = (self.state + GAMMA) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n):
        """Unbiased integer in [0, n)."""
        if n < 1:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next()
            if r < limit:
                return r % n

    def random(self):
        return (self.next() >> 11) * (1.0 / (1 << 53))

    def normal(self, mean=0.0, std=1.0):
        u1 = 1.0 - self.random()
        u2 = self.random()
        return mean + std * math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def shuffle(self, items):
        """Shuffle a list in place and return it."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]
        return items

    def choices(self, n, k):
        """k indices drawn uniformly with replacement from range(n)."""
        return [self.below(n) for _ in range(k)]


def derive_seed(seed, i):
    gen = SplitMix64(seed)
    for _ in range(i):
        gen.next()
    return gen.next()


def derive_seeds(seed, count):
    gen = SplitMix64(seed)
    return [gen.next() for _ in range(count)]
