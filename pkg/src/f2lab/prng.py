"""Seedable, splittable counter-based pseudo-random generator.

SplitMix64 over a counter: output i is a fixed mix of (seed, i), so
streams can be split deterministically for sharded sampling and results
are reproducible from (seed, worker count) alone.  Streams are stable
within this implementation; no cross-implementation bit-equality is
promised, which is why reports carry seeds rather than expected values.
"""

from __future__ import annotations

_M64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def _mix(z: int) -> int:
    z &= _M64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return z ^ (z >> 31)


class Prng:
    """Counter-based generator; `split` derives independent substreams."""

    def __init__(self, seed: int):
        self.seed = seed
        self._base = _mix(seed & _M64) ^ _mix((seed >> 64) & _M64)
        self._i = 0

    def u64(self) -> int:
        self._i += 1
        return _mix(self._base + self._i * _GOLDEN)

    def bits(self, n: int) -> int:
        """Uniform n-bit integer."""
        out = 0
        got = 0
        while got < n:
            out |= self.u64() << got
            got += 64
        return out & ((1 << n) - 1)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n)."""
        if n <= 0:
            raise ValueError("below() needs n >= 1")
        nbits = (n - 1).bit_length()
        while True:
            x = self.bits(nbits) if nbits else 0
            if x < n:
                return x

    def float01(self) -> float:
        return self.u64() / float(1 << 64)

    def split(self, tag: int) -> "Prng":
        """Independent substream identified by (seed, tag)."""
        child = Prng(0)
        child.seed = self.seed
        child._base = _mix(self._base ^ _mix(tag * _GOLDEN + 1))
        child._i = 0
        return child
