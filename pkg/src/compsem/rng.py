"""Portable seeded PRNG: xorshift64* seeded through splitmix64.

Both algorithms are fixed here so that generated structures and audit
reports are reproducible across platforms and implementations:

* ``splitmix64``: ``z += 0x9E3779B97F4A7C15``; ``z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9``;
  ``z = (z ^ (z >> 27)) * 0x94D049BB133111EB``; ``z ^= z >> 31`` (all mod 2**64).
* ``xorshift64*``: ``x ^= x >> 12``; ``x ^= x << 25``; ``x ^= x >> 27``;
  output ``x * 0x2545F4914F6CDD1D`` (mod 2**64).
* ``below(n)``: rejection sampling on the full 64-bit output, keeping draws
  ``< n * floor(2**64 / n)`` and returning ``draw % n``.
"""

MASK = (1 << 64) - 1


def splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


class XorShift64Star:
    def __init__(self, seed: int):
        state = splitmix64(seed & MASK)
        self.state = state or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & MASK

    def below(self, n: int) -> int:
        """Uniform integer in ``range(n)``."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - (1 << 64) % n
        while True:
            draw = self.next_u64()
            if draw < limit:
                return draw % n

    def coin(self) -> bool:
        return bool(self.next_u64() >> 63)

    def choice(self, seq):
        return seq[self.below(len(seq))]
