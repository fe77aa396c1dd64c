"""
Seeded splitmix64 generator for reproducible test messages

Contract: state starts at the 64-bit seed; each draw adds 0x9E3779B97F4A7C15
to the state and returns the mixed value
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z = z ^ (z >> 31)
all modulo 2^64. A field element is the draw reduced modulo q.
"""

from typing import List

MASK64 = (1 << 64) - 1


class SplitMix64:
    """splitmix64 stream"""

    def __init__(self, seed: int = 0):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        """Draw reduced modulo bound"""
        return self.next_u64() % bound

    def field_elements(self, q: int, count: int) -> List[int]:
        return [self.next_u64() % q for _ in range(count)]

    def nonzero_vector(self, q: int, count: int) -> List[int]:
        """Random vector with at least one nonzero entry"""
        values = self.field_elements(q, count)
        if count and not any(values):
            values[self.below(count)] = 1 + self.below(q - 1)
        return values
