"""Counting orthogonal pairs over the Bernoulli average case.

Long vectors make orthogonal pairs vanishingly unlikely, so above the
threshold dimension the count is declared zero outright; below it the
lists are deduplicated and counted exactly with multiplicity weights.
"""

import math
from dataclasses import dataclass
from collections import Counter

from .errors import InvalidBias, InvalidParameters
from .util import substream


@dataclass(frozen=True)
class OvInstance:
    d: int
    left: tuple[int, ...]     # vectors as d-bit ints
    right: tuple[int, ...]
    mu: float = 0.5           # generation bias, metadata only

    def __post_init__(self):
        lim = 1 << self.d
        if any(not 0 <= v < lim for v in self.left + self.right):
            raise InvalidParameters(f"vector outside {self.d} bits")

    @property
    def n(self) -> int:
        return max(len(self.left), len(self.right))


def gen_ov(n: int, d: int, mu: float, seed) -> OvInstance:
    if not 0 < mu < 1:
        raise InvalidBias(f"mu={mu}")
    rng = substream(seed, "ov", n, d, mu)

    def vec():
        if mu == 0.5:
            return rng.getrandbits(d)
        return sum(1 << i for i in range(d) if rng.random() < mu)

    return OvInstance(d, tuple(vec() for _ in range(n)), tuple(vec() for _ in range(n)), mu)


def threshold_dimension(n: int, mu: float) -> float:
    """Dimension above which the count is declared zero: 2 lg(e) lg(n) / mu^4."""
    return 2 * math.log2(math.e) * math.log2(max(n, 2)) / mu**4


def brute_count_ov(inst: OvInstance) -> int:
    return sum(1 for a in inst.left for b in inst.right if a & b == 0)


def count_ov_avg(inst: OvInstance) -> int:
    """Zero above the threshold dimension; exact deduplicated pair count
    below it (each distinct vector weighted by its number of occurrences)."""
    if inst.d > threshold_dimension(inst.n, inst.mu):
        return 0
    left = Counter(inst.left)
    right = Counter(inst.right)
    return sum(ca * cb for a, ca in left.items() for b, cb in right.items() if a & b == 0)
