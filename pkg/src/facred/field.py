"""Prime-field elements, prime-basis selection, and CRT reconstruction.

The basis holds enough small distinct primes that their product covers the
output range of a counting problem; per-prime residues are recombined with
the Chinese Remainder Theorem. All products and reconstructed values are
arbitrary-precision ints; residues fit machine words.
"""

from dataclasses import dataclass
from math import gcd, prod

from .errors import CrtModuliNotCoprime, InvalidParameters
from .util import ceil_lg, primes_in


@dataclass(frozen=True)
class FieldElem:
    value: int
    p: int

    def __post_init__(self):
        if self.p < 2:
            raise InvalidParameters(f"modulus {self.p} < 2")
        if not 0 <= self.value < self.p:
            raise InvalidParameters(f"value {self.value} outside [0, {self.p})")


def as_residue(x, p: int) -> int:
    """Coerce an int or FieldElem to a canonical residue mod p."""
    if isinstance(x, FieldElem):
        if x.p != p:
            raise InvalidParameters(f"element mod {x.p} used in F_{p}")
        return x.value
    return x % p


@dataclass(frozen=True)
class PrimeBasis:
    primes: tuple[int, ...]
    product: int
    c: int
    n: int  # instance size the basis was built for

    @property
    def s(self) -> int:
        return len(self.primes)


def select_primes(n: int, c: int, min_prime: int = 0) -> PrimeBasis:
    """Pick the smallest primes in a window starting near lg n whose product
    reaches n^(2c).

    The window is floored at [5, 64] and widened geometrically until the
    product target is met. ``min_prime`` raises the window start (the
    worst-case-to-average-case pipeline needs every prime to exceed 12d).
    """
    if n < 2 or c < 1:
        raise InvalidParameters(f"select_primes(n={n}, c={c})")
    target = n ** (2 * c)
    lo = max(5, ceil_lg(n), min_prime)
    hi = max(64, 2 * lo)
    chosen: list[int] = []
    product = 1
    while True:
        for p in primes_in(lo, hi):
            if p in chosen:
                continue
            chosen.append(p)
            product *= p
            if product >= target:
                return PrimeBasis(tuple(chosen), product, c, n)
        lo, hi = hi + 1, hi * 2


def crt_reconstruct(residues) -> int:
    """Unique x in [0, prod(p_i) - 1] with x = r_i mod p_i for all i."""
    elems = list(residues)
    moduli = [e.p if isinstance(e, FieldElem) else e[1] for e in elems]
    values = [e.value if isinstance(e, FieldElem) else e[0] for e in elems]
    for i in range(len(moduli)):
        for j in range(i + 1, len(moduli)):
            if gcd(moduli[i], moduli[j]) != 1:
                raise CrtModuliNotCoprime(f"gcd({moduli[i]}, {moduli[j]}) > 1")
    m = prod(moduli)
    x = 0
    for v, p in zip(values, moduli):
        others = m // p
        x = (x + v * others * pow(others, -1, p)) % m
    return x
