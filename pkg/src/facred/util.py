"""Shared helpers: primality, seeded substreams, integer log."""

import math
import random


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all 64-bit inputs."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    n += 1
    while not is_prime(n):
        n += 1
    return n


def primes_in(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p <= hi, ascending."""
    return [p for p in range(max(lo, 2), hi + 1) if is_prime(p)]


def lg(x: float) -> float:
    return math.log2(x)


def ceil_lg(n: int) -> int:
    """ceil(log2 n) for n >= 1."""
    return max(1, (n - 1).bit_length()) if n > 1 else 0


def lg2_desk(n: int) -> int:
    """ceil(lg^2(max(n, 16))), the desk-scale reading of lg^2 n factors."""
    return math.ceil(math.log2(max(n, 16)) ** 2)


def substream(seed, *names) -> random.Random:
    """Deterministic named RNG substream derived from one master seed."""
    r = random.Random()
    r.seed(f"{seed}::" + "/".join(str(x) for x in names), version=2)
    return r


def inv_mod(a: int, m: int) -> int:
    return pow(a, -1, m)
