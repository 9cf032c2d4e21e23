"""Lift field residues to t-bit integers with near-Bernoulli(mu) bits.

Rejection sampling: draw y with t independent Ber(mu) bits until
y = x (mod p). The congruence is exact by construction; closeness of the
bit distribution to iid Ber(mu)^t is a statistical contract checked
empirically by the test suite, not enforced at runtime.
"""

import math
from dataclasses import dataclass

from .errors import InvalidBias, InvalidParameters, SamplerTimeout
from .field import FieldElem

DEFAULT_C = 4


def choose_t(p: int, mu: float, n: int, C: int = DEFAULT_C) -> int:
    """t = ceil(C * mu^-1 * (1-mu)^-1 * (lg p + 6 lg n) * lg p)."""
    if not 0 < mu < 1:
        raise InvalidBias(f"mu={mu}")
    if p < 2 or n < 2:
        raise InvalidParameters(f"choose_t(p={p}, n={n})")
    lp = math.log2(p)
    return math.ceil(C / (mu * (1 - mu)) * (lp + 6 * math.log2(n)) * lp)


@dataclass(frozen=True)
class SamplerConfig:
    mu: float
    t: int
    epsilon: float
    C: int
    rejection_cap: int

    def __post_init__(self):
        if not 0 < self.mu < 1:
            raise InvalidBias(f"mu={self.mu}")
        if self.t < 1 or self.rejection_cap < 1:
            raise InvalidParameters("t and rejection_cap must be positive")

    @classmethod
    def for_prime(cls, p: int, n: int, mu: float = 0.5, C: int = DEFAULT_C,
                  t: int | None = None, epsilon: float | None = None) -> "SamplerConfig":
        """Config for lifting residues mod p at instance size n.

        epsilon defaults to 1/n^3; t defaults to the choose_t formula value.
        An explicit smaller t (at least ceil(lg p), so every residue stays
        reachable) trades the provable closeness bound for speed.
        """
        if epsilon is None:
            epsilon = 1.0 / n**3
        if not 0 < epsilon < 1 / p:
            raise InvalidParameters(f"epsilon={epsilon} outside (0, 1/{p})")
        if t is None:
            t = choose_t(p, mu, n, C)
        if t < max(1, (p - 1).bit_length()):
            raise InvalidParameters(f"t={t} cannot represent residues mod {p}")
        cap = math.ceil(t / (1 / p - epsilon) * math.log2(max(n, 2)) ** 3)
        return cls(mu=mu, t=t, epsilon=epsilon, C=C, rejection_cap=cap)


def _draw(rng, mu: float, t: int) -> int:
    if mu == 0.5:
        return rng.getrandbits(t)
    y = 0
    for i in range(t):
        if rng.random() < mu:
            y |= 1 << i
    return y


def lift(x, cfg: SamplerConfig, rng) -> int:
    """t-bit integer congruent to x mod p, bits near-iid Ber(mu).

    Raises SamplerTimeout after rejection_cap consecutive rejections (the
    procedure halts rather than looping forever).
    """
    if isinstance(x, FieldElem):
        value, p = x.value, x.p
    else:
        value, p = x
    for _ in range(cfg.rejection_cap):
        y = _draw(rng, cfg.mu, cfg.t)
        if y % p == value:
            return y
    raise SamplerTimeout(f"{cfg.rejection_cap} consecutive rejections (p={p})")


def lift_vector(xs, cfg: SamplerConfig, rng) -> list[int]:
    """Independent per-coordinate lifts; total-variation slack adds up."""
    return [lift(x, cfg, rng) for x in xs]


def tv_from_counts(counts, probs) -> float:
    """Plug-in total variation between an empirical histogram and exact
    probabilities: half the L1 gap of frequencies."""
    n = sum(counts)
    return 0.5 * sum(abs(c / n - q) for c, q in zip(counts, probs))


def tv_noise_floor(probs, n: int) -> float:
    """Expected plug-in TV of a perfect sampler: the estimator is biased
    upward by roughly sum_c sqrt(q_c(1-q_c) / (2 pi n)) for n samples."""
    return 0.5 * sum(math.sqrt(2 * q * (1 - q) / (math.pi * n)) for q in probs)


def tv_debiased(counts, probs) -> float:
    """Plug-in TV minus its perfect-sampler noise floor, clamped at 0."""
    n = sum(counts)
    return max(0.0, tv_from_counts(counts, probs) - tv_noise_floor(probs, n))
