"""Worst-case to average-case pipeline: CRT split over small primes,
per-prime self-corrected evaluation through an average-case 0/1-input
solver, plurality amplification, CRT recombination.

The average-case solver only ever sees 0/1 assignments; the pipeline turns
one worst-case evaluation into many average-looking ones via the sampler
lift and the bit-slice decomposition, and survives a sparse fraction of
wrong solver answers via the curve decoder.
"""

import math
from dataclasses import dataclass, field

from .corrector import CorrectionParams, amplify, correct
from .dpoly import PartitePolynomial, bit_slice_queries, evaluate, recombine, verify_partite
from .errors import InvalidParameters
from .field import FieldElem, crt_reconstruct, select_primes
from .sampler import SamplerConfig, lift_vector
from .util import substream


@dataclass(frozen=True)
class GoodPolyProblem:
    n: int                      # input bit-length
    c: int                      # output lies in [0, n^c]
    exact_solver: object        # callable: 0/1 assignment (int mask or sequence) -> int
    poly_builder: object        # callable: prime p -> PartitePolynomial over F_p
    d: int                      # shared degree of every per-prime polynomial
    mu: float = 0.5


@dataclass
class AvgSolver:
    """The object under reduction: answers 0/1 inputs, possibly wrongly."""
    answer: object
    error_rate: float = 0.0
    calls: int = field(default=0, compare=False)

    def __call__(self, assignment) -> int:
        self.calls += 1
        return self.answer(assignment)


def eval_via_avg(x, f_i: PartitePolynomial, A, cfg: SamplerConfig, rng,
                 verify: bool = True) -> FieldElem:
    """f_i(x) computed through A: lift x to t-bit integers, query A on every
    bit-slice assignment, reduce answers mod p, recombine.

    Exact whenever A answered every slice correctly; a wrong slice answer
    shifts the output by that slice's weight. ``verify=False`` skips the
    partiteness re-check when the caller has already verified the polynomial.
    """
    if verify:
        report = verify_partite(f_i)
        if report is not None:
            raise InvalidParameters(f"polynomial not strongly d-partite: {report}")
    p = f_i.p
    lifted = lift_vector([(v % p, p) for v in x], cfg, rng)
    queries = list(bit_slice_queries(lifted, f_i, cfg.t))
    answers = [A(q.assignment) % p for q in queries]
    return recombine(answers, queries, p)


def default_reps(n: int) -> int:
    """Desk-scale repetition count for the per-prime plurality vote."""
    return max(3, min(9, math.ceil(math.log2(max(n, 16)))))


def solve_worst_case(I, gpp: GoodPolyProblem, A, rng=None, seed=0,
                     reps: int | None = None, t: int | None = None,
                     m: int | None = None) -> int:
    """Exact output of the counting problem on a worst-case 0/1 input, using
    only the average-case solver A.

    Builds the prime basis (every prime above 12d so the corrector's curve
    fits), runs corrector-wrapped eval_via_avg per prime, amplifies by
    plurality, and CRT-reconstructs. With an error-free A the result is
    deterministically correct for any seed.
    """
    if rng is None:
        rng = substream(seed, "wc2ac")
    n, c, d = gpp.n, gpp.c, gpp.d
    if isinstance(I, int):
        x01 = [(I >> i) & 1 for i in range(n)]
    else:
        x01 = list(I)
        if len(x01) != n:
            raise InvalidParameters(f"input length {len(x01)}, expected {n}")
    if reps is None:
        reps = default_reps(n)
    m_req = m if m is not None else 4 * d + 3
    basis = select_primes(n, c, min_prime=max(12 * d + 1, m_req + 1))
    residues = []
    for p in basis.primes:
        f_i = gpp.poly_builder(p)
        if f_i.d != d:
            raise InvalidParameters(f"builder degree {f_i.d} != declared {d}")
        report = verify_partite(f_i)
        if report is not None:
            raise InvalidParameters(f"polynomial not strongly d-partite: {report}")
        t_p = t if t is not None else max(1, (p - 1).bit_length())
        if t_p**d > 10**7:
            raise InvalidParameters(f"projected t^d = {t_p**d} queries; refusing")
        cfg = SamplerConfig.for_prime(p, n, mu=gpp.mu, t=t_p)
        params = CorrectionParams(d=d, p=p, m=m_req)

        def one_round(r, _f=f_i, _cfg=cfg, _params=params):
            return correct(x01, lambda pt: eval_via_avg(pt, _f, A, _cfg, r, verify=False).value,
                           _params, r)

        residues.append(FieldElem(amplify(one_round, reps, rng) % p, p))
    return crt_reconstruct(residues)


def query_budget(basis_size: int, reps: int, m: int, t: int, d: int) -> int:
    """Upper bound on solver calls per solve: s * reps * m * t^d."""
    return basis_size * reps * m * t**d


def build_fkov2_problem(n: int, g: int, b: int):
    """GoodPolyProblem for counting orthogonal pairs of factored vectors
    (k = 2), exposing the exact brute-force solver as ground truth."""
    from . import factored as fa

    k = 2
    pred = fa.OV(k)
    nbits = k * n * g * (1 << b)
    max_count = n**k * (1 << b) ** (2 * g)
    c = 1
    while nbits**c < max_count:
        c += 1
    shape_cache: dict[int, PartitePolynomial] = {}

    def poly_builder(p: int) -> PartitePolynomial:
        if p not in shape_cache:
            base = next(iter(shape_cache.values()), None)
            if base is None:
                shape_cache[p] = fa.build_f_ckfunc(n, k, g, b, pred, p)
            else:
                shape_cache[p] = PartitePolynomial(base.n_vars, base.d,
                                                   base.partition, base.monomials, p)
        return shape_cache[p]

    def exact_solver(assignment) -> int:
        inst = fa.fkf_from_indicator(assignment, n, k, g, b, pred)
        return fa.count_fkf(inst)

    return GoodPolyProblem(n=nbits, c=c, exact_solver=exact_solver,
                           poly_builder=poly_builder, d=k * g, mu=0.5)


def fast_fkov2_solver(n: int, g: int, b: int):
    """Tuned exact solver for k=2 factored OV indicator assignments.

    Same contract as build_fkov2_problem's exact_solver, an order of
    magnitude faster; the two are cross-checked in tests.
    """
    if b > 3 or g < 1:
        raise InvalidParameters("fast solver tabulates 2^(2^b) masks; b <= 3 only")
    sb = 1 << b
    nmask = (1 << (sb * g)) - 1
    orth = [[0] * (1 << sb) for _ in range(1 << sb)]
    for m1 in range(1 << sb):
        members1 = [s for s in range(sb) if (m1 >> s) & 1]
        for m2 in range(1 << sb):
            cnt = 0
            for s1 in members1:
                for s2 in range(sb):
                    if (m2 >> s2) & 1 and (s1 & s2) == 0:
                        cnt += 1
            orth[m1][m2] = cnt
    offs0 = tuple(((0 * n + v) * g) * sb for v in range(n))
    offs1 = tuple(((1 * n + v) * g) * sb for v in range(n))
    gmask = (1 << sb) - 1

    def prod_for(k0: int, k1: int) -> int:
        prod = 1
        for _ in range(g):
            prod *= orth[k0 & gmask][k1 & gmask]
            if prod == 0:
                return 0
            k0 >>= sb
            k1 >>= sb
        return prod

    if sb * g <= 10:
        # small enough to flatten both groups into one product table
        table = [[prod_for(k0, k1) for k1 in range(nmask + 1)] for k0 in range(nmask + 1)]

        def solver(assignment: int) -> int:
            keys1 = [(assignment >> off) & nmask for off in offs1]
            total = 0
            for off in offs0:
                row = table[(assignment >> off) & nmask]
                for k1 in keys1:
                    total += row[k1]
            return total

        return solver

    def solver(assignment: int) -> int:
        keys1 = [(assignment >> off) & nmask for off in offs1]
        total = 0
        for off in offs0:
            k0 = (assignment >> off) & nmask
            for k1 in keys1:
                total += prod_for(k0, k1)
        return total

    return solver
