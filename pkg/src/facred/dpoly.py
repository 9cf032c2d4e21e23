"""Strongly d-partite polynomials over prime fields and their bit-slice
decomposition.

A polynomial is strongly d-partite when every monomial takes exactly one
variable from each of d variable partitions. Evaluating such a polynomial
on t-bit integer inputs splits into t^d evaluations on 0/1 inputs: slice
(r_1..r_d) assigns every variable in partition l its r_l-th bit, and the
slice answers recombine with weights 2^(r_1+..+r_d).
"""

from dataclasses import dataclass, field
from itertools import product

from .errors import ArityMismatch, InvalidParameters, MonomialCapExceeded, SliceBudgetExceeded
from .field import FieldElem, as_residue

DEFAULT_SLICE_BUDGET = 10**7
DEGREE_CAP = 24


@dataclass(frozen=True)
class PartitePolynomial:
    n_vars: int
    d: int
    partition: tuple[int, ...]          # variable id -> partition id in [0, d)
    monomials: dict                     # tuple of d var ids (slot l from partition l) -> multiplicity
    p: int

    def __post_init__(self):
        if self.d < 1 or self.d > DEGREE_CAP:
            raise InvalidParameters(f"degree {self.d} outside [1, {DEGREE_CAP}]")
        if len(self.partition) != self.n_vars:
            raise InvalidParameters("partition map must cover every variable")
        if len(self.monomials) > self.n_vars**self.d:
            raise MonomialCapExceeded(f"{len(self.monomials)} monomials")

    def vars_of_partition(self, ell: int) -> list[int]:
        return [v for v in range(self.n_vars) if self.partition[v] == ell]


@dataclass(frozen=True)
class SliceQuery:
    slice_index: tuple[int, ...]
    assignment: int          # bit v of this mask is the 0/1 value of variable v
    weight: int              # 2^(r_1+..+r_d) mod p
    n_vars: int = field(compare=False, default=0)

    def assignment_tuple(self) -> tuple[int, ...]:
        return tuple((self.assignment >> v) & 1 for v in range(self.n_vars))


def evaluate(poly: PartitePolynomial, x) -> FieldElem:
    """Exact sum over monomials of products, mod p."""
    if isinstance(x, int):
        vals = [(x >> v) & 1 for v in range(poly.n_vars)]
    else:
        vals = [as_residue(v, poly.p) for v in x]
        if len(vals) != poly.n_vars:
            raise ArityMismatch(f"{len(vals)} values for {poly.n_vars} variables")
    p = poly.p
    total = 0
    for mono, mult in poly.monomials.items():
        term = mult
        for v in mono:
            term *= vals[v]
            if term == 0:
                break
        total += term
    return FieldElem(total % p, p)


def verify_partite(poly: PartitePolynomial) -> str | None:
    """None when strongly d-partite, else a report naming the first bad monomial."""
    for idx, mono in enumerate(poly.monomials):
        if len(mono) != poly.d:
            return f"monomial {idx} has degree {len(mono)}, expected {poly.d}"
        if len(set(mono)) != len(mono):
            return f"monomial {idx} repeats a variable"
        parts = [poly.partition[v] for v in mono]
        if sorted(parts) != list(range(poly.d)):
            return f"monomial {idx} uses partitions {sorted(parts)}"
    return None


def bit_slice_queries(lifted, poly: PartitePolynomial, t: int,
                      budget: int = DEFAULT_SLICE_BUDGET):
    """Lazily yield the t^d slice queries for a vector of t-bit integers.

    Slice (r_1..r_d): every variable in partition l gets the r_l-th bit of
    its lifted value; weight = 2^(r_1+..+r_d) mod p.
    """
    if len(lifted) != poly.n_vars:
        raise ArityMismatch(f"{len(lifted)} lifted values for {poly.n_vars} variables")
    if t < 1:
        raise InvalidParameters(f"t={t}")
    if t**poly.d > budget:
        raise SliceBudgetExceeded(f"t^d = {t**poly.d} > {budget}")
    p = poly.p
    # bit column r of partition l, packed as a variable-indexed mask
    columns = []
    for ell in range(poly.d):
        vs = poly.vars_of_partition(ell)
        col = []
        for r in range(t):
            mask = 0
            for v in vs:
                if (lifted[v] >> r) & 1:
                    mask |= 1 << v
            col.append(mask)
        columns.append(col)
    pow2 = [pow(2, r, p) for r in range(t)]
    for idx in product(range(t), repeat=poly.d):
        mask = 0
        w = 1
        for ell, r in enumerate(idx):
            mask |= columns[ell][r]
            w = w * pow2[r] % p
        yield SliceQuery(idx, mask, w, poly.n_vars)


def recombine(values, queries, p: int) -> FieldElem:
    """Weighted sum of slice answers: sum_j weight_j * value_j mod p."""
    values = list(values)
    queries = list(queries)
    if len(values) != len(queries):
        raise ArityMismatch(f"{len(values)} values for {len(queries)} queries")
    total = 0
    for v, q in zip(values, queries):
        total += q.weight * as_residue(v, p)
    return FieldElem(total % p, p)
