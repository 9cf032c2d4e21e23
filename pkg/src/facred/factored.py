"""Factored vectors, the per-group accepted-tuple count and its product
across groups, brute-force counting for factored list and clique problems,
average-case generators, and the good-polynomial builders.

A (g,b)-factored vector is g sets of b-bit strings; a single vector with
sets of size up to 2^b stands for up to 2^(bg) concatenated plain vectors.
Group sets are stored as sorted tuples of ints (a b-bit string is the int
with the leftmost character carrying the highest-order bit).
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .dpoly import PartitePolynomial
from .errors import InvalidBias, InvalidParameters, MonomialCapExceeded, WidthMismatch
from .util import substream

MAX_DENSE_B = 20          # paths that enumerate all of {0,1}^b refuse beyond this
ACCEPTED_ENUM_CAP = 2**22  # cap on 2^(b*arity) when tabulating accepted tuples


@dataclass(frozen=True)
class Predicate:
    """Boolean function on tuples of b-bit strings.

    OV: no position where all strings have a 1 (bitwise AND is zero).
    XOR: strings XOR to the zero string.
    SUM_ZERO: strings-as-unsigned-ints sum to 0 mod 2^b.
    SUM_TARGET: first arity-1 ints sum exactly to the last one.
    TABLE: explicit accepted-tuple set.
    """
    kind: str
    arity: int
    table: frozenset = frozenset()

    def __post_init__(self):
        if self.kind not in ("OV", "XOR", "SUM_ZERO", "SUM_TARGET", "TABLE"):
            raise InvalidParameters(f"unknown predicate kind {self.kind!r}")
        if self.arity < 1:
            raise InvalidParameters(f"arity {self.arity}")

    def accept(self, words, b: int) -> bool:
        if len(words) != self.arity:
            raise WidthMismatch(f"{len(words)} words for arity {self.arity}")
        if self.kind == "OV":
            acc = ~0
            for w in words:
                acc &= w
            return acc == 0
        if self.kind == "XOR":
            acc = 0
            for w in words:
                acc ^= w
            return acc == 0
        if self.kind == "SUM_ZERO":
            return sum(words) % (1 << b) == 0
        if self.kind == "SUM_TARGET":
            return sum(words[:-1]) == words[-1]
        return tuple(words) in self.table


OV = lambda k: Predicate("OV", k)
XOR = lambda k: Predicate("XOR", k)
SUM_ZERO = lambda k: Predicate("SUM_ZERO", k)
SUM_TARGET = lambda k: Predicate("SUM_TARGET", k)


@dataclass(frozen=True)
class FactoredVector:
    g: int
    b: int
    groups: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.g < 1 or self.b < 1:
            raise InvalidParameters(f"g={self.g}, b={self.b}")
        if len(self.groups) != self.g:
            raise WidthMismatch(f"{len(self.groups)} groups, expected {self.g}")
        lim = 1 << self.b
        for grp in self.groups:
            if list(grp) != sorted(set(grp)):
                raise InvalidParameters("groups must be sorted and duplicate-free")
            if grp and not 0 <= grp[0] <= grp[-1] < lim:
                raise WidthMismatch(f"string outside {self.b} bits")


def fvec(g: int, b: int, groups) -> FactoredVector:
    return FactoredVector(g, b, tuple(tuple(sorted(set(grp))) for grp in groups))


def _pred_key(pred: Predicate):
    return (pred.kind, pred.arity, pred.table)


@lru_cache(maxsize=1 << 16)
def _circ_cached(groups: tuple, b: int, pred_key) -> int:
    kind, arity, table = pred_key
    sets = groups
    if any(not s for s in sets):
        return 0
    if kind == "XOR" and arity >= 2:
        half = arity // 2
        left: dict[int, int] = {}
        for combo in product(*sets[:half]):
            acc = 0
            for w in combo:
                acc ^= w
            left[acc] = left.get(acc, 0) + 1
        total = 0
        for combo in product(*sets[half:]):
            acc = 0
            for w in combo:
                acc ^= w
            total += left.get(acc, 0)
        return total
    if kind in ("SUM_ZERO", "SUM_TARGET") and arity >= 2:
        m = 1 << b
        half = arity // 2 if kind == "SUM_ZERO" else arity - 1
        left: dict[int, int] = {}
        for combo in product(*sets[:half]):
            acc = sum(combo) % m if kind == "SUM_ZERO" else sum(combo)
            left[acc] = left.get(acc, 0) + 1
        total = 0
        if kind == "SUM_ZERO":
            for combo in product(*sets[half:]):
                total += left.get((-sum(combo)) % m, 0)
        else:
            for w in sets[-1]:
                total += left.get(w, 0)
        return total
    if kind == "OV" and arity >= 2:
        tail_counts: dict[int, int] = {}

        def count_tail(i: int, acc: int) -> int:
            if acc == 0:
                r = 1
                for s in sets[i:]:
                    r *= len(s)
                return r
            if i == arity:
                return 1 if acc == 0 else 0
            key = (i, acc)
            if key in tail_counts:
                return tail_counts[key]
            r = sum(count_tail(i + 1, acc & w) for w in sets[i])
            tail_counts[key] = r
            return r

        return count_tail(0, (1 << b) - 1)
    pred = Predicate(kind, arity, table)
    return sum(1 for combo in product(*sets) if pred.accept(combo, b))


def circ(sets, b: int, pred: Predicate) -> int:
    """Number of accepted tuples, one string from each of the arity sets."""
    sets = tuple(tuple(sorted(set(s))) for s in sets)
    if len(sets) != pred.arity:
        raise WidthMismatch(f"{len(sets)} sets for arity {pred.arity}")
    return _circ_cached(sets, b, _pred_key(pred))


def circledcirc(vs, pred: Predicate) -> int:
    """Product over groups of the per-group accepted-tuple counts."""
    vs = list(vs)
    if len(vs) != pred.arity:
        raise WidthMismatch(f"{len(vs)} vectors for arity {pred.arity}")
    g, b = vs[0].g, vs[0].b
    if any(v.g != g or v.b != b for v in vs):
        raise WidthMismatch("vectors disagree on (g, b)")
    total = 1
    for i in range(g):
        total *= circ([v.groups[i] for v in vs], b, pred)
        if total == 0:
            return 0
    return total


@dataclass(frozen=True)
class FkfInstance:
    k: int
    n: int
    g: int
    b: int
    lists: tuple[tuple[FactoredVector, ...], ...]
    predicate: Predicate

    def __post_init__(self):
        if len(self.lists) != self.k:
            raise InvalidParameters(f"{len(self.lists)} lists for k={self.k}")
        if self.predicate.arity != self.k:
            raise WidthMismatch("predicate arity must equal k")
        for lst in self.lists:
            if len(lst) != self.n:
                raise InvalidParameters("all lists must have n vectors")
            for v in lst:
                if v.g != self.g or v.b != self.b:
                    raise WidthMismatch("vector shape mismatch")


def count_fkf(inst: FkfInstance) -> int:
    return sum(circledcirc(combo, inst.predicate) for combo in product(*inst.lists))


def detect_fkf(inst: FkfInstance) -> bool:
    return any(circledcirc(combo, inst.predicate) > 0 for combo in product(*inst.lists))


def canonical_pairs(k: int) -> list[tuple[int, int]]:
    """Partition pairs (i, j), i < j, in lexicographic order."""
    return [(i, j) for i in range(k) for j in range(i + 1, k)]


@dataclass(frozen=True)
class FfkcInstance:
    k: int
    n: int
    g: int
    b: int
    edges: dict  # (i, u, j, v) with i < j -> FactoredVector
    predicate: Predicate

    def __post_init__(self):
        ell = self.k * (self.k - 1) // 2
        if self.predicate.arity != ell:
            raise WidthMismatch(f"predicate arity {self.predicate.arity}, needs {ell}")
        for (i, u, j, v), lab in self.edges.items():
            if not (0 <= i < j < self.k) or not (0 <= u < self.n and 0 <= v < self.n):
                raise InvalidParameters(f"bad edge key {(i, u, j, v)}")
            if lab.g != self.g or lab.b != self.b:
                raise WidthMismatch("edge label shape mismatch")


def count_ffkc(inst: FfkcInstance) -> int:
    pairs = canonical_pairs(inst.k)
    total = 0
    for nodes in product(range(inst.n), repeat=inst.k):
        labels = []
        for (i, j) in pairs:
            lab = inst.edges.get((i, nodes[i], j, nodes[j]))
            if lab is None:
                break
            labels.append(lab)
        else:
            total += circledcirc(labels, inst.predicate)
    return total


def detect_ffkc(inst: FfkcInstance) -> bool:
    return count_ffkc(inst) > 0


def _gen_group(rng, b: int, mu: float) -> tuple[int, ...]:
    if b > MAX_DENSE_B:
        raise InvalidParameters(f"b={b} > {MAX_DENSE_B} for dense generation")
    if mu == 0.5:
        mask = rng.getrandbits(1 << b)
        return tuple(s for s in range(1 << b) if (mask >> s) & 1)
    return tuple(s for s in range(1 << b) if rng.random() < mu)


def gen_fvec(rng, g: int, b: int, mu: float) -> FactoredVector:
    return FactoredVector(g, b, tuple(_gen_group(rng, b, mu) for _ in range(g)))


def gen_fkf(n: int, k: int, g: int, b: int, mu: float, seed,
            pred: Predicate | None = None) -> FkfInstance:
    """Average-case instance: every group includes each b-bit string iid
    with probability mu. Identical seeds reproduce identical instances."""
    if not 0 < mu < 1:
        raise InvalidBias(f"mu={mu}")
    rng = substream(seed, "fkf", n, k, g, b, mu)
    lists = tuple(tuple(gen_fvec(rng, g, b, mu) for _ in range(n)) for _ in range(k))
    return FkfInstance(k, n, g, b, lists, pred or OV(k))


def gen_ffkc(n: int, k: int, g: int, b: int, mu: float, seed,
             pred: Predicate | None = None) -> FfkcInstance:
    if not 0 < mu < 1:
        raise InvalidBias(f"mu={mu}")
    rng = substream(seed, "ffkc", n, k, g, b, mu)
    edges = {}
    for (i, j) in canonical_pairs(k):
        for u in range(n):
            for v in range(n):
                edges[(i, u, j, v)] = gen_fvec(rng, g, b, mu)
    ell = k * (k - 1) // 2
    return FfkcInstance(k, n, g, b, edges, pred or SUM_ZERO(ell))


def enumerate_accepted(pred: Predicate, b: int) -> list[tuple[int, ...]]:
    """All accepted tuples of b-bit strings, in lexicographic order."""
    if (1 << (b * pred.arity)) > ACCEPTED_ENUM_CAP:
        raise InvalidParameters(f"2^(b*arity) too large to tabulate (b={b}, arity={pred.arity})")
    space = range(1 << b)
    return [t for t in product(space, repeat=pred.arity) if pred.accept(t, b)]


# Variable layout of the list-problem polynomial: one indicator per
# (list j, vector v, group i, string s), id = ((j*n + v)*g + i)*2^b + s.
def fkf_var(n: int, g: int, b: int, j: int, v: int, i: int, s: int) -> int:
    return ((j * n + v) * g + i) * (1 << b) + s


def build_f_ckfunc(n: int, k: int, g: int, b: int, pred: Predicate, p: int,
                   monomial_cap: int = 2_000_000) -> PartitePolynomial:
    """Strongly (k*g)-partite polynomial agreeing with the factored list
    count on 0/1 indicator inputs; partition of a variable is (list, group)."""
    if pred.arity != k:
        raise WidthMismatch("predicate arity must equal k")
    accepted = enumerate_accepted(pred, b)
    n_vars = k * n * g * (1 << b)
    partition = tuple((v // (1 << b)) % g + ((v // (1 << b)) // (n * g)) * g
                      for v in range(n_vars))
    count = n**k * len(accepted) ** g
    if count > monomial_cap:
        raise MonomialCapExceeded(f"{count} monomials")
    monomials: dict = {}
    for vecs in product(range(n), repeat=k):
        for choice in product(accepted, repeat=g):
            mono = tuple(fkf_var(n, g, b, j, vecs[j], i, choice[i][j])
                         for j in range(k) for i in range(g))
            monomials[mono] = monomials.get(mono, 0) + 1
    return PartitePolynomial(n_vars, k * g, partition, monomials, p)


def fkf_indicator(inst: FkfInstance) -> int:
    """0/1 indicator assignment of an instance, packed as an int."""
    mask = 0
    for j, lst in enumerate(inst.lists):
        for v, vec in enumerate(lst):
            for i, grp in enumerate(vec.groups):
                for s in grp:
                    mask |= 1 << fkf_var(inst.n, inst.g, inst.b, j, v, i, s)
    return mask


def fkf_from_indicator(mask: int, n: int, k: int, g: int, b: int,
                       pred: Predicate) -> FkfInstance:
    """Inverse of fkf_indicator: decode an assignment into an instance."""
    lim = 1 << b
    lists = []
    for j in range(k):
        lst = []
        for v in range(n):
            groups = []
            for i in range(g):
                base = fkf_var(n, g, b, j, v, i, 0)
                groups.append(tuple(s for s in range(lim) if (mask >> (base + s)) & 1))
            lst.append(FactoredVector(g, b, tuple(groups)))
        lists.append(tuple(lst))
    return FkfInstance(k, n, g, b, tuple(lists), pred)


# Clique-problem polynomial: one indicator per (pair slot m, endpoints u, v,
# group i, string s); partition of a variable is (pair slot, group).
def ffkc_var(n: int, g: int, b: int, m: int, u: int, v: int, i: int, s: int) -> int:
    return (((m * n + u) * n + v) * g + i) * (1 << b) + s


def build_f_ffkc(n: int, k: int, g: int, b: int, pred: Predicate, p: int,
                 monomial_cap: int = 2_000_000) -> PartitePolynomial:
    """Strongly (l*g)-partite polynomial (l = k choose 2) agreeing with the
    factored clique count on complete k-partite indicator inputs."""
    pairs = canonical_pairs(k)
    ell = len(pairs)
    if pred.arity != ell:
        raise WidthMismatch(f"predicate arity {pred.arity}, needs {ell}")
    accepted = enumerate_accepted(pred, b)
    n_vars = ell * n * n * g * (1 << b)
    partition = tuple((v // (1 << b)) % g + ((v // (1 << b)) // (n * n * g)) * g
                      for v in range(n_vars))
    count = n**k * len(accepted) ** g
    if count > monomial_cap:
        raise MonomialCapExceeded(f"{count} monomials")
    monomials: dict = {}
    for nodes in product(range(n), repeat=k):
        slots = [(m, nodes[i], nodes[j]) for m, (i, j) in enumerate(pairs)]
        for choice in product(accepted, repeat=g):
            mono = tuple(ffkc_var(n, g, b, m, u, v, i, choice[i][m])
                         for (m, u, v) in slots for i in range(g))
            monomials[mono] = monomials.get(mono, 0) + 1
    return PartitePolynomial(n_vars, ell * g, partition, monomials, p)


def ffkc_indicator(inst: FfkcInstance) -> int:
    pairs = canonical_pairs(inst.k)
    mask = 0
    for m, (i, j) in enumerate(pairs):
        for u in range(inst.n):
            for v in range(inst.n):
                lab = inst.edges.get((i, u, j, v))
                if lab is None:
                    continue
                for gi, grp in enumerate(lab.groups):
                    for s in grp:
                        mask |= 1 << ffkc_var(inst.n, inst.g, inst.b, m, u, v, gi, s)
    return mask


# --- expansion oracle -------------------------------------------------------
# The "natural interpretation": a factored vector represents every
# concatenation of one string per group (group 0 in the highest-order bits).

def expand_vector(vec: FactoredVector) -> list[int]:
    reps = []
    for combo in product(*vec.groups):
        acc = 0
        for w in combo:
            acc = (acc << vec.b) | w
        reps.append(acc)
    return reps


def count_fkf_expanded(inst: FkfInstance) -> int:
    """Independent re-count via full expansion; use only for g*b <= ~16."""
    if inst.g * inst.b > 24:
        raise InvalidParameters("expansion oracle limited to small g*b")
    expanded = [[expand_vector(v) for v in lst] for lst in inst.lists]
    mask = (1 << inst.b) - 1
    total = 0
    for vec_choice in product(*[range(inst.n) for _ in range(inst.k)]):
        reps = [expanded[j][vec_choice[j]] for j in range(inst.k)]
        for combo in product(*reps):
            ok = True
            for i in range(inst.g):
                shift = (inst.g - 1 - i) * inst.b
                words = [(r >> shift) & mask for r in combo]
                if not inst.predicate.accept(words, inst.b):
                    ok = False
                    break
            total += ok
    return total


# --- the worked preliminaries example --------------------------------------

# --- JSON schema -------------------------------------------------------------
# {"kind": "fkf"|"ffkc", "k", "n", "g", "b", "predicate", "lists"|"edges"};
# groups are arrays of fixed-width bit-strings, leftmost char highest-order.

def bits_to_str(w: int, b: int) -> str:
    return format(w, f"0{b}b")


def str_to_bits(s: str) -> int:
    return int(s, 2) if s else 0


def pred_to_dict(pred: Predicate) -> dict:
    out = {"kind": pred.kind, "arity": pred.arity}
    if pred.kind == "TABLE":
        out["table"] = sorted([bits_to_str(w, 1) for w in t] for t in pred.table)
    return out


def pred_from_dict(d: dict, b: int) -> Predicate:
    if d["kind"] == "TABLE":
        table = frozenset(tuple(str_to_bits(s) for s in row) for row in d["table"])
        return Predicate("TABLE", d["arity"], table)
    return Predicate(d["kind"], d["arity"])


def _vec_to_json(vec: FactoredVector) -> list:
    return [[bits_to_str(w, vec.b) for w in grp] for grp in vec.groups]


def _vec_from_json(groups: list, g: int, b: int) -> FactoredVector:
    return FactoredVector(g, b, tuple(tuple(sorted(str_to_bits(s) for s in grp))
                                      for grp in groups))


def instance_to_dict(inst) -> dict:
    if isinstance(inst, FkfInstance):
        return {"kind": "fkf", "k": inst.k, "n": inst.n, "g": inst.g, "b": inst.b,
                "predicate": pred_to_dict(inst.predicate),
                "lists": [[_vec_to_json(v) for v in lst] for lst in inst.lists]}
    if isinstance(inst, FfkcInstance):
        edges = [{"i": i, "u": u, "j": j, "v": v, "label": _vec_to_json(lab)}
                 for (i, u, j, v), lab in sorted(inst.edges.items())]
        return {"kind": "ffkc", "k": inst.k, "n": inst.n, "g": inst.g, "b": inst.b,
                "predicate": pred_to_dict(inst.predicate), "edges": edges}
    raise InvalidParameters(f"cannot serialize {type(inst).__name__}")


def instance_from_dict(d: dict):
    g, b = d["g"], d["b"]
    pred = pred_from_dict(d["predicate"], b)
    if d["kind"] == "fkf":
        lists = tuple(tuple(_vec_from_json(v, g, b) for v in lst) for lst in d["lists"])
        return FkfInstance(d["k"], d["n"], g, b, lists, pred)
    if d["kind"] == "ffkc":
        edges = {(e["i"], e["u"], e["j"], e["v"]): _vec_from_json(e["label"], g, b)
                 for e in d["edges"]}
        return FfkcInstance(d["k"], d["n"], g, b, edges, pred)
    raise InvalidParameters(f"unknown instance kind {d['kind']!r}")


def paper_example_uv() -> FkfInstance:
    """The two-list singleton instance from the worked example: pairing u
    with v yields 4 * 2 = 8 orthogonal pairs."""
    u = fvec(2, 3, [[0b001, 0b010], [0b001, 0b010]])
    v = fvec(2, 3, [[0b000, 0b010, 0b110], [0b110, 0b101]])
    return FkfInstance(2, 1, 2, 3, ((u,), (v,)), OV(2))


def paper_example_w() -> FactoredVector:
    return fvec(2, 3, [[], [0b000, 0b011, 0b100, 0b111]])
