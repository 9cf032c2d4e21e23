"""Count-preserving transformations between problem encodings: plain lists
into factored form, the expansion transforms that move between predicate
families (any f -> XOR -> OV/SUM), list problems into clique problems, and
the 3-partite clique problem into partitioned matching triangles.

Every transform here preserves exact counts on its declared domain; the
test suite checks each against brute-force counting on both sides.
"""

import math
from collections import Counter
from dataclasses import dataclass
from itertools import combinations, product

from .errors import ExpansionCapExceeded, InvalidParameters, WidthMismatch
from .factored import (OV, SUM_TARGET, SUM_ZERO, XOR, FactoredVector, FfkcInstance,
                       FkfInstance, Predicate, canonical_pairs)

EXPANSION_CAP = 1 << 16  # strings per transformed group


# --- plain problems into factored form --------------------------------------

def embed_kov(lists, d: int) -> FkfInstance:
    """k lists of d-bit vectors as a factored OV instance with singleton
    groups. Dimensions that are not perfect squares are zero-padded; an
    all-zero coordinate never contributes to a dot product, so the count
    carries over unchanged."""
    k = len(lists)
    if k < 2 or d < 1:
        raise InvalidParameters(f"k={k}, d={d}")
    b = g = math.isqrt(d) if math.isqrt(d) ** 2 == d else math.isqrt(d) + 1
    mask = (1 << b) - 1
    n = len(lists[0])
    if any(len(lst) != n for lst in lists):
        raise InvalidParameters("lists must share a length")
    flists = []
    for lst in lists:
        fl = []
        for v in lst:
            if not 0 <= v < (1 << d):
                raise WidthMismatch(f"vector {v} outside {d} bits")
            fl.append(FactoredVector(g, b, tuple(((v >> (j * b)) & mask,) for j in range(g))))
        flists.append(tuple(fl))
    return FkfInstance(k, n, g, b, tuple(flists), OV(k))


def brute_count_kov(lists, d: int) -> int:
    """Reference count of orthogonal k-tuples of plain vectors."""
    total = 0
    for combo in product(*lists):
        acc = combo[0]
        for v in combo[1:]:
            acc &= v
        total += acc == 0
    return total


def embed_ksum(lists, k: int) -> list[FkfInstance]:
    """k lists of bounded ints as a family of factored SUM_TARGET instances,
    one per carry guess; across the family every zero-sum tuple yields
    exactly one witness.

    Numbers are mapped into Z_M for M = 2^(bg) > 2k max|x|, split into g
    digits of b bits, and each guess of the g carry values is folded into
    the last list's digit targets (out-of-range targets leave the group
    empty). Digits are stored zero-extended to b + ceil(lg k) bits so a
    digit target as large as (k-1)(2^b - 1) stays representable.
    """
    if len(lists) != k or k < 2:
        raise InvalidParameters(f"need k={k} lists")
    n = len(lists[0])
    if any(len(lst) != n for lst in lists):
        raise InvalidParameters("lists must share a length")
    maxabs = max((abs(x) for lst in lists for x in lst), default=1)
    bits = max(1, (2 * k * max(maxabs, 1)).bit_length())
    b = g = math.isqrt(bits) if math.isqrt(bits) ** 2 == bits else math.isqrt(bits) + 1
    M = 1 << (b * g)
    bw = b + max(1, math.ceil(math.log2(k)))
    digit_mask = (1 << b) - 1

    def digits(x: int) -> list[int]:
        y = x % M
        return [(y >> (j * b)) & digit_mask for j in range(g)]

    digit_lists = [[digits(x) for x in lst] for lst in lists]
    family = []
    for carries in product(range(k), repeat=g):
        ins = [0] + list(carries)  # carry into digit j is ins[j]; ins[g] is the final carry
        flists = []
        for i in range(k - 1):
            flists.append(tuple(
                FactoredVector(g, bw, tuple((dj,) for dj in ds))
                for ds in digit_lists[i]))
        last = []
        for ds in digit_lists[k - 1]:
            groups = []
            for j in range(g):
                target = (1 << b) * ins[j + 1] - ins[j] - ds[j]
                groups.append((target,) if 0 <= target < (1 << bw) else ())
            last.append(FactoredVector(g, bw, tuple(groups)))
        flists.append(tuple(last))
        family.append(FkfInstance(k, n, g, bw, tuple(flists), SUM_TARGET(k)))
    return family


def brute_count_ksum(lists) -> int:
    return sum(1 for combo in product(*lists) if sum(combo) == 0)


# --- expansion transforms between predicate families ------------------------

def _accepted_with(pred: Predicate, b: int, slot: int, word: int, k: int):
    """Accepted k-tuples of b-bit strings whose slot-th entry is word."""
    if (1 << (b * (k - 1))) > EXPANSION_CAP:
        raise ExpansionCapExceeded(f"2^(b(k-1)) with b={b}, k={k}")
    space = range(1 << b)
    slots = [space] * k
    slots[slot] = [word]
    return [t for t in product(*slots) if pred.accept(t, b)]


def _xor_zero_with(b: int, slot: int, word: int, k: int):
    """k-tuples containing word at slot whose XOR is the zero string."""
    if k == 1:
        return [(word,)] if word == 0 else []
    free = [i for i in range(k) if i != slot]
    determined = free[-1]
    if (1 << (b * (k - 2))) > EXPANSION_CAP:
        raise ExpansionCapExceeded(f"2^(b(k-2)) with b={b}, k={k}")
    out = []
    for choice in product(range(1 << b), repeat=k - 2):
        t = [0] * k
        t[slot] = word
        for i, w in zip(free[:-1], choice):
            t[i] = w
        acc = word
        for i in free[:-1]:
            acc ^= t[i]
        t[determined] = acc
        out.append(tuple(t))
    return out


def gamma_f_to_xor(v: FactoredVector, slot: int, pred: Predicate, k: int) -> FactoredVector:
    """Rewrite a factored vector so the XOR predicate recognizes exactly the
    tuples the original predicate accepted.

    Every string expands into one (k^3 b)-bit string per accepted k-tuple
    containing it at its list position: block (x, y, z) holds the believed
    z-th tuple entry when x or y is this list's position (and x != y),
    otherwise zeros. Tuples agree across all k lists iff the XOR vanishes.
    """
    if pred.arity != k or not 0 <= slot < k:
        raise InvalidParameters("slot/arity mismatch")
    b = v.b
    new_b = k**3 * b
    groups = []
    for grp in v.groups:
        out = set()
        for word in grp:
            for t in _accepted_with(pred, b, slot, word, k):
                s = 0
                for x in range(k):
                    for y in range(k):
                        for z in range(k):
                            block = (x * k + y) * k + z
                            if x != y and (x == slot or y == slot):
                                val = t[z]
                            else:
                                val = 0
                            s |= val << ((k**3 - 1 - block) * b)
                out.add(s)
        if len(out) > EXPANSION_CAP:
            raise ExpansionCapExceeded(f"{len(out)} strings in a group")
        groups.append(tuple(sorted(out)))
    return FactoredVector(v.g, new_b, tuple(groups))


def xor_to_ov(v: FactoredVector, slot: int, k: int) -> FactoredVector:
    """Rewrite an XOR factored vector for the OV predicate.

    Blocks of 2b bits per (x, y, z): this list's position as x writes
    (word, complement), as y writes (complement, word), uninvolved
    off-diagonal blocks are all ones. Two strings can only be orthogonal on
    a (belief, complement) block pair when the beliefs coincide, so k
    transformed strings are orthogonal iff all lists agree on a tuple that
    XORs to zero.
    """
    if not 0 <= slot < k:
        raise InvalidParameters("bad slot")
    b = v.b
    full = (1 << b) - 1
    new_b = 2 * k**3 * b
    groups = []
    for grp in v.groups:
        out = set()
        for word in grp:
            for t in _xor_zero_with(b, slot, word, k):
                s = 0
                for x in range(k):
                    for y in range(k):
                        for z in range(k):
                            block = (x * k + y) * k + z
                            if x == y:
                                val = 0
                            elif x == slot:
                                val = (t[z] << b) | (full ^ t[z])
                            elif y == slot:
                                val = ((full ^ t[z]) << b) | t[z]
                            else:
                                val = (full << b) | full
                            s |= val << ((k**3 - 1 - block) * 2 * b)
                out.add(s)
        if len(out) > EXPANSION_CAP:
            raise ExpansionCapExceeded(f"{len(out)} strings in a group")
        groups.append(tuple(sorted(out)))
    return FactoredVector(v.g, new_b, tuple(groups))


def gamma_xor_to_sum(v: FactoredVector, slot: int, k: int) -> FactoredVector:
    """Rewrite an XOR factored vector for the SUM_TARGET predicate.

    Each bit becomes a (ceil(lg k) + 1)-bit field. Lists before the last
    keep their bit as the field value; the last list expands each string
    into every per-bit choice of a number in [0, k-1] of matching parity.
    k-tuples XOR to zero iff exactly one expansion matches the field-wise
    sum of the first k - 1 strings (bit sums never overflow a field).
    """
    if not 0 <= slot < k:
        raise InvalidParameters("bad slot")
    b = v.b
    fw = max(1, math.ceil(math.log2(k))) + 1
    new_b = fw * b
    groups = []
    for grp in v.groups:
        out = set()
        for word in grp:
            if slot < k - 1:
                s = 0
                for pos in range(b):
                    s |= ((word >> pos) & 1) << (pos * fw)
                out.add(s)
            else:
                choices = []
                for pos in range(b):
                    parity = (word >> pos) & 1
                    choices.append([c for c in range(k) if c % 2 == parity])
                count = 1
                for ch in choices:
                    count *= len(ch)
                if count > EXPANSION_CAP:
                    raise ExpansionCapExceeded(f"{count} parity expansions")
                for combo in product(*choices):
                    s = 0
                    for pos, c in enumerate(combo):
                        s |= c << (pos * fw)
                    out.add(s)
        if len(out) > EXPANSION_CAP:
            raise ExpansionCapExceeded(f"{len(out)} strings in a group")
        groups.append(tuple(sorted(out)))
    return FactoredVector(v.g, new_b, tuple(groups))


def gamma_f_to_sum(v: FactoredVector, slot: int, pred: Predicate, ell: int) -> FactoredVector:
    """Direct rewrite of any predicate to SUM_TARGET, used on clique edge
    labels where composing the XOR and SUM transforms would blow up (the
    parity expansion of the last slot is exponential in the number of zero
    bits of the already-expanded XOR strings).

    Fields of b + 2 bits per (x < y, z): for a pair not involving the last
    slot, x writes its belief and y writes 2^b minus its belief, so the
    field sums to the constant 2^b exactly on agreement; for pairs (x,
    last), x writes the belief and the last slot's string holds its own
    belief as the target. Field sums stay below 2^(b+2), so integer
    equality of the SUM_TARGET test decomposes per field.
    """
    if pred.arity != ell or not 0 <= slot < ell:
        raise InvalidParameters("slot/arity mismatch")
    b = v.b
    fw = b + 2
    fields = [(x, y, z) for x, y in combinations(range(ell), 2) for z in range(ell)]
    new_b = fw * len(fields)
    pos_of = {f: i for i, f in enumerate(fields)}

    def build(t) -> int:
        s = 0
        for (x, y, z), idx in pos_of.items():
            shift = (len(fields) - 1 - idx) * fw
            if slot == ell - 1:
                if y == ell - 1:
                    val = t[z]            # the target's own belief
                elif x == slot or y == slot:
                    val = 0
                else:
                    val = 1 << b          # the agreement constant
            else:
                if x == slot and y < ell - 1:
                    val = t[z]
                elif y == slot and y < ell - 1:
                    val = (1 << b) - t[z]
                elif x == slot and y == ell - 1:
                    val = t[z]
                else:
                    val = 0
            s |= val << shift
        return s

    groups = []
    for grp in v.groups:
        out = set()
        for word in grp:
            for t in _accepted_with(pred, b, slot, word, ell):
                out.add(build(t))
        if len(out) > EXPANSION_CAP:
            raise ExpansionCapExceeded(f"{len(out)} strings in a group")
        groups.append(tuple(sorted(out)))
    return FactoredVector(v.g, new_b, tuple(groups))


# --- list problems into clique problems -------------------------------------

def _sum_target_to_sum_zero(inst: FkfInstance) -> FkfInstance:
    """SUM_TARGET as SUM_ZERO: widen by ceil(lg k) bits so the sum of the
    first k-1 strings cannot wrap, then negate the last list mod 2^b'."""
    k = inst.k
    bw = inst.b + max(1, math.ceil(math.log2(k)))
    M = 1 << bw
    lists = []
    for i, lst in enumerate(inst.lists):
        ll = []
        for vec in lst:
            if i < k - 1:
                ll.append(FactoredVector(inst.g, bw, vec.groups))
            else:
                ll.append(FactoredVector(inst.g, bw,
                                         tuple(tuple(sorted((-w) % M for w in grp))
                                               for grp in vec.groups)))
        lists.append(tuple(ll))
    return FkfInstance(k, inst.n, inst.g, bw, tuple(lists), SUM_ZERO(k))


def sum_to_zkc(inst: FkfInstance) -> FfkcInstance:
    """A zero-sum list instance as a factored zero-clique instance: the
    complete k-partite graph where consecutive-partition edges (cyclically)
    carry the factored numbers and every other edge carries the vector
    whose groups hold only the all-zero string. Needs k >= 3 (a 2-clique
    has a single edge, which cannot carry both numbers)."""
    if inst.k < 3:
        raise InvalidParameters("sum_to_zkc needs k >= 3")
    if inst.predicate.kind == "SUM_TARGET":
        inst = _sum_target_to_sum_zero(inst)
    elif inst.predicate.kind != "SUM_ZERO":
        raise InvalidParameters("sum_to_zkc expects a SUM predicate")
    k, n, g, b = inst.k, inst.n, inst.g, inst.b
    zeros = FactoredVector(g, b, ((0,),) * g)
    carrier = {}
    for i in range(k - 1):
        carrier[(i, i + 1)] = i
    carrier[(0, k - 1)] = k - 1
    edges = {}
    for (i, j) in canonical_pairs(k):
        src = carrier.get((i, j))
        for u in range(n):
            for v in range(n):
                if src is None:
                    edges[(i, u, j, v)] = zeros
                else:
                    node = u if src == i else v
                    edges[(i, u, j, v)] = inst.lists[src][node]
    ell = k * (k - 1) // 2
    return FfkcInstance(k, n, g, b, edges, SUM_ZERO(ell))


def ffkc_to_fzkc(inst: FfkcInstance) -> FfkcInstance:
    """Any factored clique problem as a factored zero-clique problem: every
    edge label is rewritten for its pair slot with the direct SUM encoding,
    preserving the per-clique accepted-tuple products and hence the count."""
    if inst.k < 3:
        raise InvalidParameters("ffkc_to_fzkc needs k >= 3")
    ell = inst.k * (inst.k - 1) // 2
    slot_of = {pair: m for m, pair in enumerate(canonical_pairs(inst.k))}
    cache: dict = {}
    edges = {}
    for (i, u, j, v), lab in inst.edges.items():
        m = slot_of[(i, j)]
        key = (m, lab)
        if key not in cache:
            cache[key] = gamma_f_to_sum(lab, m, inst.predicate, ell)
        edges[(i, u, j, v)] = cache[key]
    nb = next(iter(edges.values())).b if edges else inst.b
    return FfkcInstance(inst.k, inst.n, inst.g, nb, edges, SUM_TARGET(ell))


# --- factored zero triangle into partitioned matching triangles -------------

@dataclass(frozen=True)
class PmtInstance:
    """g disjoint node-colored graphs; the count asks for color triples
    weighted by the product over graphs of their triangles of that triple."""
    g: int
    graphs: tuple  # per graph: (colors: dict node -> color, adj: dict node -> frozenset)


def _ffkc_sum_target_to_zero(inst: FfkcInstance) -> FfkcInstance:
    """SUM_TARGET clique labels as SUM_ZERO: widen so the first l-1 labels
    cannot wrap, negate the last pair slot's labels."""
    ell = inst.k * (inst.k - 1) // 2
    bw = inst.b + max(1, math.ceil(math.log2(ell)))
    M = 1 << bw
    last_pair = canonical_pairs(inst.k)[-1]
    edges = {}
    for (i, u, j, v), lab in inst.edges.items():
        if (i, j) == last_pair:
            groups = tuple(tuple(sorted((-w) % M for w in grp)) for grp in lab.groups)
        else:
            groups = lab.groups
        edges[(i, u, j, v)] = FactoredVector(inst.g, bw, groups)
    return FfkcInstance(inst.k, inst.n, inst.g, bw, edges, SUM_ZERO(ell))


def fzkc3_to_pmt(inst: FfkcInstance) -> PmtInstance:
    """Factored zero triangle as partitioned matching triangles.

    Graph j gets a node per first-partition vertex u, a node v_x per
    (second-partition vertex, candidate weight x), and w_y per
    (third-partition vertex, running sum y); edges follow group j's sets so
    triangles of color (u, v, w) in graph j biject with group-j accepted
    triples of the clique (u, v, w). The zero test is sum mod 2^b.
    """
    if inst.k != 3:
        raise InvalidParameters("construction is for k = 3")
    if inst.predicate.kind == "SUM_TARGET":
        inst = _ffkc_sum_target_to_zero(inst)
    if inst.predicate.kind != "SUM_ZERO":
        raise InvalidParameters("expects SUM_ZERO semantics")
    n, g, b = inst.n, inst.g, inst.b
    M = 1 << b
    graphs = []
    for j in range(g):
        colors = {}
        adj: dict = {}

        def node(nd):
            if nd not in adj:
                adj[nd] = set()
                colors[nd] = nd[:2]
            return nd

        def connect(a, bnd):
            adj[a].add(bnd)
            adj[bnd].add(a)

        for u in range(n):
            node(("u", u))
        for u in range(n):
            for v in range(n):
                lab01 = inst.edges.get((0, u, 1, v))
                if lab01 is None:
                    continue
                for x in lab01.groups[j]:
                    connect(node(("u", u)), node(("v", v, x)))
        for v in range(n):
            for w in range(n):
                lab12 = inst.edges.get((1, v, 2, w))
                if lab12 is None:
                    continue
                for x in range(M):
                    if ("v", v, x) not in adj:
                        continue
                    for s in lab12.groups[j]:
                        y = x + s
                        connect(("v", v, x), node(("w", w, y)))
        for w in range(n):
            for u in range(n):
                lab02 = inst.edges.get((0, u, 2, w))
                if lab02 is None:
                    continue
                for y in range(2 * M - 1):
                    if ("w", w, y) not in adj:
                        continue
                    if (-y) % M in lab02.groups[j]:
                        connect(("w", w, y), ("u", u))
        graphs.append((colors, {k_: frozenset(v_) for k_, v_ in adj.items()}))
    return PmtInstance(g, tuple(graphs))


def count_pmt(inst: PmtInstance) -> int:
    """Sum over color triples of the product across graphs of the number of
    triangles with that color triple."""
    per_graph = []
    for colors, adj in inst.graphs:
        cnt: Counter = Counter()
        nodes = sorted(adj)
        for a in nodes:
            for bnd in adj[a]:
                if bnd <= a:
                    continue
                common = adj[a] & adj[bnd]
                for c in common:
                    if c <= bnd:
                        continue
                    triple = tuple(sorted((colors[a], colors[bnd], colors[c])))
                    cnt[triple] += 1
        per_graph.append(cnt)
    total = 0
    for triple in per_graph[0]:
        prod_val = 1
        for cnt in per_graph:
            prod_val *= cnt.get(triple, 0)
            if prod_val == 0:
                break
        total += prod_val
    return total
