"""Counting pattern subgraphs in k-partite graphs through an average-case
counter for Erdos-Renyi graphs.

The bridge is a correlated family of graphs: label every cross-partition
node pair with 1 when the edge exists and a uniform label in [2, b]
otherwise; the b^(k choose 2) graphs picking one label class per partition
pair each look Erdos-Renyi, and summing pattern counts over sub-families
with chosen pairs pinned to label 1 lets an inclusion-exclusion recursion
recover exact labeled subgraph counts in the original graph. Trees and
disconnected pieces are counted directly; only cyclic pieces need the
oracle.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product

from .errors import EdgesclusionInconsistency, InvalidParameters
from .factored import canonical_pairs
from .util import next_prime, substream


@dataclass(frozen=True)
class Pattern:
    k: int
    edges: frozenset  # pairs (i, j), i < j, on vertices [0, k)

    def __post_init__(self):
        for (i, j) in self.edges:
            if not 0 <= i < j < self.k:
                raise InvalidParameters(f"bad pattern edge {(i, j)}")

    @property
    def e(self) -> int:
        return len(self.edges)


def triangle() -> Pattern:
    return Pattern(3, frozenset({(0, 1), (0, 2), (1, 2)}))


def p3() -> Pattern:
    return Pattern(3, frozenset({(0, 1), (1, 2)}))


def k4() -> Pattern:
    return Pattern(4, frozenset((i, j) for i in range(4) for j in range(i + 1, 4)))


@dataclass(frozen=True)
class PartitionedGraph:
    """k partitions of n nodes; global node v sits in partition v // n.
    Adjacency rows are int bitmasks over global node ids."""
    k: int
    n: int
    masks: tuple[int, ...]

    def __post_init__(self):
        if len(self.masks) != self.k * self.n:
            raise InvalidParameters("adjacency size mismatch")

    def part(self, v: int) -> int:
        return v // self.n

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.masks[u] >> v) & 1)


def gen_kpartite(k: int, n: int, p: float, seed, allowed_pairs=None) -> PartitionedGraph:
    """Random k-partite graph; cross edges appear iid with probability p,
    optionally restricted to the given partition pairs."""
    rng = substream(seed, "kpartite", k, n, p)
    N = k * n
    masks = [0] * N
    pairs = allowed_pairs if allowed_pairs is not None else canonical_pairs(k)
    for (i, j) in pairs:
        for u in range(n):
            gu = i * n + u
            for v in range(n):
                gv = j * n + v
                if rng.random() < p:
                    masks[gu] |= 1 << gv
                    masks[gv] |= 1 << gu
    return PartitionedGraph(k, n, tuple(masks))


# --- brute-force counters (oracle side) --------------------------------------

def count_chghp_brute(H: Pattern, G: PartitionedGraph) -> int:
    """Tuples (v_1..v_k), one node per partition, whose pairs cover H under
    the canonical assignment (pattern vertex i to partition i)."""
    if G.k != H.k:
        raise InvalidParameters("pattern and graph disagree on k")
    edges = sorted(H.edges)
    total = 0
    for nodes in product(range(G.n), repeat=G.k):
        if all(G.has_edge(i * G.n + nodes[i], j * G.n + nodes[j]) for i, j in edges):
            total += 1
    return total


def count_labeled_brute(edge_set, G: PartitionedGraph) -> int:
    """Tuples over the incident partitions with every edge of the labeled
    subgraph present (labels name partitions)."""
    verts = sorted({v for e in edge_set for v in e})
    if not verts:
        return 1
    idx = {v: i for i, v in enumerate(verts)}
    total = 0
    for nodes in product(range(G.n), repeat=len(verts)):
        ok = True
        for (i, j) in edge_set:
            if not G.has_edge(i * G.n + nodes[idx[i]], j * G.n + nodes[idx[j]]):
                ok = False
                break
        total += ok
    return total


def count_transversal_copies(H: Pattern, G: PartitionedGraph) -> int:
    """Unlabeled H-copies with exactly one node per partition: valid
    permutation placements divided by the pattern's automorphisms."""
    perms = _pattern_images(H)
    return sum(count_labeled_brute(img, G) for img in perms)


# --- the good polynomial for transversal counting ---------------------------

def chghp_prime(n: int, k: int) -> int:
    return next_prime(2 * n**k - 1)


def build_chghp_poly(H: Pattern, n: int, p: int):
    """Edge-indicator polynomial: one variable per (pattern edge slot, node
    pair), strongly |E_H|-partite, agreeing with the transversal count."""
    from .dpoly import PartitePolynomial

    slots = sorted(H.edges)
    n_vars = len(slots) * n * n
    partition = tuple(v // (n * n) for v in range(n_vars))
    monomials = {}
    for nodes in product(range(n), repeat=H.k):
        mono = tuple(m * n * n + nodes[i] * n + nodes[j] for m, (i, j) in enumerate(slots))
        monomials[mono] = monomials.get(mono, 0) + 1
    return PartitePolynomial(n_vars, len(slots), partition, monomials, p)


def chghp_indicator(H: Pattern, G: PartitionedGraph) -> int:
    slots = sorted(H.edges)
    mask = 0
    for m, (i, j) in enumerate(slots):
        for u in range(G.n):
            for v in range(G.n):
                if G.has_edge(i * G.n + u, j * G.n + v):
                    mask |= 1 << (m * G.n * G.n + u * G.n + v)
    return mask


# --- small labeled subgraphs: trees, unions, base cases ----------------------

def _incident(edge_set):
    return sorted({v for e in edge_set for v in e})


def _components(edge_set):
    verts = _incident(edge_set)
    parent = {v: v for v in verts}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for (i, j) in edge_set:
        parent[find(i)] = find(j)
    comps: dict = {}
    for e in edge_set:
        comps.setdefault(find(e[0]), set()).add(e)
    return [frozenset(c) for c in comps.values()]


def is_tree(edge_set) -> bool:
    verts = _incident(edge_set)
    return len(edge_set) == len(verts) - 1 and len(_components(edge_set)) == 1


def count_labeled_trees(edge_set, G: PartitionedGraph) -> int:
    """Bottom-up dynamic program over a labeled tree: for each tree vertex
    (a partition label) and graph node, the number of ways to embed the
    subtree below it."""
    if not is_tree(edge_set):
        raise InvalidParameters("edge set is not a labeled tree")
    verts = _incident(edge_set)
    adj = {v: [] for v in verts}
    for (i, j) in edge_set:
        adj[i].append(j)
        adj[j].append(i)
    root = verts[0]
    order, seen, stack = [], {root}, [root]
    parent = {root: None}
    while stack:
        v = stack.pop()
        order.append(v)
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                parent[w] = v
                stack.append(w)
    cnt = {v: [1] * G.n for v in verts}
    for v in reversed(order):
        for w in adj[v]:
            if parent.get(w) != v:
                continue
            new = []
            for u in range(G.n):
                gu = v * G.n + u
                s = 0
                row = G.masks[gu]
                base = w * G.n
                for x in range(G.n):
                    if (row >> (base + x)) & 1:
                        s += cnt[w][x]
                new.append(s)
            cnt[v] = [a * bb for a, bb in zip(cnt[v], new)]
    return sum(cnt[root])


def count_disconnected_union(count_a: int, count_b: int) -> int:
    """Labeled pieces on disjoint label sets combine multiplicatively."""
    return count_a * count_b


def base_counts(G: PartitionedGraph) -> dict:
    """All labeled subgraph counts on at most two vertices: singletons are
    partition sizes, single edges are cross-partition edge tallies."""
    out = {("v", i): G.n for i in range(G.k)}
    for (i, j) in canonical_pairs(G.k):
        tally = 0
        for u in range(G.n):
            row = G.masks[i * G.n + u]
            tally += bin((row >> (j * G.n)) & ((1 << G.n) - 1)).count("1")
        out[("e", i, j)] = tally
    return out


# --- the inclusion-edgesclusion machinery ------------------------------------

@lru_cache(maxsize=256)
def _perms(k: int):
    from itertools import permutations
    return tuple(permutations(range(k)))


def _pattern_images(H: Pattern):
    """Distinct relabelings of the pattern's edge set under S_k."""
    images = set()
    for pi in _perms(H.k):
        images.add(frozenset(tuple(sorted((pi[i], pi[j]))) for (i, j) in H.edges))
    return sorted(images, key=sorted)


def _aut_count(H: Pattern) -> int:
    return sum(1 for pi in _perms(H.k)
               if frozenset(tuple(sorted((pi[i], pi[j]))) for (i, j) in H.edges) == H.edges)


def edgesclusion_step(sg_counts: dict, small_table: dict, L, H: Pattern,
                      b: int, n: int) -> int:
    """Count of the labeled subgraph L from the family's pattern counts plus
    the table of smaller labeled counts.

    The family sum over graphs whose L-pairs are pinned to label 1 counts
    every permutation placement of H weighted by b^(free pairs); grouping
    placements by how their edge image meets L and subtracting the known
    smaller-overlap groups isolates the L-exact group, which is divisible
    by its fixed multiplier. A failed division means an upstream count was
    wrong.
    """
    k = H.k
    C = k * (k - 1) // 2
    e_H = H.e
    e_L = len(L)
    v_L = len(_incident(L))
    aut = _aut_count(H)
    pairs = canonical_pairs(k)
    pinned = [m for m, pr in enumerate(pairs) if pr in L]
    total_family = 0
    for lbar, cnt in sg_counts.items():
        if all(lbar[m] == 1 for m in pinned):
            total_family += cnt
    overlap_of: dict = {}
    for pi in _perms(k):
        img = frozenset(tuple(sorted((pi[i], pi[j]))) for (i, j) in H.edges)
        key = img & L
        overlap_of[key] = overlap_of.get(key, 0) + 1
    if overlap_of.get(L, 0) == 0:
        raise InvalidParameters("L is not embeddable into the pattern")
    numer = aut * total_family
    for Lp, mult in overlap_of.items():
        if Lp == L:
            continue
        v_lp = len(_incident(Lp))
        c_lp = small_table[Lp]
        numer -= mult * c_lp * n ** (k - v_lp) * b ** (C - e_H - e_L + len(Lp))
    denom = overlap_of[L] * n ** (k - v_L) * b ** (C - e_H)
    if numer < 0 or numer % denom != 0:
        raise EdgesclusionInconsistency(f"{numer} not divisible by {denom}")
    return numer // denom


class _OracleFamily:
    """Labeled family built over a k-partite graph: label-1 classes are the
    graph's edges, other labels are uniform; answers pattern counts on
    every family member through the unlabeled oracle with the 2^k
    partition-subset inclusion-exclusion, memoized on induced subgraphs."""

    def __init__(self, G: PartitionedGraph, H: Pattern, b: int, A, seed):
        if b < 2:
            raise InvalidParameters("label classes need b >= 2")
        self.G, self.H, self.b, self.A = G, H, b, A
        k, n = G.k, G.n
        rng = substream(seed, "edgesclusion-labels")
        self.pairs = canonical_pairs(k)
        self.labels = {}
        for (i, j) in self.pairs:
            block = [[0] * n for _ in range(n)]
            for u in range(n):
                for v in range(n):
                    if G.has_edge(i * n + u, j * n + v):
                        block[u][v] = 1
                    else:
                        block[u][v] = rng.randrange(2, b + 1)
            self.labels[(i, j)] = block
        self.intra = [0] * (k * n)
        for i in range(k):
            for u in range(n):
                for v in range(u + 1, n):
                    if rng.random() < 1 / b:
                        gu, gv = i * n + u, i * n + v
                        self.intra[gu] |= 1 << gv
                        self.intra[gv] |= 1 << gu
        self._memo: dict = {}
        self._sg_counts: dict | None = None
        self.oracle_calls = 0

    def _induced_count(self, subset: tuple, lbar_key: tuple) -> int:
        key = (subset, lbar_key)
        if key in self._memo:
            return self._memo[key]
        k, n = self.G.k, self.G.n
        masks = list(self.intra)
        active = 0
        for i in subset:
            active |= ((1 << n) - 1) << (i * n)
        pair_vals = dict(zip([pr for pr in self.pairs if pr[0] in subset and pr[1] in subset],
                             lbar_key))
        for (i, j), want in pair_vals.items():
            block = self.labels[(i, j)]
            for u in range(n):
                gu = i * n + u
                row = block[u]
                for v in range(n):
                    if row[v] == want:
                        gv = j * n + v
                        masks[gu] |= 1 << gv
                        masks[gv] |= 1 << gu
        masks = [m & active for m in masks]
        self.oracle_calls += 1
        val = self.A(tuple(masks), active)
        self._memo[key] = val
        return val

    def pattern_count(self, lbar: tuple) -> int:
        """Transversal pattern count on the family member lbar, via
        inclusion-exclusion over partition subsets."""
        k = self.G.k
        total = 0
        for r in range(k + 1):
            for subset in combinations(range(k), r):
                inner = [m for m, pr in enumerate(self.pairs)
                         if pr[0] in subset and pr[1] in subset]
                key = tuple(lbar[m] for m in inner)
                total += (-1) ** (k - r) * self._induced_count(subset, key)
        return total

    def sg_counts(self) -> dict:
        if self._sg_counts is None:
            C = len(self.pairs)
            self._sg_counts = {lbar: self.pattern_count(lbar)
                               for lbar in product(range(1, self.b + 1), repeat=C)}
        return self._sg_counts


def count_labeled_H_er(G: PartitionedGraph, H: Pattern, b: int, A, seed=0) -> int:
    """Canonical labeled count of H in a k-partite graph, computed through
    an unlabeled-H counter for Erdos-Renyi-looking graphs.

    Labeled edge subsets embeddable into some relabeling of H are counted
    in edge-count order: trees by dynamic programming, disconnected sets by
    component products, cyclic sets via the oracle family. The family
    oracle answers are only materialized when a cyclic set needs them.
    """
    family = _OracleFamily(G, H, b, A, seed)
    universe = set()
    for img in _pattern_images(H):
        for r in range(len(img) + 1):
            for sub in combinations(sorted(img), r):
                universe.add(frozenset(sub))
    table: dict = {frozenset(): 1}
    for L in sorted(universe, key=lambda s: (len(s), sorted(s))):
        if not L:
            continue
        comps = _components(L)
        if len(comps) > 1:
            val = 1
            for comp in comps:
                val = count_disconnected_union(val, table[comp])
        elif is_tree(L):
            val = count_labeled_trees(L, G)
        else:
            val = edgesclusion_step(family.sg_counts(), table, L, H, b, G.n)
        if val < 0:
            raise EdgesclusionInconsistency(f"negative count for {sorted(L)}")
        table[L] = val
    return table[H.edges]


def count_H_kpartite_via_er(G: PartitionedGraph, H: Pattern, b: int, A, seed=0) -> int:
    """Transversal unlabeled H-copies in a k-partite graph: one labeled
    pipeline run per distinct relabeling of the pattern, summed."""
    total = 0
    for t, img in enumerate(_pattern_images(H)):
        total += count_labeled_H_er(G, Pattern(H.k, img), b, A, (seed, t))
    return total


def warmup_conservation(G: PartitionedGraph, H: Pattern, b: int, seed=0):
    """The family members' canonical counts, summed over every label choice,
    against the complete-graph count scaled by the free-pair padding."""
    family = _OracleFamily(G, H, b, make_unlabeled_counter(H), seed)
    k, n = G.k, G.n
    C = k * (k - 1) // 2
    total = 0
    for lbar in product(range(1, b + 1), repeat=C):
        graph = _family_member(family, lbar)
        total += count_chghp_brute(H, graph)
    complete = n**H.k * b ** (C - H.e)
    return total, complete


def _family_member(family: _OracleFamily, lbar) -> PartitionedGraph:
    G = family.G
    k, n = G.k, G.n
    masks = [0] * (k * n)
    for m, (i, j) in enumerate(family.pairs):
        block = family.labels[(i, j)]
        for u in range(n):
            for v in range(n):
                if block[u][v] == lbar[m]:
                    gu, gv = i * n + u, j * n + v
                    masks[gu] |= 1 << gv
                    masks[gv] |= 1 << gu
    return PartitionedGraph(k, n, tuple(masks))


# --- unlabeled pattern counters (the average-case oracle) --------------------

def _popcount(x: int) -> int:
    return bin(x).count("1")


def count_triangles_unlabeled(masks, active: int) -> int:
    total = 0
    N = len(masks)
    for u in range(N):
        if not (active >> u) & 1:
            continue
        above_u = active >> (u + 1) << (u + 1)
        row_u = masks[u] & above_u
        v_bits = row_u
        while v_bits:
            v = (v_bits & -v_bits).bit_length() - 1
            v_bits &= v_bits - 1
            above_v = active >> (v + 1) << (v + 1)
            total += _popcount(masks[u] & masks[v] & above_v)
    return total


def count_p3_unlabeled(masks, active: int) -> int:
    total = 0
    for u in range(len(masks)):
        if (active >> u) & 1:
            d = _popcount(masks[u] & active)
            total += d * (d - 1) // 2
    return total


def count_k4_unlabeled(masks, active: int) -> int:
    total = 0
    N = len(masks)
    for u in range(N):
        if not (active >> u) & 1:
            continue
        row_u = masks[u] & active & (active >> (u + 1) << (u + 1))
        v_bits = row_u
        while v_bits:
            v = (v_bits & -v_bits).bit_length() - 1
            v_bits &= v_bits - 1
            common = masks[u] & masks[v] & active & (active >> (v + 1) << (v + 1))
            w_bits = common
            while w_bits:
                w = (w_bits & -w_bits).bit_length() - 1
                w_bits &= w_bits - 1
                total += _popcount(masks[w] & common & (common >> (w + 1) << (w + 1)))
    return total


def count_pattern_generic(H: Pattern, masks, active: int) -> int:
    """Any-pattern fallback: k-subsets times valid assignments over
    automorphisms. Exact and slow; meant for small graphs."""
    nodes = [v for v in range(len(masks)) if (active >> v) & 1]
    aut = _aut_count(H)
    total = 0
    for sub in combinations(nodes, H.k):
        valid = 0
        for pi in _perms(H.k):
            ok = True
            for (i, j) in H.edges:
                if not (masks[sub[pi[i]]] >> sub[pi[j]]) & 1:
                    ok = False
                    break
            valid += ok
        total += valid // aut
    return total


def make_unlabeled_counter(H: Pattern):
    """Unlabeled copy counter for the pattern, with fast paths for the
    shapes the acceptance suite exercises."""
    if H.edges == triangle().edges and H.k == 3:
        return count_triangles_unlabeled
    if H.k == 3 and H.e == 2:
        return count_p3_unlabeled
    if H.k == 4 and H.e == 6:
        return count_k4_unlabeled
    return lambda masks, active: count_pattern_generic(H, masks, active)
