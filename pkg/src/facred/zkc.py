"""Average-case zero-k-clique: generator, brute force, the small-range
counting algorithm, the self-reduction splitter, and the chain that turns a
detection oracle into exact counting.

An instance is a complete k-partite graph with n nodes per partition and
iid uniform edge weights in [0, R); a clique is a zero clique when its edge
weights sum to 0 mod R.
"""

import math
from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from .errors import InvalidParameters
from .util import lg2_desk, substream

SUPERNODE_CAP = 20_000


@dataclass(frozen=True)
class ZkcInstance:
    k: int
    n: int
    R: int
    weights: dict = field(compare=False)  # (i, j) with i < j -> (n, n) int array

    def __post_init__(self):
        if self.k < 2 or self.n < 1 or self.R < 1:
            raise InvalidParameters(f"k={self.k}, n={self.n}, R={self.R}")
        for (i, j), w in self.weights.items():
            if not (0 <= i < j < self.k):
                raise InvalidParameters(f"bad pair {(i, j)}")
            if w.shape != (self.n, self.n):
                raise InvalidParameters(f"weight block {(i, j)} has shape {w.shape}")

    def pair(self, i: int, j: int) -> np.ndarray:
        return self.weights[(i, j)]

    def clique_sum(self, nodes) -> int:
        total = 0
        for i, j in combinations(range(self.k), 2):
            total += int(self.weights[(i, j)][nodes[i], nodes[j]])
        return total % self.R


def gen_aczkc(n: int, k: int, R: int, seed) -> ZkcInstance:
    """Complete k-partite instance with iid Unif[0, R-1] edge weights."""
    rng = np.random.default_rng(substream(seed, "zkc", n, k, R).getrandbits(64))
    weights = {(i, j): rng.integers(0, R, size=(n, n), dtype=np.int64)
               for i, j in combinations(range(k), 2)}
    return ZkcInstance(k, n, R, weights)


def _sum_tensor(inst: ZkcInstance, heads) -> np.ndarray:
    """Mod-R sums over the last three partitions, given fixed head nodes."""
    k, R = inst.k, inst.R
    a, b, c = k - 3, k - 2, k - 1
    acc = (inst.pair(a, b)[:, :, None] + inst.pair(a, c)[:, None, :]
           + inst.pair(b, c)[None, :, :])
    if heads:
        base = 0
        for i, vi in enumerate(heads):
            for j in range(i + 1, len(heads)):
                base += int(inst.pair(i, j)[vi, heads[j]])
            base_row_a = inst.pair(i, a)[vi][:, None, None]
            base_row_b = inst.pair(i, b)[vi][None, :, None]
            base_row_c = inst.pair(i, c)[vi][None, None, :]
            acc = acc + base_row_a + base_row_b + base_row_c
        acc = acc + base
    return acc % R


def brute_count(inst: ZkcInstance) -> int:
    """Exact zero-clique count by enumeration (vectorized on 3 partitions)."""
    if inst.k == 2:
        return int((inst.pair(0, 1) % inst.R == 0).sum())
    if inst.n**inst.k <= 256:
        pairs = list(combinations(range(inst.k), 2))
        rows = {p: inst.weights[p].tolist() for p in pairs}
        return sum(1 for nodes in product(range(inst.n), repeat=inst.k)
                   if sum(rows[(i, j)][nodes[i]][nodes[j]] for i, j in pairs) % inst.R == 0)
    total = 0
    for heads in product(range(inst.n), repeat=inst.k - 3):
        total += int((_sum_tensor(inst, heads) == 0).sum())
    return total


def brute_search(inst: ZkcInstance):
    """Some zero clique as a node tuple (one per partition), or None."""
    if inst.k == 2:
        hits = np.argwhere(inst.pair(0, 1) % inst.R == 0)
        return tuple(int(x) for x in hits[0]) if len(hits) else None
    if inst.n**inst.k <= 256:
        pairs = list(combinations(range(inst.k), 2))
        rows = {p: inst.weights[p].tolist() for p in pairs}
        for nodes in product(range(inst.n), repeat=inst.k):
            if sum(rows[(i, j)][nodes[i]][nodes[j]] for i, j in pairs) % inst.R == 0:
                return nodes
        return None
    for heads in product(range(inst.n), repeat=inst.k - 3):
        hits = np.argwhere(_sum_tensor(inst, heads) == 0)
        if len(hits):
            return tuple(heads) + tuple(int(x) for x in hits[0])
    return None


def _super_groups(k: int) -> list[list[int]]:
    q, r = divmod(k, 3)
    sizes = [q + 1] * r + [q] * (3 - r)
    groups, start = [], 0
    for s in sizes:
        groups.append(list(range(start, start + s)))
        start += s
    return groups


def count_small_range(inst: ZkcInstance) -> int:
    """Exact count via the super-node triangle construction: group the k
    partitions into three blocks, guess two of the three triangle edge
    weights (R^2 guesses), count matches by matrix product.

    Each block's internal clique weight is charged to one designated
    super-edge (AB gets A's, BC gets B's, CA gets C's), so the three
    super-edge weights sum exactly to the clique weight.
    """
    if inst.k < 3:
        raise InvalidParameters("small-range algorithm needs k >= 3")
    R = inst.R
    groups = _super_groups(inst.k)
    supers = [list(product(range(inst.n), repeat=len(grp))) for grp in groups]
    if max(len(s) for s in supers) > SUPERNODE_CAP:
        raise InvalidParameters("super-node count exceeds memory cap")

    def internal(grp, nodes) -> int:
        tot = 0
        for x in range(len(grp)):
            for y in range(x + 1, len(grp)):
                tot += int(inst.pair(grp[x], grp[y])[nodes[x], nodes[y]])
        return tot

    def cross(grp_a, nodes_a, grp_b, nodes_b) -> int:
        tot = 0
        for x, i in enumerate(grp_a):
            for y, j in enumerate(grp_b):
                if i < j:
                    tot += int(inst.pair(i, j)[nodes_a[x], nodes_b[y]])
                else:
                    tot += int(inst.pair(j, i)[nodes_b[y], nodes_a[x]])
        return tot

    gA, gB, gC = groups
    sA, sB, sC = supers
    AB = np.zeros((len(sA), len(sB)), dtype=np.int64)
    BC = np.zeros((len(sB), len(sC)), dtype=np.int64)
    CA = np.zeros((len(sC), len(sA)), dtype=np.int64)
    for ia, na in enumerate(sA):
        intA = internal(gA, na)
        for ib, nb in enumerate(sB):
            AB[ia, ib] = (cross(gA, na, gB, nb) + intA) % R
    for ib, nb in enumerate(sB):
        intB = internal(gB, nb)
        for ic, nc in enumerate(sC):
            BC[ib, ic] = (cross(gB, nb, gC, nc) + intB) % R
    for ic, nc in enumerate(sC):
        intC = internal(gC, nc)
        for ia, na in enumerate(sA):
            CA[ic, ia] = (cross(gC, nc, gA, na) + intC) % R

    total = 0
    for w1 in range(R):
        m1 = (AB == w1).astype(np.int64)
        for w2 in range(R):
            w3 = (-w1 - w2) % R
            m2 = (BC == w2).astype(np.int64)
            m3 = (CA == w3)
            total += int(((m1 @ m2) * m3.T).sum())
    return total


def split(inst: ZkcInstance, x: int, seed) -> list[ZkcInstance]:
    """Random per-partition partition into n/x blocks; the (n/x)^k
    sub-instances cover every witness exactly once, so sub-counts add up
    to the total."""
    if inst.n % x != 0:
        raise InvalidParameters(f"x={x} does not divide n={inst.n}")
    rng = substream(seed, "split")
    blocks = []
    for _ in range(inst.k):
        perm = list(range(inst.n))
        rng.shuffle(perm)
        blocks.append([perm[i * x:(i + 1) * x] for i in range(inst.n // x)])
    subs = []
    for choice in product(range(inst.n // x), repeat=inst.k):
        weights = {}
        for (i, j) in combinations(range(inst.k), 2):
            rows = blocks[i][choice[i]]
            cols = blocks[j][choice[j]]
            weights[(i, j)] = inst.pair(i, j)[np.ix_(rows, cols)]
        subs.append(ZkcInstance(inst.k, x, inst.R, weights))
    return subs


def _take_nodes(inst: ZkcInstance, chosen) -> ZkcInstance:
    weights = {(i, j): inst.pair(i, j)[np.ix_(chosen[i], chosen[j])]
               for i, j in combinations(range(inst.k), 2)}
    return ZkcInstance(inst.k, len(chosen[0]), inst.R, weights)


def search_via_detection(inst: ZkcInstance, detector, epsilon: float = 0.5,
                         seed=0):
    """Self-reduction search: split into about n^(k*eps) sub-instances of
    size about n^(1-eps), brute-force any sub-instance the detector flags.
    Returns a witness (global node tuple) or None."""
    if not 0 < epsilon < 1:
        raise InvalidParameters(f"epsilon={epsilon}")
    target = max(1, round(inst.n ** (1 - epsilon)))
    x = max(d for d in range(1, inst.n + 1) if inst.n % d == 0 and d <= target)
    if x == inst.n or inst.n <= 3:
        # identity split: one sub-instance, which is the input itself
        return brute_search(inst) if detector(inst) else None
    rng = substream(seed, "search-split")
    blocks = []
    for _ in range(inst.k):
        perm = list(range(inst.n))
        rng.shuffle(perm)
        blocks.append([perm[i * x:(i + 1) * x] for i in range(inst.n // x)])
    for choice in product(range(inst.n // x), repeat=inst.k):
        chosen = [blocks[i][choice[i]] for i in range(inst.k)]
        sub = _take_nodes(inst, chosen)
        if detector(sub):
            hit = brute_search(sub)
            if hit is not None:
                return tuple(chosen[i][hit[i]] for i in range(inst.k))
    return None


def listing_rounds(n: int, m: int, k: int, coverage: int = 3) -> int:
    """Rounds needed so a specific witness lands alone in a subsample with
    overwhelming probability: about coverage * (n/m)^k * ln(n^k)."""
    return math.ceil(coverage * (n / m) ** k * max(1.0, math.log(max(n, 2) ** k)))


def listing_subsample(n: int, k: int) -> int:
    """Nodes kept per partition per round; floored so desk-scale n (where
    n/(k lg^2 n) collapses to zero) still isolates witnesses quickly."""
    return max(1, n // (k * lg2_desk(n)), n // (2 * k))


def list_all_via_search(inst: ZkcInstance, searcher, seed=0,
                        rounds: int | None = None) -> set:
    """Repeatedly subsample a few nodes per partition, run the searcher, and
    on a hit exhaustively check every k-set sharing a node with it inside
    the subsample. Every returned clique is verified zero mod R."""
    n, k = inst.n, inst.k
    m = listing_subsample(n, k)
    if rounds is None:
        rounds = listing_rounds(n, m, k)
    rng = substream(seed, "listing")
    found: set = set()
    for _ in range(rounds):
        chosen = [sorted(rng.sample(range(n), m)) for _ in range(k)]
        sub = _take_nodes(inst, chosen)
        hit = searcher(sub)
        if hit is None:
            continue
        global_hit = tuple(chosen[i][hit[i]] for i in range(k))
        if inst.clique_sum(global_hit) == 0:
            found.add(global_hit)
        # sweep the subsample for cliques sharing a node with the hit
        for nodes in product(range(m), repeat=k):
            if all(nodes[i] != hit[i] for i in range(k)):
                continue
            g = tuple(chosen[i][nodes[i]] for i in range(k))
            if inst.clique_sum(g) == 0:
                found.add(g)
    return found


def reduce_range(inst: ZkcInstance, targetR: int, seed):
    """Shrink the weight range with an exactly-additive multiply-mod hash.

    The modulus actually used is the largest divisor of R at most targetR,
    so a zero clique mod R stays a zero clique mod the new range for every
    odd multiplier. Returns the hashed instance and a verifier that checks
    candidates against the original weights.
    """
    def verifier(nodes) -> bool:
        return inst.clique_sum(nodes) == 0

    if targetR >= inst.R:
        return inst, verifier
    newR = max(d for d in range(1, targetR + 1) if inst.R % d == 0)
    rng = substream(seed, "hash")
    a = 2 * rng.randrange(1, inst.R) + 1
    weights = {pair: (a * w) % newR for pair, w in inst.weights.items()}
    return ZkcInstance(inst.k, inst.n, newR, weights), verifier


def count_via_detection(inst: ZkcInstance, detector, seed=0,
                        small_cap: int = 16) -> int:
    """Exact count from a detection oracle when every detector call is
    correct: small ranges go to the matrix-product counter, huge ranges are
    hashed down and listed, the middle regime splits into sub-instances
    whose range matches their size and lists each."""
    n, k, R = inst.n, inst.k, inst.R

    def searcher(sub):
        return search_via_detection(sub, detector, 0.5, seed)

    if R <= small_cap and k >= 3:
        return count_small_range(inst)
    if R > n**k:
        hashed, verify = reduce_range(inst, n**k, seed)
        candidates = list_all_via_search(hashed, searcher, seed)
        return sum(1 for c in candidates if verify(c))
    # middle regime: sub-instance size near R^(1/k)
    target = max(1, round(R ** (1 / k)))
    x = max(d for d in range(1, n + 1) if n % d == 0 and d <= max(1, target))
    total = 0
    for i, sub in enumerate(split(inst, x, seed)):
        total += len(list_all_via_search(sub, searcher, (seed, i)))
    return total
