"""Regex-match counting via acyclic-NFA dynamic programming, the reduction
from factored orthogonal-vector counting to regex counting, and the
longest-common-subsequence counting dynamic programs.

Patterns are restricted to a five-level shape (alternation of
concatenations whose pieces are symbols, symbol alternations, starred
symbol alternations, or one more alternation-of-concatenation level), which
is exactly what the orthogonal-vectors construction emits and what keeps
the NFA free of long cycles.
"""

import math
from dataclasses import dataclass
from itertools import product

from .errors import ArityMismatch, InvalidParameters, NfaNotAcyclic, UnsupportedRegexType
from .factored import FkfInstance

MAX_DEPTH = 5


@dataclass(frozen=True)
class RSym:
    ch: str


@dataclass(frozen=True)
class ROr:
    items: tuple


@dataclass(frozen=True)
class RCat:
    items: tuple


@dataclass(frozen=True)
class RStar:
    inner: object


def _depth(node) -> int:
    if isinstance(node, RSym):
        return 0
    if isinstance(node, RStar):
        return 1 + _depth(node.inner)
    return 1 + max((_depth(x) for x in node.items), default=0)


def _star_body_ok(node) -> bool:
    if isinstance(node, RSym):
        return True
    return isinstance(node, ROr) and all(isinstance(x, RSym) for x in node.items)


def validate_t0(node) -> None:
    """Raise unless the pattern fits the restricted shape: depth at most 5
    and stars applied only to symbols or symbol alternations."""
    if _depth(node) > MAX_DEPTH:
        raise UnsupportedRegexType(f"depth {_depth(node)} > {MAX_DEPTH}")

    def walk(x):
        if isinstance(x, RSym):
            return
        if isinstance(x, RStar):
            if not _star_body_ok(x.inner):
                raise UnsupportedRegexType("star over a non-symbol body")
            walk(x.inner)
            return
        if isinstance(x, (ROr, RCat)):
            for item in x.items:
                walk(item)
            return
        raise UnsupportedRegexType(f"unknown node {type(x).__name__}")

    walk(node)


def regex_size(node) -> int:
    if isinstance(node, RSym):
        return 1
    if isinstance(node, RStar):
        return 1 + regex_size(node.inner)
    return 1 + sum(regex_size(x) for x in node.items)


@dataclass
class AcyclicNfa:
    n_states: int
    start: int
    accept: int
    edges: list  # (src, symbol or None, dst); symbol self-loops allowed

    def out_edges(self):
        table = [[] for _ in range(self.n_states)]
        for (s, sym, t) in self.edges:
            table[s].append((sym, t))
        return table


def regex_to_nfa(node) -> AcyclicNfa:
    """Recursive construction whose only cycles are symbol self-loops
    (stars become a middle state with per-symbol self-loops)."""
    validate_t0(node)
    edges = []
    counter = [0]

    def fresh():
        counter[0] += 1
        return counter[0] - 1

    def build(x):
        if isinstance(x, RSym):
            s, t = fresh(), fresh()
            edges.append((s, x.ch, t))
            return s, t
        if isinstance(x, ROr):
            s, t = fresh(), fresh()
            for item in x.items:
                si, ti = build(item)
                edges.append((s, None, si))
                edges.append((ti, None, t))
            return s, t
        if isinstance(x, RCat):
            if not x.items:
                s, t = fresh(), fresh()
                edges.append((s, None, t))
                return s, t
            s0, t0 = build(x.items[0])
            for item in x.items[1:]:
                si, ti = build(item)
                edges.append((t0, None, si))
                t0 = ti
            return s0, t0
        if isinstance(x, RStar):
            syms = [x.inner.ch] if isinstance(x.inner, RSym) else [i.ch for i in x.inner.items]
            s, mid, t = fresh(), fresh(), fresh()
            edges.append((s, None, mid))
            edges.append((mid, None, t))
            for ch in syms:
                edges.append((mid, ch, mid))
            return s, t
        raise UnsupportedRegexType(type(x).__name__)

    start, accept = build(node)
    return AcyclicNfa(counter[0], start, accept, edges)


def _topo_order(nfa: AcyclicNfa):
    """Topological order ignoring self-loops; raises if a longer cycle or an
    epsilon self-loop exists."""
    indeg = [0] * nfa.n_states
    out = [[] for _ in range(nfa.n_states)]
    for (s, sym, t) in nfa.edges:
        if s == t:
            if sym is None:
                raise NfaNotAcyclic("epsilon self-loop")
            continue
        out[s].append(t)
        indeg[t] += 1
    queue = [v for v in range(nfa.n_states) if indeg[v] == 0]
    order = []
    while queue:
        v = queue.pop()
        order.append(v)
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    if len(order) != nfa.n_states:
        raise NfaNotAcyclic("cycle of length greater than one")
    return order


def count_matches(pattern, text: str, R: int) -> int:
    """Number of (start position, accepting computation) pairs over
    substrings of the text, mod R.

    f(state, j) counts computations consuming a prefix of text[j:]; states
    are swept in reverse topological order so epsilon moves and symbol
    self-loops (which advance j) are both available when needed.
    """
    if R < 1:
        raise InvalidParameters(f"R={R}")
    nfa = pattern if isinstance(pattern, AcyclicNfa) else regex_to_nfa(pattern)
    order = _topo_order(nfa)
    out = nfa.out_edges()
    n = len(text)
    f = [[0] * (n + 2) for _ in range(nfa.n_states)]
    rev = list(reversed(order))
    for j in range(n + 1, 0, -1):
        for state in rev:
            acc = 1 if state == nfa.accept else 0
            for (sym, t) in out[state]:
                if sym is None:
                    acc += f[t][j]
                elif j <= n and text[j - 1] == sym:
                    acc += f[t][j + 1]
            f[state][j] = acc % R
    return sum(f[nfa.start][j] for j in range(1, n + 1)) % R


def count_matches_brute(pattern, text: str) -> int:
    """Exponential oracle: explicit enumeration of accepting computations
    from every start position."""
    nfa = pattern if isinstance(pattern, AcyclicNfa) else regex_to_nfa(pattern)
    out = nfa.out_edges()

    def walk(state, pos) -> int:
        total = 1 if state == nfa.accept else 0
        for (sym, t) in out[state]:
            if sym is None:
                total += walk(t, pos)
            elif pos < len(text) and text[pos] == sym:
                total += walk(t, pos + 1)
        return total

    return sum(walk(nfa.start, j) for j in range(len(text)))


# --- the factored-OV construction --------------------------------------------

_STAR012 = RStar(ROr((RSym("0"), RSym("1"), RSym("2"))))


def _coord_gadget(bit: int):
    return RSym("0") if bit else ROr((RSym("0"), RSym("1")))


def _vector_gadget(word: int, b: int):
    return RCat(tuple(_coord_gadget((word >> (b - 1 - a)) & 1) for a in range(b)))


def _group_pattern(group, b: int):
    return ROr(tuple(_vector_gadget(w, b) for w in group))


def fkov2_to_regex(inst: FkfInstance):
    """Pattern and text whose substring-computation count equals the
    factored orthogonal-pair count.

    Per vector, the pattern alternates group gadgets separated by 3s, with
    [0|1|2]* filler pinned between the separators; the outermost gadgets
    are anchored (no filler on the outside), so each accepted pair of
    per-group vector choices corresponds to exactly one substring and one
    derivation. The text lists the right-hand vectors bit-by-bit with 2s
    inside groups, 3s between groups, and 4s between vectors.
    """
    if inst.k != 2:
        raise ArityMismatch("construction is for two lists")
    if inst.predicate.kind != "OV":
        raise InvalidParameters("construction expects the OV predicate")
    g, b = inst.g, inst.b
    pvgs = []
    for vec in inst.lists[0]:
        items = []
        for j in range(g):
            piece = _group_pattern(vec.groups[j], b)
            if g == 1:
                items.append(piece)
                continue
            if j == 0:
                items.extend([piece, _STAR012, RSym("3")])
            elif j < g - 1:
                items.extend([_STAR012, piece, _STAR012, RSym("3")])
            else:
                items.extend([_STAR012, piece])
        pvgs.append(RCat(tuple(items)))
    pattern = ROr(tuple(pvgs))
    texts = []
    for vec in inst.lists[1]:
        parts = ["2".join(format(w, f"0{b}b") for w in grp) for grp in vec.groups]
        texts.append("3".join(parts))
    text = "4".join(texts)
    return pattern, text


# --- longest common subsequence counting --------------------------------------

def count_kwlcs(strings, weights, R: int):
    """Weighted LCS value and the number of embedding tuples achieving it,
    mod R.

    A cell per tuple of prefix lengths holds the best weight and the count
    of position-tuple embeddings reaching it; matched cells extend the
    strictly-smaller diagonal cell, and an inclusion-exclusion over the
    2^k - 2 partial predecessors removes double counting (signs validated
    against brute force: +, -, + ... by the number of decremented
    coordinates).
    """
    k = len(strings)
    if k < 2 or k > 3:
        raise InvalidParameters("desk scale covers k in {2, 3}")
    if R < 1:
        raise InvalidParameters(f"R={R}")
    lens = [len(s) for s in strings]
    deltas = [d for d in product((0, -1), repeat=k) if any(d) and not all(d)]
    all_minus = tuple([-1] * k)
    L: dict = {}
    C: dict = {}
    for cell in product(*[range(x + 1) for x in lens]):
        if 0 in cell:
            L[cell] = 0
            C[cell] = 1 % R
            continue
        syms = [strings[i][cell[i] - 1] for i in range(k)]
        preds = []
        for d in deltas + [all_minus]:
            u = tuple(c + dd for c, dd in zip(cell, d))
            preds.append((sum(-dd for dd in d), u))
        if all(s == syms[0] for s in syms):
            diag = tuple(c - 1 for c in cell)
            best = L[diag] + weights[syms[0]]
            cnt = C[diag]
        else:
            best = max(L[u] for _, u in preds)
            cnt = 0
        for r, u in preds:
            if L[u] == best:
                cnt += (-1) ** (r + 1) * C[u]
        L[cell] = best
        C[cell] = cnt % R
    full = tuple(lens)
    return L[full], C[full] % R


def count_klcs(strings, R: int):
    """Plain LCS length and embedding count: unit weights."""
    alphabet = {ch for s in strings for ch in s}
    return count_kwlcs(strings, {ch: 1 for ch in alphabet}, R)


def brute_kwlcs(strings, weights):
    """Oracle: enumerate every subsequence embedding of every string, group
    by the spelled word, and tally max-weight tuples."""
    k = len(strings)
    spelled: list[dict] = []
    for s in strings:
        d: dict = {}
        n = len(s)
        for mask in range(1 << n):
            word = "".join(s[i] for i in range(n) if (mask >> i) & 1)
            d[word] = d.get(word, 0) + 1
        spelled.append(d)
    common = set(spelled[0])
    for d in spelled[1:]:
        common &= set(d)
    best = max(sum(weights[ch] for ch in w) for w in common)
    total = 0
    for w in common:
        if sum(weights[ch] for ch in w) == best:
            prod_val = 1
            for d in spelled:
                prod_val *= d[w]
            total += prod_val
    return best, total


# --- a small pattern parser for the CLI ---------------------------------------

def parse_regex(src: str):
    """Parse |, concatenation, *, parentheses and single-character symbols."""
    pos = [0]

    def peek():
        return src[pos[0]] if pos[0] < len(src) else None

    def eat():
        ch = src[pos[0]]
        pos[0] += 1
        return ch

    def alt():
        items = [cat()]
        while peek() == "|":
            eat()
            items.append(cat())
        return items[0] if len(items) == 1 else ROr(tuple(items))

    def cat():
        items = []
        while peek() is not None and peek() not in "|)":
            items.append(factor())
        if not items:
            raise InvalidParameters("empty concatenation")
        return items[0] if len(items) == 1 else RCat(tuple(items))

    def factor():
        node = atom()
        while peek() == "*":
            eat()
            node = RStar(node)
        return node

    def atom():
        ch = eat()
        if ch == "(":
            node = alt()
            if peek() != ")":
                raise InvalidParameters("unbalanced parentheses")
            eat()
            return node
        if ch in "|)*":
            raise InvalidParameters(f"unexpected {ch!r}")
        return RSym(ch)

    node = alt()
    if pos[0] != len(src):
        raise InvalidParameters("trailing characters")
    return node
