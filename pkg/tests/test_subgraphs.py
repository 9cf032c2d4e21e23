from itertools import product

import pytest

from facred.dpoly import evaluate, verify_partite
from facred.errors import InvalidParameters
from facred.subgraphs import (Pattern, PartitionedGraph, base_counts, build_chghp_poly,
                              chghp_indicator, chghp_prime, count_chghp_brute,
                              count_disconnected_union, count_H_kpartite_via_er,
                              count_labeled_brute, count_labeled_H_er, count_labeled_trees,
                              count_pattern_generic, count_transversal_copies, gen_kpartite,
                              k4, make_unlabeled_counter, p3, triangle, warmup_conservation)
from facred.util import substream


def complete_kpartite(k, n):
    N = k * n
    masks = [0] * N
    for u in range(N):
        for v in range(N):
            if u // n != v // n:
                masks[u] |= 1 << v
    return PartitionedGraph(k, n, tuple(masks))


def test_chghp_brute_basics():
    G = complete_kpartite(3, 1)
    assert count_chghp_brute(triangle(), G) == 1
    # drop one edge: no transversal triangle
    masks = list(G.masks)
    masks[0] &= ~(1 << 1)
    masks[1] &= ~(1 << 0)
    G2 = PartitionedGraph(3, 1, tuple(masks))
    assert count_chghp_brute(triangle(), G2) == 0


def test_chghp_brute_vs_independent_enumeration():
    for seed in range(10):
        G = gen_kpartite(3, 5, 0.5, seed)
        want = 0
        for a in range(5):
            for b in range(5):
                for c in range(5):
                    if (G.has_edge(a, 5 + b) and G.has_edge(a, 10 + c)
                            and G.has_edge(5 + b, 10 + c)):
                        want += 1
        assert count_chghp_brute(triangle(), G) == want


def test_chghp_poly_matches_brute():
    for H in (triangle(), p3(), k4()):
        n = 2
        p = chghp_prime(n, H.k)
        poly = build_chghp_poly(H, n, p)
        assert verify_partite(poly) is None
        assert poly.d == H.e
        for seed in range(8):
            G = gen_kpartite(H.k, n, 0.5, seed)
            got = evaluate(poly, chghp_indicator(H, G)).value
            assert got == count_chghp_brute(H, G) % p
    empty = PartitionedGraph(3, 2, (0,) * 6)
    poly = build_chghp_poly(triangle(), 2, chghp_prime(2, 3))
    assert evaluate(poly, chghp_indicator(triangle(), empty)).value == 0


def test_count_labeled_trees_single_edge():
    # a 2-edge graph holds a single-edge labeled pattern twice
    masks = [0] * 4  # 2 partitions x 2 nodes
    for (u, v) in ((0, 2), (1, 3)):
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    G = PartitionedGraph(2, 2, tuple(masks))
    assert count_labeled_trees(frozenset({(0, 1)}), G) == 2


def test_count_labeled_trees_vs_brute():
    for seed in range(12):
        G = gen_kpartite(3, 4, 0.5, seed)
        for tree in (frozenset({(0, 1), (1, 2)}), frozenset({(0, 1), (0, 2)}),
                     frozenset({(0, 1)})):
            assert count_labeled_trees(tree, G) == count_labeled_brute(tree, G)
    with pytest.raises(InvalidParameters):
        count_labeled_trees(frozenset({(0, 1), (0, 2), (1, 2)}), G)


def test_count_labeled_trees_empty_graph():
    G = PartitionedGraph(3, 3, (0,) * 9)
    assert count_labeled_trees(frozenset({(0, 1), (1, 2)}), G) == 0


def test_disconnected_union():
    assert count_disconnected_union(2, 3) == 6
    assert count_disconnected_union(0, 5) == 0
    # matches brute count of a union pattern on a 4-partite graph
    for seed in range(6):
        G = gen_kpartite(4, 3, 0.5, seed)
        u = frozenset({(0, 1)})
        v = frozenset({(2, 3)})
        both = frozenset({(0, 1), (2, 3)})
        assert (count_labeled_brute(u, G) * count_labeled_brute(v, G)
                == count_labeled_brute(both, G))


def test_base_counts():
    G = gen_kpartite(3, 4, 0.5, seed=3)
    out = base_counts(G)
    assert out[("v", 0)] == 4
    for (i, j) in ((0, 1), (0, 2), (1, 2)):
        want = sum(1 for u in range(4) for v in range(4)
                   if G.has_edge(i * 4 + u, j * 4 + v))
        assert out[("e", i, j)] == want
    empty = PartitionedGraph(3, 4, (0,) * 12)
    out0 = base_counts(empty)
    assert all(out0[("e", i, j)] == 0 for (i, j) in ((0, 1), (0, 2), (1, 2)))
    assert out0[("v", 2)] == 4


def test_unlabeled_counters_match_generic():
    rng = substream(4, "cnt")
    for seed in range(10):
        G = gen_kpartite(3, 4, 0.6, seed)
        active = (1 << 12) - 1
        for H, fast in ((triangle(), count_triangles := make_unlabeled_counter(triangle())),
                        (p3(), make_unlabeled_counter(p3()))):
            assert fast(G.masks, active) == count_pattern_generic(H, G.masks, active)
    for seed in range(5):
        G = gen_kpartite(4, 3, 0.7, seed)
        active = (1 << 12) - 1
        fast = make_unlabeled_counter(k4())
        assert fast(G.masks, active) == count_pattern_generic(k4(), G.masks, active)


def test_warmup_conservation_triangle():
    # full patterns: summed family counts equal the complete-graph count
    for seed in range(6):
        G = gen_kpartite(3, 4, 0.5, seed)
        got, want = warmup_conservation(G, triangle(), 2, seed)
        assert got == want == 4**3


def test_warmup_conservation_scaled_for_sparse_pattern():
    for seed in range(4):
        G = gen_kpartite(3, 3, 0.5, seed)
        got, want = warmup_conservation(G, p3(), 2, seed)
        assert got == want  # n^k * b^(C - e)


def test_labeled_pipeline_triangle():
    A = make_unlabeled_counter(triangle())
    for seed in range(10):
        G = gen_kpartite(3, 4, 0.5, seed)
        got = count_labeled_H_er(G, triangle(), 2, A, seed)
        assert got == count_labeled_brute(triangle().edges, G)


def test_labeled_pipeline_triangle_b3():
    A = make_unlabeled_counter(triangle())
    for seed in range(6):
        G = gen_kpartite(3, 4, 0.6, seed)
        got = count_labeled_H_er(G, triangle(), 3, A, seed)
        assert got == count_labeled_brute(triangle().edges, G)


def test_labeled_pipeline_p3_uses_tree_path():
    A = make_unlabeled_counter(p3())
    for seed in range(6):
        G = gen_kpartite(3, 5, 0.5, seed)
        got = count_labeled_H_er(G, p3(), 2, A, seed)
        assert got == count_labeled_brute(p3().edges, G)


def test_labeled_pipeline_k4():
    A = make_unlabeled_counter(k4())
    for seed in range(3):
        G = gen_kpartite(4, 3, 0.5, seed)
        got = count_labeled_H_er(G, k4(), 2, A, seed)
        assert got == count_labeled_brute(k4().edges, G)


def test_transversal_pipeline_matches_brute():
    for H, n, b in ((triangle(), 4, 2), (p3(), 4, 2), (k4(), 3, 2)):
        A = make_unlabeled_counter(H)
        for seed in range(4):
            G = gen_kpartite(H.k, n, 0.5, seed)
            got = count_H_kpartite_via_er(G, H, b, A, seed)
            assert got == count_transversal_copies(H, G)


def test_pipeline_empty_graph():
    G = PartitionedGraph(3, 3, (0,) * 9)
    A = make_unlabeled_counter(triangle())
    assert count_labeled_H_er(G, triangle(), 2, A, 0) == 0
