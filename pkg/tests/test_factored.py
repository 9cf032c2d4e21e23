from itertools import product

import pytest

from facred.dpoly import evaluate, verify_partite
from facred.errors import InvalidBias, WidthMismatch
from facred.factored import (OV, SUM_TARGET, SUM_ZERO, XOR, FactoredVector, FkfInstance,
                             Predicate, build_f_ckfunc, build_f_ffkc, canonical_pairs, circ,
                             circledcirc, count_ffkc, count_fkf, count_fkf_expanded,
                             detect_ffkc, detect_fkf, enumerate_accepted, ffkc_indicator,
                             fkf_from_indicator, fkf_indicator, fvec, gen_ffkc, gen_fkf,
                             paper_example_uv, paper_example_w)
from facred.util import substream


def naive_circ(sets, b, pred):
    return sum(1 for combo in product(*sets) if pred.accept(combo, b))


def test_circ_paper_group_zero():
    # the worked example's first groups: 4 orthogonal pairs
    u0 = [0b001, 0b010]
    v0 = [0b000, 0b010, 0b110]
    assert circ([u0, v0], 3, OV(2)) == 4


def test_circ_empty_and_xor():
    assert circ([[], [0b01]], 2, OV(2)) == 0
    assert circ([[0b01], [0b01]], 2, XOR(2)) == 1


def test_circ_fast_paths_match_naive():
    rng = substream(1, "circ")
    preds = [OV(2), OV(3), XOR(2), XOR(3), SUM_ZERO(2), SUM_ZERO(3), SUM_TARGET(3)]
    for _ in range(300):
        pred = rng.choice(preds)
        b = rng.randrange(1, 4)
        sets = [sorted(rng.sample(range(1 << b), rng.randrange(0, (1 << b) + 1)))
                for _ in range(pred.arity)]
        assert circ(sets, b, pred) == naive_circ(sets, b, pred)


def test_table_predicate():
    pred = Predicate("TABLE", 2, frozenset({(0b01, 0b10), (0b11, 0b11)}))
    assert circ([[0b01, 0b11], [0b10, 0b11]], 2, pred) == 2


def test_circledcirc_paper_example():
    inst = paper_example_uv()
    u, v = inst.lists[0][0], inst.lists[1][0]
    assert circledcirc([v, u], OV(2)) == 8  # 4 * 2
    w = paper_example_w()
    assert circledcirc([w, u], OV(2)) == 0
    assert circledcirc([w, v], OV(2)) == 0


def test_circledcirc_single_group():
    a = fvec(1, 2, [[0b00, 0b01]])
    b = fvec(1, 2, [[0b10]])
    assert circledcirc([a, b], OV(2)) == circ([a.groups[0], b.groups[0]], 2, OV(2))


def test_circledcirc_shape_mismatch():
    a = fvec(1, 2, [[0b00]])
    b = fvec(2, 2, [[0b00], [0b01]])
    with pytest.raises(WidthMismatch):
        circledcirc([a, b], OV(2))


def test_count_fkf_paper_singletons():
    inst = paper_example_uv()
    assert count_fkf(inst) == 8
    assert detect_fkf(inst)


def test_count_fkf_empty_list_vector():
    w = paper_example_w()
    inst = FkfInstance(2, 1, 2, 3, ((w,), (paper_example_uv().lists[1][0],)), OV(2))
    assert count_fkf(inst) == 0
    assert not detect_fkf(inst)


def test_count_fkf_vs_expansion_oracle():
    # [DERIVED] expansion oracle over all represented bg-bit vectors
    for seed in range(40):
        inst = gen_fkf(n=4, k=2, g=2, b=2, mu=0.5, seed=seed)
        assert count_fkf(inst) == count_fkf_expanded(inst)


def test_count_fkf_monotone_in_strings():
    rng = substream(5, "mono")
    for seed in range(20):
        inst = gen_fkf(n=3, k=2, g=2, b=2, mu=0.4, seed=seed)
        base = count_fkf(inst)
        j = rng.randrange(2)
        v = rng.randrange(3)
        i = rng.randrange(2)
        vec = inst.lists[j][v]
        missing = sorted(set(range(4)) - set(vec.groups[i]))
        if not missing:
            continue
        groups = list(vec.groups)
        groups[i] = tuple(sorted(groups[i] + (missing[0],)))
        lists = [list(lst) for lst in inst.lists]
        lists[j][v] = FactoredVector(2, 2, tuple(groups))
        bigger = FkfInstance(2, 3, 2, 2, tuple(tuple(l) for l in lists), OV(2))
        assert count_fkf(bigger) >= base


def test_gen_determinism_and_bias():
    a = gen_fkf(3, 2, 2, 2, 0.5, seed=7)
    b = gen_fkf(3, 2, 2, 2, 0.5, seed=7)
    assert a == b
    with pytest.raises(InvalidBias):
        gen_fkf(3, 2, 2, 2, 1.0, seed=7)
    # per-string inclusion frequency within 3 sigma of mu over many sets
    total, included = 0, 0
    for seed in range(300):
        inst = gen_fkf(2, 2, 2, 2, 0.5, seed=seed)
        for lst in inst.lists:
            for vec in lst:
                for grp in vec.groups:
                    total += 4
                    included += len(grp)
    sigma = (0.25 / total) ** 0.5
    assert abs(included / total - 0.5) <= 4 * sigma


def test_count_ffkc_forced_triangle():
    # one triangle whose labels hold only all-zero strings, SUM_ZERO
    zeros = fvec(1, 2, [[0]])
    edges = {(0, 0, 1, 0): zeros, (0, 0, 2, 0): zeros, (1, 0, 2, 0): zeros}
    from facred.factored import FfkcInstance
    inst = FfkcInstance(3, 1, 1, 2, edges, SUM_ZERO(3))
    assert count_ffkc(inst) == 1
    assert detect_ffkc(inst)
    # remove one edge: isClique = 0
    inst2 = FfkcInstance(3, 1, 1, 2, {k: v for k, v in edges.items() if k[0] != 1},
                         SUM_ZERO(3))
    assert count_ffkc(inst2) == 0


def test_count_ffkc_vs_triple_loop_oracle():
    # [DERIVED] independent triple loop over node choices
    for seed in range(25):
        inst = gen_ffkc(n=3, k=3, g=1, b=2, mu=0.5, seed=seed)
        pairs = canonical_pairs(3)
        expected = 0
        for nodes in product(range(3), repeat=3):
            labels = [inst.edges[(i, nodes[i], j, nodes[j])] for (i, j) in pairs]
            prod_val = 1
            for gi in range(1):
                cnt = 0
                for combo in product(*[lab.groups[gi] for lab in labels]):
                    cnt += sum(combo) % 4 == 0
                prod_val *= cnt
            expected += prod_val
        assert count_ffkc(inst) == expected


def test_build_f_ckfunc_paper_pair():
    inst = paper_example_uv()
    for p in (11, 101):
        poly = build_f_ckfunc(1, 2, 2, 3, OV(2), p)
        assert verify_partite(poly) is None
        assert poly.d == 4  # k*g
        assert evaluate(poly, fkf_indicator(inst)).value == 8 % p
        assert evaluate(poly, 0).value == 0


def test_build_f_ckfunc_random_matches_count():
    # [DERIVED] brute count oracle mod p
    p = 101
    poly = build_f_ckfunc(3, 2, 2, 2, OV(2), p)
    assert verify_partite(poly) is None
    for seed in range(60):
        inst = gen_fkf(3, 2, 2, 2, 0.5, seed=seed)
        assert evaluate(poly, fkf_indicator(inst)).value == count_fkf(inst) % p


def test_fkf_indicator_roundtrip():
    inst = gen_fkf(3, 2, 2, 2, 0.5, seed=3)
    mask = fkf_indicator(inst)
    assert fkf_from_indicator(mask, 3, 2, 2, 2, OV(2)) == inst


def test_build_f_ffkc_matches_count():
    p = 101
    poly = build_f_ffkc(2, 3, 1, 2, SUM_ZERO(3), p)
    assert verify_partite(poly) is None
    assert poly.d == 3  # l*g = 3*1
    for seed in range(20):
        inst = gen_ffkc(2, 3, 1, 2, 0.5, seed=seed)
        assert evaluate(poly, ffkc_indicator(inst)).value == count_ffkc(inst) % p


def test_enumerate_accepted_ov_2bit():
    acc = enumerate_accepted(OV(2), 2)
    assert len(acc) == 9  # pairs of 2-bit strings with AND = 0
    assert (0b01, 0b10) in acc and (0b11, 0b01) not in acc
