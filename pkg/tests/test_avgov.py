import pytest

from facred.avgov import (OvInstance, brute_count_ov, count_ov_avg, gen_ov,
                          threshold_dimension)
from facred.errors import InvalidBias


def triple_loop_count(inst):
    # independently coded bit-by-bit check
    total = 0
    for a in inst.left:
        for b in inst.right:
            if all(not ((a >> i) & 1 and (b >> i) & 1) for i in range(inst.d)):
                total += 1
    return total


def test_brute_trivial_cases():
    zeros = OvInstance(3, (0, 0), (0, 0))
    assert brute_count_ov(zeros) == 4
    ones = OvInstance(3, (7, 7), (7, 7))
    assert brute_count_ov(ones) == 0


def test_brute_matches_triple_loop():
    for seed in range(30):
        inst = gen_ov(8, 6, 0.5, seed=seed)
        assert brute_count_ov(inst) == triple_loop_count(inst)


def test_short_regime_exact():
    for seed in range(50):
        inst = gen_ov(16, 4, 0.5, seed=seed)
        assert count_ov_avg(inst) == brute_count_ov(inst)


def test_multiplicity_weighting():
    inst = OvInstance(2, (0b01, 0b01, 0b01), (0b10, 0b10))
    assert count_ov_avg(inst) == 6  # 3 copies x 2 copies, orthogonal


def test_all_ones_never_orthogonal():
    inst = OvInstance(4, (0b1111,) * 5, (0b1111,) * 5)
    assert count_ov_avg(inst) == 0


def test_threshold_formula():
    # mu=1/2: 2 lg(e) lg(n) * 16
    assert threshold_dimension(256, 0.5) == pytest.approx(2 * 1.4426950408889634 * 8 * 16)


def test_long_regime_returns_zero_above_threshold():
    # d above the threshold: the rule fires without looking at the vectors
    inst = gen_ov(256, 400, 0.5, seed=1)
    assert inst.d > threshold_dimension(256, 0.5)
    assert count_ov_avg(inst) == 0


def test_paper_parameter_point_is_zero():
    # n=256, mu=1/2, d=200: below the loose threshold, but the true count is
    # zero with overwhelming probability and the exact path reports it
    for seed in range(20):
        inst = gen_ov(256, 200, 0.5, seed=seed)
        assert count_ov_avg(inst) == 0


def test_gen_bias_validation():
    with pytest.raises(InvalidBias):
        gen_ov(4, 4, 1.0, seed=0)
