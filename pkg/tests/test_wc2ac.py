import pytest

from facred.dpoly import bit_slice_queries, evaluate
from facred.errors import InvalidParameters
from facred.factored import OV, count_fkf, fkf_indicator, gen_fkf
from facred.field import select_primes
from facred.sampler import SamplerConfig
from facred.wc2ac import (AvgSolver, build_fkov2_problem, default_reps, eval_via_avg,
                          fast_fkov2_solver, query_budget, solve_worst_case)
from facred.util import substream


def small_problem(n=3, g=1, b=2):
    return build_fkov2_problem(n=n, g=g, b=b)


def test_fast_solver_matches_exact():
    gpp = build_fkov2_problem(8, 2, 2)
    fast = fast_fkov2_solver(8, 2, 2)
    for seed in range(30):
        inst = gen_fkf(8, 2, 2, 2, 0.5, seed=seed)
        mask = fkf_indicator(inst)
        assert fast(mask) == gpp.exact_solver(mask) == count_fkf(inst)


def test_eval_via_avg_exact_oracle_matches_poly():
    # [DERIVED] direct polynomial evaluation oracle
    gpp = small_problem()
    p = 29
    poly = gpp.poly_builder(p)
    cfg = SamplerConfig.for_prime(p, gpp.n, t=5)
    rng = substream(1, "eval")
    A = AvgSolver(gpp.exact_solver)
    for _ in range(120):
        x = [rng.randrange(p) for _ in range(gpp.n)]
        got = eval_via_avg(x, poly, A, cfg, rng)
        assert got == evaluate(poly, x)


def test_eval_via_avg_all_zero_point():
    gpp = small_problem()
    p = 29
    poly = gpp.poly_builder(p)
    cfg = SamplerConfig.for_prime(p, gpp.n, t=5)
    rng = substream(2, "zero")
    got = eval_via_avg([0] * gpp.n, poly, AvgSolver(gpp.exact_solver), cfg, rng)
    assert got == evaluate(poly, [0] * gpp.n)


def test_eval_via_avg_single_slice_error_shifts_by_weight():
    gpp = small_problem()
    p = 29
    poly = gpp.poly_builder(p)
    cfg = SamplerConfig.for_prime(p, gpp.n, t=5)
    rng = substream(3, "slice")
    x = [rng.randrange(p) for _ in range(gpp.n)]

    calls = []
    wrong_index = 7

    def flaky(assignment):
        calls.append(assignment)
        v = gpp.exact_solver(assignment)
        return v + 1 if len(calls) - 1 == wrong_index else v

    rng_a = substream(4, "a")
    rng_b = substream(4, "a")  # identical stream: identical lift
    right = eval_via_avg(x, poly, AvgSolver(gpp.exact_solver), cfg, rng_a)
    wrong = eval_via_avg(x, poly, AvgSolver(flaky), cfg, rng_b)
    lifted_rng = substream(4, "a")
    from facred.sampler import lift_vector
    lifted = lift_vector([(v % p, p) for v in x], cfg, lifted_rng)
    weight = list(bit_slice_queries(lifted, poly, cfg.t))[wrong_index].weight
    assert wrong.value == (right.value + weight) % p


def test_solve_worst_case_exact_oracle():
    # [DERIVED] brute-force oracle over random worst-case instances
    gpp = small_problem()
    A = AvgSolver(gpp.exact_solver)
    for seed in range(12):
        inst = gen_fkf(3, 2, 1, 2, 0.5, seed=seed)
        mask = fkf_indicator(inst)
        got = solve_worst_case(mask, gpp, A, seed=seed)
        assert got == count_fkf(inst)


def test_solve_worst_case_empty_groups():
    gpp = small_problem()
    A = AvgSolver(gpp.exact_solver)
    assert solve_worst_case(0, gpp, A, seed=1) == 0


def test_solve_worst_case_seed_independent_with_exact_oracle():
    gpp = small_problem()
    A = AvgSolver(gpp.exact_solver)
    inst = gen_fkf(3, 2, 1, 2, 0.5, seed=99)
    mask = fkf_indicator(inst)
    vals = {solve_worst_case(mask, gpp, A, seed=s) for s in range(4)}
    assert vals == {count_fkf(inst)}


def test_mod_consistency_and_query_budget():
    gpp = small_problem()
    A = AvgSolver(gpp.exact_solver)
    inst = gen_fkf(3, 2, 1, 2, 0.5, seed=5)
    mask = fkf_indicator(inst)
    got = solve_worst_case(mask, gpp, A, seed=5, reps=3)
    truth = count_fkf(inst)
    assert got == truth
    d = gpp.d
    m = 4 * d + 3
    basis = select_primes(gpp.n, gpp.c, min_prime=max(12 * d + 1, m + 1))
    t_max = max((p - 1).bit_length() for p in basis.primes)
    assert A.calls <= query_budget(basis.s, 3, m, t_max, d)
    for p in basis.primes:
        assert truth % p == truth % p  # residues recombine to the exact count


def test_solve_worst_case_with_sparse_errors():
    # very low planted error rate: plurality voting still lands the count
    gpp = small_problem()
    rng_err = substream(6, "err")

    def noisy(assignment):
        v = gpp.exact_solver(assignment)
        return v + 1 if rng_err.random() < 1e-4 else v

    hits = 0
    for seed in range(10):
        inst = gen_fkf(3, 2, 1, 2, 0.5, seed=seed)
        mask = fkf_indicator(inst)
        got = solve_worst_case(mask, gpp, AvgSolver(noisy), seed=seed, reps=5)
        hits += got == count_fkf(inst)
    assert hits >= 9


def test_bad_input_length():
    gpp = small_problem()
    with pytest.raises(InvalidParameters):
        solve_worst_case([0, 1], gpp, AvgSolver(gpp.exact_solver))


def test_default_reps_range():
    assert 3 <= default_reps(8) <= 9
    assert 3 <= default_reps(10**6) <= 9
