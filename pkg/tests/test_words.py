import math

import pytest

from tightprod.graph import Permutation, PermutationGraph
from tightprod.words import (
    all_words,
    closed_path_count,
    count_imprimitive,
    cyclic_core,
    estimate_p,
    evaluate_word,
    exact_p,
    is_primitive,
    primitive_p_bound,
    reduce_word,
    trace_of_power,
    word_order,
)
from tightprod.experiments import random_permutation, rng_from
from corpus import oracle_reduce_all_orders, oracle_word_order


def test_reduce_examples():
    assert reduce_word([1, -1]) == ()
    assert reduce_word([1, 2, -2, 1]) == (1, 1)
    assert reduce_word([-2, 2, 1]) == (1,)
    with pytest.raises(ValueError):
        reduce_word([1, 0])


def test_reduce_is_idempotent_and_shrinking():
    rng = rng_from(40)
    for _ in range(300):
        length = int(rng.integers(0, 13))
        w = tuple(int(x) for x in rng.choice([1, -1, 2, -2], size=length))
        r = reduce_word(w)
        assert len(r) <= len(w)
        assert reduce_word(r) == r


def test_reduce_matches_all_order_oracle_random_length_12():
    rng = rng_from(41)
    for _ in range(100):
        w = tuple(int(x) for x in rng.choice([1, -1, 2, -2], size=12))
        results = oracle_reduce_all_orders(w)
        assert results == {reduce_word(w)}


def test_order_examples():
    assert word_order([1, 2, -1]) == 1 and is_primitive([1, 2, -1])
    assert word_order([1, 2, 1, 2]) == 2
    assert word_order([1, -1]) == 0
    assert word_order([1, 1, 1]) == 3
    assert cyclic_core([1, 2, -1]) == (2,)


def test_order_matches_factorization_oracle_exhaustively():
    for length in range(0, 7):
        for w in all_words(2, length):
            assert word_order(w) == oracle_word_order(w)


def test_order_is_reduction_invariant_and_multiplicative():
    rng = rng_from(42)
    for _ in range(100):
        length = int(rng.integers(1, 9))
        w = tuple(int(x) for x in rng.choice([1, -1, 2, -2], size=length))
        assert word_order(w) == word_order(reduce_word(w))
        core = cyclic_core(w)
        if core:
            for m in (2, 3):
                assert word_order(core * m) == m * word_order(core)


def test_count_imprimitive_cells():
    assert count_imprimitive(1, 1) == 4  # orders 2,0,0,2
    for d in (1, 2):
        for k in (1, 2, 3, 4):
            count = count_imprimitive(d, k)
            assert count <= k * k * (2 * math.sqrt(2 * d)) ** (2 * k)


def test_count_imprimitive_cap():
    with pytest.raises(ValueError):
        count_imprimitive(4, 10)


def test_evaluate_word_examples():
    rho = Permutation([1, 2, 0])
    assert evaluate_word([], [rho]).is_identity()
    assert evaluate_word([1], [rho]) == rho
    rng = rng_from(43)
    s1, s2 = random_permutation(5, rng), random_permutation(5, rng)
    assert evaluate_word([1, 2], [s1, s2]) == s2.compose(s1)
    assert evaluate_word([-1], [s1]) == s1.inverse()
    with pytest.raises(ValueError):
        evaluate_word([3], [s1, s2])


def test_evaluate_respects_reduction():
    rng = rng_from(44)
    for _ in range(1000):
        length = int(rng.integers(0, 10))
        w = tuple(int(x) for x in rng.choice([1, -1, 2, -2], size=length))
        perms = [random_permutation(6, rng) for _ in range(2)]
        assert evaluate_word(w, perms) == evaluate_word(reduce_word(w), perms)


def test_exact_p_cap():
    with pytest.raises(ValueError):
        exact_p([1], 9)


def test_exact_p_examples():
    assert exact_p([1, -1], 4) == 1.0
    for n in (2, 3, 4, 5):
        assert exact_p([1], n) == pytest.approx(1.0 / n)
    assert exact_p([1, 2], 3, d=2) == pytest.approx(1.0 / 3)


def test_estimate_p_matches_exact_on_tiny_case():
    est = estimate_p([1, 2], 4, 40_000, seed=5)
    assert abs(est.p_hat - 0.25) <= 4 * est.std_error + 1e-9


def test_estimate_p_deterministic_and_validated():
    a = estimate_p([1, 2, -1], 30, 5000, seed=9)
    b = estimate_p([1, 2, -1], 30, 5000, seed=9)
    assert a == b
    with pytest.raises(ValueError):
        estimate_p([1], 10, 0, seed=1)


def test_primitive_bound_monte_carlo_small():
    # one primitive word, moderately sized check (the full batch runs in
    # the acceptance suite)
    w = (1, 2, -1, 2)
    assert is_primitive(w)
    n, k = 100, len(w)
    est = estimate_p(w, n, 20_000, seed=17)
    assert est.p_hat <= primitive_p_bound(n, k) + 3 * est.std_error


def test_closed_path_count_examples():
    rho = Permutation([1, 2, 0])
    tri = PermutationGraph(3, (rho,))
    assert closed_path_count(tri, 2) == 6 == trace_of_power(tri, 2)

    loop = PermutationGraph(1, (Permutation([0]),))
    assert closed_path_count(loop, 2) == 4 == trace_of_power(loop, 2)

    rng = rng_from(45)
    k5 = PermutationGraph(5, (random_permutation(5, rng), random_permutation(5, rng)))
    assert closed_path_count(k5, 4) == trace_of_power(k5, 4)


def test_closed_path_count_rejects_pairing_and_odd_length():
    pg = PermutationGraph(2, (Permutation([1, 0]),), Permutation([1, 0]))
    with pytest.raises(ValueError):
        closed_path_count(pg, 2)
    with pytest.raises(ValueError):
        closed_path_count(PermutationGraph(2, (Permutation([1, 0]),)), 3)
