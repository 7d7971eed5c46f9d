import pytest

from nilcube.lincomb import LinComb
from nilcube.linalg import NonzeroWitness, ZeroCertificate, verify_certificate
from nilcube.oracle import (
    commutator_product,
    component_dimension,
    doubled_pair_word,
    evaluate_functional,
    functional_applicable,
    functional_value,
    nilpotency_degree,
    chain_parity_route,
    verify_functional,
    word_sign,
    zero_test,
)
from nilcube.rewrite import canonicalize
from nilcube.words import parse_word


def comb(text, p):
    return LinComb.parse(text, p)


# ------------------------------------------------------------------ zero_test


def test_zero_test_cube_word():
    dec = zero_test(comb("x1^4", 0))
    assert dec.is_zero and dec.status == "decided"
    assert verify_certificate(dec.descriptor, dec.target, dec.certificate)


def test_zero_test_w_nonzero_mod3_zero_mod5():
    w = "x1^2 x2^2 x1 x2"
    dec3 = zero_test(comb(w, 3))
    assert dec3.is_zero is False
    dec5 = zero_test(comb(w, 5))
    assert dec5.is_zero is True
    for dec in (dec3, dec5):
        assert verify_certificate(dec.descriptor, dec.target, dec.certificate)


def test_zero_test_squares_word_mod2():
    # a squared letter on each side of another letter dies unless p = 3
    dec = zero_test(comb("x1^2 x3 x2^2", 2))
    assert dec.is_zero is True
    dec3 = zero_test(comb("x1^2 x3 x2^2", 3))
    assert dec3.is_zero is False


def test_zero_test_explicit_witness_words():
    assert zero_test(comb("x1^2 x2^2 x1", 0)).is_zero is False
    assert zero_test(comb("x1^2 x2^2 x1", 2)).is_zero is False
    assert zero_test(comb("x1^2 x2^2 x1", 3)).is_zero is False


# ----------------------------------------------------- derived identity battery


IDENTITIES = [
    # alternating square identity, all characteristics
    ("x1 x2 x1 x2 - x2^2 x1^2", (0, 2, 3, 5)),
    # squared letters flanking a third letter, p != 3
    ("x1^2 x3 x2^2", (0, 2, 5)),
    # doubled-pair words in the two orders sum to zero, all p
    ("x1^2 x2^2 x1 x2 + x2^2 x1^2 x2 x1", (0, 2, 3, 5)),
    # square-block shuffle, p not in {3}
    ("2 * x1^2 x2 x3 x1 + x1^2 x2 x1 x3 + x2 x1^2 x3 x1", (0, 5)),
]


@pytest.mark.parametrize("text,chars", IDENTITIES)
def test_identity_battery_small(text, chars):
    for p in chars:
        dec = zero_test(comb(text, p))
        assert dec.is_zero is True, (text, p)
        assert verify_certificate(dec.descriptor, dec.target, dec.certificate)


def test_rewrite_soundness_vs_solver():
    # canonicalize-to-zero implies solver zero (d=2, length <= 6)
    from itertools import product

    for p in (0, 2, 3, 5):
        for length in range(1, 7):
            for w in product((1, 2), repeat=length):
                e = LinComb.single(w, p)
                if canonicalize(e).is_zero():
                    assert zero_test(e, d=2).is_zero is True


# ---------------------------------------------------------------- functionals


def test_word_sign():
    assert word_sign((1, 2, 3, 4)) == 1
    assert word_sign((2, 1, 3, 4)) == -1
    assert word_sign((2, 1, 4, 3)) == 1


def test_explicit_32_annihilates_for_all_chars():
    for p in (0, 2, 3, 5):
        assert verify_functional("explicit-32", (3, 2), p)


def test_square_subword_count():
    assert functional_value("square-subword-count", parse_word("x1^2 x2 x3 x1"), 2) == 1
    assert functional_value("square-subword-count", parse_word("x1^3 x2 x3"), 2) == 0
    assert verify_functional("square-subword-count", (3, 1, 1), 2)
    assert verify_functional("square-subword-count", (3, 1, 1, 1), 2)


def test_square_subword_witnesses_nonzero_word():
    w = parse_word("x1^2 x2 x3 x4 x1")
    assert functional_value("square-subword-count", w, 2) == 1


def test_parity_functionals():
    assert verify_functional("parity-plus", (1, 1), 3)
    assert verify_functional("parity-plus", (1, 1, 1, 1), 3)
    assert verify_functional("parity-minus", (1, 1, 1, 1), 3)
    h4 = commutator_product(2)
    assert evaluate_functional("parity-plus", h4) == (-1) ** 3 % 3
    h2 = commutator_product(1)
    assert evaluate_functional("parity-plus", h2) == 1


def test_functional_applicability_errors():
    with pytest.raises(ValueError):
        verify_functional("explicit-32", (2, 2), 0)
    with pytest.raises(ValueError):
        verify_functional("parity-plus", (1, 1, 1), 3)
    assert not functional_applicable("square-subword-count", (3, 1, 1), 5)


# ------------------------------------------------------------------ dimensions


def test_component_dimensions():
    assert component_dimension((1, 1), 0) == 2
    assert component_dimension((1, 1), 3) == 2
    assert component_dimension((2, 1), 0) == 2
    assert component_dimension((3,), 5) == 0


def test_w_component_dimension_detects_characteristic():
    # the doubled-pair component survives only mod 3
    assert component_dimension((3, 3), 3) > 0
    assert component_dimension((3, 3), 5) == 0
    assert component_dimension((3, 3), 0) == 0
    assert component_dimension((3, 3), 2) == 0


# ------------------------------------------------------------------- pi chain


def test_doubled_pair_word():
    assert doubled_pair_word(1) == parse_word("x1^2 x2^2 x1 x2")
    assert doubled_pair_word(2) == parse_word(
        "x1^2 x2^2 x1 x2 x3^2 x4^2 x3 x4")


def test_chain_parity_route_k1_and_k2():
    for k in (1, 2):
        evidence = chain_parity_route(k)
        assert evidence is not None
        assert evidence["route"] == "chain-parity"


def test_pi_well_definedness_spot_check():
    # applying the map to every relation row of the doubled component
    # lands on zero in the image component
    from nilcube.oracle import component_system
    from nilcube.rewrite import lower_degree

    system = component_system((3, 3), 3)
    for i in range(len(system.rows)):
        row = system.row_lincomb(i)
        image = lower_degree(row, 1)
        if not image.is_zero():
            dec = zero_test(image, d=2)
            assert dec.is_zero is True


# ------------------------------------------------------------------ nilpotency


def test_nilpotency_degree_d2_all_chars():
    assert nilpotency_degree(2, 0).value == 6
    assert nilpotency_degree(2, 2).value == 6
    assert nilpotency_degree(2, 3).value == 7
    assert nilpotency_degree(2, 5).value == 6


def test_nilpotency_degree_d3_p2():
    assert nilpotency_degree(3, 2).value == 6


def test_nilpotency_degree_n2_crosscheck():
    assert nilpotency_degree(2, 0, n=2).value == 3
    assert nilpotency_degree(3, 0, n=2).value == 3


def test_nilpotency_degree_d1():
    report = nilpotency_degree(1, 0)
    assert report.value == 3


def test_nilpotency_degree_d4_chars_0_and_5():
    assert nilpotency_degree(4, 0).value == 6
    assert nilpotency_degree(4, 5).value == 6


def test_nilpotency_degree_d5_p3_honest_open_interval():
    # the five-letter tripled component exceeds the solve budget and no
    # sufficient route applies: the report must stay an interval
    r = nilpotency_degree(5, 3)
    assert r.value is None
    assert (r.lower, r.upper) == (15, 16)
    undecided = [c for c in r.components if c.zero is None]
    assert [tuple(c.mdeg) for c in undecided] == [(3, 3, 3, 3, 3)]
    nonzero = {tuple(c.mdeg) for c in r.components if c.zero is False}
    assert (3, 3, 3, 3) in nonzero and (3, 3, 3, 3, 2) in nonzero
