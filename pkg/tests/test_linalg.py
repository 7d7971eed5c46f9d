import json
import random
from fractions import Fraction

import pytest

from nilcube.lincomb import LinComb
from nilcube.linalg import (
    GFElimination,
    GFEliminationNumpy,
    NonzeroWitness,
    QElimination,
    ZeroCertificate,
    certificate_from_json,
    column_permutation,
    eliminate,
    membership,
    nullspace_basis,
    nullspace_dimension,
    rank,
    verify_certificate,
)
from nilcube.relations import build_system
from nilcube.words import parse_word

import numpy as np


def ident(p=5, n=3):
    import numpy as np
    perm = np.arange(n, dtype=np.int64)
    return perm


def test_gf_rank_identity():
    perm = ident()
    elim = GFElimination(3, 3, perm)
    elim.insert_rows([[(0, 1)], [(1, 1)], [(2, 1)]])
    assert elim.rank == 3


def test_gf_rank_proportional_rows():
    perm = ident(n=2)
    elim = GFElimination(2, 7, perm)
    elim.insert_rows([[(0, 2), (1, 4)], [(0, 1), (1, 2)]])
    assert elim.rank == 1


def test_q_rank_proportional_rows():
    perm = ident(n=2)
    elim = QElimination(2, perm)
    elim.insert_rows([[(0, 2), (1, 4)], [(0, 1), (1, 2)]])
    assert elim.rank == 1
    assert len(elim.free_columns()) == 1


def test_rank_spec_example_2_1():
    sys_ = build_system((2, 1), 0, 3)
    assert rank(sys_) == 1
    assert nullspace_dimension(sys_) == 2


def test_nullspace_of_zero_matrix():
    sys_ = build_system((1, 1), 5, 3)
    # no instances fit in two distinct letters
    assert len(sys_.rows) == 0
    assert nullspace_dimension(sys_) == 2
    assert len(nullspace_basis(sys_)) == 2


def test_membership_t1_cube():
    sys_ = build_system((3,), 0, 3)
    target = LinComb.parse("x1^3", 0)
    cert = membership(sys_, target)
    assert isinstance(cert, ZeroCertificate)
    assert verify_certificate(sys_.descriptor(), target, cert)


def test_membership_explicit_witness_nonzero_mod2():
    sys_ = build_system((3, 2), 2, 3)
    target = LinComb.parse("x1^2 x2^2 x1", 2)
    cert = membership(sys_, target)
    assert isinstance(cert, NonzeroWitness)
    assert verify_certificate(sys_.descriptor(), target, cert)


def test_membership_nonzero_all_chars():
    for p in (0, 2, 3, 5):
        sys_ = build_system((3, 2), p, 3)
        target = LinComb.parse("x1^2 x2^2 x1", p)
        cert = membership(sys_, target)
        assert isinstance(cert, NonzeroWitness), f"p={p}"
        assert verify_certificate(sys_.descriptor(), target, cert)


def test_membership_w_zero_mod5():
    sys_ = build_system((3, 3), 5, 3)
    target = LinComb.parse("x1^2 x2^2 x1 x2", 5)
    cert = membership(sys_, target)
    assert isinstance(cert, ZeroCertificate)
    assert verify_certificate(sys_.descriptor(), target, cert)


def test_membership_w_nonzero_mod3():
    sys_ = build_system((3, 3), 3, 3)
    target = LinComb.parse("x1^2 x2^2 x1 x2", 3)
    cert = membership(sys_, target)
    assert isinstance(cert, NonzeroWitness)
    assert verify_certificate(sys_.descriptor(), target, cert)


def test_empty_certificate_for_zero_target():
    sys_ = build_system((2, 1), 3, 3)
    cert = membership(sys_, LinComb(3))
    assert isinstance(cert, ZeroCertificate) and not cert.rows
    assert verify_certificate(sys_.descriptor(), LinComb(3), cert)


def test_tampered_certificate_fails():
    sys_ = build_system((3, 3), 5, 3)
    target = LinComb.parse("x1^2 x2^2 x1 x2", 5)
    cert = membership(sys_, target)
    assert isinstance(cert, ZeroCertificate)
    tampered = ZeroCertificate(
        cert.descriptor, cert.target,
        [(inst, (c + 1) % 5 if i == 0 else c)
         for i, (inst, c) in enumerate(cert.rows)])
    assert not verify_certificate(sys_.descriptor(), target, tampered)


def test_wrong_characteristic_descriptor_fails():
    # witness valid mod 3 does not survive reinterpretation mod 5
    sys_ = build_system((3, 3), 3, 3)
    target = LinComb.parse("x1^2 x2^2 x1 x2", 3)
    cert = membership(sys_, target)
    assert isinstance(cert, NonzeroWitness)
    data = cert.to_json()
    data["system"] = dict(data["system"], char=5)
    bad = certificate_from_json(data)
    assert not verify_certificate(bad.descriptor, bad.target, bad)


def test_certificate_json_roundtrip():
    sys_ = build_system((3, 2), 3, 3)
    target = LinComb.parse("x1^2 x2^2 x1", 3)
    cert = membership(sys_, target)
    data = json.loads(json.dumps(cert.to_json()))
    back = certificate_from_json(data)
    assert verify_certificate(sys_.descriptor(), back.target, back)


def test_duality_on_random_small_systems():
    rng = random.Random(5)
    for trial in range(20):
        p = rng.choice([2, 3, 5, 0])
        ncols = rng.randint(2, 7)
        perm = np.arange(ncols, dtype=np.int64)
        rows = []
        for _ in range(rng.randint(1, 6)):
            row = [(c, rng.randint(-2, 2)) for c in range(ncols)
                   if rng.random() < 0.6]
            row = [(c, v) for c, v in row if (v % p if p else v)]
            if row:
                rows.append(row)
        if p:
            elim = GFElimination(ncols, p, perm)
        else:
            elim = QElimination(ncols, perm)
        elim.insert_rows(rows)
        # dual check: v in row space iff all nullspace functionals kill it
        functionals = [elim.functional_for_free_col(f)
                       for f in elim.free_columns()]
        for _ in range(5):
            vec = [(c, rng.randint(-2, 2)) for c in range(ncols)]
            vec = [(c, v) for c, v in vec if (v % p if p else v)]
            hits, residual = elim.reduce_query(vec)
            in_span = not residual
            killed = True
            for phi in functionals:
                acc = 0
                for c, v in vec:
                    acc += v * (int(phi[c]) if p else phi.get(c, 0))
                if (acc % p if p else acc) != 0:
                    killed = False
            assert in_span == killed


def test_gf_numpy_fallback_agrees_with_kernel():
    rng = random.Random(9)
    for _ in range(10):
        p = rng.choice([2, 3, 5])
        ncols = rng.randint(2, 8)
        perm = np.arange(ncols, dtype=np.int64)
        rows = []
        for _ in range(rng.randint(1, 8)):
            row = [(c, rng.randint(1, p - 1) if p > 2 else 1)
                   for c in range(ncols) if rng.random() < 0.5]
            if row:
                rows.append(row)
        a = GFElimination(ncols, p, perm)
        b = GFEliminationNumpy(ncols, p, perm)
        a.insert_rows(rows)
        b.insert_rows(rows)
        assert a.rank == b.rank
        assert a.free_columns() == b.free_columns()


def test_combination_reconstructs_target_exactly():
    sys_ = build_system((2, 2), 0, 3)
    target = LinComb.parse("x1 x2 x1 x2 - x2^2 x1^2", 0)
    cert = membership(sys_, target)
    assert isinstance(cert, ZeroCertificate)
    from nilcube.relations import expand_instance

    total = LinComb(0)
    for inst, c in cert.rows:
        total = total + expand_instance(inst, 0, 3).scale(c)
    assert total == target


def test_q_elimination_fraction_coefficients():
    sys_ = build_system((2, 1), 0, 3)
    target = LinComb(0, {parse_word("x1^2 x2"): Fraction(1, 2),
                         parse_word("x1 x2 x1"): Fraction(1, 2),
                         parse_word("x2 x1^2"): Fraction(1, 2)})
    cert = membership(sys_, target)
    assert isinstance(cert, ZeroCertificate)
    assert verify_certificate(sys_.descriptor(), target, cert)
