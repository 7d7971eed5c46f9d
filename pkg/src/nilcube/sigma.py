"""The free invariant-algebra side: char-poly coefficient symbols.

Elements are polynomials in symbols s_k(c) where c is a cycle word (a
rotation class, stored as least rotation) and s_k is the k-th
characteristic-polynomial coefficient (s_1 = trace, s_3 = determinant
for 3x3).  Coefficients carry a formal exponent vector in the summand
weights, so the expansion of s_k(q_1 A_1 + ... + q_s A_s) keeps its
multigrading.

Everything here is exact; the numeric oracle evaluates symbols on
integer matrices through a division-free characteristic-polynomial
recurrence and is used by the tests to validate each expansion.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .lincomb import LinComb, Scalar
from .rewrite import canonicalize
from .words import (
    Word,
    cyclic_representative,
    format_word,
    has_cube,
    is_canonical,
    mdeg,
    parse_word,
    primitive_cycles,
    rotations,
)

#: a symbol is (k, cycle-word); a monomial is a sorted tuple of symbols
#: (repetition = powers); a term maps (monomial, q-exponents) to an
#: integer coefficient.
Symbol = tuple[int, Word]
Monomial = tuple[Symbol, ...]


def symbol(k: int, cycle: Word) -> Symbol:
    if k < 1 or not cycle:
        raise ValueError("need k >= 1 and a non-empty cycle word")
    return (k, cyclic_representative(cycle))


class SigmaPoly:
    """Integer polynomial in s_k(cycle) symbols with q-exponent vectors."""

    __slots__ = ("nq", "terms")

    def __init__(self, nq: int = 0,
                 terms: dict[tuple[Monomial, tuple[int, ...]], int] | None = None):
        self.nq = nq
        self.terms: dict[tuple[Monomial, tuple[int, ...]], int] = {}
        if terms:
            for key, c in terms.items():
                if c:
                    self.terms[key] = c

    def add_term(self, monomial, qexp, coeff: int) -> None:
        key = (tuple(sorted(monomial)), tuple(qexp))
        c = self.terms.get(key, 0) + coeff
        if c:
            self.terms[key] = c
        else:
            self.terms.pop(key, None)

    def __eq__(self, other) -> bool:
        return (isinstance(other, SigmaPoly) and self.nq == other.nq
                and self.terms == other.terms)

    def __repr__(self) -> str:
        bits = []
        for (mono, qexp), c in sorted(self.terms.items()):
            sym = " ".join(f"s{k}({format_word(w)})" for k, w in mono)
            bits.append(f"{c}*q^{list(qexp)}*{sym}")
        return "SigmaPoly[" + " + ".join(bits) + "]" if bits else "SigmaPoly[0]"

    def to_json(self) -> list[dict]:
        out = []
        for (mono, qexp), c in sorted(self.terms.items()):
            out.append({
                "coeff": c,
                "qexp": list(qexp),
                "symbols": [{"k": k, "cycle": format_word(w)} for k, w in mono],
            })
        return out


def _cycle_multidegree(cycle: Word, s: int) -> tuple[int, ...]:
    return mdeg(cycle, s)


def amitsur_expand(k: int, summands: list[Word]) -> SigmaPoly:
    """Expansion of s_k(q_1 A_1 + ... + q_s A_s) over the integers.

    Sums over multisets of pairwise distinct primitive cycles in the
    summand indices with positive multiplicities j summing (weighted by
    cycle degree) to k; the sign is (-1)^(k - sum of j).  Cycles expand
    to words in the summand letters, normalized to least rotation.
    """
    if k < 1:
        raise ValueError("need k >= 1")
    s = len(summands)
    if s < 1 or any(not w for w in summands):
        raise ValueError("need non-empty summand words")
    cycles: list[Word] = []
    for deg in range(1, k + 1):
        cycles.extend(primitive_cycles(s, deg))
    out = SigmaPoly(nq=s)

    def expand_cycle(cycle: Word) -> Word:
        word: list[int] = []
        for idx in cycle:
            word.extend(summands[idx - 1])
        return cyclic_representative(tuple(word))

    def rec(i: int, remaining: int, chosen: list[tuple[Word, int]]):
        if remaining == 0:
            monomial: list[Symbol] = []
            qexp = [0] * s
            total_j = 0
            for cyc, j in chosen:
                total_j += j
                monomial.append(symbol(j, expand_cycle(cyc)))
                md = _cycle_multidegree(cyc, s)
                for t in range(s):
                    qexp[t] += j * md[t]
            sign = (-1) ** (k - total_j)
            out.add_term(tuple(monomial), tuple(qexp), sign)
            return
        if i == len(cycles):
            return
        rec(i + 1, remaining, chosen)
        deg = len(cycles[i])
        j = 1
        while j * deg <= remaining:
            chosen.append((cycles[i], j))
            rec(i + 1, remaining - j * deg, chosen)
            chosen.pop()
            j += 1

    rec(0, k, [])
    return out


def newton_reduce(kind: str, u: Word) -> SigmaPoly:
    """The three supported power reductions, as integer identities.

    kind: "s1-square"  s1(u^2)   -> s1(u)^2 - 2 s2(u)
          "s1-cube"    s1(u^3)   -> s1(u)^3 - 3 s1(u) s2(u) + 3 s3(u)
          "two-s2"     2 s2(u)   -> s1(u)^2 - s1(u^2)
    """
    if not u:
        raise ValueError("need a non-empty word")
    s1 = symbol(1, u)
    out = SigmaPoly(nq=0)
    if kind == "s1-square":
        out.add_term((s1, s1), (), 1)
        out.add_term((symbol(2, u),), (), -2)
    elif kind == "s1-cube":
        out.add_term((s1, s1, s1), (), 1)
        out.add_term((s1, symbol(2, u)), (), -3)
        out.add_term((symbol(3, u),), (), 3)
    elif kind == "two-s2":
        out.add_term((s1, s1), (), 1)
        out.add_term(((1, cyclic_representative(u + u)),), (), -1)
    else:
        raise ValueError(f"unsupported reduction {kind!r}")
    return out


# ---------------------------------------------------------------------------
# Exact numeric oracle
# ---------------------------------------------------------------------------


def mat_mul(a, b):
    n = len(a)
    return [[sum(a[i][t] * b[t][j] for t in range(n)) for j in range(n)]
            for i in range(n)]


def mat_add(a, b, ca=1, cb=1):
    n = len(a)
    return [[ca * a[i][j] + cb * b[i][j] for j in range(n)] for i in range(n)]


def mat_trace(a):
    return sum(a[i][i] for i in range(len(a)))


def char_poly_coeffs(a) -> list:
    """[s_1, ..., s_n] with det(tI - A) = t^n - s_1 t^(n-1) + ... +- s_n.

    Faddeev-LeVerrier recurrence; the division by k at step k is exact
    (Fraction arithmetic, collapsed back to int for integer input).
    """
    n = len(a)
    m = [row[:] for row in a]
    raw = Fraction(mat_trace(m))
    sigmas = [raw]
    for kk in range(2, n + 1):
        m = mat_mul(a, mat_add(m, _scalar_matrix(n, -raw)))
        raw = Fraction(mat_trace(m), kk)
        sigmas.append((-1) ** (kk + 1) * raw)
    out = []
    for v in sigmas:
        out.append(int(v) if isinstance(v, Fraction) and v.denominator == 1 else v)
    return out


def _scalar_matrix(n: int, b):
    return [[b if i == j else 0 for j in range(n)] for i in range(n)]


def sigma_eval(poly: SigmaPoly, assignment: dict[int, list],
               q_values: list | None = None):
    """Evaluate a symbol polynomial on concrete square matrices, exactly.

    assignment maps letters to matrices (all the same size n); each
    s_k(cycle) becomes the k-th char-poly coefficient of the matrix
    product along the cycle; k must not exceed n.
    """
    sizes = {len(m) for m in assignment.values()}
    if len(sizes) != 1:
        raise ValueError("all matrices must share one size")
    n = sizes.pop()
    if q_values is None:
        q_values = [1] * poly.nq
    total = 0
    for (mono, qexp), coeff in poly.terms.items():
        value = coeff
        for e, q in zip(qexp, q_values):
            value *= q ** e
        for k, cycle in mono:
            if k > n:
                raise ValueError(f"s_{k} undefined on {n}x{n} matrices")
            prod = None
            for letter in cycle:
                m = assignment[letter]
                prod = m if prod is None else mat_mul(prod, m)
            value *= char_poly_coeffs(prod)[k - 1]
        total += value
    return total


def random_matrix(n: int, rng: random.Random, lo: int = -5, hi: int = 5):
    return [[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)]


# ---------------------------------------------------------------------------
# Canonical trace form (reduction modulo decomposable invariants)
# ---------------------------------------------------------------------------

TraceTerm = tuple[str, Word]  # ("tr", w) or ("s2", w)


def _trace_normalize(word: Word) -> Word | None:
    """Least canonical rotation of a trace word; None if a rotation has
    a cube (such traces vanish modulo the relation rows)."""
    best = None
    for r in rotations(word):
        if has_cube(r):
            return None
        if is_canonical(r) and (best is None or r < best):
            best = r
    return best if best is not None else min(rotations(word))


def canonical_trace_form(kind: str, u: Word, p: int) -> dict[TraceTerm, Scalar]:
    """Reduce tr(u) or s2(u) to canonical words modulo decomposables.

    The trace part rewrites the argument with the word rules (valid
    under the trace modulo decomposables) and then normalizes each
    surviving word to its least canonical rotation; rotations exposing
    a cube kill the term.  The s2 part expands over the canonicalized
    argument with s2(A+B) == s2(A) + s2(B) - tr(AB) modulo
    decomposables, and at characteristic 2 splits s2 of a longer word
    through s2(VW) == tr(V^2 W^2).
    """
    if not u:
        raise ValueError("need a non-empty word")
    out: dict[TraceTerm, Scalar] = {}

    def add(term: TraceTerm, coeff: Scalar) -> None:
        c = out.get(term, 0) + coeff
        if p:
            c %= p
        if c:
            out[term] = c
        else:
            out.pop(term, None)

    def add_trace(word: Word, coeff: Scalar, depth: int = 0) -> None:
        assert depth < 8, "trace normalization failed to stabilize"
        reduced = canonicalize(LinComb.single(word, p))
        for w, c in reduced.terms.items():
            norm = _trace_normalize(w)
            if norm is None:
                continue
            if is_canonical(norm):
                add(("tr", norm), coeff * c)
            else:
                add_trace(norm, coeff * c, depth + 1)

    if kind == "tr":
        add_trace(u, 1)
        return out
    if kind != "s2":
        raise ValueError(f"unsupported head {kind!r}")

    reduced = canonicalize(LinComb.single(u, p))
    terms = sorted(reduced.terms.items())
    for i, (w1, c1) in enumerate(terms):
        # s2(c*w) = c^2 s2(w)
        coeff = c1 * c1
        if p == 2 and len(w1) >= 2:
            v, rest = w1[:1], w1[1:]
            add_trace(v + v + rest + rest, coeff)
        else:
            add(("s2", w1), coeff)
        for j in range(i + 1, len(terms)):
            w2, c2 = terms[j]
            add_trace(w1 + w2, -c1 * c2)
    return out
