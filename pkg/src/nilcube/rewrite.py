"""Canonicalization of word combinations modulo the cube identity.

Two rewriting rules drive everything, both consequences of the
two-argument identity: for a letter x and words u (free of x),

    squeeze:   x u x   ->  -x^2 u - u x^2
    shift:     x u x^2 ->  -x^2 u x

together with erasure of any word containing x^3 as a factor.  Each
step is recorded as an identity instance, so the difference between
input and output is always an explicit combination of system rows.

The rewriting is organized as a fixed per-letter derivation script
rather than a blind leftmost sweep: a leftmost strategy can cycle on
degree-4 patterns such as ``x^2 a x b x^2`` (the two branches of the
squeeze rule feed each other), while the script below terminates by
construction - every stage either outputs words that are canonical with
respect to the active letter or hands a strictly smaller case to the
next stage.
"""

from __future__ import annotations

from .lincomb import LinComb, Scalar
from .relations import T1, T2, Instance
from .words import Word, has_cube, is_canonical, is_canonical_for, occurrences

#: A provenance step: (instance, coefficient).  The contract maintained
#: everywhere is  input == output + sum(coeff * expand(instance)).
Step = tuple[Instance, Scalar]

_MAX_SCRIPT_STEPS = 64


def _cube_drop(word: Word, coeff: Scalar, steps: list[Step]) -> None:
    """Record the erasure of a word containing some x^3 factor."""
    for i in range(len(word) - 2):
        if word[i] == word[i + 1] == word[i + 2]:
            inst = Instance(T1, word[:i], ((word[i],),), word[i + 3:])
            steps.append((inst, coeff))
            return
    raise AssertionError("cube erasure called on a cube-free word")


def _letter_pass(
    word: Word, coeff: Scalar, letter: int, steps: list[Step]
) -> list[tuple[Word, Scalar]]:
    """Rewrite one word until canonical w.r.t. ``letter``, recording steps.

    Returns the surviving terms.  A bounded derivation script handles
    each occurrence pattern; the step counter assertion is the
    termination measure (every call uses a fixed finite script).
    """
    out: list[tuple[Word, Scalar]] = []
    pending = [(word, coeff)]
    budget = _MAX_SCRIPT_STEPS
    x = (letter,)
    while pending:
        budget -= 1
        assert budget >= 0, "rewrite script exceeded its structural bound"
        w, c = pending.pop()
        if has_cube(w):
            _cube_drop(w, c, steps)
            continue
        occ = occurrences(w, letter)
        k = len(occ)
        if is_canonical_for(w, letter):
            out.append((w, c))
            continue
        if k == 2:
            # non-adjacent pair: squeeze
            a, b = occ
            head, gap, tail = w[:a], w[a + 1 : b], w[b + 1 :]
            steps.append((Instance(T2, head, (x, gap), tail), c))
            pending.append((head + x + x + gap + tail, -c))
            pending.append((head + gap + x + x + tail, -c))
            continue
        if k == 3:
            a, b, e = occ
            head = w[:a]
            gap1, gap2 = w[a + 1 : b], w[b + 1 : e]
            tail = w[e + 1 :]
            if not gap1 and gap2:
                # x^2 u x: canonical, caught above
                raise AssertionError("canonical pattern reached rewrite")
            if gap1 and not gap2:
                # x u x^2: shift, via T2(x, x u) minus the cube row
                steps.append((Instance(T2, head, (x, x + gap1), tail), c))
                steps.append((Instance(T1, head, (x,), gap1 + tail), -c))
                pending.append((head + x + x + gap1 + x + tail, -c))
            else:
                # x u x v x: squeeze the first pair; both branches canonical
                rest = w[b + 1 :]
                steps.append((Instance(T2, head, (x, gap1), rest), c))
                pending.append((head + x + x + gap1 + rest, -c))
                pending.append((head + gap1 + x + x + rest, -c))
            continue
        # k >= 4: every branch acquires a cube.  Stage 1 makes the first
        # two occurrences adjacent, stage 2 merges in the next one.
        a, b = occ[0], occ[1]
        if b > a + 1:
            head, gap, rest = w[:a], w[a + 1 : b], w[b + 1 :]
            steps.append((Instance(T2, head, (x, gap), rest), c))
            pending.append((head + x + x + gap + rest, -c))
            pending.append((head + gap + x + x + rest, -c))
            continue
        # first two adjacent; occ[2] not adjacent (cube was caught above)
        e = occ[2]
        mid = w[b + 1 : e]
        nxt = occ[3]
        if nxt > e + 1:
            # separate the third and fourth occurrences first
            head, gap, rest = w[:e], w[e + 1 : nxt], w[nxt + 1 :]
            steps.append((Instance(T2, head, (x, gap), rest), c))
            pending.append((head + x + x + gap + rest, -c))
            pending.append((head + gap + x + x + rest, -c))
            continue
        # pattern ... x^2 mid x^2 ...: squeeze across mid; both branches cube
        head = w[: a + 1]
        suffix = w[e + 1 :]
        steps.append((Instance(T2, head, (x, mid), suffix), c))
        pending.append((head + x + x + mid + suffix, -c))
        pending.append((head + mid + x + x + suffix, -c))
    return out


def canonicalize_word(
    word: Word, p: int, coeff: Scalar = 1, steps: list[Step] | None = None
) -> LinComb:
    """Canonical combination equal to ``coeff * word`` modulo system rows."""
    record: list[Step] = [] if steps is None else steps
    terms = [(word, coeff)]
    letters = sorted(set(word))
    # Letter passes in increasing index order; later passes cannot break
    # earlier canonicity without creating a cube (which is erased), but a
    # bounded re-sweep keeps that a checked fact rather than an assumption.
    for sweep in range(8):
        dirty = [
            letter
            for letter in letters
            if any(not is_canonical_for(w, letter) for w, _ in terms)
        ]
        if not dirty:
            break
        for letter in dirty:
            nxt: list[tuple[Word, Scalar]] = []
            for w, c in terms:
                nxt.extend(_letter_pass(w, c, letter, record))
            merged: dict[Word, Scalar] = {}
            for w, c in nxt:
                merged[w] = merged.get(w, 0) + c
            terms = [(w, c) for w, c in merged.items() if (c % p if p else c)]
    out = LinComb(p, dict(terms))
    for w in out.terms:
        assert is_canonical(w), f"non-canonical output word {w}"
    return out


def canonicalize(
    e: LinComb, steps: list[Step] | None = None
) -> LinComb:
    """Rewrite every word of a homogeneous combination to canonical form.

    When ``steps`` is supplied, the recorded instances satisfy
    ``e == result + sum(c * expand(inst) for inst, c in steps)`` exactly
    (coefficients taken in the combination's characteristic).
    """
    if e.is_zero():
        return e
    e.homogeneous_mdeg()
    out = LinComb(e.p)
    for word, coeff in sorted(e.terms.items()):
        out = out + canonicalize_word(word, e.p, coeff, steps)
    return out


def substitute_unit(e: LinComb, letter: int) -> LinComb:
    """Delete every occurrence of a letter of degree 1 or 2.

    Valid as a zero-preserving operation only on identities of degree
    1 or 2 in the letter that involve at least one other letter; the
    degree hypothesis is enforced, the zero-ness is the caller's claim.
    """
    if e.is_zero():
        return e
    degs = e.homogeneous_mdeg()
    if letter < 1 or letter > len(degs):
        raise ValueError(f"letter x{letter} not in alphabet of the input")
    deg = degs[letter - 1]
    if deg not in (1, 2):
        raise ValueError(
            f"unit substitution needs degree 1 or 2 in x{letter}, got {deg}"
        )
    if sum(degs) == deg:
        raise ValueError("input involves no other letter")
    out = LinComb(e.p)
    for word, coeff in e.terms.items():
        out.add_term(tuple(a for a in word if a != letter), coeff)
    return out


def lower_degree(e: LinComb, letter: int) -> LinComb:
    """The degree-lowering map on components of degree 3 in one letter.

    Defined for characteristic 3 only: after canonicalizing with
    respect to the letter, every surviving word has the shape
    ``v1 x^2 u x v2`` and maps to ``v1 u x v2 - v1 x u v2``.
    """
    if e.p != 3:
        raise ValueError("the degree-lowering map is only valid mod 3")
    if e.is_zero():
        return e
    degs = e.homogeneous_mdeg()
    if letter < 1 or letter > len(degs) or degs[letter - 1] != 3:
        raise ValueError(f"input must have degree 3 in x{letter}")
    x = (letter,)
    out = LinComb(3)
    for word, coeff in e.terms.items():
        for w, c in _canonical_wrt_letter(word, coeff, letter):
            occ = occurrences(w, letter)
            v1 = w[: occ[0]]
            u = w[occ[1] + 1 : occ[2]]
            v2 = w[occ[2] + 1 :]
            out.add_term(v1 + u + x + v2, c)
            out.add_term(v1 + x + u + v2, -c)
    return out


def _canonical_wrt_letter(word, coeff, letter):
    """Letter-local canonicalization (cube drops included), no provenance."""
    sink: list[Step] = []
    return _letter_pass(word, coeff, letter, sink)
