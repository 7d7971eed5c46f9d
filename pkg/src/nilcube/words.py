"""Words, multidegrees, canonicity and primitive cycles.

A word is a tuple of 1-based letter indices, e.g. ``(1, 1, 2)`` for
``x1^2 x2``.  A multidegree is a tuple of per-letter occurrence counts.
Words of one multidegree index the columns of every linear system in
this package, in lexicographic order (all words of a multidegree share
one length, so length-then-lex collapses to lex).
"""

from __future__ import annotations

from math import factorial

Word = tuple[int, ...]
Multidegree = tuple[int, ...]

#: Hard cap on the number of words a single component may have.
DEFAULT_COLUMN_BUDGET = 2_000_000


class ComponentTooLargeError(Exception):
    """Raised when a multidegree has more words than the column budget."""

    def __init__(self, mdeg: Multidegree, count: int, budget: int):
        self.mdeg = mdeg
        self.count = count
        self.budget = budget
        super().__init__(
            f"component {mdeg} has {count} words, exceeding budget {budget}"
        )


def mdeg(word: Word, d: int) -> Multidegree:
    """Occurrence-count vector of ``word`` over the alphabet x1..xd."""
    counts = [0] * d
    for letter in word:
        if not 1 <= letter <= d:
            raise ValueError(f"letter x{letter} outside alphabet of size {d}")
        counts[letter - 1] += 1
    return tuple(counts)


def multinomial(degrees: Multidegree) -> int:
    """Number of distinct words of the given multidegree."""
    total = sum(degrees)
    out = factorial(total)
    for k in degrees:
        if k < 0:
            raise ValueError("negative multidegree entry")
        out //= factorial(k)
    return out


def enumerate_words(
    degrees: Multidegree, budget: int = DEFAULT_COLUMN_BUDGET
) -> list[Word]:
    """All words of a multidegree, in lexicographic order.

    Deterministic across runs; raises ComponentTooLargeError when the
    multinomial count exceeds ``budget``.
    """
    count = multinomial(degrees)
    if count > budget:
        raise ComponentTooLargeError(degrees, count, budget)
    out: list[Word] = []
    remaining = list(degrees)
    prefix: list[int] = []

    def rec():
        if all(r == 0 for r in remaining):
            out.append(tuple(prefix))
            return
        for i, r in enumerate(remaining):
            if r:
                remaining[i] -= 1
                prefix.append(i + 1)
                rec()
                prefix.pop()
                remaining[i] += 1

    rec()
    return out


def occurrences(word: Word, letter: int) -> list[int]:
    return [i for i, a in enumerate(word) if a == letter]


def has_cube(word: Word) -> bool:
    """True iff some letter occurs three times in a row."""
    return any(
        word[i] == word[i + 1] == word[i + 2] for i in range(len(word) - 2)
    )


def is_canonical_for(word: Word, letter: int) -> bool:
    """Canonicity of the occurrence pattern of one letter.

    The allowed patterns are: absent, a single occurrence, an adjacent
    pair, or an adjacent pair followed (after a non-empty gap free of
    the letter) by one more occurrence.
    """
    occ = occurrences(word, letter)
    k = len(occ)
    if k <= 1:
        return True
    if k == 2:
        return occ[1] == occ[0] + 1
    if k == 3:
        return occ[1] == occ[0] + 1 and occ[2] > occ[1] + 1
    return False


def is_canonical(word: Word) -> bool:
    """True iff every letter's occurrence pattern is canonical."""
    return all(is_canonical_for(word, letter) for letter in set(word))


def count_canonical(degrees: Multidegree) -> int:
    """Number of canonical words of a multidegree.

    Zero as soon as some entry exceeds 3: no canonical pattern admits
    four occurrences of one letter.
    """
    if any(k > 3 for k in degrees):
        return 0
    # Small components are counted directly; the count is only needed
    # where enumeration is affordable anyway except for the >3 shortcut.
    total = 0
    for w in enumerate_words(degrees):
        if is_canonical(w):
            total += 1
    return total


def rotations(word: Word) -> list[Word]:
    return [word[i:] + word[:i] for i in range(len(word))]


def cyclic_representative(word: Word) -> Word:
    """Least rotation of a non-empty word; constant on rotation classes."""
    if not word:
        raise ValueError("empty word has no cyclic representative")
    return min(rotations(word))


def _mobius(n: int) -> int:
    if n == 1:
        return 1
    out, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    if m > 1:
        out = -out
    return out


def count_primitive_cycles(d: int, k: int) -> int:
    """Number of primitive cyclic classes of degree k over d letters."""
    total = 0
    e = 1
    while e <= k:
        if k % e == 0:
            total += _mobius(e) * d ** (k // e)
        e += 1
    return total // k


def primitive_cycles(d: int, k: int) -> list[Word]:
    """One least-rotation representative per primitive cycle of degree k.

    Duval's algorithm: the representatives are exactly the Lyndon words
    of length k over the alphabet 1..d, in lexicographic order.
    """
    if k < 1 or d < 1:
        raise ValueError("need k >= 1 and d >= 1")
    out: list[Word] = []
    w = [0]
    while w:
        w[-1] += 1
        m = len(w)
        if m == k:
            out.append(tuple(w))
        while len(w) < k:
            w.append(w[-m])
        while w and w[-1] == d:
            w.pop()
    return out


def format_word(word: Word) -> str:
    """Render a word in the x<i>^<e> grammar, e.g. ``x1^2 x2``."""
    if not word:
        return ""
    parts: list[str] = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        exp = j - i
        parts.append(f"x{word[i]}" if exp == 1 else f"x{word[i]}^{exp}")
        i = j
    return " ".join(parts)


def parse_word(text: str) -> Word:
    """Parse the x<i>^<e> grammar; whitespace-separated tokens."""
    letters: list[int] = []
    for pos, token in enumerate(text.split()):
        body = token
        exp = 1
        if "^" in token:
            body, _, etext = token.partition("^")
            if not etext.isdigit() or int(etext) < 1:
                raise ValueError(f"bad exponent in token {pos + 1}: {token!r}")
            exp = int(etext)
        if not body.startswith("x") or not body[1:].isdigit():
            raise ValueError(f"bad letter in token {pos + 1}: {token!r}")
        index = int(body[1:])
        if index < 1:
            raise ValueError(f"letter index must be >= 1 in token {pos + 1}")
        letters.extend([index] * exp)
    return tuple(letters)
