"""Scalar-weighted combinations of words of one multidegree.

Scalars live in the prime field: residues for characteristic p > 0,
exact integers/rationals for characteristic 0.  Floating point is never
used anywhere in this package.
"""

from __future__ import annotations

from fractions import Fraction

from .words import Word, format_word, mdeg, parse_word

Scalar = int | Fraction


def sc_norm(value: Scalar, p: int) -> Scalar:
    if p:
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise ZeroDivisionError(
                    f"denominator of {value} vanishes mod {p}")
            return value.numerator * pow(value.denominator, -1, p) % p
        return int(value) % p
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value)
    return value


def sc_inv(value: Scalar, p: int) -> Scalar:
    if p:
        return pow(int(value) % p, -1, p)
    return Fraction(1) / Fraction(value)


def sc_parse(text: str) -> Scalar:
    text = text.strip()
    if "/" in text:
        return Fraction(text)
    return int(text)


def sc_str(value: Scalar) -> str:
    if isinstance(value, Fraction) and value.denominator != 1:
        return f"{value.numerator}/{value.denominator}"
    return str(int(value))


class LinComb:
    """Finite scalar-weighted combination of words, all of one multidegree."""

    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms: dict[Word, Scalar] | None = None):
        self.p = p
        clean: dict[Word, Scalar] = {}
        if terms:
            for word, coeff in terms.items():
                c = sc_norm(coeff, p)
                if c:
                    clean[word] = c
        self.terms = clean

    @classmethod
    def single(cls, word: Word, p: int, coeff: Scalar = 1) -> LinComb:
        return cls(p, {word: coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LinComb)
            and self.p == other.p
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.p, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        if not self.terms:
            return "<0>"
        bits = [
            f"{sc_str(c)}*{format_word(w) or '1'}"
            for w, c in sorted(self.terms.items())
        ]
        return "<" + " + ".join(bits) + ">"

    def add_term(self, word: Word, coeff: Scalar) -> None:
        c = sc_norm(self.terms.get(word, 0) + coeff, self.p)
        if c:
            self.terms[word] = c
        else:
            self.terms.pop(word, None)

    def __add__(self, other: LinComb) -> LinComb:
        if self.p != other.p:
            raise ValueError("characteristic mismatch")
        out = LinComb(self.p, dict(self.terms))
        for w, c in other.terms.items():
            out.add_term(w, c)
        return out

    def __sub__(self, other: LinComb) -> LinComb:
        return self + other.scale(-1)

    def scale(self, factor: Scalar) -> LinComb:
        return LinComb(self.p, {w: c * factor for w, c in self.terms.items()})

    def homogeneous_mdeg(self, d: int | None = None) -> tuple[int, ...]:
        """The common multidegree; rejects inhomogeneous combinations."""
        if not self.terms:
            raise ValueError("zero combination has no multidegree")
        if d is None:
            d = max(max(w) for w in self.terms)
        degs = {mdeg(w, d) for w in self.terms}
        if len(degs) != 1:
            raise ValueError(f"inhomogeneous combination: multidegrees {degs}")
        return degs.pop()

    def to_json(self) -> list[dict]:
        return [
            {"coeff": sc_str(c), "word": format_word(w)}
            for w, c in sorted(self.terms.items())
        ]

    @classmethod
    def from_json(cls, data: list[dict], p: int) -> LinComb:
        out = cls(p)
        for entry in data:
            out.add_term(parse_word(entry["word"]), sc_parse(entry["coeff"]))
        return out

    @classmethod
    def parse(cls, text: str, p: int) -> LinComb:
        """Parse ``c1 * w1 +- c2 * w2 ...`` with optional coefficients.

        Accepted term syntax: ``[coeff *] word-grammar`` joined by ``+``
        and ``-``; e.g. ``x1^2 x2 - 2 * x2 x1^2``.
        """
        out = cls(p)
        text = text.strip()
        if not text:
            return out
        pieces: list[tuple[int, str]] = []
        sign, current = 1, []
        depth = 0
        for ch in text:
            if ch in "+-" and depth == 0:
                if current and "".join(current).strip():
                    pieces.append((sign, "".join(current).strip()))
                sign = 1 if ch == "+" else -1
                current = []
            else:
                current.append(ch)
        if current and "".join(current).strip():
            pieces.append((sign, "".join(current).strip()))
        for sgn, chunk in pieces:
            if "*" in chunk:
                ctext, _, wtext = chunk.partition("*")
                coeff = sc_parse(ctext)
            else:
                coeff, wtext = 1, chunk
            out.add_term(parse_word(wtext), sgn * coeff)
        return out
