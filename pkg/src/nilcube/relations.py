"""Identity-instance rows and the homogeneous linear system of one multidegree.

A row is the expansion of a bordered identity instance ``g1 T_k(...) g2``
whose total multidegree matches the component, or (in trace mode) a
cyclic difference ``u - rot(u)``.  Rows are kept verbatim (equal to the
expansion of their provenance) so certificates can be replayed without
trusting any solver state.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .lincomb import LinComb, Scalar
from .words import (
    DEFAULT_COLUMN_BUDGET,
    ComponentTooLargeError,
    Multidegree,
    Word,
    cyclic_representative,
    enumerate_words,
    format_word,
    multinomial,
    parse_word,
)

T1, T2, T3, CYCLIC = "T1", "T2", "T3", "CYCLIC"


@dataclass(frozen=True)
class Instance:
    """Provenance of one row: a bordered identity or a cyclic difference."""

    kind: str
    g1: Word = ()
    args: tuple[Word, ...] = ()
    g2: Word = ()
    rotation: int = 0

    def to_json(self) -> dict:
        if self.kind == CYCLIC:
            return {
                "kind": CYCLIC,
                "word": format_word(self.args[0]),
                "rotation": self.rotation,
            }
        return {
            "kind": self.kind,
            "g1": format_word(self.g1),
            "args": [format_word(a) for a in self.args],
            "g2": format_word(self.g2),
        }

    @classmethod
    def from_json(cls, data: dict) -> Instance:
        if data["kind"] == CYCLIC:
            return cls(
                CYCLIC,
                args=(parse_word(data["word"]),),
                rotation=int(data["rotation"]),
            )
        return cls(
            data["kind"],
            g1=parse_word(data.get("g1", "")),
            args=tuple(parse_word(a) for a in data["args"]),
            g2=parse_word(data.get("g2", "")),
        )


def expand_instance(inst: Instance, p: int, n: int = 3) -> LinComb:
    """Literal expansion of an instance over the given characteristic."""
    if inst.kind == CYCLIC:
        (word,) = inst.args
        if not word:
            raise ValueError("cyclic row needs a non-empty word")
        r = inst.rotation % len(word)
        out = LinComb(p)
        out.add_term(word, 1)
        out.add_term(word[r:] + word[:r], -1)
        return out
    if any(len(a) == 0 for a in inst.args):
        raise ValueError("identity arguments must be non-empty words")
    g1, g2 = inst.g1, inst.g2
    out = LinComb(p)
    if inst.kind == T1:
        (f,) = inst.args
        out.add_term(g1 + f * n + g2, 1)
    elif inst.kind == T2:
        a, b = inst.args
        if n == 3:
            for mid in (a + a + b, a + b + a, b + a + a):
                out.add_term(g1 + mid + g2, 1)
        else:
            out.add_term(g1 + a + b + g2, 1)
            out.add_term(g1 + b + a + g2, 1)
    elif inst.kind == T3:
        if n != 3:
            raise ValueError("three-argument identity only exists for n = 3")
        a, b, c = inst.args
        for x, y, z in ((a, b, c), (a, c, b), (b, a, c),
                        (b, c, a), (c, a, b), (c, b, a)):
            out.add_term(g1 + x + y + z + g2, 1)
    else:
        raise ValueError(f"unknown instance kind {inst.kind!r}")
    return out


def _sub_mdegs(limit: Multidegree, allow_zero: bool = True):
    """All componentwise sub-multidegrees of ``limit`` (lex order)."""
    for combo in product(*(range(k + 1) for k in limit)):
        if allow_zero or any(combo):
            yield combo


def _vec_sub(a: Multidegree, b: Multidegree) -> Multidegree | None:
    out = tuple(x - y for x, y in zip(a, b))
    return out if all(v >= 0 for v in out) else None


def _vec_scale(a: Multidegree, k: int) -> Multidegree:
    return tuple(k * x for x in a)


def iter_instances(
    degrees: Multidegree,
    n: int = 3,
    include_cyclic: bool = False,
    budget: int = DEFAULT_COLUMN_BUDGET,
):
    """Deterministic stream of all identity instances of one multidegree.

    Symmetric argument lists are emitted once (T3 arguments sorted);
    the expansion of a sorted instance spans the same row as any
    reordering, so nothing is lost modulo row dedup.
    """
    words_of: dict[Multidegree, list[Word]] = {}

    def wl(m: Multidegree) -> list[Word]:
        if m not in words_of:
            words_of[m] = enumerate_words(m, budget)
        return words_of[m]

    # T1: g1 f^n g2
    for mf in _sub_mdegs(degrees, allow_zero=False):
        rest = _vec_sub(degrees, _vec_scale(mf, n))
        if rest is None:
            continue
        for mg1 in _sub_mdegs(rest):
            mg2 = _vec_sub(rest, mg1)
            for f in wl(mf):
                for g1 in wl(mg1):
                    for g2 in wl(mg2):
                        yield Instance(T1, g1, (f,), g2)

    # T2: g1 (a^2 b + aba + b a^2) g2  /  n=2: g1 (ab + ba) g2
    for ma in _sub_mdegs(degrees, allow_zero=False):
        rest_a = _vec_sub(degrees, _vec_scale(ma, n - 1))
        if rest_a is None:
            continue
        for mb in _sub_mdegs(rest_a, allow_zero=False):
            rest = _vec_sub(rest_a, mb)
            for mg1 in _sub_mdegs(rest):
                mg2 = _vec_sub(rest, mg1)
                for a in wl(ma):
                    for b in wl(mb):
                        for g1 in wl(mg1):
                            for g2 in wl(mg2):
                                yield Instance(T2, g1, (a, b), g2)

    # T3: g1 (sum of six orderings of a, b, c) g2, multiset {a, b, c}
    if n == 3:
        for ma in _sub_mdegs(degrees, allow_zero=False):
            rest_a = _vec_sub(degrees, ma)
            if rest_a is None:
                continue
            for mb in _sub_mdegs(rest_a, allow_zero=False):
                if mb < ma:
                    continue
                rest_b = _vec_sub(rest_a, mb)
                for mc in _sub_mdegs(rest_b, allow_zero=False):
                    if mc < mb:
                        continue
                    rest = _vec_sub(rest_b, mc)
                    for mg1 in _sub_mdegs(rest):
                        mg2 = _vec_sub(rest, mg1)
                        for a in wl(ma):
                            for b in wl(mb):
                                if mb == ma and b < a:
                                    continue
                                for c in wl(mc):
                                    if mc == mb and c < b:
                                        continue
                                    for g1 in wl(mg1):
                                        for g2 in wl(mg2):
                                            yield Instance(T3, g1, (a, b, c), g2)

    if include_cyclic:
        for w in wl(degrees):
            rep = cyclic_representative(w)
            if rep != w:
                rot = next(
                    r for r in range(1, len(w)) if w[r:] + w[:r] == rep
                )
                yield Instance(CYCLIC, args=(w,), rotation=rot)


SparseRow = list[tuple[int, Scalar]]


@dataclass
class RelationSystem:
    """Materialized, deduplicated system of one multidegree component."""

    mdeg: Multidegree
    p: int
    n: int
    include_cyclic: bool
    columns: list[Word]
    col_index: dict[Word, int]
    rows: list[SparseRow] = field(default_factory=list)
    provenance: list[Instance] = field(default_factory=list)

    @property
    def ncols(self) -> int:
        return len(self.columns)

    def descriptor(self) -> dict:
        return {
            "char": self.p,
            "n": self.n,
            "mdeg": list(self.mdeg),
            "cyclic": self.include_cyclic,
        }

    def row_lincomb(self, i: int) -> LinComb:
        out = LinComb(self.p)
        for col, coeff in self.rows[i]:
            out.add_term(self.columns[col], coeff)
        return out

    def vector_of(self, e: LinComb) -> SparseRow:
        row: SparseRow = []
        for word, coeff in e.terms.items():
            if word not in self.col_index:
                raise ValueError(
                    f"word {format_word(word)} outside component {self.mdeg}"
                )
            row.append((self.col_index[word], coeff))
        row.sort()
        return row


def _row_key(row: SparseRow, p: int) -> tuple:
    """Scale-invariant dedup key (first nonzero coefficient set to 1)."""
    lead = row[0][1]
    if p:
        inv = pow(int(lead) % p, -1, p)
        return tuple((c, (int(v) * inv) % p) for c, v in row)
    from fractions import Fraction

    return tuple((c, Fraction(v) / Fraction(lead)) for c, v in row)


def sparse_row_of(e: LinComb, col_index: dict[Word, int]) -> SparseRow:
    row = [(col_index[w], c) for w, c in e.terms.items()]
    row.sort()
    return row


def build_system(
    degrees: Multidegree,
    p: int,
    n: int = 3,
    include_cyclic: bool = False,
    budget: int = DEFAULT_COLUMN_BUDGET,
) -> RelationSystem:
    """Generate, expand and deduplicate every instance row of a component."""
    if p and any(p % q == 0 for q in range(2, min(p, 1000)) if q * q <= p):
        raise ValueError(f"characteristic {p} is not prime")
    if n not in (2, 3):
        raise ValueError("only nil exponents 2 and 3 are supported")
    count = multinomial(degrees)
    if count > budget:
        raise ComponentTooLargeError(degrees, count, budget)
    columns = enumerate_words(degrees, budget)
    col_index = {w: i for i, w in enumerate(columns)}
    system = RelationSystem(
        mdeg=degrees,
        p=p,
        n=n,
        include_cyclic=include_cyclic,
        columns=columns,
        col_index=col_index,
    )
    seen: set[tuple] = set()
    for inst in iter_instances(degrees, n, include_cyclic, budget):
        expansion = expand_instance(inst, p, n)
        if expansion.is_zero():
            continue
        row = sparse_row_of(expansion, col_index)
        key = _row_key(row, p)
        if key in seen:
            continue
        seen.add(key)
        system.rows.append(row)
        system.provenance.append(inst)
    return system


def system_from_descriptor(desc: dict, budget: int = DEFAULT_COLUMN_BUDGET):
    return build_system(
        tuple(desc["mdeg"]),
        int(desc["char"]),
        int(desc.get("n", 3)),
        bool(desc.get("cyclic", False)),
        budget,
    )
