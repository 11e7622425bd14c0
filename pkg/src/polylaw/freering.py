"""The free noncommutative ring Z<x_s> on a finite list of generators.

A word is a plain tuple of generator labels; ``()`` is the identity.  Words
are ordered length-lexicographically.
"""

from __future__ import annotations

import re
from itertools import product
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .exactalg import ParseError

Word = Tuple[str, ...]
ONE_WORD: Word = ()


def word_key(w: Word):
    return (len(w), w)


def word_str(w: Word) -> str:
    return "*".join(w) if w else "1"


def multidegree(w: Word) -> Dict[str, int]:
    """Occurrence count of each generator in ``w`` (zero entries omitted)."""
    d: Dict[str, int] = {}
    for s in w:
        d[s] = d.get(s, 0) + 1
    return d


def add_degrees(a: Mapping[str, int], b: Mapping[str, int]) -> Dict[str, int]:
    out = dict(a)
    for s, k in b.items():
        out[s] = out.get(s, 0) + k
    return {s: k for s, k in out.items() if k}


def scale_degree(a: Mapping[str, int], k: int) -> Dict[str, int]:
    return {s: v * k for s, v in a.items() if v * k}


def degree_tuple(d: Mapping[str, int], gens: Sequence[str]) -> Tuple[int, ...]:
    extra = set(d) - set(gens)
    if extra:
        raise ValueError(f"unknown generators {sorted(extra)}")
    return tuple(d.get(s, 0) for s in gens)


def degree_leq(a: Mapping[str, int], b: Mapping[str, int]) -> bool:
    return all(v <= b.get(s, 0) for s, v in a.items())


def cyclic_canonical(w: Word) -> Word:
    """Least rotation of ``w`` (rotations share characteristic polynomials)."""
    if not w:
        return w
    return min(w[k:] + w[:k] for k in range(len(w)))


def enumerate_words(gens: Sequence[str], max_len: int | None = None,
                    bound: Mapping[str, int] | None = None,
                    exact_len: int | None = None) -> List[Word]:
    """All words over ``gens`` in length-lex order (declared generator order).

    Restrict by ``max_len``, by a multidegree ``bound`` (componentwise), or by
    ``exact_len``.  At least one bound is required.
    """
    if max_len is None and bound is None and exact_len is None:
        raise ValueError("enumerate_words needs a finite bound")
    if bound is not None:
        cap = sum(bound.get(s, 0) for s in gens)
        max_len = cap if max_len is None else min(max_len, cap)
    lengths = [exact_len] if exact_len is not None else range(max_len + 1)
    out = []
    for n in lengths:
        if max_len is not None and n > max_len:
            continue
        for w in product(gens, repeat=n):
            if bound is None or degree_leq(multidegree(w), bound):
                out.append(tuple(w))
    return out


class FreeElem:
    """Integer linear combination of words."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Word, int] | None = None):
        self._terms = {tuple(w): c for w, c in (terms or {}).items() if c}

    @classmethod
    def word(cls, w: Iterable[str] | str, coeff: int = 1) -> "FreeElem":
        if isinstance(w, str):
            w = (w,)
        return cls({tuple(w): coeff})

    @classmethod
    def one(cls) -> "FreeElem":
        return cls({ONE_WORD: 1})

    @classmethod
    def coerce(cls, x) -> "FreeElem":
        if isinstance(x, FreeElem):
            return x
        if isinstance(x, int):
            return cls({ONE_WORD: x})
        if isinstance(x, tuple):
            return cls({x: 1})
        if isinstance(x, str):
            return parse_free(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to FreeElem")

    def items(self):
        return self._terms.items()

    def sorted_items(self) -> List[Tuple[Word, int]]:
        return sorted(self._terms.items(), key=lambda t: word_key(t[0]))

    def words(self) -> List[Word]:
        return [w for w, _ in self.sorted_items()]

    def coefficient(self, w: Word) -> int:
        return self._terms.get(tuple(w), 0)

    def in_augmentation_ideal(self) -> bool:
        return ONE_WORD not in self._terms

    def generators(self) -> set:
        return {s for w in self._terms for s in w}

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, tuple)):
            other = FreeElem.coerce(other)
        if not isinstance(other, FreeElem):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __add__(self, other) -> "FreeElem":
        other = FreeElem.coerce(other)
        out = dict(self._terms)
        for w, c in other._terms.items():
            out[w] = out.get(w, 0) + c
        return FreeElem(out)

    __radd__ = __add__

    def __neg__(self) -> "FreeElem":
        return FreeElem({w: -c for w, c in self._terms.items()})

    def __sub__(self, other) -> "FreeElem":
        return self + (-FreeElem.coerce(other))

    def __rsub__(self, other) -> "FreeElem":
        return FreeElem.coerce(other) - self

    def __mul__(self, other) -> "FreeElem":
        if isinstance(other, int):
            return FreeElem({w: c * other for w, c in self._terms.items()})
        other = FreeElem.coerce(other)
        out: Dict[Word, int] = {}
        for u, a in self._terms.items():
            for v, b in other._terms.items():
                out[u + v] = out.get(u + v, 0) + a * b
        return FreeElem(out)

    def __rmul__(self, other) -> "FreeElem":
        return FreeElem.coerce(other) * self

    def __pow__(self, k: int) -> "FreeElem":
        out = FreeElem.one()
        for _ in range(k):
            out = out * self
        return out

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for i, (w, c) in enumerate(self.sorted_items()):
            mag = abs(c)
            if not w:
                body = str(mag)
            elif mag == 1:
                body = word_str(w)
            else:
                body = f"{mag}*{word_str(w)}"
            if i == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"FreeElem({str(self)!r})"


def free_mul(a: FreeElem, b: FreeElem) -> FreeElem:
    return a * b


_FREE_TOKEN = re.compile(r"(?P<ident>[A-Za-z_]\w*)|(?P<int>\d+)|(?P<op>[-+*^()])")


def _tokens(text: str):
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            return
        m = _FREE_TOKEN.match(text, pos)
        if not m:
            raise ParseError("unexpected character", pos)
        kind = m.lastgroup
        yield kind, m.group(kind), pos
        pos = m.end()


def parse_free(text: str, gens: Sequence[str] | None = None) -> FreeElem:
    """Parse sums of products such as ``2*x*y - 3`` or ``1 + x^2``.

    Integers act as scalars, identifiers as generators.  If ``gens`` is
    given, other identifiers are rejected.
    """
    toks = list(_tokens(text))
    if not toks:
        raise ParseError("empty expression", 0)
    k = 0
    total = FreeElem()
    first = True
    while k < len(toks):
        sign, saw = 1, False
        while k < len(toks) and toks[k][0] == "op" and toks[k][1] in "+-":
            sign = -sign if toks[k][1] == "-" else sign
            saw = True
            k += 1
        if not first and not saw:
            raise ParseError("expected + or -", toks[k][2])
        coeff, word = sign, ()
        while True:
            if k >= len(toks):
                raise ParseError("expected factor", len(text))
            kind, val, pos = toks[k]
            power = 1
            if k + 1 < len(toks) and toks[k + 1][1] == "^":
                if k + 2 >= len(toks) or toks[k + 2][0] != "int":
                    raise ParseError("expected exponent", toks[k + 1][2])
                power = int(toks[k + 2][1])
                step = 3
            else:
                step = 1
            if kind == "int":
                coeff *= int(val) ** power
            elif kind == "ident":
                if gens is not None and val not in gens:
                    raise ParseError(f"unknown generator {val!r}", pos)
                word += (val,) * power
            else:
                raise ParseError("expected factor", pos)
            k += step
            if k < len(toks) and toks[k][1] == "*":
                k += 1
                continue
            break
        total = total + FreeElem({word: coeff})
        first = False
    return total


def parse_word(text: str, gens: Sequence[str] | None = None) -> Word:
    f = parse_free(text, gens)
    items = list(f.items())
    if len(items) != 1 or items[0][1] != 1:
        raise ParseError("expected a single word", 0)
    return items[0][0]
