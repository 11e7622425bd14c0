"""Divided powers of the free ring and the ring structure on Gamma_n.

A degree-``n`` basis monomial is ``1^(n - |a|) * prod_w w^(a_w)`` over
distinct non-empty words ``w``; only the non-empty factors are stored and
the power of the empty word is implied by ``n``.  The product on
``Gamma_n(F_S)`` (written ``tau``) sums over contingency tables with the
exponent vectors of the two factors as row and column sums.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import comb, factorial
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .exactalg import Echelon, ParseError
from .freering import (ONE_WORD, FreeElem, Word, add_degrees, degree_tuple,
                       enumerate_words, multidegree, parse_free, word_key,
                       word_str)


class DegreeMismatch(ValueError):
    pass


@dataclass(frozen=True, order=False)
class DPMonomial:
    n: int
    factors: Tuple[Tuple[Word, int], ...] = ()

    def __post_init__(self):
        if any(not w or e <= 0 for w, e in self.factors):
            raise ValueError("factors must be non-empty words with positive exponents")
        if self.size > self.n:
            raise DegreeMismatch(f"exponents sum to {self.size} > n={self.n}")

    @classmethod
    def make(cls, n: int, factors: Mapping[Word, int] | Iterable[Tuple[Word, int]] = ()) -> "DPMonomial":
        items = factors.items() if isinstance(factors, Mapping) else factors
        merged: Dict[Word, int] = {}
        for w, e in items:
            merged[tuple(w)] = merged.get(tuple(w), 0) + e
        return cls(n, tuple(sorted(((w, e) for w, e in merged.items() if e and w),
                                   key=lambda t: word_key(t[0]))))

    @classmethod
    def unit(cls, n: int) -> "DPMonomial":
        return cls(n, ())

    @property
    def size(self) -> int:
        """|a|: sum of the exponents of non-empty words."""
        return sum(e for _, e in self.factors)

    @property
    def one_exp(self) -> int:
        return self.n - self.size

    def multidegree(self) -> Dict[str, int]:
        d: Dict[str, int] = {}
        for w, e in self.factors:
            for s, k in multidegree(w).items():
                d[s] = d.get(s, 0) + k * e
        return d

    def full_factors(self) -> List[Tuple[Word, int]]:
        """Factors including the empty word (when its exponent is positive)."""
        lead = [(ONE_WORD, self.one_exp)] if self.one_exp else []
        return lead + list(self.factors)

    def sort_key(self):
        return (self.n, tuple((word_key(w), -e) for w, e in self.factors))

    def __str__(self) -> str:
        parts = [f"d({word_str(w)},{e})" for w, e in self.full_factors()]
        return "*".join(parts) if parts else f"d(1,{self.n})"


class DPElem:
    """Integer combination of degree-``n`` basis monomials."""

    __slots__ = ("n", "_terms")

    def __init__(self, n: int, terms: Mapping[DPMonomial, int] | None = None):
        self.n = n
        self._terms = {}
        for m, c in (terms or {}).items():
            if m.n != n:
                raise DegreeMismatch(f"monomial of degree {m.n} in Gamma_{n}")
            if c:
                self._terms[m] = c

    @classmethod
    def monomial(cls, m: DPMonomial, c: int = 1) -> "DPElem":
        return cls(m.n, {m: c})

    @classmethod
    def unit(cls, n: int) -> "DPElem":
        return cls(n, {DPMonomial.unit(n): 1})

    def items(self):
        return self._terms.items()

    def sorted_items(self):
        return sorted(self._terms.items(), key=lambda t: t[0].sort_key())

    def coefficient(self, m: DPMonomial) -> int:
        return self._terms.get(m, 0)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DPElem):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self):
        return hash((self.n, frozenset(self._terms.items())))

    def _check(self, other: "DPElem"):
        if other.n != self.n:
            raise DegreeMismatch(f"Gamma_{self.n} vs Gamma_{other.n}")

    def __add__(self, other: "DPElem") -> "DPElem":
        self._check(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return DPElem(self.n, out)

    def __neg__(self) -> "DPElem":
        return DPElem(self.n, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other: "DPElem") -> "DPElem":
        return self + (-other)

    def scale(self, k: int) -> "DPElem":
        return DPElem(self.n, {m: c * k for m, c in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return tau_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return NotImplemented

    def multidegrees(self) -> set:
        return {tuple(sorted(m.multidegree().items())) for m in self._terms}

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for i, (m, c) in enumerate(self.sorted_items()):
            body = str(m) if abs(c) == 1 else f"{abs(c)}*{m}"
            if i == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"DPElem({self.n}, {str(self)!r})"


# -- normal forms ------------------------------------------------------------

FullMono = Tuple[Tuple[Word, int], ...]  # includes the empty word explicitly


def _merge(acc: Dict[Word, int], w: Word, e: int) -> int:
    """Multiply ``w^(e)`` into ``acc``; return the binomial factor from relation (v)."""
    have = acc.get(w, 0)
    acc[w] = have + e
    return comb(have + e, e)


def _power_expansion(f: FreeElem, k: int) -> Dict[FullMono, int]:
    """``f^(k)`` in Gamma(F_S) via relations (iii) and (iv)."""
    if k < 0:
        return {}
    items = f.sorted_items()
    if k == 0:
        return {(): 1}
    if not items:
        return {}
    out: Dict[FullMono, int] = {}

    def rec(idx: int, left: int, coeff: int, acc: List[Tuple[Word, int]]):
        if idx == len(items) - 1:
            w, c = items[idx]
            mono = acc + ([(w, left)] if left else [])
            key = tuple(sorted(mono, key=lambda t: word_key(t[0])))
            out[key] = out.get(key, 0) + coeff * c ** left
            return
        w, c = items[idx]
        for e in range(left + 1):
            rec(idx + 1, left - e, coeff * c ** e, acc + ([(w, e)] if e else []))

    rec(0, k, 1, [])
    return {m: c for m, c in out.items() if c}


def _gamma_product(a: Dict[FullMono, int], b: Dict[FullMono, int]) -> Dict[FullMono, int]:
    """Product in Gamma(F_S) (the ordinary divided-power product)."""
    out: Dict[FullMono, int] = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            acc = dict(ma)
            coeff = ca * cb
            for w, e in mb:
                coeff *= _merge(acc, w, e)
            key = tuple(sorted(acc.items(), key=lambda t: word_key(t[0])))
            out[key] = out.get(key, 0) + coeff
    return {m: c for m, c in out.items() if c}


def normalize(raw: Sequence[Tuple[object, int]], n: int) -> DPElem:
    """Normal form in Gamma_n of the product ``prod f^(k)`` over ``raw``.

    Each pair is ``(element, exponent)`` where the element is anything
    :meth:`FreeElem.coerce` accepts.  Sums are expanded with relation (iv),
    scalars pulled out with (iii), repeated words merged with (v), and
    negative exponents give 0 by (i).  A term of total degree ``k < n`` is
    multiplied by the padding ``1^(n-k)``; ``k > n`` raises
    :class:`DegreeMismatch`.
    """
    acc: Dict[FullMono, int] = {(): 1}
    for f, k in raw:
        acc = _gamma_product(acc, _power_expansion(FreeElem.coerce(f), k))
        if not acc:
            return DPElem(n)
    terms: Dict[DPMonomial, int] = {}
    for mono, c in acc.items():
        total = sum(e for _, e in mono)
        if total > n:
            raise DegreeMismatch(f"term of degree {total} exceeds n={n}")
        ones = dict(mono).get(ONE_WORD, 0)
        rest = [(w, e) for w, e in mono if w]
        size = sum(e for _, e in rest)
        c *= comb(n - size, ones)
        m = DPMonomial(n, tuple(rest))
        terms[m] = terms.get(m, 0) + c
    return DPElem(n, terms)


# -- contingency tables -------------------------------------------------------


def contingency_tables(alpha: Sequence[int], beta: Sequence[int]) -> List[Tuple[Tuple[int, ...], ...]]:
    """All nonnegative integer matrices with row sums ``alpha`` and column sums ``beta``.

    Backtracking in row-major order; tables come out in lexicographic order
    of their flattened entries.
    """
    alpha, beta = list(alpha), list(beta)
    if sum(alpha) != sum(beta) or any(a < 0 for a in alpha + beta):
        return []
    r, c = len(alpha), len(beta)
    if r == 0 or c == 0:
        return [tuple(() for _ in range(r))] if not any(alpha + beta) else []
    out = []
    cells = [0] * (r * c)
    col_left = beta[:]

    def rec(i: int, j: int, row_left: int):
        if i == r:
            if not any(col_left):
                out.append(tuple(tuple(cells[a * c:(a + 1) * c]) for a in range(r)))
            return
        if j == c - 1:
            v = row_left
            if v > col_left[j]:
                return
            cells[i * c + j] = v
            col_left[j] -= v
            rec(i + 1, 0, alpha[i + 1] if i + 1 < r else 0)
            col_left[j] += v
            return
        for v in range(min(row_left, col_left[j]) + 1):
            cells[i * c + j] = v
            col_left[j] -= v
            rec(i, j + 1, row_left - v)
            col_left[j] += v

    rec(0, 0, alpha[0])
    return out


# -- the tau product ------------------------------------------------------------


@lru_cache(maxsize=None)
def _tau_monomials(u: DPMonomial, v: DPMonomial) -> Tuple[Tuple[DPMonomial, int], ...]:
    rows = u.full_factors()
    cols = v.full_factors()
    out: Dict[DPMonomial, int] = {}
    for table in contingency_tables([e for _, e in rows], [e for _, e in cols]):
        acc: Dict[Word, int] = {}
        coeff = 1
        for (a, _), line in zip(rows, table):
            for (b, _), lam in zip(cols, line):
                if lam:
                    coeff *= _merge(acc, a + b, lam)
        m = DPMonomial.make(u.n, acc)
        out[m] = out.get(m, 0) + coeff
    return tuple(sorted(out.items(), key=lambda t: t[0].sort_key()))


def tau_mul(u: DPElem, v: DPElem) -> DPElem:
    """The product of ``Gamma_n(F_S)``: bilinear extension of the table formula."""
    if isinstance(u, DPMonomial):
        u = DPElem.monomial(u)
    if isinstance(v, DPMonomial):
        v = DPElem.monomial(v)
    if u.n != v.n:
        raise DegreeMismatch(f"tau product of Gamma_{u.n} and Gamma_{v.n}")
    out: Dict[DPMonomial, int] = {}
    for mu, cu in u.items():
        for mv, cv in v.items():
            for m, c in _tau_monomials(mu, mv):
                out[m] = out.get(m, 0) + cu * cv * c
    return DPElem(u.n, out)


def gamma_coeff(elements: Sequence[object], xi: Sequence[int], n: int) -> DPElem:
    """Coefficient of ``x^xi`` in ``gamma_n(sum x_i a_i)``."""
    if len(elements) != len(xi):
        raise ValueError("elements and multi-index differ in length")
    if sum(xi) != n or any(k < 0 for k in xi):
        return DPElem(n)
    return normalize(list(zip(elements, xi)), n)


def rho(u: DPElem) -> DPElem:
    """``Gamma_n -> Gamma_{n-1}``: lower the power of the empty word by one."""
    if u.n < 1:
        raise DegreeMismatch("rho needs n >= 1")
    out = {}
    for m, c in u.items():
        if m.one_exp >= 1:
            out[DPMonomial(u.n - 1, m.factors)] = c
    return DPElem(u.n - 1, out)


# -- graded bases and the abelianization -----------------------------------------


def _as_tuple(d, gens: Sequence[str]) -> Tuple[int, ...]:
    if isinstance(d, Mapping):
        return degree_tuple(d, gens)
    d = tuple(d)
    if len(d) != len(gens):
        raise ValueError("multidegree length does not match generators")
    return d


def sub_degrees(d: Tuple[int, ...]) -> List[Tuple[int, ...]]:
    return [t for t in product(*(range(k + 1) for k in d))]


@lru_cache(maxsize=None)
def _basis(n: int, d: Tuple[int, ...], gens: Tuple[str, ...]) -> Tuple[DPMonomial, ...]:
    bound = dict(zip(gens, d))
    words = [w for w in enumerate_words(gens, bound=bound) if w]
    wdeg = [degree_tuple(multidegree(w), gens) for w in words]
    out = []

    def rec(idx: int, left: Tuple[int, ...], budget: int, acc):
        if not any(left):
            out.append(DPMonomial(n, tuple(acc)))
            return
        for k in range(idx, len(words)):
            dw = wdeg[k]
            e = 1
            while e <= budget:
                rem = tuple(a - e * b for a, b in zip(left, dw))
                if min(rem) < 0:
                    break
                rec(k + 1, rem, budget - e, acc + [(words[k], e)])
                e += 1

    rec(0, d, n, [])
    return tuple(sorted(out, key=DPMonomial.sort_key))


def dp_basis(n: int, d, gens: Sequence[str]) -> List[DPMonomial]:
    """Basis monomials of ``Gamma_n(F_S)`` of multidegree ``d``."""
    gens = tuple(gens)
    return list(_basis(n, _as_tuple(d, gens), gens))


def dp_basis_upto(n: int, bound, gens: Sequence[str]) -> List[DPMonomial]:
    """Basis monomials of every multidegree componentwise ``<= bound``."""
    gens = tuple(gens)
    out = []
    for d in sub_degrees(_as_tuple(bound, gens)):
        out.extend(_basis(n, d, gens))
    return out


def commutator_vectors(n: int, d, gens: Sequence[str]) -> Tuple[List[DPMonomial], List[Dict[int, int]]]:
    """Coordinates of all ``z tau (u tau v - v tau u)`` landing in multidegree ``d``.

    The left ideal generated by commutators already equals the two-sided
    one, since ``[u, v] w = [u, v w] + v [w, u]``.
    """
    gens = tuple(gens)
    d = _as_tuple(d, gens)
    basis = _basis(n, d, gens)
    index = {m: k for k, m in enumerate(basis)}
    vectors = []
    for du in sub_degrees(d):
        if not any(du):
            continue
        rest = tuple(a - b for a, b in zip(d, du))
        for dv in sub_degrees(rest):
            if not any(dv) or dv < du:
                continue
            dz = tuple(a - b for a, b in zip(rest, dv))
            for iu, u in enumerate(_basis(n, du, gens)):
                for iv, v in enumerate(_basis(n, dv, gens)):
                    if du == dv and iv <= iu:
                        continue
                    uv, vu = DPElem.monomial(u), DPElem.monomial(v)
                    comm = tau_mul(uv, vu) - tau_mul(vu, uv)
                    if not comm:
                        continue
                    for z in _basis(n, dz, gens):
                        e = tau_mul(DPElem.monomial(z), comm)
                        if e:
                            vectors.append({index[m]: c for m, c in e.items()})
    return list(basis), vectors


def ab_component_rank(n: int, d, gens: Sequence[str]) -> int:
    """Q-rank of the multidegree-``d`` part of the abelianization of ``Gamma_n(F_S)``."""
    basis, vectors = commutator_vectors(n, d, gens)
    ech = Echelon(len(basis))
    for v in vectors:
        ech.add(v)
        if ech.rank == len(basis):
            break
    return len(basis) - ech.rank


# -- parsing ------------------------------------------------------------------------

_DP_HEAD = re.compile(r"\s*d\s*\(")


def _parse_factor(text: str, pos: int, gens) -> Tuple[Tuple[FreeElem, int], int]:
    m = _DP_HEAD.match(text, pos)
    if not m:
        raise ParseError("expected d(", pos)
    depth, k = 1, m.end()
    while k < len(text) and depth:
        if text[k] == "(":
            depth += 1
        elif text[k] == ")":
            depth -= 1
        k += 1
    if depth:
        raise ParseError("unbalanced parenthesis", pos)
    inner = text[m.end():k - 1]
    comma = inner.rfind(",")
    if comma < 0:
        raise ParseError("expected ',' in d(...)", m.end())
    try:
        elem = parse_free(inner[:comma], gens)
    except ParseError as exc:
        raise ParseError("bad element", m.end() + exc.pos) from None
    exp_text = inner[comma + 1:].strip()
    if not re.fullmatch(r"-?\d+", exp_text):
        raise ParseError("bad exponent", m.end() + comma + 1)
    return (elem, int(exp_text)), k


def parse_dp(text: str, n: int, gens: Sequence[str] | None = None, strict: bool = False) -> DPElem:
    """Parse e.g. ``d(1,1)*d(x*x,1)`` or ``2*d(x,2) - d(x+y,2)`` into Gamma_n.

    With ``strict`` every written product must have exponents summing to
    exactly ``n``; otherwise shorter products are padded as in :func:`normalize`.
    """
    pos = 0
    total = DPElem(n)
    first = True
    length = len(text)
    if not text.strip():
        raise ParseError("empty expression", 0)
    while True:
        while pos < length and text[pos].isspace():
            pos += 1
        if pos >= length:
            break
        sign, saw = 1, False
        while pos < length and text[pos] in "+- ":
            if text[pos] == "-":
                sign = -sign
            if text[pos] in "+-":
                saw = True
            pos += 1
        if not first and not saw:
            raise ParseError("expected + or -", pos)
        coeff = sign
        m = re.compile(r"\s*(\d+)\s*\*").match(text, pos)
        if m:
            coeff *= int(m.group(1))
            pos = m.end()
        raw = []
        while True:
            factor, pos = _parse_factor(text, pos, gens)
            raw.append(factor)
            m = re.compile(r"\s*\*").match(text, pos)
            if m:
                pos = m.end()
                continue
            break
        if strict and sum(k for _, k in raw) != n:
            raise DegreeMismatch(f"term of degree {sum(k for _, k in raw)} in Gamma_{n}")
        total = total + normalize(raw, n).scale(coeff)
        first = False
    return total
