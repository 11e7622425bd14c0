"""Exact arithmetic substrate.

Sparse multivariate polynomials over the integers, square matrices with
polynomial entries, and exact rank / nullspace computations over the
rationals.  Everything here is immutable and side-effect free.

Variables are :class:`Var` tuples ``(kind, label, i, j)``; ordinary tuple
comparison gives the variable order used for printing:

* ``ENTRY``   -- matrix entry ``x[i,j,s]`` (sorted by generator, row, col)
* ``FORMAL``  -- auxiliary scalar such as ``l0`` or ``t0``
* ``ESYM``    -- characteristic-coefficient symbol ``e[i](w)``
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce
from itertools import permutations
from typing import Dict, Iterable, List, Mapping, NamedTuple, Sequence, Tuple

ENTRY, FORMAL, ESYM = 0, 1, 2


class Var(NamedTuple):
    kind: int
    label: str
    i: int
    j: int

    def __str__(self) -> str:
        if self.kind == ENTRY:
            return f"x[{self.i},{self.j},{self.label}]"
        if self.kind == FORMAL:
            return f"{self.label}{self.i}"
        return f"e[{self.i}]({self.label})"


def entry(i: int, j: int, s: str) -> Var:
    """The matrix-entry variable x_{ij}^s (1-based indices)."""
    return Var(ENTRY, s, i, j)


def formal(tag: str, index: int = 0) -> Var:
    return Var(FORMAL, tag, index, 0)


Monomial = Tuple[Tuple[Var, int], ...]

_ONE: Monomial = ()
_SENTINEL = (Var(99, "", 0, 0),)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def _mono_key(m: Monomial):
    # descending lexicographic order on exponent vectors
    return tuple((v, -e) for v, e in m) + (_SENTINEL,)


class MultiPoly:
    """Sparse polynomial with integer coefficients.

    ``terms`` maps a monomial (sorted tuple of ``(Var, exponent)``) to a
    nonzero integer.  Instances compare structurally and are hashable.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        if terms:
            self._terms = {m: c for m, c in terms.items() if c}
        else:
            self._terms = {}
        self._hash = None

    @classmethod
    def _raw(cls, terms: Dict[Monomial, int]) -> "MultiPoly":
        p = cls.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c: int) -> "MultiPoly":
        return cls._raw({_ONE: c} if c else {})

    @classmethod
    def var(cls, v: Var, exp: int = 1) -> "MultiPoly":
        return cls._raw({((v, exp),) if exp else _ONE: 1})

    @classmethod
    def coerce(cls, x) -> "MultiPoly":
        if isinstance(x, MultiPoly):
            return x
        if isinstance(x, int):
            return cls.const(x)
        if isinstance(x, Var):
            return cls.var(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to MultiPoly")

    # -- inspection ------------------------------------------------------

    @property
    def terms(self) -> Dict[Monomial, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(m == _ONE for m in self._terms)

    def constant(self) -> int:
        return self._terms.get(_ONE, 0)

    def variables(self) -> List[Var]:
        return sorted({v for m in self._terms for v, _ in m})

    def total_degree(self) -> int:
        return max((sum(e for _, e in m) for m in self._terms), default=-1)

    def sorted_terms(self) -> List[Tuple[Monomial, int]]:
        return sorted(self._terms.items(), key=lambda t: _mono_key(t[0]))

    # -- ring operations -------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = MultiPoly.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other) -> "MultiPoly":
        try:
            other = MultiPoly.coerce(other)
        except TypeError:
            return NotImplemented
        if len(other._terms) > len(self._terms):
            a, b = other._terms, self._terms
        else:
            a, b = self._terms, other._terms
        out = dict(a)
        for m, c in b.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return MultiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        try:
            other = MultiPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "MultiPoly":
        return MultiPoly.coerce(other) - self

    def scale(self, k: int) -> "MultiPoly":
        if not k:
            return MultiPoly()
        return MultiPoly._raw({m: c * k for m, c in self._terms.items()})

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, int):
            return self.scale(other)
        try:
            other = MultiPoly.coerce(other)
        except TypeError:
            return NotImplemented
        out: Dict[Monomial, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return MultiPoly._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ValueError("negative exponent")
        result = MultiPoly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- structure -------------------------------------------------------

    def coeff_extract(self, spec: Mapping[Var, int]) -> "MultiPoly":
        """Coefficient of ``prod v**e`` (over ``spec``) in the remaining variables.

        Exponent 0 in ``spec`` means the variable must be absent.
        """
        out: Dict[Monomial, int] = {}
        for m, c in self._terms.items():
            d = dict(m)
            if all(d.get(v, 0) == e for v, e in spec.items()):
                rest = tuple((v, e) for v, e in m if v not in spec)
                out[rest] = out.get(rest, 0) + c
        return MultiPoly._raw({m: c for m, c in out.items() if c})

    def split_by(self, variables: Iterable[Var]) -> Dict[Tuple[Tuple[Var, int], ...], "MultiPoly"]:
        """Group terms by their exponents in ``variables``.

        Returns ``{spec: coefficient}`` such that summing
        ``coefficient * prod(v**e)`` over all entries gives back ``self``.
        """
        vs = set(variables)
        groups: Dict[Monomial, Dict[Monomial, int]] = {}
        for m, c in self._terms.items():
            key = tuple((v, e) for v, e in m if v in vs)
            rest = tuple((v, e) for v, e in m if v not in vs)
            groups.setdefault(key, {})[rest] = c
        return {k: MultiPoly._raw(v) for k, v in groups.items()}

    def substitute(self, sigma: Mapping[Var, "MultiPoly | int"]) -> "MultiPoly":
        """Ring homomorphism fixing variables not in ``sigma``."""
        if not sigma:
            return self
        images = {v: MultiPoly.coerce(p) for v, p in sigma.items()}
        powers: Dict[Tuple[Var, int], MultiPoly] = {}

        def power(v: Var, e: int) -> MultiPoly:
            key = (v, e)
            if key not in powers:
                powers[key] = images[v] ** e
            return powers[key]

        out = MultiPoly()
        for m, c in self._terms.items():
            kept = tuple((v, e) for v, e in m if v not in images)
            acc = MultiPoly._raw({kept: c})
            for v, e in m:
                if v in images:
                    acc = acc * power(v, e)
                    if not acc:
                        break
            out = out + acc
        return out

    def evaluate(self, values: Mapping[Var, object], one):
        """Evaluate in any commutative ring whose elements support ``+``/``*``
        and multiplication by ``int``; ``one`` is that ring's identity."""
        total = one * 0
        for m, c in self._terms.items():
            acc = one * c
            for v, e in m:
                acc = acc * (values[v] ** e)
            total = total + acc
        return total

    def __str__(self) -> str:
        return render(self)

    def __repr__(self) -> str:
        return f"MultiPoly({render(self)!r})"


def render(p: MultiPoly) -> str:
    """Canonical text form, e.g. ``x[1,1,s]^2 + 2*l0*l1``."""
    if not p:
        return "0"
    parts = []
    for i, (m, c) in enumerate(p.sorted_terms()):
        factors = [str(v) if e == 1 else f"{v}^{e}" for v, e in m]
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = f"{mag}*" + "*".join(factors)
        if i == 0:
            parts.append(("-" if c < 0 else "") + body)
        else:
            parts.append((" - " if c < 0 else " + ") + body)
    return "".join(parts)


class ParseError(ValueError):
    """Raised on malformed input; ``pos`` is the 0-based character offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


_POLY_TOKEN = re.compile(
    r"(?P<entry>x\[\s*(\d+)\s*,\s*(\d+)\s*,\s*([A-Za-z_]\w*)\s*\])"
    r"|(?P<esym>e\[\s*(\d+)\s*\]\(\s*([A-Za-z_][\w*\s]*?)\s*\))"
    r"|(?P<formal>([A-Za-z_]+)(\d+))"
    r"|(?P<int>\d+)|(?P<op>[-+*^])"
)


def _tokenize_poly(text: str):
    pos = 0
    toks = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            return toks
        m = _POLY_TOKEN.match(text, pos)
        if not m:
            raise ParseError("unexpected character", pos)
        if m.group("entry"):
            toks.append(("atom", entry(int(m.group(2)), int(m.group(3)), m.group(4)), pos))
        elif m.group("esym"):
            word = "*".join(t.strip() for t in m.group(7).split("*"))
            toks.append(("atom", Var(ESYM, word, int(m.group(6)), 0), pos))
        elif m.group("formal"):
            toks.append(("atom", formal(m.group(9), int(m.group(10))), pos))
        elif m.group("int"):
            toks.append(("int", int(m.group("int")), pos))
        else:
            toks.append(("op", m.group("op"), pos))
        pos = m.end()


def parse_poly(text: str) -> MultiPoly:
    """Parse the canonical polynomial grammar produced by :func:`render`."""
    toks = _tokenize_poly(text)
    if not toks:
        raise ParseError("empty expression", 0)
    total = MultiPoly()
    k = 0
    first = True
    while k < len(toks):
        sign, saw_sign = 1, False
        while k < len(toks) and toks[k][0] == "op" and toks[k][1] in "+-":
            sign = -sign if toks[k][1] == "-" else sign
            saw_sign = True
            k += 1
        if not first and not saw_sign:
            raise ParseError("expected + or -", toks[k][2])
        term = MultiPoly.const(sign)
        while True:
            if k >= len(toks):
                raise ParseError("expected factor", len(text))
            kind, val, pos = toks[k]
            if kind == "int":
                factor = MultiPoly.const(val)
            elif kind == "atom":
                factor = MultiPoly.var(val)
            else:
                raise ParseError("expected factor", pos)
            k += 1
            if k < len(toks) and toks[k][:2] == ("op", "^"):
                if k + 1 >= len(toks) or toks[k + 1][0] != "int":
                    raise ParseError("expected exponent", toks[k][2])
                factor = factor ** toks[k + 1][1]
                k += 2
            term = term * factor
            if k < len(toks) and toks[k][:2] == ("op", "*"):
                k += 1
                continue
            break
        total = total + term
        first = False
    return total


# -- matrices over polynomial rings ----------------------------------------


class PolyMatrix:
    """Square matrix with :class:`MultiPoly` entries."""

    __slots__ = ("n", "rows")

    def __init__(self, rows: Sequence[Sequence]):
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        self.n = n
        self.rows = tuple(tuple(MultiPoly.coerce(x) for x in r) for r in rows)

    @classmethod
    def identity(cls, n: int) -> "PolyMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, n: int) -> "PolyMatrix":
        return cls([[0] * n for _ in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        return PolyMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        return PolyMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def scale(self, c) -> "PolyMatrix":
        c = MultiPoly.coerce(c)
        return PolyMatrix([[c * a for a in r] for r in self.rows])

    def __mul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if not isinstance(other, PolyMatrix):
            return self.scale(other)
        n = self.n
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = MultiPoly()
                for a, b in zip(r, c):
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(out)

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix([[fn(a) for a in r] for r in self.rows])

    def submatrix(self, idx: Sequence[int]) -> "PolyMatrix":
        return PolyMatrix([[self.rows[i][j] for j in idx] for i in idx])

    def det(self) -> MultiPoly:
        return poly_det(self)

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(render(a) for a in r) + "]" for r in self.rows) + "]"


def poly_det(m: PolyMatrix) -> MultiPoly:
    """Division-free determinant by row expansion with memoized minors."""
    n = m.n
    if n == 0:
        return MultiPoly.const(1)
    rows = m.rows
    # memo[cols] = det of rows[n-len(cols):] restricted to cols
    memo: Dict[Tuple[int, ...], MultiPoly] = {(): MultiPoly.const(1)}

    def minor(cols: Tuple[int, ...]) -> MultiPoly:
        if cols in memo:
            return memo[cols]
        r = n - len(cols)
        acc = MultiPoly()
        for k, c in enumerate(cols):
            a = rows[r][c]
            if not a:
                continue
            sub = minor(cols[:k] + cols[k + 1:])
            if sub:
                term = a * sub
                acc = acc + (term if k % 2 == 0 else -term)
        memo[cols] = acc
        return acc

    return minor(tuple(range(n)))


def leibniz_det(m: PolyMatrix) -> MultiPoly:
    """Determinant by the permutation expansion (slow; used as a cross-check)."""
    n = m.n
    acc = MultiPoly()
    for perm in permutations(range(n)):
        sign = 1
        for a in range(n):
            for b in range(a + 1, n):
                if perm[a] > perm[b]:
                    sign = -sign
        term = MultiPoly.const(sign)
        for i, j in enumerate(perm):
            term = term * m.rows[i][j]
        acc = acc + term
    return acc


# -- exact linear algebra over Q -------------------------------------------


class QMatrix:
    """Dense rational matrix (rows of :class:`fractions.Fraction`)."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Sequence[Sequence], ncols: int | None = None):
        self.rows = [[Fraction(x) for x in r] for r in rows]
        self.nrows = len(self.rows)
        if ncols is None:
            ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != ncols for r in self.rows):
            raise ValueError("inconsistent row lengths")
        self.ncols = ncols

    def __repr__(self) -> str:
        return f"QMatrix({self.nrows}x{self.ncols})"


def _primitive(row: Dict[int, int]) -> Dict[int, int]:
    g = reduce(math.gcd, row.values(), 0)
    if g > 1:
        row = {k: v // g for k, v in row.items()}
    return row


def _int_row(row: Mapping[int, object]) -> Dict[int, int]:
    fr = {k: Fraction(v) for k, v in row.items() if v}
    den = reduce(lambda a, b: a * b // math.gcd(a, b), (v.denominator for v in fr.values()), 1)
    return _primitive({k: int(v * den) for k, v in fr.items()})


class Echelon:
    """Incremental fraction-free row echelon form over the integers.

    Rows are sparse ``{column: value}`` dicts; every stored row is primitive
    and has a distinct leading (pivot) column.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: Dict[int, Dict[int, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Mapping[int, object]) -> Dict[int, int]:
        r = _int_row(row)
        while r:
            lead = min(r)
            p = self.pivots.get(lead)
            if p is None:
                break
            a, b = p[lead], r[lead]
            g = math.gcd(a, b)
            fa, fb = a // g, b // g
            new = {k: v * fa for k, v in r.items()}
            for k, v in p.items():
                s = new.get(k, 0) - fb * v
                if s:
                    new[k] = s
                else:
                    new.pop(k, None)
            r = _primitive(new)
        return r

    def add(self, row: Mapping[int, object]) -> bool:
        """Insert ``row``; return True if it increased the rank."""
        r = self.reduce(row)
        if not r:
            return False
        lead = min(r)
        if r[lead] < 0:
            r = {k: -v for k, v in r.items()}
        self.pivots[lead] = r
        return True

    def nullspace(self) -> List[List[Fraction]]:
        """Basis of the right kernel, one vector per free column.

        Each vector has a 1 in its free column and 0 in the other free
        columns (reduced form).
        """
        order = sorted(self.pivots, reverse=True)
        reduced: Dict[int, Dict[int, Fraction]] = {}
        for c in order:
            row = {k: Fraction(v, self.pivots[c][c]) for k, v in self.pivots[c].items()}
            # clear later pivot columns using already reduced rows
            for k in sorted(k for k in row if k != c and k in reduced):
                f = row.get(k, 0)
                if f:
                    for kk, vv in reduced[k].items():
                        s = row.get(kk, 0) - f * vv
                        if s:
                            row[kk] = s
                        else:
                            row.pop(kk, None)
            reduced[c] = row
        free = [c for c in range(self.ncols) if c not in self.pivots]
        basis = []
        for f in free:
            v = [Fraction(0)] * self.ncols
            v[f] = Fraction(1)
            for c, row in reduced.items():
                v[c] = -row.get(f, Fraction(0))
            basis.append(v)
        return basis


def rank_nullspace(m: QMatrix) -> Tuple[int, List[List[Fraction]]]:
    """Rank and a nullspace basis of ``m`` (exact, over the rationals)."""
    ech = Echelon(m.ncols)
    for r in m.rows:
        ech.add({k: v for k, v in enumerate(r) if v})
    return ech.rank, ech.nullspace()


def rank_of(vectors: Iterable[Mapping[int, object]], ncols: int) -> int:
    ech = Echelon(ncols)
    for v in vectors:
        ech.add(v)
    return ech.rank


def integer_vector(v: Sequence[Fraction]) -> List[int]:
    """Scale a rational vector to a primitive integer vector, first nonzero entry positive."""
    den = reduce(lambda a, b: a * b // math.gcd(a, b), (Fraction(x).denominator for x in v), 1)
    ints = [int(Fraction(x) * den) for x in v]
    g = reduce(math.gcd, ints, 0)
    if g:
        ints = [x // g for x in ints]
    lead = next((x for x in ints if x), 0)
    if lead < 0:
        ints = [-x for x in ints]
    return ints


def polys_to_rows(polys: Sequence[MultiPoly]) -> Tuple[List[Dict[int, int]], List[Monomial]]:
    """Coordinate vectors of ``polys`` w.r.t. the monomials they use.

    Returns ``(rows, monomials)`` where ``rows[k]`` is the sparse vector of
    ``polys[k]``.
    """
    index: Dict[Monomial, int] = {}
    rows = []
    for p in polys:
        row = {}
        for m, c in p.items():
            if m not in index:
                index[m] = len(index)
            row[index[m]] = c
        rows.append(row)
    monos = sorted(index, key=index.get)
    return rows, monos


def poly_rank(polys: Sequence[MultiPoly]) -> int:
    """Q-rank of the span of ``polys``."""
    rows, monos = polys_to_rows(polys)
    return rank_of(rows, len(monos))
