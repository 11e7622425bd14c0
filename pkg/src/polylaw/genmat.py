"""Generic matrices, characteristic coefficients and matrix invariants.

``j_n`` sends generator ``s`` to the generic matrix whose ``(i, j)`` entry is
the variable ``x[i,j,s]``.  Elements of Gamma_n(F_S) are sent to polynomials
in those variables by ``pi_image``: the coefficient of ``prod l_w^(a_w)``
in ``det(sum_w l_w j_n(w))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import factorial
from typing import Dict, List, Mapping, Sequence, Tuple

from .divpow import (DegreeMismatch, DPElem, DPMonomial, _as_tuple, _basis,
                     sub_degrees)
from .exactalg import (ENTRY, ESYM, Echelon, MultiPoly, PolyMatrix, Var,
                       entry, formal, integer_vector, polys_to_rows, poly_det)
from .freering import (FreeElem, Word, cyclic_canonical, degree_tuple,
                       enumerate_words, multidegree, word_str)


@dataclass(frozen=True)
class GenericContext:
    n: int
    gens: Tuple[str, ...] = ("x",)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        object.__setattr__(self, "gens", tuple(self.gens))

    def lower(self) -> "GenericContext":
        return GenericContext(self.n - 1, self.gens)


# -- e-symbols ------------------------------------------------------------------


def esym(i: int, w: Word) -> Var:
    """The symbol ``e[i](w)`` with ``w`` replaced by its least rotation."""
    if not w:
        raise ValueError("e-symbols need a non-empty word")
    if i < 1:
        raise ValueError("e-symbol index starts at 1")
    return Var(ESYM, word_str(cyclic_canonical(tuple(w))), i, 0)


def esym_word(v: Var) -> Word:
    return tuple(v.label.split("*"))


def esym_degree(v: Var) -> Dict[str, int]:
    return {s: k * v.i for s, k in multidegree(esym_word(v)).items()}


# -- generic matrices -------------------------------------------------------------


@lru_cache(maxsize=None)
def generic_matrix(s: str, n: int) -> PolyMatrix:
    return PolyMatrix([[MultiPoly.var(entry(i, j, s)) for j in range(1, n + 1)]
                       for i in range(1, n + 1)])


@lru_cache(maxsize=None)
def word_matrix(w: Word, n: int) -> PolyMatrix:
    if not w:
        return PolyMatrix.identity(n)
    if len(w) == 1:
        return generic_matrix(w[0], n)
    return word_matrix(w[:-1], n) * generic_matrix(w[-1], n)


def embed_generic(f, ctx: GenericContext) -> PolyMatrix:
    """``j_n(f)``: the ring map from the free ring to matrices over A_S(n)."""
    f = FreeElem.coerce(f)
    unknown = f.generators() - set(ctx.gens)
    if unknown:
        raise ValueError(f"unknown generators {sorted(unknown)}")
    out = PolyMatrix.zero(ctx.n)
    for w, c in f.sorted_items():
        out = out + word_matrix(w, ctx.n).scale(c)
    return out


def char_coeff(b: PolyMatrix, i: int) -> MultiPoly:
    """``e_i(b)``: sum of the principal ``i x i`` minors (trace of the i-th exterior power)."""
    if i < 0:
        raise ValueError("index must be nonnegative")
    if i == 0:
        return MultiPoly.const(1)
    if i > b.n:
        return MultiPoly()
    total = MultiPoly()
    for idx in combinations(range(b.n), i):
        total = total + poly_det(b.submatrix(idx))
    return total


@lru_cache(maxsize=None)
def _word_char_coeff(w: Word, i: int, n: int) -> MultiPoly:
    return char_coeff(word_matrix(w, n), i)


def e_value(i: int, w: Word, ctx: GenericContext) -> MultiPoly:
    """``e_i(j_n(w))`` for a word ``w``."""
    return _word_char_coeff(tuple(w), i, ctx.n)


def det_law(f, ctx: GenericContext) -> MultiPoly:
    return poly_det(embed_generic(f, ctx))


# -- pi_n ----------------------------------------------------------------------------


def _column_assignments(counts: Sequence[int]):
    """Sequences with value ``k`` occurring ``counts[k]`` times."""
    n = sum(counts)
    left = list(counts)
    seq = [0] * n

    def rec(pos: int):
        if pos == n:
            yield tuple(seq)
            return
        for k, c in enumerate(left):
            if c:
                left[k] -= 1
                seq[pos] = k
                yield from rec(pos + 1)
                left[k] += 1

    yield from rec(0)


@lru_cache(maxsize=None)
def _pi_monomial(u: DPMonomial) -> MultiPoly:
    n = u.n
    factors = u.full_factors()
    mats = [word_matrix(w, n) for w, _ in factors]
    counts = [e for _, e in factors]
    total = MultiPoly()
    # det is multilinear in columns: the coefficient of prod l_k^counts[k]
    # is the sum over column assignments with those counts
    for assign in _column_assignments(counts):
        m = PolyMatrix([[mats[assign[c]].rows[r][c] for c in range(n)] for r in range(n)])
        total = total + poly_det(m)
    return total


def pi_image(u, ctx: GenericContext) -> MultiPoly:
    """``pi_n`` on a monomial or (linearly) on a :class:`DPElem`."""
    if isinstance(u, DPMonomial):
        u = DPElem.monomial(u)
    if u.n != ctx.n:
        raise DegreeMismatch(f"element of Gamma_{u.n} but n={ctx.n}")
    unknown = {s for m, _ in u.items() for w, _ in m.factors for s in w} - set(ctx.gens)
    if unknown:
        raise ValueError(f"unknown generators {sorted(unknown)}")
    total = MultiPoly()
    for m, c in u.items():
        total = total + _pi_monomial(m).scale(c)
    return total


def pi_image_by_extraction(u: DPMonomial, ctx: GenericContext) -> MultiPoly:
    """Same as :func:`pi_image`, by expanding ``det(sum l_w j_n(w))`` in full."""
    factors = u.full_factors()
    lams = [formal("l", k) for k in range(len(factors))]
    m = PolyMatrix.zero(ctx.n)
    for lam, (w, _) in zip(lams, factors):
        m = m + word_matrix(w, ctx.n).scale(MultiPoly.var(lam))
    return poly_det(m).coeff_extract({lam: e for lam, (_, e) in zip(lams, factors)})


# -- conjugation action --------------------------------------------------------------


def _int_det(g: Sequence[Sequence[int]]) -> int:
    return poly_det(PolyMatrix(g)).constant()


def _adjugate(g: PolyMatrix) -> PolyMatrix:
    n = g.n
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            idx_r = [r for r in range(n) if r != j]
            idx_c = [c for c in range(n) if c != i]
            minor = PolyMatrix([[g.rows[r][c] for c in idx_c] for r in idx_r]) if n > 1 else None
            val = poly_det(minor) if minor is not None else MultiPoly.const(1)
            row.append(val if (i + j) % 2 == 0 else -val)
        out.append(row)
    return PolyMatrix(out)


def conjugation_substitution(g: PolyMatrix, ginv: PolyMatrix, ctx: GenericContext) -> Dict[Var, MultiPoly]:
    sigma = {}
    for s in ctx.gens:
        conj = g * generic_matrix(s, ctx.n) * ginv
        for i in range(ctx.n):
            for j in range(ctx.n):
                sigma[entry(i + 1, j + 1, s)] = conj.rows[i][j]
    return sigma


def conjugation_action(p: MultiPoly, g: Sequence[Sequence[int]], ctx: GenericContext) -> MultiPoly:
    """Substitute each ``x[i,j,s]`` by the ``(i, j)`` entry of ``g zeta_s g^-1``."""
    d = _int_det(g)
    if d not in (1, -1):
        raise ValueError("g must be unimodular (det +-1)")
    gm = PolyMatrix(g)
    ginv = _adjugate(gm).scale(d)  # inverse = adj / det and det = +-1
    return p.substitute(conjugation_substitution(gm, ginv, ctx))


def group_generators(n: int) -> List[Tuple[PolyMatrix, PolyMatrix]]:
    """Pairs ``(g, g^-1)``: ``I + t E_ij`` (formal ``t``), adjacent transpositions, one sign flip."""
    t = MultiPoly.var(formal("t", 0))
    gens = []
    for i in range(n):
        for j in range(n):
            if i != j:
                g = [[MultiPoly.const(int(a == b)) for b in range(n)] for a in range(n)]
                gi = [row[:] for row in g]
                g[i][j] = t
                gi[i][j] = -t
                gens.append((PolyMatrix(g), PolyMatrix(gi)))
    for k in range(n - 1):
        perm = list(range(n))
        perm[k], perm[k + 1] = perm[k + 1], perm[k]
        p = PolyMatrix([[int(perm[a] == b) for b in range(n)] for a in range(n)])
        gens.append((p, p))
    if n >= 1:
        sgn = PolyMatrix([[(-1 if a == 0 else 1) * int(a == b) for b in range(n)] for a in range(n)])
        gens.append((sgn, sgn))
    return gens


# -- graded pieces of A_S(n) ------------------------------------------------------------


def _monomials_of_degree(variables: Sequence[Var], k: int) -> List[Tuple[Tuple[Var, int], ...]]:
    out = []

    def rec(idx: int, left: int, acc):
        if left == 0:
            out.append(tuple(acc))
            return
        if idx == len(variables):
            return
        for e in range(left, -1, -1):
            rec(idx + 1, left - e, acc + ([(variables[idx], e)] if e else []))

    rec(0, k, [])
    return out


def matrix_monomials(ctx: GenericContext, d) -> List[MultiPoly]:
    """All monomials of A_S(n) of multidegree ``d``."""
    d = _as_tuple(d, ctx.gens)
    per_gen = []
    for s, k in zip(ctx.gens, d):
        vs = [entry(i, j, s) for i in range(1, ctx.n + 1) for j in range(1, ctx.n + 1)]
        per_gen.append(_monomials_of_degree(vs, k))
    out = []
    for combo in product(*per_gen):
        mono = tuple(sorted(pair for part in combo for pair in part))
        out.append(MultiPoly({mono: 1}))
    return out


def invariant_space(ctx: GenericContext, d) -> Tuple[int, List[MultiPoly]]:
    """Dimension and a basis of the conjugation invariants of multidegree ``d``.

    Invariance under each group generator is imposed as linear conditions
    on the unknown coefficients; for ``I + t E_ij`` the condition is a
    polynomial identity in ``t``.
    """
    monos = matrix_monomials(ctx, d)
    ncols = len(monos)
    ech = Echelon(ncols)
    for g, ginv in group_generators(ctx.n):
        sigma = conjugation_substitution(g, ginv, ctx)
        rows: Dict[tuple, Dict[int, int]] = {}
        for k, m in enumerate(monos):
            diff = m.substitute(sigma) - m
            for mono, c in diff.items():
                rows.setdefault(mono, {})[k] = c
        for key in sorted(rows, key=repr):
            ech.add(rows[key])
    basis = []
    for v in ech.nullspace():
        coeffs = integer_vector(v)
        p = MultiPoly()
        for c, m in zip(coeffs, monos):
            if c:
                p = p + m.scale(c)
        basis.append(p)
    return len(basis), basis


# -- the subring generated by characteristic coefficients ------------------------------------


def e_generators(ctx: GenericContext, d, cap: int | None = None) -> List[Var]:
    """Symbols ``e[i](w)`` with ``i * deg(w) <= d``, one per rotation class."""
    d = _as_tuple(d, ctx.gens)
    bound = dict(zip(ctx.gens, d))
    if cap is None:
        cap = sum(d)
    seen = set()
    out = []
    for w in enumerate_words(ctx.gens, max_len=cap, bound=bound):
        if not w or cyclic_canonical(w) != w:
            continue
        wd = degree_tuple(multidegree(w), ctx.gens)
        for i in range(1, ctx.n + 1):
            if all(i * a <= b for a, b in zip(wd, d)):
                v = esym(i, w)
                if v not in seen:
                    seen.add(v)
                    out.append(v)
    return out


def e_monomials(ctx: GenericContext, d, cap: int | None = None) -> List[MultiPoly]:
    """Products of e-symbols whose multidegrees sum to exactly ``d``."""
    d = _as_tuple(d, ctx.gens)
    syms = e_generators(ctx, d, cap)
    degs = [degree_tuple(esym_degree(v), ctx.gens) for v in syms]
    out = []

    def rec(idx: int, left, acc):
        if not any(left):
            out.append(MultiPoly({tuple(acc): 1}))
            return
        for k in range(idx, len(syms)):
            e = 1
            while True:
                rem = tuple(a - e * b for a, b in zip(left, degs[k]))
                if min(rem) < 0:
                    break
                rec(k + 1, rem, acc + [(syms[k], e)])
                e += 1

    rec(0, d, [])
    return out


def e_evaluate(expr: MultiPoly, ctx: GenericContext) -> MultiPoly:
    """Replace each ``e[i](w)`` by ``e_i(j_n(w))``."""
    values = {}
    for v in expr.variables():
        if v.kind != ESYM:
            raise ValueError(f"{v} is not an e-symbol")
        values[v] = e_value(v.i, esym_word(v), ctx)
    return expr.substitute(values)


def e_span_rank(ctx: GenericContext, d, cap: int | None = None) -> int:
    """Q-rank of the span of the products of characteristic coefficients in multidegree ``d``."""
    vals = [e_evaluate(m, ctx) for m in e_monomials(ctx, d, cap)]
    rows, monos = polys_to_rows(vals)
    ech = Echelon(len(monos))
    for r in rows:
        ech.add(r)
    return ech.rank


def pi_span_rank(ctx: GenericContext, d) -> int:
    """Q-rank of ``pi_n`` applied to the Gamma_n basis of multidegree ``d``."""
    vals = [pi_image(u, ctx) for u in _basis(ctx.n, _as_tuple(d, ctx.gens), ctx.gens)]
    rows, monos = polys_to_rows(vals)
    ech = Echelon(len(monos))
    for r in rows:
        ech.add(r)
    return ech.rank


def homogeneous_parts(p: MultiPoly, ctx: GenericContext) -> Dict[Tuple[int, ...], MultiPoly]:
    """Split a polynomial in the matrix entries by multidegree."""
    parts: Dict[Tuple[int, ...], Dict] = {}
    pos = {s: k for k, s in enumerate(ctx.gens)}
    for mono, c in p.items():
        deg = [0] * len(ctx.gens)
        for v, e in mono:
            if v.kind != ENTRY:
                raise ValueError(f"{v} is not a matrix entry")
            deg[pos[v.label]] += e
        parts.setdefault(tuple(deg), {})[mono] = c
    return {k: MultiPoly(v) for k, v in sorted(parts.items())}


def present(p: MultiPoly, ctx: GenericContext, cap: int | None = None) -> Tuple[MultiPoly, int]:
    """Write an invariant as a combination of e-monomials.

    Returns ``(expr, den)`` with integer coefficients such that
    ``e_evaluate(expr) == den * p``.  The solution with all free unknowns
    set to zero is chosen, so the result is deterministic.  Raises
    ``ValueError`` when ``p`` is not in the span.
    """
    total = MultiPoly()
    parts = []
    for d, part in homogeneous_parts(p, ctx).items():
        monos = e_monomials(ctx, d, cap)
        vals = [e_evaluate(m, ctx) for m in monos]
        sol = _solve(vals, part)
        if sol is None:
            raise ValueError(f"not in the span of e-monomials in multidegree {d}")
        parts.append((monos, sol))
    den = 1
    for _, sol in parts:
        for x in sol:
            den = den * x.denominator // _gcd(den, x.denominator)
    for monos, sol in parts:
        for m, x in zip(monos, sol):
            if x:
                total = total + m.scale(int(x * den))
    return total, den


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _solve(columns: Sequence[MultiPoly], target: MultiPoly):
    """Rational ``c`` with ``sum c_k columns[k] == target`` (free unknowns zero)."""
    rows_t, monos = polys_to_rows(list(columns) + [target])
    k = len(columns)
    # transpose: one equation per monomial, unknowns + augmented column k
    eqs: Dict[int, Dict[int, int]] = {}
    for col, r in enumerate(rows_t):
        for mono_idx, c in r.items():
            eqs.setdefault(mono_idx, {})[col] = c
    ech = Echelon(k + 1)
    for key in sorted(eqs):
        ech.add(eqs[key])
    if k in ech.pivots:
        return None
    # back substitution on the echelon rows (pivot columns < k)
    sol = [Fraction(0)] * k
    for c in sorted(ech.pivots, reverse=True):
        row = ech.pivots[c]
        acc = Fraction(row.get(k, 0))
        for j, v in row.items():
            if j != c and j < k:
                acc -= v * sol[j]
        sol[c] = acc / row[c]
    return sol


def delta(p: MultiPoly, ctx: GenericContext) -> MultiPoly:
    """``A_S(n) -> A_S(n-1)``: set entries in the last row or column to zero."""
    if ctx.n < 2:
        raise ValueError("delta needs n >= 2")
    kill = {}
    for v in p.variables():
        if v.kind == ENTRY and (v.i == ctx.n or v.j == ctx.n):
            kill[v] = 0
    return p.substitute(kill)
