"""Polynomial laws, their coefficients, and the factorization through determinants.

A law is represented by an evaluator: given pairs ``(scalar, a)`` with
``scalar`` a polynomial in formal variables and ``a`` in the free ring, it
returns ``p_L(sum scalar (x) a)`` as an element of ``L (x) B``.  How
``L (x) B`` is stored depends on the target ring ``B`` (see
:class:`TargetRing`).
"""

from __future__ import annotations

import ast
import re
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from .divpow import DegreeMismatch, DPElem, DPMonomial, normalize
from .exactalg import (ESYM, MultiPoly, PolyMatrix, Var, formal,
                       integer_vector, poly_det, polys_to_rows, Echelon, render)
from .freering import FreeElem, Word, cyclic_canonical, enumerate_words, word_str
from .genmat import (GenericContext, det_law, e_evaluate, e_monomials, e_value,
                     embed_generic, esym, esym_word, pi_image, present)


class LawError(ValueError):
    """A law failed a precondition; ``witness`` describes the counterexample."""

    def __init__(self, message: str, witness: str | None = None):
        super().__init__(message if witness is None else f"{message}: {witness}")
        self.witness = witness


# -- target rings --------------------------------------------------------------------


class QuadInt:
    """``a + b*sqrt(d)``; components are ints or polynomials (for ``L (x) Z[sqrt d]``)."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        self.a, self.b, self.d = a, b, d

    def _lift(self, other) -> "QuadInt":
        if isinstance(other, QuadInt):
            if other.d != self.d:
                raise ValueError("different quadratic rings")
            return other
        return QuadInt(other, 0, self.d)

    def __add__(self, other):
        o = self._lift(other)
        return QuadInt(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadInt(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return QuadInt(self.a * o.a + self.d * (self.b * o.b), self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = QuadInt(1, 0, self.d)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            o = self._lift(other)
        except ValueError:
            return False
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def norm(self):
        return self.a * self.a - self.d * (self.b * self.b)

    def __str__(self):
        return f"{self.a} + {self.b}*sqrt({self.d})"

    __repr__ = __str__


class TargetRing:
    """Commutative ring ``B`` together with its scalar extensions ``L (x) B``.

    ``L`` is always a polynomial ring in formal variables.
    """

    name = "B"

    def one(self):
        raise NotImplementedError

    def lift(self, scalar: MultiPoly):
        """Image of ``scalar`` under ``L -> L (x) B``."""
        raise NotImplementedError

    def coefficient(self, value, spec: Mapping[Var, int]):
        """Coefficient of ``prod v**e`` in an element of ``L (x) B``, as an element of ``B``."""
        raise NotImplementedError

    def substitute(self, value, sigma: Mapping[Var, object]):
        raise NotImplementedError

    def render(self, b) -> str:
        return str(b)

    def to_json(self, b):
        return self.render(b)


class IntegerRing(TargetRing):
    name = "ZZ"

    def one(self):
        return 1

    def lift(self, scalar):
        return MultiPoly.coerce(scalar)

    def coefficient(self, value, spec):
        c = MultiPoly.coerce(value).coeff_extract(spec)
        if not c.is_constant():
            raise ValueError("integer-valued law produced leftover variables")
        return c.constant()

    def substitute(self, value, sigma):
        return MultiPoly.coerce(value).substitute(sigma)

    def to_json(self, b):
        return b


class PolynomialRing(TargetRing):
    """``A_S(n)``: polynomials in the generic-matrix entries."""

    def __init__(self, label: str = "A"):
        self.name = label

    def one(self):
        return MultiPoly.const(1)

    def lift(self, scalar):
        return MultiPoly.coerce(scalar)

    def coefficient(self, value, spec):
        return MultiPoly.coerce(value).coeff_extract(spec)

    def substitute(self, value, sigma):
        return MultiPoly.coerce(value).substitute(sigma)


class QuadraticRing(TargetRing):
    def __init__(self, d: int):
        self.d = d
        self.name = f"ZZ[sqrt({d})]"

    def one(self):
        return QuadInt(1, 0, self.d)

    def lift(self, scalar):
        return QuadInt(MultiPoly.coerce(scalar), MultiPoly(), self.d)

    def coefficient(self, value, spec):
        a = MultiPoly.coerce(value.a).coeff_extract(spec)
        b = MultiPoly.coerce(value.b).coeff_extract(spec)
        if not (a.is_constant() and b.is_constant()):
            raise ValueError("leftover variables in coefficient")
        return QuadInt(a.constant(), b.constant(), self.d)

    def substitute(self, value, sigma):
        return QuadInt(MultiPoly.coerce(value.a).substitute(sigma),
                       MultiPoly.coerce(value.b).substitute(sigma), self.d)

    def to_json(self, b):
        return [b.a, b.b]


ZZ = IntegerRing()


# -- laws ----------------------------------------------------------------------------------

Pairs = Sequence[Tuple[MultiPoly, FreeElem]]


@dataclass
class LawOracle:
    """A polynomial law ``F_S -> B`` of (claimed) degree ``n``."""

    name: str
    n: int
    ring: TargetRing
    evaluator: Callable[[Pairs], object]
    gens: Tuple[str, ...] = ("x",)

    def evaluate(self, pairs: Sequence[Tuple[object, object]]):
        """``p_L(sum c (x) a)`` for scalars ``c`` and free-ring elements ``a``."""
        return self.evaluator([(MultiPoly.coerce(c), FreeElem.coerce(a)) for c, a in pairs])

    def __call__(self, f) -> object:
        """Value on a single element of the free ring (``L = Z``)."""
        return self.ring.coefficient(self.evaluate([(1, f)]), {})


def _hom(f: FreeElem, images: Mapping[str, object], one):
    """Evaluate ``f`` under the ring map sending generator ``s`` to ``images[s]``."""
    total = one * 0
    for w, c in f.sorted_items():
        acc = one
        for s in w:
            if s not in images:
                raise ValueError(f"no image for generator {s!r}")
            acc = acc * images[s]
        total = total + acc * c
    return total


def determinant_law(n: int, gens: Sequence[str] = ("x",)) -> LawOracle:
    ctx = GenericContext(n, tuple(gens))

    def ev(pairs):
        m = PolyMatrix.zero(n)
        for c, a in pairs:
            m = m + embed_generic(a, ctx).scale(c)
        return poly_det(m)

    return LawOracle(f"det:n={n}", n, PolynomialRing(), ev, tuple(gens))


def _permanent(m: PolyMatrix) -> MultiPoly:
    from itertools import permutations
    total = MultiPoly()
    for perm in permutations(range(m.n)):
        term = MultiPoly.const(1)
        for i, j in enumerate(perm):
            term = term * m.rows[i][j]
        total = total + term
    return total


def permanent_law(n: int, gens: Sequence[str] = ("x",)) -> LawOracle:
    """``f -> perm(j_n(f))``: homogeneous of degree ``n`` but not multiplicative."""
    ctx = GenericContext(n, tuple(gens))

    def ev(pairs):
        m = PolyMatrix.zero(n)
        for c, a in pairs:
            m = m + embed_generic(a, ctx).scale(c)
        return _permanent(m)

    return LawOracle(f"perm:n={n}", n, PolynomialRing(), ev, tuple(gens))


def _default_quadratic_images(d: int, gens: Sequence[str]) -> Dict[str, QuadInt]:
    # first generator -> sqrt(d), k-th generator -> k + sqrt(d)
    return {s: QuadInt(k, 1, d) for k, s in enumerate(gens)}


def norm_law(d: int, gens: Sequence[str] = ("x",), images: Mapping[str, Tuple[int, int]] | None = None) -> LawOracle:
    """Norm of ``Z[sqrt d]`` pulled back along a presentation ``F_S -> Z[sqrt d]``."""
    imgs = _default_quadratic_images(d, gens)
    for s, (a, b) in (images or {}).items():
        imgs[s] = QuadInt(a, b, d)

    def ev(pairs):
        acc = QuadInt(MultiPoly(), MultiPoly(), d)
        for c, a in pairs:
            q = _hom(a, imgs, QuadInt(1, 0, d))
            acc = acc + QuadInt(c * q.a, c * q.b, d)
        return acc.norm()

    return LawOracle(f"norm:d={d}", 2, ZZ, ev, tuple(gens))


def scaled_power_law(n: int, c, gens: Sequence[str] = ("x",),
                     images: Mapping[str, object] | None = None,
                     ring: TargetRing | None = None) -> LawOracle:
    """``f -> eps(f)^n`` for the ring map ``eps`` sending generator ``k`` to ``c + k``.

    ``c`` may also be a :class:`QuadInt` (then ``ring`` must be the matching
    :class:`QuadraticRing`).
    """
    ring = ring or ZZ
    if images is None:
        images = {s: c + k for k, s in enumerate(gens)}
    one = ring.one()

    def ev(pairs):
        acc = ring.lift(MultiPoly())
        for s, a in pairs:
            val = _hom(a, images, one)
            acc = acc + ring.lift(s) * val
        out = ring.lift(MultiPoly.const(1))
        for _ in range(n):
            out = out * acc
        return out

    return LawOracle(f"power:n={n},c={c}", n, ring, ev, tuple(gens))


def representation_det_law(n: int, matrices: Mapping[str, Sequence[Sequence[int]]],
                           gens: Sequence[str] = ("x",)) -> LawOracle:
    """``f -> det(rho(f))`` for the representation fixing generator matrices; unassigned generators map to 0."""
    mats = {s: PolyMatrix(matrices[s]) if s in matrices else PolyMatrix.zero(n) for s in gens}
    for s, m in mats.items():
        if m.n != n:
            raise ValueError(f"matrix for {s} is not {n}x{n}")

    def ev(pairs):
        m = PolyMatrix.zero(n)
        for c, a in pairs:
            m = m + _hom(a, mats, PolyMatrix.identity(n)).scale(c)
        return poly_det(m)

    label = ",".join(f"{s}={[list(map(int, (x.constant() for x in r))) for r in mats[s].rows]}"
                     for s in gens if s in matrices)
    return LawOracle(f"repdet:n={n},{label}".replace(" ", ""), n, ZZ, ev, tuple(gens))


def mixed_degree_law(c: int = 2, gens: Sequence[str] = ("x",)) -> LawOracle:
    """``f -> eps(f)^2 + eps(f)``: not homogeneous (used as a negative control)."""
    images = {s: c + k for k, s in enumerate(gens)}

    def ev(pairs):
        acc = MultiPoly()
        for s, a in pairs:
            acc = acc + s * _hom(a, images, 1)
        return acc * acc + acc

    return LawOracle(f"mixed:c={c}", 2, ZZ, ev, tuple(gens))


# -- fixture specifications ------------------------------------------------------------------


def _split_params(text: str) -> List[str]:
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch in "[(":
            depth += 1
        elif ch in "])":
            depth -= 1
        if ch == "," and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    if cur:
        out.append(cur)
    return out


def parse_fixture(spec: str, gens: Sequence[str] = ("x",), n: int | None = None) -> LawOracle:
    """Build a law from ``det:n=2``, ``norm:d=2``, ``power:n=2,c=3``,
    ``repdet:n=2,x=[[0,2],[1,0]]`` or ``perm:n=2``.
    """
    m = re.fullmatch(r"\s*([a-z]+)\s*(?::(.*))?", spec)
    if not m:
        raise ValueError(f"bad fixture {spec!r}")
    kind, rest = m.group(1), m.group(2) or ""
    params: Dict[str, object] = {}
    for item in _split_params(rest):
        if "=" not in item:
            raise ValueError(f"bad fixture parameter {item!r}")
        key, val = item.split("=", 1)
        try:
            params[key.strip()] = ast.literal_eval(val.strip())
        except (ValueError, SyntaxError):
            raise ValueError(f"bad value for {key.strip()!r} in fixture") from None
    gens = tuple(gens)
    deg = int(params.pop("n", n if n is not None else 2))
    if kind == "det":
        law = determinant_law(deg, gens)
    elif kind == "perm":
        law = permanent_law(deg, gens)
    elif kind == "norm":
        if deg != 2:
            raise ValueError("norm laws have degree 2")
        d = int(params.pop("d", 2))
        imgs = {s: tuple(params.pop(s)) for s in list(params) if s in gens}
        law = norm_law(d, gens, imgs)
    elif kind == "power":
        c = int(params.pop("c", 1))
        imgs = {s: c + k for k, s in enumerate(gens)}
        imgs.update({s: int(params.pop(s)) for s in list(params) if s in gens})
        law = scaled_power_law(deg, c, gens, imgs)
    elif kind == "repdet":
        mats = {s: params.pop(s) for s in list(params) if s in gens}
        law = representation_det_law(deg, mats, gens)
    elif kind == "mixed":
        law = mixed_degree_law(int(params.pop("c", 2)), gens)
    else:
        raise ValueError(f"unknown fixture kind {kind!r}")
    if params:
        raise ValueError(f"unused fixture parameters {sorted(params)}")
    law.name = spec.strip()
    return law


# -- coefficients and property checks --------------------------------------------------------------


def law_coefficient(p: LawOracle, elements: Sequence[object], xi: Sequence[int]):
    """The coefficient ``phi_xi((a_i))``: of ``prod l_i^xi_i`` in ``p_L(sum l_i a_i)``."""
    if len(elements) != len(xi):
        raise ValueError("elements and multi-index differ in length")
    lams = [formal("l", k) for k in range(len(elements))]
    value = p.evaluate([(MultiPoly.var(v), a) for v, a in zip(lams, elements)])
    return p.ring.coefficient(value, dict(zip(lams, xi)))


@dataclass
class CheckResult:
    passed: bool
    witness: Optional[str] = None
    checked: int = 0

    def __bool__(self) -> bool:
        return self.passed


def _sample_words(p: LawOracle, budget: int) -> List[Word]:
    return enumerate_words(p.gens, max_len=budget)


def _generic(words: Sequence[Word], tag: str) -> List[Tuple[MultiPoly, FreeElem]]:
    return [(MultiPoly.var(formal(tag, k)), FreeElem({w: 1})) for k, w in enumerate(words)]


def _render_generic(words: Sequence[Word], tag: str) -> str:
    return " + ".join(f"{tag}{k}*{word_str(w)}" if w else f"{tag}{k}" for k, w in enumerate(words))


def check_homogeneous(p: LawOracle, n: int | None = None, budget: int = 1) -> CheckResult:
    """Check ``p_L(a u) == a^n p_L(u)`` for a formal scalar ``a``.

    Samples are single words of length ``<= budget`` and then the generic
    combination of all of them; each check is a polynomial identity.
    """
    n = p.n if n is None else n
    a = MultiPoly.var(formal("a", 0))
    an = p.ring.lift(a ** n)
    words = _sample_words(p, budget)
    samples = [([w], "l") for w in words] + [(words, "l")]
    count = 0
    for ws, tag in samples:
        pairs = _generic(ws, tag)
        lhs = p.evaluate([(a * c, f) for c, f in pairs])
        rhs = an * p.evaluate(pairs)
        count += 1
        if lhs != rhs:
            return CheckResult(False, f"u = {_render_generic(ws, tag)}", count)
    return CheckResult(True, None, count)


def check_multiplicative(p: LawOracle, budget: int = 1) -> CheckResult:
    """Check ``p(1) == 1`` and ``p(fg) == p(f) p(g)``.

    Pairs of words of length ``<= budget`` are tried first (so a failure
    comes with an explicit ``f, g``), then generic combinations
    ``f = sum l_w w``, ``g = sum m_w w``.
    """
    one = p.ring.lift(MultiPoly.const(1))
    count = 1
    if p.evaluate([(1, FreeElem.one())]) != one:
        return CheckResult(False, "p(1) != 1", count)
    words = _sample_words(p, budget)
    for u in words:
        for v in words:
            count += 1
            fu, fv = FreeElem({u: 1}), FreeElem({v: 1})
            if p.evaluate([(1, fu * fv)]) != p.evaluate([(1, fu)]) * p.evaluate([(1, fv)]):
                return CheckResult(False, f"f = {fu}, g = {fv}", count)
    f, g = _generic(words, "l"), _generic(words, "m")
    prod_pairs = [(cf * cg, af * ag) for cf, af in f for cg, ag in g]
    count += 1
    if p.evaluate(prod_pairs) != p.evaluate(f) * p.evaluate(g):
        return CheckResult(False, f"f = {_render_generic(words, 'l')}, g = {_render_generic(words, 'm')}", count)
    return CheckResult(True, None, count)


def check_naturality(p: LawOracle, elements: Sequence[object], values: Sequence[int]) -> bool:
    """Evaluating over ``L`` then specializing ``l_i -> values[i]`` equals evaluating at the values."""
    lams = [formal("l", k) for k in range(len(elements))]
    generic = p.evaluate([(MultiPoly.var(v), a) for v, a in zip(lams, elements)])
    special = p.evaluate(list(zip(values, elements)))
    return p.ring.substitute(generic, dict(zip(lams, values))) == special


def roby_hom(p: LawOracle, u) -> object:
    """The algebra map ``Gamma_n(F_S) -> B`` attached to ``p``, on a monomial or element."""
    if isinstance(u, DPElem):
        total = p.ring.one() * 0
        for m, c in u.items():
            total = total + roby_hom(p, m) * c
        return total
    if u.n != p.n:
        raise DegreeMismatch(f"monomial of Gamma_{u.n} for a law of degree {p.n}")
    factors = u.full_factors()
    if not factors:
        return p.ring.one()
    return law_coefficient(p, [FreeElem({w: 1}) for w, _ in factors], [e for _, e in factors])


# -- the factorization ----------------------------------------------------------------------------


@dataclass
class FactorHom:
    """Ring map from the algebra generated by ``e[i](w)`` symbols to ``B``.

    Values on symbols are ``roby_hom(p, 1^(n-i) w^(i))``; the table is
    filled for words up to ``cap`` and extended on demand.
    """

    law: LawOracle
    n: int
    cap: int = 3
    table: Dict[Var, object] = field(default_factory=dict)
    overrides: Dict[Var, object] = field(default_factory=dict)

    def value(self, sym: Var):
        if sym.kind != ESYM:
            raise ValueError(f"{sym} is not an e-symbol")
        if sym in self.overrides:
            return self.overrides[sym]
        if sym not in self.table:
            if sym.i > self.n:
                self.table[sym] = self.law.ring.one() * 0
            else:
                u = DPMonomial.make(self.n, {esym_word(sym): sym.i})
                self.table[sym] = roby_hom(self.law, u)
        return self.table[sym]

    def evaluate(self, expr: MultiPoly):
        return expr.evaluate({v: self.value(v) for v in expr.variables()}, self.law.ring.one())

    def perturbed(self, sym: Var, delta: int = 1) -> "FactorHom":
        """Copy with the value on ``sym`` shifted by ``delta`` (negative control)."""
        other = FactorHom(self.law, self.n, self.cap, dict(self.table), dict(self.overrides))
        other.overrides[sym] = self.value(sym) + delta
        return other

    def sorted_table(self) -> List[Tuple[Var, object]]:
        return sorted(self.table.items(), key=lambda t: (len(esym_word(t[0])), t[0].label, t[0].i))


def factor_law(p: LawOracle, ctx: GenericContext, cap: int = 3, budget: int = 1) -> FactorHom:
    """Tabulate the homomorphism ``phi`` with ``p = phi . det . j_n``.

    Raises :class:`LawError` if ``p`` is not homogeneous of degree ``n`` or
    not multiplicative.
    """
    if p.n != ctx.n:
        raise LawError(f"law has degree {p.n} but n={ctx.n}")
    h = check_homogeneous(p, p.n, budget)
    if not h:
        raise LawError("law is not homogeneous", h.witness)
    m = check_multiplicative(p, budget)
    if not m:
        raise LawError("law is not multiplicative", m.witness)
    phi = FactorHom(p, p.n, cap)
    for w in enumerate_words(ctx.gens, max_len=cap):
        if w and cyclic_canonical(w) == w:
            for i in range(1, p.n + 1):
                phi.value(esym(i, w))
    return phi


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for k in range(total, -1, -1):
        for rest in _compositions(total - k, parts - 1):
            yield (k,) + rest


@dataclass
class FactorCheck:
    f: str
    det_identity: bool
    scalar_identity: bool
    diagram: bool
    p_value: object
    phi_value: object
    denominator: int
    expression: str

    @property
    def passed(self) -> bool:
        return self.det_identity and self.scalar_identity and self.diagram


def verify_factorization(p: LawOracle, phi: FactorHom, ctx: GenericContext,
                         tests: Sequence[object]) -> List[FactorCheck]:
    """Check ``p(f) == phi(det(j_n(f)))`` for each ``f``.

    Per test: (a) ``det(j_n(f))`` equals ``sum c^xi pi_n(prod w^(xi))``;
    (b) ``p(f)`` equals ``sum c^xi roby_hom(p, prod w^(xi))``;
    (c) writing ``den * det(j_n(f))`` as an e-expression ``E``,
    ``phi(E) == den * p(f)``.
    """
    out = []
    for f in tests:
        f = FreeElem.coerce(f)
        items = f.sorted_items()
        det_side = MultiPoly()
        scalar_side = p.ring.one() * 0
        for xi in _compositions(p.n, len(items)):
            coeff = 1
            for (_, c), k in zip(items, xi):
                coeff *= c ** k
            if not coeff:
                continue
            u = normalize([(FreeElem({w: 1}), k) for (w, _), k in zip(items, xi)], p.n)
            det_side = det_side + pi_image(u, ctx).scale(coeff)
            scalar_side = scalar_side + roby_hom(p, u) * coeff
        det_f = det_law(f, ctx)
        p_f = p(f)
        expr, den = present(det_f, ctx)
        phi_val = phi.evaluate(expr)
        out.append(FactorCheck(
            f=str(f),
            det_identity=det_f == det_side,
            scalar_identity=p_f == scalar_side,
            diagram=phi_val == p_f * den,
            p_value=p_f,
            phi_value=phi_val,
            denominator=den,
            expression=render(expr),
        ))
    return out


def relations_discover(ctx: GenericContext, d) -> List[MultiPoly]:
    """Basis of the Q-linear relations among e-monomials of multidegree ``d``.

    Each relation is returned with primitive integer coefficients.
    """
    monos = e_monomials(ctx, d)
    if not monos:
        return []
    vals = [e_evaluate(m, ctx) for m in monos]
    rows, coords = polys_to_rows(vals)
    eqs: Dict[int, Dict[int, int]] = {}
    for k, r in enumerate(rows):
        for idx, c in r.items():
            eqs.setdefault(idx, {})[k] = c
    ech = Echelon(len(monos))
    for key in sorted(eqs):
        ech.add(eqs[key])
    out = []
    for v in ech.nullspace():
        coeffs = integer_vector(v)
        rel = MultiPoly()
        for c, m in zip(coeffs, monos):
            if c:
                rel = rel + m.scale(c)
        out.append(rel)
    return out


def all_relations(ctx: GenericContext, max_total: int) -> List[MultiPoly]:
    """Relations in every multidegree of total degree ``1..max_total``."""
    out = []
    for d in product(range(max_total + 1), repeat=len(ctx.gens)):
        if 0 < sum(d) <= max_total:
            out.extend(relations_discover(ctx, d))
    return out


def check_welldefined(phi: FactorHom, relations: Sequence[MultiPoly]) -> CheckResult:
    """``phi`` must send every relation among the e-symbols to zero."""
    zero = phi.law.ring.one() * 0
    for k, rel in enumerate(relations):
        if phi.evaluate(rel) != zero:
            return CheckResult(False, render(rel), k + 1)
    return CheckResult(True, None, len(relations))
