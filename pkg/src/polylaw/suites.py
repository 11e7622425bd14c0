"""Property suites run by ``polylaw verify-all``.

Each suite is a function ``(config) -> SuiteResult``.  Bounds come from the
run configuration so that ``maxdeg=0`` gives a trivial but complete pass.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, List, Sequence, Tuple

from . import divpow, exactalg, freering, genmat, lawkit
from .exactalg import MultiPoly, PolyMatrix, entry, formal


@dataclass(frozen=True)
class RunConfig:
    n: int = 2
    gens: Tuple[str, ...] = ("x", "y")
    maxdeg: int = 4
    maxwordlen: int = 3
    seed: int = 0
    inject_fault: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.maxdeg < 0 or self.maxwordlen < 0:
            raise ValueError("bounds must be >= 0")
        if not self.gens:
            raise ValueError("need at least one generator")

    def as_dict(self) -> dict:
        return {"n": self.n, "gens": list(self.gens), "maxdeg": self.maxdeg,
                "maxwordlen": self.maxwordlen, "seed": self.seed}


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int
    failures: List[str] = field(default_factory=list)


class _Tally:
    def __init__(self, name: str):
        self.name = name
        self.checked = 0
        self.failed = 0
        self.failures: List[str] = []

    def check(self, ok: bool, what: str):
        self.checked += 1
        if not ok:
            self.failed += 1
            if len(self.failures) < 5:
                self.failures.append(what)

    def result(self) -> SuiteResult:
        return SuiteResult(self.name, self.failed == 0, self.checked, self.failures)


def degrees_upto(total: int, k: int) -> List[Tuple[int, ...]]:
    """All multidegrees in ``k`` generators with total degree ``<= total``."""
    return [d for d in product(range(total + 1), repeat=k) if sum(d) <= total]


def _random_poly(rng: random.Random, variables, terms: int = 3, maxexp: int = 2) -> MultiPoly:
    p = MultiPoly()
    for _ in range(terms):
        mono = MultiPoly.const(rng.randint(-4, 4))
        for v in variables:
            mono = mono * MultiPoly.var(v, rng.randint(0, maxexp))
        p = p + mono
    return p


# -- suites ---------------------------------------------------------------------------


def suite_ring_axioms(cfg: RunConfig) -> SuiteResult:
    t = _Tally("exactalg.ring_axioms")
    rng = random.Random(cfg.seed)
    vs = [entry(1, 1, cfg.gens[0]), entry(1, 2, cfg.gens[0]), formal("l", 0)]
    one = MultiPoly.const(1)
    for k in range(20):
        a, b, c = (_random_poly(rng, vs) for _ in range(3))
        t.check((a + b) + c == a + (b + c), f"add assoc #{k}")
        t.check((a * b) * c == a * (b * c), f"mul assoc #{k}")
        t.check(a * b == b * a and a + b == b + a, f"commutativity #{k}")
        t.check(a * (b + c) == a * b + a * c, f"distributivity #{k}")
        t.check(a * one == a and a + MultiPoly() == a and (a - a).is_zero(), f"units #{k}")
        t.check(exactalg.parse_poly(exactalg.render(a)) == a, f"render round trip #{k}")
    return t.result()


def suite_determinants(cfg: RunConfig) -> SuiteResult:
    t = _Tally("exactalg.determinants")
    rng = random.Random(cfg.seed + 1)
    vs = [formal("u", 0), formal("v", 0)]
    for size in (2, 3):
        for k in range(4):
            a = PolyMatrix([[_random_poly(rng, vs, 2, 1) for _ in range(size)] for _ in range(size)])
            b = PolyMatrix([[_random_poly(rng, vs, 2, 1) for _ in range(size)] for _ in range(size)])
            da, db = a.det(), b.det()
            t.check((a * b).det() == da * db, f"det(AB) {size}x{size} #{k}")
            t.check(da == exactalg.leibniz_det(a), f"cofactor vs Leibniz {size}x{size} #{k}")
            swapped = PolyMatrix([a.rows[1], a.rows[0]] + list(a.rows[2:]))
            t.check(swapped.det() == -da, f"alternating {size}x{size} #{k}")
    return t.result()


def suite_free_monoid(cfg: RunConfig) -> SuiteResult:
    t = _Tally("freering.monoid")
    words = freering.enumerate_words(cfg.gens, max_len=min(cfg.maxwordlen, 2))
    one = freering.FreeElem.one()
    for u in words:
        fu = freering.FreeElem({u: 1})
        t.check(one * fu == fu == fu * one, f"unit {u}")
        for v in words:
            fv = freering.FreeElem({v: 1})
            t.check(freering.multidegree(u + v) == freering.add_degrees(freering.multidegree(u),
                                                                       freering.multidegree(v)),
                    f"multidegree {u}{v}")
            for w in words:
                fw = freering.FreeElem({w: 1})
                t.check((fu * fv) * fw == fu * (fv * fw), f"assoc {u},{v},{w}")
    keys = [freering.word_key(w) for w in words]
    t.check(keys == sorted(keys) and len(set(keys)) == len(keys), "length-lex order")
    return t.result()


def _basis_upto_total(n: int, total: int, gens) -> List[divpow.DPMonomial]:
    out = []
    for d in degrees_upto(total, len(gens)):
        out.extend(divpow.dp_basis(n, d, gens))
    return out


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _deg(m: divpow.DPMonomial, gens) -> Tuple[int, ...]:
    return freering.degree_tuple(m.multidegree(), gens)


def suite_tau_ring(cfg: RunConfig) -> SuiteResult:
    t = _Tally("divpow.tau_ring")
    total = min(cfg.maxdeg, 3)
    n = cfg.n
    basis = _basis_upto_total(n, total, cfg.gens)
    unit = divpow.DPElem.unit(n)
    degs = {m: _deg(m, cfg.gens) for m in basis}
    for u in basis:
        eu = divpow.DPElem.monomial(u)
        t.check(divpow.tau_mul(unit, eu) == eu == divpow.tau_mul(eu, unit), f"unit {u}")
    for u, v, w in product(basis, repeat=3):
        if sum(_add(_add(degs[u], degs[v]), degs[w])) > total:
            continue
        eu, ev, ew = (divpow.DPElem.monomial(m) for m in (u, v, w))
        lhs = divpow.tau_mul(divpow.tau_mul(eu, ev), ew)
        rhs = divpow.tau_mul(eu, divpow.tau_mul(ev, ew))
        t.check(lhs == rhs, f"assoc {u} {v} {w}")
    for u, v in product(basis, repeat=2):
        uv = divpow.tau_mul(divpow.DPElem.monomial(u), divpow.DPElem.monomial(v))
        want = _add(degs[u], degs[v])
        t.check(all(_deg(m, cfg.gens) == want for m, _ in uv.items()), f"grading {u} {v}")
    return t.result()


def suite_tables(cfg: RunConfig) -> SuiteResult:
    t = _Tally("divpow.contingency_tables")
    vecs = [v for k in (1, 2) for v in product(range(3), repeat=k)]
    for a in vecs:
        for b in vecs:
            tabs = divpow.contingency_tables(a, b)
            t.check(len(tabs) == len(divpow.contingency_tables(b, a)), f"transpose {a} {b}")
            t.check(len(set(tabs)) == len(tabs), f"duplicates {a} {b}")
    return t.result()


def suite_char_coeff_identity(cfg: RunConfig) -> SuiteResult:
    t = _Tally("genmat.char_coeff_identity")
    ctx = genmat.GenericContext(cfg.n, cfg.gens)
    for w in freering.enumerate_words(cfg.gens, max_len=cfg.maxwordlen):
        if not w:
            continue
        for i in range(cfg.n + 2):
            if i <= cfg.n:
                u = divpow.DPMonomial.make(cfg.n, {w: i})
                t.check(genmat.pi_image(u, ctx) == genmat.e_value(i, w, ctx), f"pi(1^(n-{i}) {w}^({i}))")
            else:
                t.check(genmat.e_value(i, w, ctx).is_zero(), f"e_{i}({w}) vanishes")
    return t.result()


def suite_pi_multiplicative(cfg: RunConfig) -> SuiteResult:
    t = _Tally("genmat.pi_multiplicative")
    ctx = genmat.GenericContext(cfg.n, cfg.gens)
    total = min(cfg.maxdeg, 4)
    basis = _basis_upto_total(cfg.n, total, cfg.gens)
    for u, v in product(basis, repeat=2):
        if sum(_add(_deg(u, cfg.gens), _deg(v, cfg.gens))) > total:
            continue
        uv = divpow.tau_mul(divpow.DPElem.monomial(u), divpow.DPElem.monomial(v))
        t.check(genmat.pi_image(uv, ctx) == genmat.pi_image(u, ctx) * genmat.pi_image(v, ctx),
                f"pi({u} * {v})")
    return t.result()


def graded_table(cfg: RunConfig) -> List[dict]:
    """Per multidegree: invariant dimension, e-span rank, abelianization rank, pi-image rank."""
    ctx = genmat.GenericContext(cfg.n, cfg.gens)
    rows = []
    for d in degrees_upto(cfg.maxdeg, len(cfg.gens)):
        inv, _ = genmat.invariant_space(ctx, d)
        rows.append({
            "multidegree": list(d),
            "invariant_dim": inv,
            "e_span_rank": genmat.e_span_rank(ctx, d),
            "ab_rank": divpow.ab_component_rank(cfg.n, d, cfg.gens),
            "pi_rank": genmat.pi_span_rank(ctx, d),
        })
    return rows


def suite_invariants_equal_e_span(cfg: RunConfig) -> SuiteResult:
    t = _Tally("genmat.invariants_equal_e_span")
    for row in graded_table(cfg):
        t.check(row["invariant_dim"] == row["e_span_rank"], f"multidegree {row['multidegree']}")
    return t.result()


def suite_gamma_ab(cfg: RunConfig) -> SuiteResult:
    t = _Tally("divpow.ab_rank_equals_pi_rank")
    ctx = genmat.GenericContext(cfg.n, cfg.gens)
    for d in degrees_upto(cfg.maxdeg, len(cfg.gens)):
        t.check(divpow.ab_component_rank(cfg.n, d, cfg.gens) == genmat.pi_span_rank(ctx, d),
                f"multidegree {d}")
    return t.result()


def suite_commuting_square(cfg: RunConfig) -> SuiteResult:
    t = _Tally("genmat.commuting_square")
    if cfg.n < 2:
        return t.result()
    ctx = genmat.GenericContext(cfg.n, cfg.gens)
    low = ctx.lower()
    for u in _basis_upto_total(cfg.n, cfg.maxdeg, cfg.gens):
        lhs = genmat.delta(genmat.pi_image(u, ctx), ctx)
        rhs = genmat.pi_image(divpow.rho(divpow.DPElem.monomial(u)), low)
        t.check(lhs == rhs, f"square at {u}")
    return t.result()


TEST_SET = ("1", "x", "x*x", "1+x", "x+y", "x*y", "1+x+y")


def default_fixtures(cfg: RunConfig) -> List[str]:
    n = cfg.n
    specs = [f"det:n={n}", f"power:n={n},c=2", f"power:n={n},c=3"]
    if n == 2:
        specs[1:1] = ["norm:d=-1", "norm:d=2", "norm:d=5"]
        specs.append(f"repdet:n=2,{cfg.gens[0]}=[[0,2],[1,0]]")
    else:
        rows = [[0] * n for _ in range(n)]
        for i in range(1, n):
            rows[i][i - 1] = 1
        rows[0][n - 1] = 2
        specs.append(f"repdet:n={n},{cfg.gens[0]}={rows}".replace(" ", ""))
    return specs


def test_elements(cfg: RunConfig) -> List[str]:
    gens = cfg.gens
    x = gens[0]
    y = gens[1] if len(gens) > 1 else gens[0]
    return [t.replace("x", "\0").replace("y", y).replace("\0", x) for t in TEST_SET]


def suite_factorization(cfg: RunConfig) -> SuiteResult:
    t = _Tally("lawkit.factorization")
    ctx = genmat.GenericContext(cfg.n, cfg.gens)
    relations = lawkit.all_relations(ctx, min(cfg.maxdeg, 4))
    tests = test_elements(cfg)
    for spec in default_fixtures(cfg):
        law = lawkit.parse_fixture(spec, cfg.gens)
        phi = lawkit.factor_law(law, ctx, cap=cfg.maxwordlen)
        if cfg.inject_fault:
            phi = phi.perturbed(genmat.esym(cfg.n, (cfg.gens[0],)))
        for check in lawkit.verify_factorization(law, phi, ctx, tests):
            t.check(check.passed, f"{spec}: f = {check.f}")
        t.check(bool(lawkit.check_welldefined(phi, relations)), f"{spec}: well-defined")
    return t.result()


def suite_negative_controls(cfg: RunConfig) -> SuiteResult:
    t = _Tally("lawkit.negative_controls")
    ctx = genmat.GenericContext(cfg.n, cfg.gens)
    perm = lawkit.permanent_law(max(cfg.n, 2), cfg.gens)
    t.check(not lawkit.check_multiplicative(perm), "permanent law is rejected")
    t.check(not lawkit.check_homogeneous(lawkit.mixed_degree_law(2, cfg.gens)), "mixed law is rejected")
    law = lawkit.determinant_law(cfg.n, cfg.gens)
    phi = lawkit.factor_law(law, ctx, cap=1).perturbed(genmat.esym(cfg.n, (cfg.gens[0],)))
    rels = lawkit.all_relations(ctx, max(2, min(cfg.maxdeg, 4)))
    t.check(not lawkit.check_welldefined(phi, rels), "perturbed phi is rejected")
    return t.result()


def suite_naturality(cfg: RunConfig) -> SuiteResult:
    t = _Tally("lawkit.naturality")
    rng = random.Random(cfg.seed + 2)
    elems = ["1", cfg.gens[0], "*".join(cfg.gens)]
    for spec in default_fixtures(cfg):
        law = lawkit.parse_fixture(spec, cfg.gens)
        for k in range(3):
            vals = [rng.randint(-3, 3) for _ in elems]
            t.check(lawkit.check_naturality(law, elems, vals), f"{spec} at {vals}")
        for xi in product(range(law.n + 3), repeat=2):
            if sum(xi) != law.n and sum(xi) <= law.n + 2:
                zero = law.ring.one() * 0
                t.check(lawkit.law_coefficient(law, elems[:2], xi) == zero, f"{spec}: xi={xi}")
    return t.result()


SUITES: Sequence[Callable[[RunConfig], SuiteResult]] = (
    suite_ring_axioms,
    suite_determinants,
    suite_free_monoid,
    suite_tables,
    suite_tau_ring,
    suite_char_coeff_identity,
    suite_pi_multiplicative,
    suite_invariants_equal_e_span,
    suite_gamma_ab,
    suite_commuting_square,
    suite_factorization,
    suite_negative_controls,
    suite_naturality,
)


def run_all(cfg: RunConfig) -> List[SuiteResult]:
    return [suite(cfg) for suite in SUITES]
