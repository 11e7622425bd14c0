"""Divided powers of the free ring.

The tau product is checked against the embedding of Gamma_n(A) into the
symmetric tensors of A^(x)n, where the product is slotwise multiplication.
"""
import itertools
from collections import Counter

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from polylaw.divpow import (
    DegreeMismatch, DPElem, DPMonomial, ab_component_rank, contingency_tables, dp_basis,
    dp_basis_upto, gamma_coeff, normalize, parse_dp, rho, sub_degrees, tau_mul,
)
from polylaw.exactalg import ParseError
from polylaw.freering import FreeElem, parse_free

X, Y = ("x",), ("y",)


def mono(n, **kw):
    return DPElem.monomial(DPMonomial.make(n, {tuple(k): e for k, e in kw.items()}))


def dp(text, n):
    return parse_dp(text, n, ("x", "y"))


# -- symmetric tensor oracle --------------------------------------------------


def to_tensor(u: DPElem) -> Counter:
    out = Counter()
    for m, c in u.items():
        slots = [w for w, e in m.full_factors() for _ in range(e)]
        for arrangement in set(itertools.permutations(slots)):
            out[arrangement] += c
    return out


def tensor_mul(a: Counter, b: Counter) -> Counter:
    out = Counter()
    for ka, ca in a.items():
        for kb, cb in b.items():
            out[tuple(p + q for p, q in zip(ka, kb))] += ca * cb
    return {k: v for k, v in out.items() if v}


def clean(c):
    return {k: v for k, v in c.items() if v}


# -- normalize ----------------------------------------------------------------


def test_normalize_merge():
    assert normalize([("x", 1), ("x", 1)], 2) == mono(2, x=2).scale(2)


def test_normalize_scalar():
    assert normalize([(parse_free("2*x"), 2)], 2) == mono(2, x=2).scale(4)


def test_normalize_negative_exponent():
    assert not normalize([("x", -1)], 2)


def test_normalize_sum():
    want = mono(2, x=2) + DPElem.monomial(DPMonomial.make(2, {X: 1, Y: 1})) + mono(2, y=2)
    assert normalize([(parse_free("x+y"), 2)], 2) == want


def test_normalize_pads_with_unit():
    assert normalize([("x", 1)], 2) == DPElem.monomial(DPMonomial.make(2, {X: 1}))
    assert normalize([((), 1), ("x", 1)], 2) == normalize([("x", 1)], 2)


def test_normalize_too_large():
    with pytest.raises(DegreeMismatch):
        normalize([("x", 3)], 2)


# -- contingency tables -------------------------------------------------------


def test_tables_examples():
    assert contingency_tables([2], [2]) == [((2,),)]
    assert sorted(contingency_tables([1, 1], [1, 1])) == [((0, 1), (1, 0)), ((1, 0), (0, 1))]
    assert contingency_tables([1], [2]) == []


@pytest.mark.parametrize("alpha,beta", [((2, 1), (1, 1, 1)), ((3, 0, 1), (2, 2)), ((2, 2), (2, 2)), ((1, 2, 1), (3, 1))])
def test_tables_brute_force(alpha, beta):
    cells = len(alpha) * len(beta)
    brute = set()
    for flat in itertools.product(range(max(alpha + beta) + 1), repeat=cells):
        t = tuple(tuple(flat[i * len(beta):(i + 1) * len(beta)]) for i in range(len(alpha)))
        if tuple(map(sum, t)) == alpha and tuple(map(sum, zip(*t))) == beta:
            brute.add(t)
    got = contingency_tables(alpha, beta)
    assert len(got) == len(set(got)) and set(got) == brute


# -- tau ----------------------------------------------------------------------


def test_tau_examples():
    assert tau_mul(mono(2, x=2), mono(2, x=2)) == mono(2, xx=2)
    u = dp("d(1,1)*d(x,1)", 2)
    assert tau_mul(u, u) == dp("d(1,1)*d(x*x,1)", 2) + mono(2, x=2).scale(2)
    assert str(tau_mul(u, u)) == "2*d(x,2) + d(1,1)*d(x*x,1)"


@pytest.mark.parametrize("n", [1, 2, 3])
def test_tau_unit(n):
    for m in dp_basis_upto(n, (2, 1), ("x", "y")):
        u = DPElem.monomial(m)
        assert tau_mul(DPElem.unit(n), u) == u == tau_mul(u, DPElem.unit(n))


@pytest.mark.parametrize("n", [2, 3])
def test_tau_matches_tensor_oracle(n):
    basis = dp_basis_upto(n, (1, 1), ("x", "y"))
    for a, b in itertools.product(basis, repeat=2):
        u, v = DPElem.monomial(a), DPElem.monomial(b)
        assert clean(to_tensor(tau_mul(u, v))) == tensor_mul(to_tensor(u), to_tensor(v))


def test_tau_not_commutative_over_two_generators():
    u, v = dp("d(1,1)*d(x,1)", 2), dp("d(1,1)*d(y,1)", 2)
    assert tau_mul(u, v) == dp("d(1,1)*d(x*y,1) + d(x,1)*d(y,1)", 2)
    assert tau_mul(v, u) == dp("d(1,1)*d(y*x,1) + d(x,1)*d(y,1)", 2)
    assert tau_mul(u, v) != tau_mul(v, u)


@pytest.mark.parametrize("n", [2, 3])
def test_tau_commutative_single_generator(n):
    basis = dp_basis_upto(n, (3,), ("x",))
    for a, b in itertools.product(basis, repeat=2):
        u, v = DPElem.monomial(a), DPElem.monomial(b)
        assert tau_mul(u, v) == tau_mul(v, u)


basis22 = dp_basis_upto(2, (1, 1), ("x", "y"))


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(basis22), st.sampled_from(basis22), st.sampled_from(basis22))
def test_tau_associative(a, b, c):
    u, v, w = (DPElem.monomial(m) for m in (a, b, c))
    assert tau_mul(tau_mul(u, v), w) == tau_mul(u, tau_mul(v, w))


# -- gamma coefficients and rho -----------------------------------------------


def test_gamma_coeff_examples():
    assert gamma_coeff([FreeElem.one(), parse_free("x")], (1, 1), 2) == dp("d(1,1)*d(x,1)", 2)
    assert not gamma_coeff([parse_free("x"), parse_free("y")], (1, 0), 2)
    assert not gamma_coeff([parse_free("x"), parse_free("y")], (2, 1), 2)
    assert gamma_coeff([parse_free("x*y")], (3,), 3) == mono(3, xy=3)


def test_rho_examples():
    assert rho(dp("d(1,1)*d(x,1)", 2)) == dp("d(x,1)", 1)
    assert not rho(mono(2, x=2))
    assert rho(DPElem.unit(2)) == DPElem.unit(1)


@pytest.mark.parametrize("n", [2, 3])
def test_rho_is_multiplicative(n):
    basis = dp_basis_upto(n, (1, 1), ("x", "y"))
    for a, b in itertools.product(basis, repeat=2):
        u, v = DPElem.monomial(a), DPElem.monomial(b)
        assert rho(tau_mul(u, v)) == tau_mul(rho(u), rho(v))


# -- bases and abelianization -------------------------------------------------


def test_basis_counts():
    assert [len(dp_basis(2, (k,), ("x",))) for k in range(5)] == [1, 1, 2, 2, 3]
    assert {str(m) for m in dp_basis(2, (2,), ("x",))} == {"d(1,1)*d(x*x,1)", "d(x,2)"}


def _two_sided_ab_rank(n, d, gens):
    """Rank of the degree-d quotient by the span of all a [u, v] b."""
    basis = dp_basis(n, d, gens)
    index = {m: k for k, m in enumerate(basis)}
    rows = []
    for du in sub_degrees(d):
        for dv in sub_degrees(tuple(p - q for p, q in zip(d, du))):
            rest = tuple(p - q - r for p, q, r in zip(d, du, dv))
            for da in sub_degrees(rest):
                db = tuple(p - q for p, q in zip(rest, da))
                for a, b, u, v in itertools.product(*(dp_basis(n, e, gens) for e in (da, db, du, dv))):
                    U, V = DPElem.monomial(u), DPElem.monomial(v)
                    e = tau_mul(tau_mul(DPElem.monomial(a), tau_mul(U, V) - tau_mul(V, U)), DPElem.monomial(b))
                    if e:
                        row = [0] * len(basis)
                        for m, c in e.items():
                            row[index[m]] = c
                        rows.append(row)
    return len(basis) - (sympy.Matrix(rows).rank() if rows else 0)


def test_ab_rank_single_generator():
    assert [ab_component_rank(2, (k,), ("x",)) for k in range(5)] == [1, 1, 2, 2, 3]


@pytest.mark.parametrize("n,d,gens", [(2, (1, 1), ("x", "y")), (2, (2, 1), ("x", "y")), (3, (1, 1), ("x", "y")),
                                      (2, (3,), ("x",))])
def test_ab_rank_matches_two_sided_oracle(n, d, gens):
    assert ab_component_rank(n, d, gens) == _two_sided_ab_rank(n, d, gens)


# -- parsing ------------------------------------------------------------------


def test_parse_round_trip():
    u = dp("2*d(x,2) - d(x+y,2) + d(1,1)*d(x*y,1)", 2)
    assert parse_dp(str(u), 2, ("x", "y")) == u


def test_parse_errors():
    with pytest.raises(ParseError) as info:
        dp("d(x,1)*e(y,1)", 2)
    assert info.value.pos == 7
    with pytest.raises(ParseError):
        dp("d(x 1)", 2)
    with pytest.raises(DegreeMismatch):
        parse_dp("d(x,1)", 2, strict=True)
