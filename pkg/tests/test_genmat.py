import itertools
import random

import pytest
import sympy

from oracles import as_ints, matrix_to_sympy, random_unimodular, sym, to_sympy
from polylaw.divpow import DPElem, DPMonomial, dp_basis, dp_basis_upto, parse_dp, rho, tau_mul
from polylaw.exactalg import MultiPoly, PolyMatrix, entry, render
from polylaw.freering import enumerate_words, parse_free
from polylaw.genmat import (
    GenericContext, char_coeff, conjugation_action, delta, det_law, e_evaluate, e_monomials, e_span_rank,
    e_value, embed_generic, esym, generic_matrix, invariant_space, matrix_monomials, pi_image,
    pi_image_by_extraction, pi_span_rank, present,
)

C2 = GenericContext(2, ("x",))
C2XY = GenericContext(2, ("x", "y"))


def xv(i, j, s="x"):
    return MultiPoly.var(entry(i, j, s))


def test_embed_examples():
    assert embed_generic(parse_free("x"), C2) == PolyMatrix([[xv(1, 1), xv(1, 2)], [xv(2, 1), xv(2, 2)]])
    assert embed_generic(parse_free("1"), C2) == PolyMatrix.identity(2)
    z = matrix_to_sympy(generic_matrix("x", 2))
    assert matrix_to_sympy(embed_generic(parse_free("x*x"), C2)) == (z * z).expand()


def test_embed_unknown_generator():
    with pytest.raises(ValueError):
        embed_generic(parse_free("y"), C2)


def test_char_coeff_examples():
    z = generic_matrix("x", 2)
    assert char_coeff(z, 0) == 1
    assert char_coeff(z, 1) == xv(1, 1) + xv(2, 2)
    assert char_coeff(z, 3) == 0


@pytest.mark.parametrize("n", [2, 3])
def test_char_coeff_matches_sympy_charpoly(n):
    b = embed_generic(parse_free("x*y + 2*x - 1"), GenericContext(n, ("x", "y")))
    t = sympy.Symbol("t")
    poly = sympy.Poly((t * sympy.eye(n) + matrix_to_sympy(b)).det(method="berkowitz"), t)
    for i in range(n + 1):
        assert sympy.expand(poly.coeff_monomial(t ** (n - i)) - to_sympy(char_coeff(b, i))) == 0


def test_det_law_examples():
    assert det_law(parse_free("x"), C2) == xv(1, 1) * xv(2, 2) - xv(1, 2) * xv(2, 1)
    assert det_law(parse_free("1"), C2) == 1
    z = generic_matrix("x", 2)
    assert det_law(parse_free("1+x"), C2) == 1 + char_coeff(z, 1) + char_coeff(z, 2)


def test_pi_examples():
    assert pi_image(DPMonomial.unit(2), C2) == 1
    assert pi_image(parse_dp("d(1,1)*d(x,1)", 2), C2) == xv(1, 1) + xv(2, 2)
    got = pi_image(parse_dp("d(x,1)*d(y,1)", 2), C2XY)
    want = (xv(1, 1) + xv(2, 2)) * (xv(1, 1, "y") + xv(2, 2, "y")) - e_value(1, ("x", "y"), C2XY)
    assert got == want


@pytest.mark.parametrize("n", [2, 3])
def test_pi_column_assignment_matches_extraction(n):
    ctx = GenericContext(n, ("x", "y"))
    for m in dp_basis_upto(n, (2, 1), ("x", "y")):
        assert pi_image(m, ctx) == pi_image_by_extraction(m, ctx)


@pytest.mark.parametrize("n", [2, 3])
def test_pi_of_truncated_powers_is_char_coeff(n):
    ctx = GenericContext(n, ("x", "y"))
    for w in enumerate_words(["x", "y"], max_len=2):
        if not w:
            continue
        for i in range(n + 1):
            u = DPMonomial.make(n, {w: i})
            assert pi_image(u, ctx) == e_value(i, w, ctx)


@pytest.mark.parametrize("n", [2, pytest.param(3, marks=pytest.mark.slow)])
def test_pi_multiplicative(n):
    """Every pair of basis monomials, each of multidegree at most (2,2)."""
    ctx = GenericContext(n, ("x", "y"))
    basis = [DPElem.monomial(m) for m in dp_basis_upto(n, (2, 2), ("x", "y"))]
    for u, v in itertools.product(basis, repeat=2):
        assert pi_image(tau_mul(u, v), ctx) == pi_image(u, ctx) * pi_image(v, ctx)


def test_conjugation_examples():
    e1 = char_coeff(generic_matrix("x", 2), 1)
    assert conjugation_action(e1, [[1, 0], [0, 1]], C2) == e1
    assert conjugation_action(e1, [[1, 1], [0, 1]], C2) == e1
    assert conjugation_action(xv(1, 1), [[1, 1], [0, 1]], C2) == xv(1, 1) + xv(2, 1)


def test_conjugation_rejects_non_unimodular():
    with pytest.raises(ValueError):
        conjugation_action(xv(1, 1), [[2, 0], [0, 1]], C2)


def test_pi_images_are_invariant():
    rng = random.Random(3)
    for m in dp_basis_upto(2, (2, 1), ("x", "y")):
        p = pi_image(m, C2XY)
        for _ in range(2):
            g = random_unimodular(2, rng)
            assert conjugation_action(p, as_ints(g), C2XY) == p


def _sympy_invariant_dim(ctx, d, trials=2):
    """Dimension of the polynomials fixed by several random integer conjugations."""
    monos = [to_sympy(m) for m in matrix_monomials(ctx, d)]
    gens = {s: sympy.Matrix(ctx.n, ctx.n, lambda i, j: sym(entry(i + 1, j + 1, s))) for s in ctx.gens}
    allsyms = [v for s in ctx.gens for v in gens[s]]
    rng = random.Random(11)
    columns = [dict() for _ in monos]
    for t in range(trials):
        g = random_unimodular(ctx.n, rng)
        sub = {}
        for s, z in gens.items():
            c = g * z * g.inv()
            for i in range(ctx.n):
                for j in range(ctx.n):
                    sub[z[i, j]] = c[i, j]
        for k, m in enumerate(monos):
            diff = sympy.Poly(sympy.expand(m.xreplace(sub) - m), *allsyms)
            for mono, c in diff.terms():
                columns[k][(t, mono)] = c
    keys = sorted({key for col in columns for key in col})
    mat = sympy.Matrix([[col.get(key, 0) for col in columns] for key in keys]) if keys else sympy.zeros(1, len(monos))
    return len(monos) - mat.rank()


def test_invariant_space_examples():
    assert invariant_space(C2, (0,))[0] == 1
    assert invariant_space(C2, (2,))[0] == 2
    assert invariant_space(C2XY, (1, 1))[0] == 2


@pytest.mark.parametrize("ctx,d", [(C2, (2,)), (C2, (3,)), (C2XY, (1, 1)), (C2XY, (2, 1))])
def test_invariant_space_matches_sympy(ctx, d):
    assert invariant_space(ctx, d)[0] == _sympy_invariant_dim(ctx, d)


def test_invariant_basis_is_invariant():
    _, basis = invariant_space(C2XY, (1, 1))
    rng = random.Random(5)
    for p in basis:
        assert conjugation_action(p, as_ints(random_unimodular(2, rng)), C2XY) == p


def test_e_span_rank_examples():
    assert e_span_rank(C2, (0,)) == 1
    assert e_span_rank(C2, (2,)) == 2
    assert e_span_rank(C2XY, (1, 1)) == 2
    x2 = e_evaluate(MultiPoly.var(esym(1, ("x", "x"))), C2)
    e1 = e_evaluate(MultiPoly.var(esym(1, ("x",))), C2)
    e2 = e_evaluate(MultiPoly.var(esym(2, ("x",))), C2)
    assert x2 == e1 * e1 - e2.scale(2)


@pytest.mark.parametrize("d", [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (3, 1)])
def test_three_ranks_agree(d):
    dim = invariant_space(C2XY, d)[0]
    assert e_span_rank(C2XY, d) == dim == pi_span_rank(C2XY, d)


def test_esym_uses_least_rotation():
    assert esym(1, ("y", "x")) == esym(1, ("x", "y"))
    assert str(esym(2, ("y", "x", "x"))) == "e[2](x*x*y)"


def test_delta_examples():
    e1, e2 = char_coeff(generic_matrix("x", 2), 1), char_coeff(generic_matrix("x", 2), 2)
    assert delta(MultiPoly.const(7), C2) == 7
    assert delta(e1, C2) == xv(1, 1)
    assert delta(e2, C2) == 0


@pytest.mark.parametrize("n", [2, 3])
def test_commuting_square(n):
    ctx = GenericContext(n, ("x", "y"))
    for m in dp_basis_upto(n, (2, 1), ("x", "y")):
        u = DPElem.monomial(m)
        assert delta(pi_image(u, ctx), ctx) == pi_image(rho(u), ctx.lower())


def test_present_round_trip():
    for text in ["d(x,1)*d(y,1)", "d(1,1)*d(x*y*x,1)", "d(x*y,2) - d(x,1)*d(y*y,1)"]:
        p = pi_image(parse_dp(text, 2, ("x", "y")), C2XY)
        expr, den = present(p, C2XY)
        assert den >= 1
        assert e_evaluate(expr, C2XY) == p.scale(den)


def test_present_rejects_non_invariant():
    with pytest.raises(ValueError):
        present(xv(1, 1), C2)


def test_render_is_descending():
    assert render(char_coeff(generic_matrix("x", 2), 1)) == "x[1,1,x] + x[2,2,x]"
