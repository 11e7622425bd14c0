"""
Multiplicative laws through the determinant
===========================================

A law p of degree n on the free ring is tabulated on the symbols e[i](w).
The resulting ring map phi satisfies p(f) = phi(det(f)).
"""

from polylaw.freering import parse_free
from polylaw.genmat import GenericContext, esym
from polylaw.lawkit import (all_relations, check_multiplicative, check_welldefined, factor_law, parse_fixture,
                            permanent_law, verify_factorization)

ctx = GenericContext(2, ("x", "y"))
tests = [parse_free(t) for t in ["1", "x", "x*x", "1+x", "x+y", "x*y", "1+x+y"]]

# The norm of Z[sqrt 2], pulled back along x -> sqrt 2 and y -> 1 + sqrt 2.
law = parse_fixture("norm:d=2", ctx.gens)
phi = factor_law(law, ctx)
for s in ctx.gens:
    for i in (1, 2):
        print(f"phi({esym(i, (s,))}) =", phi.value(esym(i, (s,))))

for check in verify_factorization(law, phi, ctx, tests):
    print(f"{check.f:>10}: p = {check.p_value:>4}   {'ok' if check.passed else 'FAIL'}")

# phi must kill every linear relation among the symbols.
relations = all_relations(ctx, 4)
print(len(relations), "relations:", bool(check_welldefined(phi, relations)))

# Changing one value breaks that.
print("perturbed:", check_welldefined(phi.perturbed(esym(2, ("x",))), relations).witness)

# The permanent is homogeneous but not multiplicative.
print("permanent:", check_multiplicative(permanent_law(2)).witness)
