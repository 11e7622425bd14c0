"""
Generic matrices and their invariants
=====================================

Each generator becomes an n x n matrix of independent variables x[i,j,s].
"""

from polylaw.divpow import parse_dp
from polylaw.freering import parse_free
from polylaw.genmat import (GenericContext, char_coeff, conjugation_action, embed_generic, invariant_space,
                            pi_image, present)
from polylaw.exactalg import render

ctx = GenericContext(2, ("x", "y"))

# Characteristic coefficients of the image of x*y.
b = embed_generic(parse_free("x*y"), ctx)
for i in range(3):
    print(f"e_{i}(xy) =", render(char_coeff(b, i)))

# pi_n sends 1^(n-i) w^(i) to e_i(w), and mixed products to mixed coefficients.
p = pi_image(parse_dp("d(x,1)*d(y,1)", 2, ctx.gens), ctx)
print("pi(x^(1) y^(1)) =", render(p))

# That image is fixed by conjugation, unlike a single entry.
shear = [[1, 1], [0, 1]]
print(conjugation_action(p, shear, ctx) == p)

# Writing it back in terms of characteristic coefficients.
expr, den = present(p, ctx)
print(f"{den} * pi(x^(1) y^(1)) =", render(expr))

# The invariants of bidegree (1,1) form a plane.
print("dim =", invariant_space(ctx, (1, 1))[0])
