"""
Divided powers of a free ring
=============================

Elements of Gamma_n are written with ``d(f,k)`` for the divided power f^(k).
The exponent of the unit word 1 is implied by the degree n.
"""

from polylaw.divpow import DPElem, dp_basis, normalize, parse_dp, rho, tau_mul
from polylaw.freering import parse_free

# Normal forms.  Repeated words merge with a binomial coefficient, scalars
# come out as powers, and a sum expands over all splittings of the exponent.
print(normalize([("x", 1), ("x", 1)], 2))          # 2*d(x,2)
print(normalize([(parse_free("2*x"), 2)], 2))       # 4*d(x,2)
print(normalize([(parse_free("x+y"), 2)], 2))

# The product of Gamma_n sums over contingency tables.  For one generator
# it is commutative.
u = parse_dp("d(1,1)*d(x,1)", 2)
print("u*u =", tau_mul(u, u))

# With two generators it is not: the word xy appears in one order only.
v = parse_dp("d(1,1)*d(y,1)", 2, ("x", "y"))
print("u*v =", tau_mul(u, v))
print("v*u =", tau_mul(v, u))

# A graded basis and the map that lowers the power of 1.
for m in dp_basis(2, (2,), ("x",)):
    print(m, "->", rho(DPElem.monomial(m)))
