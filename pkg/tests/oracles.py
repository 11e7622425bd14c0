"""Independent reference computations shared by the test modules."""
import random

import sympy

from polylaw.exactalg import MultiPoly, PolyMatrix


def sym(v):
    return sympy.Symbol(str(v).replace("[", "_").replace("]", "").replace(",", "_").replace("*", ""))


def to_sympy(p: MultiPoly):
    out = sympy.Integer(0)
    for mono, c in p.items():
        term = sympy.Integer(c)
        for v, e in mono:
            term *= sym(v) ** e
        out += term
    return sympy.expand(out)


def matrix_to_sympy(m: PolyMatrix):
    return sympy.Matrix([[to_sympy(MultiPoly.coerce(x)) for x in row] for row in m.rows])


def random_unimodular(n, rng: random.Random, steps=6):
    g = sympy.eye(n)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        e = sympy.eye(n)
        e[i, j] = rng.choice([-2, -1, 1, 2])
        g = g * e
    return g


def as_ints(g):
    return [[int(v) for v in row] for row in g.tolist()]
