"""Acceptance criteria, each run at exact tolerance with its wall-clock limit.

Every criterion prints one ``CRITERION k: PASS|FAIL ...`` line.  Run
``python3 tests/test_acceptance.py`` for the bare report, or through pytest.
Two criteria cannot be met as stated; their tests are strict xfails and the
reason is printed in the detail column.
"""
import contextlib
import io
import itertools
import sys
import time

import pytest

from polylaw import cli, lawkit
from polylaw.divpow import DPElem, DPMonomial, ab_component_rank, dp_basis_upto, rho, tau_mul
from polylaw.freering import enumerate_words, parse_free
from polylaw.genmat import GenericContext, delta, e_span_rank, e_value, esym, invariant_space, pi_image, pi_span_rank
from polylaw.suites import degrees_upto

XY = ("x", "y")
TEST_SET = ["1", "x", "x*x", "1+x", "x+y", "x*y", "1+x+y"]


class Outcome:
    def __init__(self, number, passed, detail, elapsed, limit):
        self.number, self.passed, self.detail = number, passed, detail
        self.elapsed, self.limit = elapsed, limit

    @property
    def ok(self):
        return self.passed and (self.limit is None or self.elapsed < self.limit)

    def line(self):
        budget = f" (limit {self.limit} s)" if self.limit else ""
        return f"CRITERION {self.number}: {'PASS' if self.ok else 'FAIL'}  {self.elapsed:.2f} s{budget}  {self.detail}"


def timed(number, limit):
    def wrap(fn):
        def run():
            start = time.perf_counter()
            passed, detail = fn(deadline=start + limit if limit else None)
            return Outcome(number, passed, detail, time.perf_counter() - start, limit)
        run.__name__ = fn.__name__
        return run
    return wrap


def monomials(n, bound):
    return [DPElem.monomial(m) for m in dp_basis_upto(n, bound, XY)]


# -- the criteria ---------------------------------------------------------------


@timed(1, 10)
def criterion_1(deadline):
    failures = []
    counts = 0
    for n in (2, 3):
        basis = monomials(n, (2, 1))
        unit = DPElem.unit(n)
        for u in basis:
            counts += 1
            if not (tau_mul(unit, u) == u == tau_mul(u, unit)):
                failures.append(f"unit n={n} {u}")
        for u, v in itertools.product(basis, repeat=2):
            counts += 1
            if tau_mul(u, v) != tau_mul(v, u):
                failures.append(f"commutativity n={n}: {u} , {v}")
        for u, v, w in itertools.product(basis, repeat=3):
            counts += 1
            if tau_mul(tau_mul(u, v), w) != tau_mul(u, tau_mul(v, w)):
                failures.append(f"associativity n={n}: {u} , {v} , {w}")
    kinds = sorted({f.split(" ")[0] for f in failures})
    detail = f"{counts} checks, {len(failures)} failures"
    if failures:
        detail += f" [{', '.join(kinds)}]; first: {failures[0]}"
    return not failures, detail


@timed(2, 10)
def criterion_2(deadline):
    count = 0
    for n in (2, 3):
        ctx = GenericContext(n, XY)
        for w in enumerate_words(XY, max_len=3):
            if not w:
                continue
            for i in range(n + 1):
                count += 1
                if pi_image(DPMonomial.make(n, {w: i}), ctx) != e_value(i, w, ctx):
                    return False, f"mismatch n={n} w={w} i={i}"
    return True, f"{count} identities"


def truncated_powers(n, max_len):
    return [DPElem.monomial(DPMonomial.make(n, {w: i}))
            for w in enumerate_words(XY, max_len=max_len) if w for i in range(n + 1)]


def pi_pairs(n, max_len):
    els = truncated_powers(n, max_len)
    # cheapest first: the cost grows with the size of the tau product
    cost = lambda uv: sum(len(w) * e for m, _ in uv[0].items() for w, e in m.factors) + \
        sum(len(w) * e for m, _ in uv[1].items() for w, e in m.factors)
    return sorted(itertools.product(els, repeat=2), key=cost)


def check_pi_pairs(pairs, ctx, deadline):
    done = 0
    for u, v in pairs:
        if deadline is not None and time.perf_counter() > deadline:
            break
        if pi_image(tau_mul(u, v), ctx) != pi_image(u, ctx) * pi_image(v, ctx):
            return False, done, f"mismatch {u} , {v}"
        done += 1
    return True, done, None


@timed(3, 60)
def criterion_3(deadline):
    plan = [(n, pi_pairs(n, 3)) for n in (2, 3)]
    total = sum(len(p) for _, p in plan)
    checked = 0
    for n, pairs in plan:
        ok, done, err = check_pi_pairs(pairs, GenericContext(n, XY), deadline)
        checked += done
        if not ok:
            return False, err
        if done < len(pairs):
            return False, f"time budget exhausted at n={n}: {checked}/{total} pairs checked, all equal"
    return True, f"{checked} pairs"


@timed(4, 120)
def criterion_4(deadline):
    rows = 0
    for gens in (("x",), XY):
        ctx = GenericContext(2, gens)
        for d in degrees_upto(4, len(gens)):
            rows += 1
            dim = invariant_space(ctx, d)[0]
            if dim != e_span_rank(ctx, d):
                return False, f"mismatch S={gens} d={d}"
    return True, f"{rows} multidegrees agree"


@timed(5, 120)
def criterion_5(deadline):
    rows = 0
    for gens in (("x",), XY):
        ctx = GenericContext(2, gens)
        for d in degrees_upto(4, len(gens)):
            rows += 1
            if ab_component_rank(2, d, gens) != pi_span_rank(ctx, d):
                return False, f"mismatch S={gens} d={d}"
    return True, f"{rows} multidegrees agree"


@timed(6, 30)
def criterion_6(deadline):
    count = 0
    for n in (2, 3):
        ctx = GenericContext(n, XY)
        for u in monomials(n, (2, 2)):
            count += 1
            if pi_image(rho(u), ctx.lower()) != delta(pi_image(u, ctx), ctx):
                return False, f"mismatch n={n} {u}"
    return True, f"{count} monomials"


FIXTURES = ["det:n=2", "norm:d=-1", "norm:d=2", "norm:d=5", "power:n=2,c=2", "power:n=2,c=3",
            "repdet:n=2,x=[[0,2],[1,0]]"]


@timed(7, 60)
def criterion_7(deadline):
    ctx = GenericContext(2, XY)
    relations = lawkit.all_relations(ctx, 4)
    tests = [parse_free(t, XY) for t in TEST_SET]
    for spec in FIXTURES:
        law = lawkit.parse_fixture(spec, XY)
        phi = lawkit.factor_law(law, ctx)
        for check in lawkit.verify_factorization(law, phi, ctx, tests):
            if not check.passed:
                return False, f"{spec}: f = {check.f}"
        wd = lawkit.check_welldefined(phi, relations)
        if not wd:
            return False, f"{spec}: relation {wd.witness}"
    law = lawkit.parse_fixture("norm:d=2", XY)
    phi = lawkit.factor_law(law, ctx)
    e2 = phi.value(esym(2, ("x",)))
    p = law(parse_free("1+x"))
    if (e2, p) != (-2, -1):
        return False, f"spot values phi(e[2](x)) = {e2}, p(1+x) = {p}"
    return True, f"{len(FIXTURES)} fixtures x {len(tests)} tests, {len(relations)} relations; phi(e[2](x)) = -2, p(1+x) = -1"


@timed(8, 10)
def criterion_8(deadline):
    res = lawkit.check_multiplicative(lawkit.permanent_law(2, XY))
    if res or not res.witness:
        return False, "permanent law not rejected with a witness"
    ctx = GenericContext(2, XY)
    phi = lawkit.factor_law(lawkit.determinant_law(2, XY), ctx)
    bad = lawkit.check_welldefined(phi.perturbed(esym(2, ("x",))), lawkit.all_relations(ctx, 4))
    if bad:
        return False, "perturbed phi passed"
    return True, f"permanent witness: {res.witness}; perturbed phi breaks {bad.witness}"


def _verify_all(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli.main(["verify-all", *argv])
    return code, buf.getvalue()


@timed(9, None)
def criterion_9(deadline):
    for fmt in ("text", "json"):
        a = _verify_all(["--format", fmt])
        b = _verify_all(["--format", fmt])
        if a != b:
            return False, f"{fmt} reports differ"
    return True, "text and json reports byte-identical across two runs"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9]


# -- pytest entry points -----------------------------------------------------


def report(capsys, criterion):
    outcome = criterion()
    with capsys.disabled():
        print("\n" + outcome.line())
    return outcome


NONCOMMUTATIVE = ("tau_n over two or more generators is not commutative, e.g. "
                  "(1^(1)x^(1))(1^(1)y^(1)) contains (xy)^(1) while the reverse contains (yx)^(1)")
TOO_LARGE = ("pi_n of (w w')^(3) for words of length 3 needs a 3x3 determinant of products of six "
             "generic matrices; about 90 s for one monomial in exact arithmetic")


@pytest.mark.xfail(strict=True, reason=NONCOMMUTATIVE)
def test_criterion_1(capsys):
    assert report(capsys, criterion_1).ok


def test_criterion_2(capsys):
    assert report(capsys, criterion_2).ok


@pytest.mark.xfail(strict=True, reason=TOO_LARGE)
def test_criterion_3(capsys):
    assert report(capsys, criterion_3).ok


def test_criterion_4(capsys):
    assert report(capsys, criterion_4).ok


def test_criterion_5(capsys):
    assert report(capsys, criterion_5).ok


def test_criterion_6(capsys):
    assert report(capsys, criterion_6).ok


def test_criterion_7(capsys):
    assert report(capsys, criterion_7).ok


def test_criterion_8(capsys):
    assert report(capsys, criterion_8).ok


def test_criterion_9(capsys):
    assert report(capsys, criterion_9).ok


# The attainable parts of criteria 1 and 3, held to the same exactness.


@pytest.mark.parametrize("n", [2, 3])
def test_tau_associative_and_unital_on_criterion_range(n):
    basis = monomials(n, (2, 1))
    unit = DPElem.unit(n)
    for u in basis:
        assert tau_mul(unit, u) == u == tau_mul(u, unit)
    for u, v, w in itertools.product(basis, repeat=3):
        assert tau_mul(tau_mul(u, v), w) == tau_mul(u, tau_mul(v, w))


@pytest.mark.parametrize("n", [2, 3])
def test_tau_commutative_modulo_kernel_of_pi(n):
    ctx = GenericContext(n, XY)
    basis = monomials(n, (2, 1))
    for u, v in itertools.product(basis, repeat=2):
        assert pi_image(tau_mul(u, v) - tau_mul(v, u), ctx) == 0


@pytest.mark.parametrize("n", [2, 3])
def test_tau_commutative_single_generator(n):
    basis = [DPElem.monomial(m) for m in dp_basis_upto(n, (4,), ("x",))]
    for u, v in itertools.product(basis, repeat=2):
        assert tau_mul(u, v) == tau_mul(v, u)


@pytest.mark.parametrize("n,max_len", [(2, 3), (3, 2)])
def test_pi_multiplicative_attainable_range(n, max_len):
    ok, done, err = check_pi_pairs(pi_pairs(n, max_len), GenericContext(n, XY), None)
    assert ok, err


if __name__ == "__main__":
    failed = 0
    for c in CRITERIA:
        outcome = c()
        print(outcome.line(), flush=True)
        failed += not outcome.ok
    sys.exit(1 if failed else 0)
