import itertools

import pytest
from hypothesis import given, settings, strategies as st

from polylaw.exactalg import ParseError
from polylaw.freering import (
    FreeElem, cyclic_canonical, enumerate_words, multidegree, parse_free, word_key, word_str,
)

words = st.lists(st.sampled_from("xy"), max_size=3).map(tuple)
elems = st.dictionaries(words, st.integers(-4, 4), max_size=4).map(FreeElem)


def test_noncommutative():
    x, y = FreeElem.word("x"), FreeElem.word("y")
    assert x * y == FreeElem.word(("x", "y"))
    assert y * x == FreeElem.word(("y", "x"))
    assert x * y != y * x


def test_unit():
    f = parse_free("x*y + 3*y")
    assert FreeElem.one() * f == f == f * FreeElem.one()


def test_difference_of_squares():
    x = FreeElem.word("x")
    assert (x + 1) * (x - 1) == parse_free("x^2 - 1")


def test_multidegree():
    assert multidegree(()) == {}
    assert multidegree(("x1", "x2", "x1")) == {"x1": 2, "x2": 1}


def test_enumerate_examples():
    assert enumerate_words(["x"], max_len=2) == [(), ("x",), ("x", "x")]
    assert enumerate_words(["x", "y"], exact_len=2) == [("x", "x"), ("x", "y"), ("y", "x"), ("y", "y")]
    assert len(enumerate_words(["x", "y"], max_len=3)) == 15


@pytest.mark.parametrize("k,length", [(1, 4), (2, 3), (3, 2)])
def test_enumerate_matches_product(k, length):
    gens = "abc"[:k]
    brute = {w for m in range(length + 1) for w in itertools.product(gens, repeat=m)}
    got = enumerate_words(list(gens), max_len=length)
    assert set(got) == brute and len(got) == len(brute)
    assert got == sorted(got, key=word_key)


def test_enumerate_by_multidegree():
    got = enumerate_words(["x", "y"], bound={"x": 1, "y": 1})
    assert set(got) == {(), ("x",), ("y",), ("x", "y"), ("y", "x")}


@settings(max_examples=80, deadline=None)
@given(elems, elems, elems)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c


def test_rendering_and_parse():
    f = parse_free("1 + x + x*y - 2*y*x")
    assert str(f) == "1 + x + x*y - 2*y*x"
    assert parse_free(str(f)) == f
    assert word_str(()) == "1"


def test_parse_errors():
    with pytest.raises(ParseError) as info:
        parse_free("x + z", gens=("x", "y"))
    assert info.value.pos == 4
    with pytest.raises(ParseError):
        parse_free("x +")


def test_augmentation_ideal():
    assert parse_free("x + x*y").in_augmentation_ideal()
    assert not parse_free("1 + x").in_augmentation_ideal()


def test_cyclic_canonical():
    assert cyclic_canonical(("y", "x")) == cyclic_canonical(("x", "y"))
    assert cyclic_canonical(("y", "x", "x")) == ("x", "x", "y")
