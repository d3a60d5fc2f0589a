import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from normbench.core import (
    Alphabet,
    PartialFunction,
    PointSpace,
    enumerate_points,
    invert_embedding,
    negate_pf,
    permute_pf,
    pf_union,
    translate_pf,
)
from normbench.errors import (
    EnumerationTooLarge,
    IncompatibleFunctions,
    InvalidAlphabet,
    InvalidSymbol,
    MissingCoordinate,
)


def test_group_law_examples():
    z2 = Alphabet.cyclic(2)
    assert z2.add(1, 1) == 0
    assert z2.add(0, 1) == 1
    z32 = Alphabet((3, 2))
    assert z32.add((2, 1), (2, 1)) == (1, 0)


def test_symbol_out_of_range():
    with pytest.raises(InvalidSymbol):
        Alphabet.cyclic(2).add(2, 0)
    with pytest.raises(InvalidSymbol):
        Alphabet((3, 2)).add((3, 0), (0, 0))


def test_alphabet_needs_two_symbols():
    with pytest.raises(InvalidAlphabet):
        Alphabet((1,))
    with pytest.raises(InvalidAlphabet):
        Alphabet(())
    assert Alphabet.parse("3x2").orders == (3, 2)
    assert Alphabet.parse("3,2").size == 6


@pytest.mark.parametrize("orders", [(2,), (3,), (2, 2), (3, 2), (2, 3), (4, 3), (12,), (2, 2, 3)])
def test_group_axioms_exhaustive(orders):
    x = Alphabet(orders)
    syms = list(x.symbols())
    for a in syms:
        assert x.add(a, x.zero) == a
        assert x.add(a, x.neg(a)) == x.zero
        for b in syms:
            assert x.add(a, b) == x.add(b, a)
            for c in syms:
                assert x.add(x.add(a, b), c) == x.add(a, x.add(b, c))


def test_pf_union_examples():
    assert pf_union(PartialFunction({0: 1}), PartialFunction({1: 0})) == PartialFunction({0: 1, 1: 0})
    assert pf_union(PartialFunction({0: 1}), PartialFunction({0: 1})) == PartialFunction({0: 1})
    with pytest.raises(IncompatibleFunctions):
        pf_union(PartialFunction({0: 1}), PartialFunction({0: 0}))


def test_translate_examples():
    z2 = Alphabet.cyclic(2)
    assert translate_pf(PartialFunction({0: 1}), PartialFunction({0: 1}), z2) == PartialFunction({0: 0})
    eta = PartialFunction({0: 1, 2: 0})
    v = PartialFunction({0: 0, 1: 1, 2: 1})
    assert translate_pf(eta, v, z2) == PartialFunction({0: 1, 2: 1})
    with pytest.raises(MissingCoordinate):
        translate_pf(PartialFunction({3: 1}), v, z2)


def test_permute_examples():
    assert permute_pf(PartialFunction({0: 1}), {0: 5}) == PartialFunction({5: 1})
    eta = PartialFunction({0: 1, 3: 0})
    assert permute_pf(eta, {0: 0, 3: 3}) == eta
    with pytest.raises(MissingCoordinate):
        permute_pf(eta, {0: 1})


pfs = st.dictionaries(st.integers(0, 6), st.integers(0, 2), max_size=5).map(PartialFunction)


@given(pfs, st.lists(st.integers(0, 2), min_size=7, max_size=7))
def test_translate_round_trip(eta, values):
    x = Alphabet.cyclic(3)
    v = PartialFunction(enumerate(values))
    assert translate_pf(translate_pf(eta, v, x), negate_pf(v, x), x) == eta


@given(pfs, st.permutations(range(7)))
def test_permute_round_trip(eta, perm):
    pi = {i: 10 + perm[i] for i in range(7)}
    assert permute_pf(permute_pf(eta, pi), invert_embedding(pi)) == eta


@given(pfs, pfs, st.permutations(range(7)))
def test_permute_and_translate_commute_with_union(a, b, perm):
    if not a.compatible(b):
        return
    pi = dict(enumerate(perm))
    x = Alphabet.cyclic(3)
    v = PartialFunction((i, (i * 2) % 3) for i in range(7))
    assert permute_pf(pf_union(a, b), pi) == pf_union(permute_pf(a, pi), permute_pf(b, pi))
    assert translate_pf(pf_union(a, b), v, x) == pf_union(translate_pf(a, v, x), translate_pf(b, v, x))


def test_enumerate_points_counts():
    z2, z3 = Alphabet.cyclic(2), Alphabet.cyclic(3)
    assert len(list(enumerate_points([0], z2))) == 2
    assert list(enumerate_points([], z2)) == [PartialFunction({})]
    pts = list(enumerate_points([0, 1, 2], z3))
    assert len(pts) == 27 and len(set(pts)) == 27


def test_enumerate_points_budget():
    with pytest.raises(EnumerationTooLarge):
        list(enumerate_points(range(10), Alphabet.cyclic(2), budget=1000))


def test_point_space_matches_enumeration():
    x = Alphabet((3, 2))
    window = [1, 4, 5]
    space = PointSpace(window, x)
    pts = list(enumerate_points(window, x))
    assert [space.point(r) for r in range(len(space))] == pts
    eta = PartialFunction({4: 5, 1: 2})
    mask = space.cylinder(eta)
    assert list(np.flatnonzero(mask)) == [r for r, p in enumerate(pts) if eta.subfunction_of(p)]
    avoid = space.avoid_all([eta, PartialFunction({5: 0})])
    expected = [not (eta.subfunction_of(p) or p[5] == 0) for p in pts]
    assert list(avoid) == expected
    for c in window:
        assert list(space.values(c)) == [p[c] for p in pts]


def test_point_space_rejects_foreign_coordinate():
    space = PointSpace([0, 1], Alphabet.cyclic(2))
    with pytest.raises(MissingCoordinate):
        space.cylinder(PartialFunction({2: 0}))


def test_partial_function_is_canonical():
    a = PartialFunction([(3, 1), (0, 0)])
    b = PartialFunction({0: 0, 3: 1})
    assert a == b and hash(a) == hash(b)
    assert a.items == ((0, 0), (3, 1))
    assert list(itertools.islice(iter(a), 2)) == [0, 3]
