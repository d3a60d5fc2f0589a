import itertools
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from normbench.core import Alphabet, PartialFunction
from normbench.creatures import (
    INF,
    Creature,
    cut,
    glue,
    link,
    link_all,
    nor,
    norm_exceeds,
    norm_n,
    permute_creature,
    restrict_half,
    sdr,
    sigma_associative,
    sigma_axioms,
    sigma_bot_associative,
    sigma_bot_axioms,
    sigma_bot_member,
    sigma_member,
    translate_creature,
    value_member,
    value_set,
    witness_value,
)
from normbench.errors import (
    DomainMismatch,
    DomainOverlap,
    EmptyRestriction,
    EnumerationTooLarge,
    NoSDR,
    NoWitness,
)
from normbench.generators import random_creature
from normbench.oracles import brute_norm, brute_points, brute_value_set

Z2 = Alphabet.cyclic(2)


def pf(d):
    return PartialFunction(d)


def const(coords, v=0):
    return PartialFunction.constant(coords, v)


def test_norm_of_constant_family_is_domain_size():
    assert norm_n(range(3), [const(range(3))]) == 3
    assert norm_n([0], [pf({0: 0})]) == 1


def test_norm_forced_to_zero_by_triple():
    delta = [pf({0: 0}), pf({1: 0}), pf({0: 0, 1: 0})]
    assert norm_n([0, 1], delta) == 0 == brute_norm(delta)


def test_norm_of_empty_family_is_infinite():
    assert norm_n([0, 1], []) == INF
    assert Creature.free([0, 1]).infinite
    assert nor(INF) == INF


def test_nor_and_integer_thresholds():
    assert nor(8) == pytest.approx(1.0)
    assert nor(3) == pytest.approx(math.log(3, 8))
    assert not norm_exceeds(3, 1) and not norm_exceeds(8, 1) and norm_exceeds(9, 1)
    assert norm_exceeds(INF, 100)


def test_norm_budget():
    delta = [pf({i: 0}) for i in range(6)]
    with pytest.raises(EnumerationTooLarge):
        norm_n(range(6), delta, budget=5)


deltas = st.lists(
    st.dictionaries(st.integers(0, 4), st.integers(0, 1), min_size=1, max_size=4).map(PartialFunction),
    min_size=1, max_size=6)


@settings(max_examples=300, deadline=None)
@given(deltas)
def test_norm_matches_bruteforce(delta):
    assert norm_n(range(5), delta) == brute_norm(delta)


@settings(max_examples=200, deadline=None)
@given(deltas, deltas)
def test_norm_is_antitone(d0, d1):
    assert norm_n(range(5), d0 + d1) <= norm_n(range(5), d0)


@settings(max_examples=200, deadline=None)
@given(deltas)
def test_norm_at_most_smallest_domain(delta):
    assert norm_n(range(5), delta) <= min(len(e) for e in delta)


def test_value_set_examples():
    t = Creature.make([0], [pf({0: 0})])
    assert value_set(t, Z2) == [pf({0: 1})]
    t = Creature.make(range(4), [const(range(4), 0), const(range(4), 1)])
    assert len(value_set(t, Z2)) == 14 == len(brute_value_set(t.z, t.delta, Z2))
    assert len(value_set(Creature.free(range(3)), Z2)) == 8


def test_sdr_examples():
    a, b = pf({0: 0}), pf({1: 0})
    assert sdr([a, b]) == {a: 0, b: 1}
    a, b = pf({0: 0, 1: 0}), pf({1: 0})
    reps = sdr([a, b])
    assert sorted(reps.values()) == [0, 1] and reps[b] == 1
    with pytest.raises(NoSDR):
        sdr([pf({0: 0}), pf({0: 1})])


def test_witness_examples():
    assert witness_value(Creature.make([0], [pf({0: 0})]), Z2) == pf({0: 1})
    assert witness_value(Creature.free([0, 1]), Z2) == pf({0: 0, 1: 0})
    with pytest.raises(NoWitness):
        witness_value(Creature.make([0, 1], [pf({0: 0}), pf({1: 0}), pf({0: 0, 1: 0})]), Z2)


def test_positive_norm_gives_nonempty_value_set_exhaustively():
    # every family over two coordinates and Z_2
    etas = [PartialFunction(zip(dom, vals))
            for r in (1, 2) for dom in itertools.combinations(range(2), r)
            for vals in itertools.product(range(2), repeat=r)]
    for k in range(1, len(etas) + 1):
        for delta in itertools.combinations(etas, k):
            t = Creature.make(range(2), delta)
            values = brute_value_set(t.z, t.delta, Z2)
            if t.n > 0:
                assert values
                assert witness_value(t, Z2).as_dict() in values


def test_restrict_half_examples():
    t = Creature.make(range(4), [const(range(4))])
    s = restrict_half(t, [0, 1])
    assert s.delta == {const([0, 1])} and s.n == 2 == brute_norm(s.delta)
    t = Creature.make([0, 1], [pf({0: 0})])
    s = restrict_half(t, [0])
    assert s.n == 1 >= t.n // 2
    with pytest.raises(EmptyRestriction):
        restrict_half(t, [1])


def test_glue_examples():
    g = glue([Creature.make([0], [pf({0: 0})]), Creature.make([1], [pf({1: 0})])])
    assert g.delta == {pf({0: 0}), pf({1: 0})} and g.n == 1 == brute_norm(g.delta)
    assert glue([Creature.free([0]), Creature.free([1])]).infinite
    g = glue([Creature.make(range(3), [const(range(3))]), Creature.make(range(3, 6), [const(range(3, 6))])])
    assert g.n == 3 == brute_norm(g.delta)
    with pytest.raises(DomainOverlap):
        glue([Creature.free([0, 1]), Creature.free([1])])


def test_link_examples():
    a = Creature.make(range(4), [const(range(4), 0)])
    b = Creature.make(range(4), [const(range(4), 1)])
    assert link(a, b).n == 2 == brute_norm(a.delta | b.delta)
    assert link(a, a) == a
    assert link(Creature.free(range(4)), b) == b
    with pytest.raises(DomainMismatch):
        link(a, Creature.free(range(3)))


def test_link_all_is_a_common_composition():
    rng = random.Random(4)
    ts = [random_creature(rng, Z2, coords=range(6), max_delta=2, min_n=2) for _ in range(5)]
    s = link_all(ts)
    assert all(t.delta <= s.delta for t in ts)
    assert s.n >= min(t.n for t in ts) // 2 ** math.ceil(math.log2(len(ts)))


def test_cut_examples():
    t = Creature.make(range(4), [const(range(4))])
    s0, s1 = cut(t, [0, 1])
    assert s0 == Creature.make([0, 1], [const([0, 1])]) and s1 == Creature.make([2, 3], [const([2, 3])])
    assert s0.n == s1.n == 2
    assert sigma_bot_member([s0, s1], t)
    t = Creature.make(range(4), [const(range(3)), const(range(4), 1)])
    s0, _ = cut(t, [0, 1])
    assert const([0, 1]) in s0.delta


def test_cut_gives_free_side_when_nothing_restricts():
    t = Creature.make(range(6), [const(range(4))])
    s0, s1 = cut(t, [0, 1, 2, 3])
    assert s1.infinite and sigma_bot_member([s0, s1], t)


def test_sigma_membership():
    t = Creature.make(range(3), [const(range(3))])
    assert sigma_member(t, [t])
    a, b = Creature.make([0], [pf({0: 0})]), Creature.make([1], [pf({1: 0})])
    assert sigma_member(glue([a, b]), [a, b])
    weak = Creature.make([0, 1], [pf({0: 0})])
    assert not sigma_member(weak, [a, b])


def test_sigma_bot_membership():
    t = Creature.make(range(4), [const(range(4))])
    assert sigma_bot_member([t], t)
    assert not sigma_bot_member([Creature.free([0, 1])], t)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_axioms_on_random_glue_and_cut(seed):
    rng = random.Random(seed)
    x = Alphabet.cyclic(rng.choice([2, 3]))
    a = random_creature(rng, x, coords=range(0, 3), max_delta=3)
    b = random_creature(rng, x, coords=range(3, 6), max_delta=3)
    g = glue([a, b])
    if g.in_K:
        assert all(sigma_axioms(g, [a, b], x).values())
    t = random_creature(rng, x, coords=range(6), max_delta=3, min_n=2)
    pieces = cut(t, [0, 2, 4])
    assert all(sigma_bot_axioms(list(pieces), t, x).values())


def test_associativity_of_composition_and_decomposition():
    parts = [Creature.make([i], [pf({i: 0})]) for i in range(4)]
    left, right = glue(parts[:2]), glue(parts[2:])
    top = glue([left, right])
    assert sigma_associative(top, [(left, parts[:2]), (right, parts[2:])])
    t = Creature.make(range(8), [const(range(8))])
    s0, s1 = cut(t, range(4))
    a, b = cut(s0, [0, 1])
    c, d = cut(s1, [4, 5])
    assert sigma_bot_associative(t, [(s0, [a, b]), (s1, [c, d])])


def test_free_value_set_iff_infinite_norm():
    t = Creature.free(range(3))
    assert len(value_set(t, Z2)) == 8 and t.infinite
    s = Creature.make(range(3), [pf({0: 0})])
    assert len(value_set(s, Z2)) < 8 and not s.infinite


def test_invariance_examples():
    x = Alphabet.cyclic(3)
    t = Creature.make(range(3), [pf({0: 1, 1: 2}), pf({2: 0})])
    v = pf({0: 1, 1: 1, 2: 2})
    s = translate_creature(t, v, x)
    assert s.n == brute_norm(s.delta) == t.n
    shifted = {tuple(sorted((k, (val + v[k]) % 3) for k, val in w.items)) for w in value_set(t, x)}
    assert shifted == {w.items for w in value_set(s, x)}
    assert permute_creature(t, {0: 0, 1: 1, 2: 2}) == t


def test_value_member_matches_bruteforce():
    t = Creature.make(range(3), [pf({0: 1, 1: 0}), pf({2: 1})])
    for x in brute_points(range(3), Z2):
        assert value_member(t, x) == (x in brute_value_set(t.z, t.delta, Z2))
