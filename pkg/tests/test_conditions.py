import random

import numpy as np
import pytest

from normbench import conditions as cond
from normbench.conditions import (
    ApplySigma,
    ApplySigmaBot,
    Decide,
    MoveCertificate,
    TruncatedCondition,
)
from normbench.core import Alphabet, PartialFunction, PointSpace
from normbench.creatures import Creature, cut, glue
from normbench.errors import (
    IllegalComposition,
    IllegalDecision,
    IllegalDecomposition,
    InsufficientNorm,
    InvalidCertificate,
    InvalidCondition,
    NotAligned,
)
from normbench.generators import amalgam_family, certified_pair, random_truncated
from normbench.oracles import brute_points, brute_value_set, extends

Z2 = Alphabet.cyclic(2)


def pf(d):
    return PartialFunction(d)


def const(coords, v=0):
    return PartialFunction.constant(coords, v)


def block(lo, hi, v=0):
    return Creature.make(range(lo, hi), [const(range(lo, hi), v)])


def condition(window, w, creatures, flavor=cond.FLAVOR_PLUS):
    return TruncatedCondition(range(window), pf(w), tuple(creatures), flavor)


def brute_pos(p, alphabet):
    out = []
    for x in brute_points(sorted(p.window), alphabet):
        if extends(x, p.w) and not any(extends(x, e) for e in p.all_constraints()):
            out.append(x)
    return out


def test_validate_examples():
    p = condition(6, {0: 1}, [block(1, 3), block(3, 6)])
    assert cond.validate(p)
    assert not cond.validate(condition(6, {0: 1}, [block(1, 3)]))
    assert "overlaps" in cond.first_violation(condition(4, {0: 1}, [block(0, 2), block(2, 4)]))
    free = condition(3, {}, [Creature.free(range(3))])
    assert cond.first_violation(free) == "creature 0 has infinite norm"
    assert cond.validate(free, cond.FLAVOR_EMPTY)
    dead = condition(2, {}, [Creature.make([0, 1], [pf({0: 0}), pf({1: 0}), pf({0: 0, 1: 0})])])
    assert "packing number 0" in cond.first_violation(dead, cond.FLAVOR_EMPTY)
    assert "unknown flavor" in cond.first_violation(p, "other")


def test_declared_bounds_are_checked():
    big = Creature.make(range(9), [const(range(9))])
    p = TruncatedCondition(range(9), pf({}), (big,), cond.FLAVOR_PLUS, bounds=(1,))
    assert cond.validate(p)
    p = TruncatedCondition(range(9), pf({}), (big,), cond.FLAVOR_PLUS, bounds=(2,))
    assert "declared bound" in cond.first_violation(p)


def test_pos_matches_bruteforce_and_product():
    p = condition(8, {0: 1}, [block(1, 4), Creature.make(range(4, 8), [const(range(4, 8)), pf({4: 1, 5: 1})])])
    space = PointSpace(range(8), Z2)
    mask = cond.pos_mask(p, space)
    expected = brute_pos(p, Z2)
    assert int(mask.sum()) == len(expected)
    product = 1
    for t in p.creatures:
        product *= len(brute_value_set(t.z, t.delta, Z2))
    assert len(expected) == product
    for x in expected[:5]:
        assert cond.pos_member(p, x)


def test_decide_move():
    p = condition(6, {0: 1}, [block(1, 3), block(3, 6)])
    q = cond.move_decide(p, [0], pf({0: 1, 1: 1, 2: 0}))
    assert q.w == pf({0: 1, 1: 1, 2: 0}) and len(q.creatures) == 1
    with pytest.raises(IllegalDecision):
        cond.move_decide(p, [0], pf({0: 1, 1: 0, 2: 0}))  # forbidden value
    with pytest.raises(IllegalDecision):
        cond.move_decide(p, [0], pf({0: 0, 1: 1, 2: 0}))  # stem not extended
    with pytest.raises(IllegalDecision):
        cond.move_decide(p, [0], pf({0: 1, 1: 1}))  # creature not covered
    with pytest.raises(IllegalDecision):
        cond.move_decide(p, [5], pf({0: 1}))


def test_composition_move():
    p = condition(6, {}, [block(0, 3), block(3, 6)])
    g = glue(list(p.creatures))
    q = cond.move_sigma(p, [[0, 1]], [g])
    assert q.creatures == (g,)
    with pytest.raises(IllegalComposition):
        cond.move_sigma(p, [[0]], [g])
    with pytest.raises(IllegalComposition):
        cond.move_sigma(p, [[0, 1]], [Creature.make(range(6), [pf({0: 0})])])


def test_decomposition_move():
    p = condition(6, {}, [block(0, 6)])
    s0, s1 = cut(p.creatures[0], range(3))
    q = cond.move_sigma_bot(p, 0, [s0, s1])
    assert len(q.creatures) == 2
    with pytest.raises(IllegalDecomposition):
        cond.move_sigma_bot(p, 0, [Creature.free(range(3)), Creature.free(range(3, 6))])
    with pytest.raises(IllegalDecomposition):
        cond.move_sigma_bot(p, 3, [s0, s1])


def test_replay_reports_failing_move():
    p = condition(6, {}, [block(0, 6)])
    bad = MoveCertificate((Decide((0,), pf({i: 0 for i in range(6)})),))
    with pytest.raises(InvalidCertificate, match="move 0"):
        cond.replay(p, bad)


@pytest.mark.parametrize("seed", range(40))
def test_certified_pairs_are_semantically_nested(seed):
    rng = random.Random(seed)
    x = Alphabet.cyclic(rng.choice([2, 3]))
    p, q, cert = certified_pair(rng, x, rng.randint(4, 8 if x.size == 2 else 6))
    assert cond.leq_check(p, q, cert)
    assert cond.leq_semantic(p, q, x)


@pytest.mark.parametrize("seed", range(20))
def test_each_move_shrinks_pos(seed):
    rng = random.Random(1000 + seed)
    p, _, cert = certified_pair(rng, Z2, 8)
    space = PointSpace(range(8), Z2)
    state = p
    for move in cert.moves:
        nxt = cond.apply_move(state, move)
        assert not np.any(cond.pos_mask(nxt, space) & ~cond.pos_mask(state, space))
        state = nxt


def test_search_certificate_recovers_a_split_and_decide():
    p = condition(6, {}, [block(0, 6)])
    s0, s1 = cut(p.creatures[0], range(2))
    q = condition(6, {0: 1, 1: 1}, [s1])
    cert = cond.search_certificate(p, q)
    assert cert is not None and cond.leq_check(p, q, cert)


def test_search_certificate_finds_nothing_without_nesting():
    p = condition(6, {}, [block(0, 6)])
    q = condition(6, {}, [block(0, 6, 1)])
    assert not cond.leq_semantic(p, q, Z2)
    assert cond.search_certificate(p, q) is None
    assert not cond.leq_check(p, q, MoveCertificate())


def test_amalgamate_single_condition():
    p = condition(8, {}, [block(0, 8)])
    am = cond.amalgamate([p])
    assert cond.leq_check(p, am.q, am.certificates[0])
    assert cond.pos_intersection_contains([p], am.q, Z2) == (True, True)


def test_amalgamate_identical_conditions():
    p = condition(12, {}, [block(0, 6), block(6, 12, 1)])
    am = cond.amalgamate([p, p])
    assert all(cond.leq_check(p, am.q, c) for c in am.certificates)
    assert cond.pos_intersection_contains([p, p], am.q, Z2) == (True, True)


def test_amalgamate_window_24_with_linear_slack():
    p0 = condition(24, {}, [block(0, 8), block(8, 16), block(16, 24)])
    p1 = condition(24, {}, [block(0, 12), block(12, 24)])
    am = cond.amalgamate([p0, p1], slack=lambda i: i + 1)
    assert am.boundaries == [12, 24]
    assert [s["kind"] for s in am.steps].count("link") == 2
    for p, c in zip((p0, p1), am.certificates):
        assert cond.leq_check(p, am.q, c)
    assert cond.pos_intersection_contains([p0, p1], am.q, Z2) == (True, True)


def test_amalgamate_rejects_bad_inputs():
    p = condition(8, {}, [block(0, 8)])
    with pytest.raises(InvalidCondition):
        cond.amalgamate([p, condition(8, {0: 0}, [block(1, 8)])])
    with pytest.raises(InsufficientNorm):
        cond.amalgamate([condition(1, {}, [block(0, 1)])])
    with pytest.raises(ValueError):
        cond.amalgamate([])


def test_slack_schedules():
    assert cond.safe_slack(1)(0) == 1 and cond.safe_slack(2)(0) == 3 and cond.safe_slack(3)(0) == 7
    assert cond.exponential_slack(0)(1) == 8 ** 6


@pytest.mark.parametrize("seed", range(10))
def test_amalgamate_random_family(seed):
    rng = random.Random(seed)
    count = rng.choice([2, 3])
    slack = cond.safe_slack(count)
    ps = amalgam_family(rng, Z2, count, rng.randint(12, 16), min_n=slack(0) + 1)
    am = cond.amalgamate(ps)
    for p, c in zip(ps, am.certificates):
        assert cond.leq_check(p, am.q, c)
    assert cond.pos_intersection_contains(ps, am.q, Z2) == (True, True)


def test_project_identity_and_straddle():
    p = condition(6, {0: 1}, [block(1, 3), block(3, 6)])
    ident = {i: i for i in range(6)}
    assert cond.same_condition(cond.project_pi(p, ident), p)
    assert cond.in_Q_pi(p, {0: 0, 1: 1, 2: 2})
    with pytest.raises(NotAligned):
        cond.project_pi(p, {0: 3, 1: 4})


def test_lift_round_trip_with_certificate():
    p = condition(8, {0: 1}, [block(1, 4), block(4, 8)])
    pi = {i: i + 4 for i in range(4)}
    fp = cond.project_pi(p, pi)
    s0, s1 = cut(fp.creatures[0], [0, 1])
    cert = MoveCertificate((ApplySigmaBot(0, (s0, s1)), Decide((0,), pf({0: 1, 1: 1})),
                            ApplySigma(((0,),), (s1,))))
    r = cond.replay(fp, cert)
    assert cond.leq_check(fp, r, cert)
    q, lifted = cond.lift_pi(p, pi, r, cert)
    assert cond.leq_check(p, q, lifted)
    assert cond.same_condition(cond.project_pi(q, pi), r)
    assert cond.projection_monotone(p, q, pi, Z2)


@pytest.mark.parametrize("seed", range(10))
def test_projection_of_random_conditions_keeps_order(seed):
    rng = random.Random(seed)
    p, q, _ = certified_pair(rng, Z2, 8)
    pi = {i: i for i in range(8)}
    assert cond.projection_monotone(p, q, pi, Z2)
    t = random_truncated(rng, Z2, 6, max_parts=2, min_n=1)
    assert cond.validate(t)
