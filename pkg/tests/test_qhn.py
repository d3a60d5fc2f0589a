import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from normbench import qhn
from normbench.core import Alphabet, PartialFunction, PointSpace, permute_pf, translate_pf
from normbench.errors import InvalidCondition, NoSelection, NotAligned, TruncationTooShort
from normbench.generators import class_tuple, flat_sequence, random_qcondition, relaxed_sequence
from normbench.oracles import brute_points, extends
from normbench.qhn import NormSeqPrefix, QCondition
from normbench.suites import (
    ORDER_SEQ,
    atomic_order_disagreements,
    atomic_order_pairs,
    exhaustive_order_disagreements,
    exhaustive_order_family,
    order_atoms,
    symmetric_order_disagreements,
)

Z2, Z3 = Alphabet.cyclic(2), Alphabet.cyclic(3)


def pf(d):
    return PartialFunction(d)


def qcond(w, sigmas, blocks, seq, window, m_star=0):
    return QCondition(pf(w), tuple(pf(s) for s in sigmas), m_star, blocks, seq, window)


def brute_qpos(p, alphabet, coords=None):
    coords = sorted(p.window if coords is None else coords)
    return [x for x in brute_points(coords, alphabet)
            if extends(x, p.w) and not any(extends(x, s) for s in p.sigmas)]


def test_sequence_examples():
    assert qhn.validate_seq(NormSeqPrefix(((5, 5), (1601, 1601))))
    assert not qhn.validate_seq(NormSeqPrefix(((5, 5), (1600, 1600))))
    assert not qhn.validate_seq(NormSeqPrefix(((5, 4),)), strict=False)
    assert not qhn.validate_seq(NormSeqPrefix(((4, 4),)))
    rep = qhn.seq_report(NormSeqPrefix(((4, 4),)), strict=False)
    assert rep.ok and rep.waived
    assert not qhn.validate_seq(NormSeqPrefix(((2, 5), (5, 6))), strict=False)


def test_minimal_strict_sequence_is_least():
    seq = qhn.minimal_strict_sequence(3)
    assert seq.pairs[:2] == ((5, 5), (1601, 1601))
    assert qhn.validate_seq(seq)
    for m in range(len(seq)):
        pairs = list(seq.pairs)
        pairs[m] = (pairs[m][0] - 1, pairs[m][0] - 1)
        assert not qhn.validate_seq(NormSeqPrefix(tuple(pairs)))


def test_validate_cond_examples():
    seq = relaxed_sequence(3)  # (2,3), (4,5), (6,7)
    p = qcond({0: 1}, [{1: 0, 2: 1}], {0: [0]}, seq, range(4))
    assert qhn.validate_cond(p, strict=False) and not qhn.validate_cond(p, strict=True)
    assert any("overlaps" in v for v in qhn.cond_report(qcond({1: 1}, [{1: 0, 2: 1}], {0: [0]}, seq, range(4)), False))
    assert any("size" in v for v in qhn.cond_report(qcond({}, [{1: 0}], {0: [0]}, seq, range(4)), False))
    assert any("outside" in v for v in qhn.cond_report(qcond({}, [{1: 0, 2: 0}], {5: [0]}, seq, range(4)), False))
    assert any("partition" in v for v in qhn.cond_report(qcond({}, [{1: 0, 2: 0}], {}, seq, range(4)), False))
    crowded = qcond({}, [{0: 0, 1: 0}, {2: 0, 3: 0}, {4: 0, 5: 0}, {6: 0, 7: 0}], {0: [0, 1, 2, 3]}, seq, range(8))
    assert any("members" in v for v in qhn.cond_report(crowded, False))
    strict = qcond({}, [{i: 0 for i in range(5)}], {0: [0]}, qhn.minimal_strict_sequence(2), range(6))
    assert qhn.validate_cond(strict)


@pytest.mark.parametrize("seed", range(30))
def test_pos_count_matches_measure(seed):
    rng = random.Random(seed)
    x = rng.choice([Z2, Z3])
    p = random_qcondition(rng, x, relaxed_sequence(3), range(rng.randint(3, 7)))
    space = PointSpace(p.window, x)
    count = int(qhn.qpos_mask(p, space).sum())
    assert count == len(brute_qpos(p, x))
    assert qhn.pos_measure(p, x) == Fraction(count, len(space))


def test_pos_closed_form_for_disjoint_sigmas():
    p = qcond({0: 1}, [{1: 0, 2: 0}, {3: 1, 4: 1, 5: 0}], {0: [0, 1]}, relaxed_sequence(3), range(7))
    assert len(brute_qpos(p, Z2)) == 2 ** 6 * Fraction(3, 4) * Fraction(7, 8)


def test_singleton_sigma_order_gap():
    # on Z_2 a singleton σ and a stem value say the same thing
    p = qcond({0: 0}, [], {}, ORDER_SEQ, range(2))
    q = qcond({}, [{0: 1}], {0: [0]}, ORDER_SEQ, range(2))
    assert qhn.leq_semantic_q(p, q, Z2) and not qhn.leq_syntactic(p, q)
    assert not qhn.leq_semantic_q(p, q, Z3)


@pytest.mark.parametrize("window", [3, 4])
def test_exhaustive_order_agreement(window):
    pairs, bad = exhaustive_order_disagreements(window)
    assert pairs > 0 and bad == []


def test_symmetric_order_agreement_window_5():
    pairs, bad = symmetric_order_disagreements(5)
    assert pairs > 0 and bad == []


def test_syntactic_order_is_transitive():
    family = exhaustive_order_family(4)
    rng = random.Random(0)
    for _ in range(3000):
        p, q, r = (rng.choice(family) for _ in range(3))
        if qhn.leq_syntactic(p, q) and qhn.leq_syntactic(q, r):
            assert qhn.leq_syntactic(p, r)
    for p in family[:200]:
        assert qhn.leq_syntactic(p, p)


def test_compat_disjoint_support():
    seq = relaxed_sequence(3)
    p0 = qcond({0: 0}, [{1: 0, 2: 0}], {0: [0]}, seq, range(6))
    p1 = qcond({5: 1}, [{3: 1, 4: 1}], {0: [0]}, seq, range(6))
    q = qhn.compatible_constructive(p0, p1, alphabet=Z2, strict=False)
    assert q is not None
    assert qhn.leq_syntactic(p0, q) and qhn.leq_syntactic(p1, q)
    assert qhn.leq_semantic_q(p0, q, Z2) and qhn.leq_semantic_q(p1, q, Z2)
    assert qhn.compatible_bruteforce(p0, p1, Z2) is not None


def test_compat_contradictory_stems():
    seq = relaxed_sequence(3)
    p0, p1 = qcond({0: 0}, [], {}, seq, range(3)), qcond({0: 1}, [], {}, seq, range(3))
    assert qhn.compatible_bruteforce(p0, p1, Z2) is None
    assert qhn.compatible_constructive(p0, p1, alphabet=Z2, strict=False) is None


def test_compat_rejects_foreign_point_and_short_prefix():
    seq = relaxed_sequence(3)
    p0 = qcond({0: 0}, [], {}, seq, range(3))
    with pytest.raises(InvalidCondition):
        qhn.compatible_constructive(p0, p0, eta={0: 1, 1: 0, 2: 0}, strict=False)
    short = qcond({0: 0}, [], {}, qhn.minimal_strict_sequence(1), range(3))
    with pytest.raises(TruncationTooShort):
        qhn.compatible_constructive(short, short, alphabet=Z2, strict=True)


@pytest.mark.parametrize("seed", range(40))
def test_compat_agrees_with_enumeration(seed):
    rng = random.Random(seed)
    seq = relaxed_sequence(4)
    window = range(rng.randint(5, 8))
    p0 = random_qcondition(rng, Z2, seq, window, min_sigma=2)
    p1 = random_qcondition(rng, Z2, seq, window, min_sigma=2)
    q = qhn.compatible_constructive(p0, p1, alphabet=Z2, strict=False)
    assert (q is None) == (qhn.compatible_bruteforce(p0, p1, Z2) is None)
    if q is not None:
        assert qhn.leq_semantic_q(p0, q, Z2) and qhn.leq_semantic_q(p1, q, Z2)


def test_hall_selection_examples():
    us = qhn.hall_select_u([([0, 1, 2, 3], 2), ([0, 1, 2, 3], 2)])
    assert sorted(map(len, us)) == [2, 2] and not us[0] & us[1]
    us = qhn.hall_select_u([(pf({0: 0, 1: 0}), 1), ([1], 1)])
    assert us == [frozenset({0}), frozenset({1})]
    with pytest.raises(NoSelection):
        qhn.hall_select_u([([0, 1], 2), ([0, 1], 1)])


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("seed", range(8))
def test_class_amalgamation(n, seed):
    rng = random.Random(seed)
    seq = relaxed_sequence(n + 5, 1, 1)
    ps = class_tuple(rng, Z2, seq, n, window=14)
    assert len({qhn.class_key(p, n) for p in ps}) == 1
    q = qhn.amalgamate_class(ps, n)
    assert q.m_star == n + 2
    assert all(qhn.leq_syntactic(p, q) and qhn.leq_semantic_q(p, q, Z2) for p in ps)
    assert qhn.qpos_mask(q, PointSpace(q.window, Z2)).any()


def test_class_amalgamation_rejects_mismatch():
    seq = relaxed_sequence(6, 1, 1)
    p0 = qcond({0: 0}, [], {}, seq, range(4))
    p1 = qcond({0: 1}, [], {}, seq, range(4))
    with pytest.raises(InvalidCondition):
        qhn.amalgamate_class([p0, p1], 1)
    with pytest.raises(ValueError):
        qhn.amalgamate_class([p0, p0, p0], 1)


def test_normalize_shrinks_to_normal_size():
    seq = relaxed_sequence(3)  # (2,3), (4,5), (6,7)
    p = qcond({}, [{i: 1 for i in range(5)}, {i: 0 for i in range(5, 10)}], {0: [0], 1: [1]}, seq, range(10))
    q = qhn.normalize_dense(p)
    assert qhn.is_normal(q) and [len(s) for s in q.sigmas] == [3, 5]
    assert q.m_star == 0 and qhn.leq_syntactic(p, q)


def test_normalize_raises_m_star_when_a_sigma_is_too_small():
    seq = relaxed_sequence(3)
    p = qcond({}, [{0: 1, 1: 1}, {i: 0 for i in range(2, 7)}], {0: [0], 1: [1]}, seq, range(7))
    q = qhn.normalize_dense(p)
    assert q.m_star == 1 and qhn.is_normal(q)
    assert q.w == pf({0: 0, 1: 0}) and [len(s) for s in q.sigmas] == [3]
    assert qhn.leq_syntactic(p, q) and qhn.leq_semantic_q(p, q, Z2)


def test_null_refinement_on_flat_sequence():
    seq = flat_sequence(7, 1, 5)  # 5 > 2^(2*1) from the start
    p = qcond({0: 1}, [], {}, seq, range(8))
    res = qhn.null_refinement(p, Z2)
    assert res.q.m_star == 6 and len(res.q.sigmas) == 5
    (b,) = res.blocks
    assert b.measure == Fraction(1, 32) and b.exponent == 2 and b.bound_applies and b.certified
    assert res.witness is not None
    assert qhn.qpos_member(p, res.witness.as_dict()) and qhn.qpos_member(res.q, res.witness.as_dict())


def test_null_refinement_needs_a_large_block():
    p = qcond({}, [], {}, relaxed_sequence(8), range(8))
    with pytest.raises(TruncationTooShort):
        qhn.null_refinement(p, Z2)


@pytest.mark.parametrize("seed", range(40))
def test_nowhere_dense_matches_bruteforce(seed):
    rng = random.Random(seed)
    x = rng.choice([Z2, Z3])
    window = list(range(rng.randint(2, 6 if x is Z2 else 4)))
    p = random_qcondition(rng, x, relaxed_sequence(3, 1, 2), window, min_sigma=1)
    coords = sorted(rng.sample(window, rng.randint(0, len(window))))
    for stem in (None, coords):
        assert bool(qhn.nowhere_dense_check(p, stem)) == qhn.nowhere_dense_bruteforce(p, x, stem)


def test_projection_along_a_shift():
    seq = relaxed_sequence(3, 1, 1)
    p = qcond({0: 1}, [{1: 0, 2: 0}, {6: 1, 7: 1}], {0: [0], 1: [1]}, seq, range(8))
    pi = {i: i + 1 for i in range(4)}
    base = qhn.pullback_q(p, pi)
    assert base.sigmas == (pf({0: 0, 1: 0}),)
    r = qcond({3: 1}, [{0: 0, 1: 0}], {0: [0]}, seq, range(4))
    assert qhn.leq_syntactic(base, r)
    p_star = qhn.project_pi_q(p, pi, r)
    assert qhn.leq_syntactic(p, p_star) and qhn.leq_semantic_q(p, p_star, Z2)
    assert qhn.pullback_contained(p_star, pi, r, Z2)


def test_projection_rejects_straddling_sigma():
    seq = relaxed_sequence(3, 1, 1)
    p = qcond({}, [{1: 0, 2: 0}], {0: [0]}, seq, range(4))
    pi = {0: 0, 1: 1}
    assert not qhn.aligned(p, pi)
    with pytest.raises(NotAligned):
        qhn.pullback_q(p, pi)


def test_pos_measure_contradicted_sigma_is_ignored():
    p = qcond({0: 1}, [{1: 0, 2: 0}], {0: [0]}, relaxed_sequence(3), range(3))
    assert qhn.pos_measure(p, Z2) == Fraction(1, 2) * Fraction(3, 4)
    assert qhn.pos_measure(qcond({}, [], {}, ORDER_SEQ, range(1)), Z3) == 1
    assert p.blocks == ((0, (0,)),)


def order_key(q):
    return q.w.items, tuple(sorted(s.items for s in q.sigmas))


def test_orders_split_over_atoms():
    family = exhaustive_order_family(4)
    space = PointSpace(range(4), Z2)
    masks = {order_key(p): qhn.qpos_mask(p, space) for p in family}
    for p in family[::3]:
        atoms = order_atoms(p)
        for q in family:
            mq = masks[order_key(q)]
            semantic = not np.any(mq & ~masks[order_key(p)])
            assert semantic == all(not np.any(mq & ~qhn.qpos_mask(a, space)) for a in atoms)
            assert qhn.leq_syntactic(p, q) == all(qhn.leq_syntactic(a, q) for a in atoms)


@pytest.mark.parametrize("window", [3, 4])
def test_atomic_pairs_cover_the_family_up_to_symmetry(window):
    family = {order_key(q) for q in exhaustive_order_family(window)}
    by_atom = {}
    for atom, q in atomic_order_pairs(window):
        by_atom.setdefault(order_key(atom), []).append(q)
    for key, qs in by_atom.items():
        k = max(len(key[0]), *(len(s) for s in key[1])) if key[1] else 1
        orbit = set()
        for head in itertools.permutations(range(k)):
            for tail in itertools.permutations(range(k, window)):
                pi = dict(zip(range(window), head + tail))
                for shift in itertools.product(range(2), repeat=window - k):
                    v = PartialFunction(list(zip(range(k), [0] * k)) + list(zip(range(k, window), shift)))
                    for q in qs:
                        moved = [translate_pf(permute_pf(s, pi), v, Z2) for s in (q.w,) + q.sigmas]
                        orbit.add((moved[0].items, tuple(sorted(s.items for s in moved[1:]))))
        assert orbit == family


@pytest.mark.parametrize("window", [3, 4, 5, 6])
def test_atomic_order_agreement(window):
    pairs, bad = atomic_order_disagreements(window)
    assert pairs > 0 and bad == []
