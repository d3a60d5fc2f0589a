"""Regenerate the worked-instance corpus shipped in ``normbench/corpus``.

Every expected value is computed here with the brute-force oracles, never
with the fast code paths, and the files are written deterministically so a
rebuild is a byte-level regression check:

    python3 tools/build_corpus.py [--check]
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from normbench import conditions as cond
from normbench import qhn
from normbench.core import Alphabet, PartialFunction, PointSpace
from normbench.creatures import Creature
from normbench.generators import certified_pair, relaxed_sequence
from normbench.oracles import brute_norm, brute_points, brute_sdr_exists, brute_value_set, extends
from normbench.serialize import (
    alphabet_to,
    certificate_to,
    creature_to,
    document,
    dumps,
    pf_to,
    qcond_to,
    seq_to,
    truncated_to,
)

OUT = Path(__file__).resolve().parent.parent / "src" / "normbench" / "corpus"
Z2 = Alphabet.cyclic(2)


def pf(d):
    return PartialFunction(d)


def const(coords, v=0):
    return PartialFunction.constant(coords, v)


def creature(z, delta):
    return Creature.make(z, delta)


def brute_count(coords, alphabet, member):
    return sum(1 for x in brute_points(coords, alphabet) if member(x))


def cases():
    out = {}

    def add(name, kind, payload, expect, **extra):
        out[name] = document(kind, payload, name=name, expect=expect, **extra)

    # --- creatures
    t = creature([0, 1], [pf({0: 0}), pf({1: 0}), pf({0: 0, 1: 0})])
    add("norm-packing-forces-zero", "creature", creature_to(t), {"n": brute_norm(t.delta)})

    t = creature(range(4), [const(range(4), 0), const(range(4), 1)])
    add("value-set-two-constants", "creature", creature_to(t),
        {"values": len(brute_value_set(t.z, t.delta, Z2))}, alphabet=alphabet_to(Z2))

    t = creature(range(4), [const(range(4))])
    add("restrict-half-constant", "creature", creature_to(t),
        {"n": brute_norm([const([0, 1])]), "at_least": t.n // 2}, params={"coords": [0, 1]})

    t = creature([0, 1], [pf({0: 0})])
    add("restrict-half-singleton", "creature", creature_to(t),
        {"n": brute_norm([pf({0: 0})]), "at_least": t.n // 2}, params={"coords": [0]})

    a, b = creature([0], [pf({0: 0})]), creature([1], [pf({1: 0})])
    add("glue-singletons", "creature", [creature_to(a), creature_to(b)],
        {"n": brute_norm(a.delta | b.delta)})

    a, b = creature(range(3), [const(range(3))]), creature(range(3, 6), [const(range(3, 6))])
    add("glue-constant-triples", "creature", [creature_to(a), creature_to(b)],
        {"n": brute_norm(a.delta | b.delta), "min": min(a.n, b.n)})

    a, b = creature(range(4), [const(range(4), 0)]), creature(range(4), [const(range(4), 1)])
    add("link-opposite-constants", "creature", [creature_to(a), creature_to(b)],
        {"n": brute_norm(a.delta | b.delta), "at_least": min(a.n // 2, b.n // 2)})

    t = creature(range(4), [const(range(4))])
    add("cut-constant", "creature", creature_to(t),
        {"pieces": [brute_norm([const([0, 1])]), brute_norm([const([2, 3])])]}, params={"coords": [0, 1]})

    family = [pf({0: 0, 1: 0}), pf({1: 0})]
    add("sdr-overlapping-domains", "family", [pf_to(e) for e in family],
        {"sdr": brute_sdr_exists([e.dom for e in family])})

    # --- truncated conditions
    p = cond.TruncatedCondition(range(8), pf({0: 1}), (creature(range(1, 4), [const(range(1, 4))]),
                                                      creature(range(4, 8), [const(range(4, 8)), pf({4: 1, 5: 1})])),
                                cond.FLAVOR_PLUS)
    count = brute_count(range(8), Z2, lambda x: extends(x, p.w) and not any(extends(x, e) for e in p.all_constraints()))
    product = 1
    for c in p.creatures:
        product *= len(brute_value_set(c.z, c.delta, Z2))
    add("pos-cylinder-product", "truncated", truncated_to(p), {"points": count, "product": product},
        alphabet=alphabet_to(Z2))

    p, q, cert = certified_pair(random.Random("corpus:order"), Z2, 10, steps=5)
    space = PointSpace(range(10), Z2)
    nested = not np.any(cond.pos_mask(q, space) & ~cond.pos_mask(p, space))
    add("order-certified-pair", "truncated", [truncated_to(p), truncated_to(q)], {"pos_nested": nested},
        certificate=certificate_to(cert), alphabet=alphabet_to(Z2))

    p = cond.TruncatedCondition(range(12), pf({}), (creature(range(6), [const(range(6))]),
                                                    creature(range(6, 12), [const(range(6, 12), 1)])),
                                cond.FLAVOR_PLUS)
    add("amalgamate-identical", "truncated", [truncated_to(p), truncated_to(p)], {"pos_nonempty": True},
        alphabet=alphabet_to(Z2))

    def block(lo, hi):
        return creature(range(lo, hi), [const(range(lo, hi))])

    p0 = cond.TruncatedCondition(range(24), pf({}), (block(0, 8), block(8, 16), block(16, 24)), cond.FLAVOR_PLUS)
    p1 = cond.TruncatedCondition(range(24), pf({}), (block(0, 12), block(12, 24)), cond.FLAVOR_PLUS)
    add("amalgamate-window-24", "truncated", [truncated_to(p0), truncated_to(p1)], {"pos_nonempty": True},
        alphabet=alphabet_to(Z2), params={"slack": "linear"})

    # --- qhn
    seq = qhn.NormSeqPrefix(((5, 5), (1601, 1601)))
    lhs = 2 ** (2 * (1 + 2)) * 5 * 5
    add("seq-strict-first-growth", "sequence", seq_to(seq), {"strict": lhs < 1601, "clause_lhs": lhs})

    seq = qhn.NormSeqPrefix(((2, 3), (7, 8)))
    p = qhn.QCondition(pf({0: 1}), (pf({1: 0, 2: 1}),), 0, {0: [0]}, seq, range(4))
    add("qcond-relaxed-pair", "qcondition", qcond_to(p), {"relaxed": True, "strict": False})

    seq = relaxed_sequence(3)
    p = qhn.QCondition(pf({0: 1}), (pf({1: 0, 2: 0}), pf({3: 1, 4: 1, 5: 0})), 0, {0: [0, 1]}, seq, range(7))
    count = brute_count(range(7), Z2,
                        lambda x: extends(x, p.w) and not any(extends(x, s) for s in p.sigmas))
    closed = Fraction(2 ** 6) * (1 - Fraction(1, 4)) * (1 - Fraction(1, 8))
    add("qpos-disjoint-count", "qcondition", qcond_to(p), {"points": count, "closed_form": str(closed)},
        alphabet=alphabet_to(Z2))

    p0 = qhn.QCondition(pf({0: 0}), (pf({1: 0, 2: 0}),), 0, {0: [0]}, seq, range(6))
    p1 = qhn.QCondition(pf({5: 1}), (pf({3: 1, 4: 1}),), 0, {0: [0]}, seq, range(6))
    witness = any(all(extends(x, q.w) and not any(extends(x, s) for s in q.sigmas) for q in (p0, p1))
                  for x in brute_points(range(6), Z2))
    add("compat-disjoint-support", "qcondition", [qcond_to(p0), qcond_to(p1)], {"compatible": witness},
        alphabet=alphabet_to(Z2))

    p0 = qhn.QCondition(pf({0: 0}), (), 0, {}, seq, range(3))
    p1 = qhn.QCondition(pf({0: 1}), (), 0, {}, seq, range(3))
    add("compat-contradictory-stems", "qcondition", [qcond_to(p0), qcond_to(p1)],
        {"compatible": False, "reason": "contradictory-stems"}, alphabet=alphabet_to(Z2))

    dom = [0, 1, 2, 3]
    add("hall-identical-domains", "requests", [[dom, 2], [dom, 2]], {"selectable": brute_sdr_exists([dom] * 4)})

    seq = relaxed_sequence(5, 1, 1)
    low = pf({0: 1, 1: 0})
    p0 = qhn.QCondition(pf({2: 0}), (low, pf({3: 0, 4: 0, 5: 0, 6: 0})), 0, {0: [0], 3: [1]}, seq, range(12))
    p1 = qhn.QCondition(pf({2: 0}), (low, pf({7: 1, 8: 1, 9: 1, 10: 1})), 0, {0: [0], 4: [1]}, seq, range(12))
    add("class-shared-key", "qcondition", [qcond_to(p0), qcond_to(p1)],
        {"shared_key": qhn.class_key(p0, 1) == qhn.class_key(p1, 1)}, alphabet=alphabet_to(Z2), params={"n": 1})

    sigmas = [const(range(3 * j, 3 * j + 3)) for j in range(64)]
    value = Fraction(7, 8) ** 64
    add("measure-64-cylinders", "sigmas", [pf_to(s) for s in sigmas],
        {"numerator": str(value.numerator), "denominator": str(value.denominator), "exponent": 8,
         "at_most_exp_neg": True}, alphabet=alphabet_to(Z2))

    single = [const(range(3))]
    frac = Fraction(brute_count(range(3), Z2, lambda x: not extends(x, single[0])), 8)
    add("measure-single-cylinder", "sigmas", [pf_to(s) for s in single],
        {"numerator": str(frac.numerator), "denominator": str(frac.denominator)}, alphabet=alphabet_to(Z2))

    seq = relaxed_sequence(3, 1, 1)
    p = qhn.QCondition(pf({0: 1}), (pf({1: 0, 2: 0}), pf({6: 1, 7: 1})), 0, {0: [0], 1: [1]}, seq, range(8))
    pi = {i: i + 1 for i in range(4)}
    r = qhn.QCondition(pf({3: 1}), (pf({0: 0, 1: 0}),), 0, {0: [0]}, seq, range(4))
    add("project-shift", "qcondition", qcond_to(p), {"above_p": True, "pullback_contained": True},
        alphabet=alphabet_to(Z2), params={"pi": {str(k): v for k, v in pi.items()}, "r": qcond_to(r)})
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true", help="compare with the files on disk instead of writing")
    args = ap.parse_args(argv)
    stale = []
    for name, doc in sorted(cases().items()):
        path = OUT / f"{name}.json"
        text = dumps(doc)
        if args.check:
            if not path.exists() or path.read_text() != text:
                stale.append(name)
        else:
            OUT.mkdir(parents=True, exist_ok=True)
            path.write_text(text)
    if stale:
        print("stale corpus files: " + ", ".join(stale), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
