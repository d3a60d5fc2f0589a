"""Named property suites with replayable counterexamples.

A suite draws instance ``i`` from its own seeded stream, stores it as JSON and
checks a handful of named properties against the slow oracles.  A failing
property keeps the JSON instance so ``replay`` can rerun exactly that check.
"""

from __future__ import annotations

import csv
import io
import itertools
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from . import conditions as cond
from . import qhn
from .core import DEFAULT_BUDGET, Alphabet, PartialFunction, PointSpace, translate_pf
from .creatures import (
    Creature,
    cut,
    glue,
    link,
    norm_n,
    permute_creature,
    restrict_half,
    sigma_associative,
    sigma_axioms,
    sigma_bot_associative,
    sigma_bot_axioms,
    sigma_bot_member,
    sigma_member,
    translate_creature,
    value_set,
    witness_value,
)
from .errors import EmptyRestriction, NormbenchError
from .generators import (
    amalgam_family,
    certified_pair,
    class_tuple,
    random_creature,
    random_pf,
    random_qcondition,
    relaxed_sequence,
    retry,
    rng_for,
)
from .measure import avoidance_measure, block_measure, certify_at_most_exp_neg
from .oracles import brute_norm, brute_value_set
from .serialize import (
    alphabet_from,
    alphabet_to,
    certificate_from,
    certificate_to,
    creature_from,
    creature_to,
    pf_from,
    pf_to,
    qcond_from,
    qcond_to,
    truncated_from,
    truncated_to,
)


@dataclass
class SuiteConfig:
    seed: int = 0
    count: Optional[int] = None
    alphabet: Optional[Alphabet] = None
    budget: int = DEFAULT_BUDGET
    workers: int = 1

    def echo(self) -> Dict[str, Any]:
        return {"seed": self.seed, "count": self.count,
                "alphabet": alphabet_to(self.alphabet) if self.alphabet else None,
                "budget": self.budget}


@dataclass
class SuiteReport:
    suite: str
    config: Dict[str, Any]
    instances: int
    counts: Dict[str, Dict[str, int]] = field(default_factory=dict)
    counterexamples: List[Dict[str, Any]] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.instances > 0 and all(c["fail"] == 0 for c in self.counts.values())

    def to_json(self) -> Dict[str, Any]:
        out = asdict(self)
        out["ok"] = self.ok
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["suite", "property", "pass", "fail"])
        for prop, c in sorted(self.counts.items()):
            writer.writerow([self.suite, prop, c["pass"], c["fail"]])
        return buf.getvalue()


@dataclass(frozen=True)
class Suite:
    name: str
    summary: str
    default_count: int
    make: Callable[[random.Random, SuiteConfig, int], Dict[str, Any]]
    check: Callable[[Dict[str, Any], SuiteConfig], Dict[str, bool]]


def _alphabet(rng: random.Random, cfg: SuiteConfig, sizes=(2, 3)) -> Alphabet:
    return cfg.alphabet if cfg.alphabet is not None else Alphabet.cyclic(rng.choice(sizes))


# --- norm baseline ------------------------------------------------------------------

def _make_baseline(rng, cfg, i):
    return {"alphabet": [2 + (i // 6) % 2], "z": list(range(i % 6 + 1))}


def _check_baseline(inst, cfg):
    z = inst["z"]
    zero = PartialFunction.constant(z, 0)
    return {"fast": norm_n(z, [zero]) == len(z), "oracle": brute_norm([zero]) == len(z)}


# --- witness --------------------------------------------------------------------------


def _make_witness(rng, cfg, i):
    x = _alphabet(rng, cfg)
    t = random_creature(rng, x, max_z=6, max_delta=5)
    return {"alphabet": alphabet_to(x), "creature": creature_to(t)}


def _check_witness(inst, cfg):
    x, t = alphabet_from(inst["alphabet"]), creature_from(inst["creature"])
    brute = brute_value_set(t.z, t.delta, x)
    w = witness_value(t, x).as_dict()
    fast = {v for v in value_set(t, x, cfg.budget)}
    return {
        "witness-in-value-set": w in brute,
        "value-set-nonempty": bool(brute),
        "value-set-agrees": fast == {PartialFunction(b) for b in brute},
        "norm-agrees": t.n == brute_norm(t.delta),
    }


# --- norm bounds ----------------------------------------------------------------------


def _make_bounds(rng, cfg, i):
    x = _alphabet(rng, cfg)
    t = random_creature(rng, x, max_z=6, max_delta=4)
    zs = sorted(t.z)

    def pick_zstar():
        zstar = rng.sample(zs, rng.randint(1, len(zs)))
        try:
            restrict_half(t, zstar)
        except EmptyRestriction:
            return None
        return zstar

    zstar = retry(pick_zstar, 100, "restriction")
    other = random_creature(rng, x, max_z=4, max_delta=4,
                            coords=rng.sample(range(20, 30), rng.randint(1, 4)))
    partner = random_creature(rng, x, max_delta=4, coords=zs)
    return {"alphabet": alphabet_to(x), "t": creature_to(t), "zstar": zstar,
            "other": creature_to(other), "partner": creature_to(partner)}


def _check_bounds(inst, cfg):
    t, other, partner = (creature_from(inst[k]) for k in ("t", "other", "partner"))
    n_t, n_o, n_p = (brute_norm(s.delta) for s in (t, other, partner))
    r = restrict_half(t, inst["zstar"])
    g = glue([t, other])
    k = link(t, partner)
    n_r, n_g, n_k = brute_norm(r.delta), brute_norm(g.delta), brute_norm(k.delta)
    return {
        "restrict-half": n_r >= n_t // 2,
        "glue-min": n_g >= min(n_t, n_o),
        "link-half-min": n_k >= min(n_t // 2, n_p // 2),
        "fast-norm-agrees": (t.n, other.n, partner.n, r.n, g.n, k.n) == (n_t, n_o, n_p, n_r, n_g, n_k),
    }


# --- Σ / Σ⊥ axioms ----------------------------------------------------------------------


def _make_axioms(rng, cfg, i):
    x = _alphabet(rng, cfg)
    base, offset = [], 0
    for _ in range(rng.randint(2, 4)):
        size = rng.randint(1, 3)
        base.append(random_creature(rng, x, max_delta=3, coords=range(offset, offset + size)))
        offset += size
    split = rng.randint(1, len(base) - 1)
    t = random_creature(rng, x, max_z=6, max_delta=3, min_n=2,
                        coords=range(40, 40 + rng.randint(2, 6)))
    zs = sorted(t.z)
    z0 = rng.sample(zs, rng.randint(1, len(zs) - 1))
    return {"alphabet": alphabet_to(x), "base": [creature_to(s) for s in base], "split": split,
            "t": creature_to(t), "z0": z0}


def _check_axioms(inst, cfg):
    x = alphabet_from(inst["alphabet"])
    base = [creature_from(s) for s in inst["base"]]
    k = inst["split"]
    groups = [base[:k], base[k:]]
    mids = [glue(g) for g in groups]
    top = glue(mids)
    t = creature_from(inst["t"])
    s0, s1 = cut(t, inst["z0"])
    out = {f"sigma-{key}": ok for key, ok in sigma_axioms(top, mids, x, cfg.budget).items()}
    out.update({f"sigma-bot-{key}": ok for key, ok in sigma_bot_axioms([s0, s1], t, x, cfg.budget).items()})
    out["glue-in-sigma"] = sigma_member(top, mids) and all(sigma_member(m, g) for m, g in zip(mids, groups))
    out["cut-in-sigma-bot"] = sigma_bot_member([s0, s1], t)
    out["sigma-associative"] = sigma_associative(top, list(zip(mids, groups)))
    parts = [(s0, [s0]), (s1, [s1])]
    for idx, s in enumerate((s0, s1)):
        if len(s.z) > 1 and (s.infinite or s.n >= 2):
            zz = sorted(s.z)
            parts[idx] = (s, list(cut(s, zz[: len(zz) // 2])))
            break
    out["sigma-bot-associative"] = sigma_bot_associative(t, parts)
    out["sigma-empty"] = not sigma_member(top, [])
    return out


# --- Q+∞ order soundness --------------------------------------------------------------


def _make_order(rng, cfg, i):
    x = cfg.alphabet or Alphabet.cyclic(2)
    p, q, c = certified_pair(rng, x, rng.randint(4, 16), steps=rng.randint(1, 6))
    return {"alphabet": alphabet_to(x), "p": truncated_to(p), "q": truncated_to(q),
            "certificate": certificate_to(c)}


def _check_order(inst, cfg):
    x = alphabet_from(inst["alphabet"])
    p, q = truncated_from(inst["p"]), truncated_from(inst["q"])
    c = certificate_from(inst["certificate"])
    space = PointSpace(p.window, x, cfg.budget)
    state, monotone = p, True
    for move in c.moves:
        nxt = cond.apply_move(state, move)
        monotone &= not np.any(cond.pos_mask(nxt, space) & ~cond.pos_mask(state, space))
        state = nxt
    return {"certificate-replays": cond.leq_check(p, q, c),
            "pos-inclusion": cond.leq_semantic(p, q, x, cfg.budget),
            "each-move-shrinks": bool(monotone)}


# --- amalgamation -----------------------------------------------------------------------


def _make_amalgam(rng, cfg, i):
    x = cfg.alphabet or Alphabet.cyclic(2)
    count = rng.choice([2, 3])
    slack = cond.safe_slack(count)
    window = rng.randint(12, 22) if count == 2 else rng.randint(16, 24)
    ps = amalgam_family(rng, x, count, window, min_n=slack(0) + 1)
    return {"alphabet": alphabet_to(x), "conditions": [truncated_to(p) for p in ps]}


def _check_amalgam(inst, cfg):
    x = alphabet_from(inst["alphabet"])
    ps = [truncated_from(p) for p in inst["conditions"]]
    am = cond.amalgamate(ps, cond.safe_slack(len(ps)))
    inside, nonempty = cond.pos_intersection_contains(ps, am.q, x, cfg.budget)
    cuts = [s for s in am.steps if s["kind"] == "cut"]
    glues = [s for s in am.steps if s["kind"] == "glue"]
    return {
        "certificates-replay": all(cond.leq_check(p, am.q, c) for p, c in zip(ps, am.certificates)),
        "pos-inside-intersection": inside,
        "pos-nonempty": nonempty,
        "result-valid": cond.validate(am.q),
        "cut-halves-at-most": all(o == float("inf") or o >= s["inputs"][0] // 2 for s in cuts for o in s["outputs"]),
        "glue-keeps-min": all(s["outputs"][0] >= min(s["inputs"]) for s in glues),
        "block-norm-grows": all(t.n >= max(1, b) for b, t in enumerate(am.q.creatures)),
    }


# --- qhn order ------------------------------------------------------------------------------

ORDER_SEQ = qhn.NormSeqPrefix(((1, 3),))


def _derive(rng: random.Random, p: qhn.QCondition, x: Alphabet) -> qhn.QCondition:
    """A random condition near ``p``: stem grown, σ's shrunk, dropped or added."""
    free = [c for c in sorted(p.window) if c not in p.w and not any(c in s for s in p.sigmas)]
    w = p.w
    sigmas = []
    for s in p.sigmas:
        roll = rng.random()
        if roll < 0.2:
            continue
        if roll < 0.4 and len(s) > 2:
            keep = rng.sample(sorted(s.dom), rng.randint(2, len(s) - 1))
            s = s.restrict(keep)
        elif roll < 0.5:
            k = rng.choice(sorted(s.dom))
            s = PartialFunction({**s.as_dict(), k: rng.randrange(x.size)})
        sigmas.append(s)
    rng.shuffle(free)
    if free and rng.random() < 0.5:
        c = free.pop()
        w = PartialFunction({**w.as_dict(), c: rng.randrange(x.size)})
    if len(free) >= 2 and len(sigmas) < 3 and rng.random() < 0.4:
        k = rng.randint(2, len(free))
        sigmas.append(PartialFunction((c, rng.randrange(x.size)) for c in free[:k]))
    if rng.random() < 0.3:
        w = PartialFunction((c, rng.randrange(x.size)) for c in rng.sample(sorted(p.window), rng.randint(0, 2)))
        sigmas = [s for s in sigmas if not (s.dom & w.dom)]
    return qhn.QCondition(w, tuple(sigmas), 0, {0: range(len(sigmas))}, ORDER_SEQ, p.window)


def _make_qorder(rng, cfg, i):
    x = cfg.alphabet or Alphabet.cyclic(2)
    window = range(rng.randint(3, 10))
    p = random_qcondition(rng, x, ORDER_SEQ, window, max_sigmas=3, min_sigma=2, max_sigma=4)
    q = retry(lambda: _valid_or_none(_derive(rng, p, x)), 100, "derived condition")
    if rng.random() < 0.5:
        p, q = q, p
    return {"alphabet": alphabet_to(x), "p": qcond_to(p), "q": qcond_to(q)}


def _valid_or_none(p: qhn.QCondition) -> Optional[qhn.QCondition]:
    return p if qhn.validate_cond(p, strict=False) else None


def _check_qorder(inst, cfg):
    x = alphabet_from(inst["alphabet"])
    p, q = qcond_from(inst["p"]), qcond_from(inst["q"])
    return {"syntactic-iff-semantic": qhn.leq_syntactic(p, q) == qhn.leq_semantic_q(p, q, x, cfg.budget)}


def exhaustive_order_family(window: int, max_sigmas: int = 3, min_sigma: int = 2,
                            alphabet_size: int = 2) -> List[qhn.QCondition]:
    """Every condition on ``range(window)`` with at most ``max_sigmas`` σ's of size ``>= min_sigma``.

    Coordinates are labelled free, stem, or member of σ number ``k`` (σ's are
    listed by their least coordinate so each condition appears once).
    """
    out = []
    labels = ["free", "stem"] + list(range(max_sigmas))
    for lab in itertools.product(labels, repeat=window):
        used = [k for k in range(max_sigmas) if k in lab]
        if used != list(range(len(used))):
            continue
        firsts = [lab.index(k) for k in used]
        if firsts != sorted(firsts):
            continue
        groups = [[c for c in range(window) if lab[c] == k] for k in used]
        if any(len(g) < min_sigma for g in groups):
            continue
        stem = [c for c in range(window) if lab[c] == "stem"]
        valued = stem + [c for g in groups for c in g]
        for vals in itertools.product(range(alphabet_size), repeat=len(valued)):
            val = dict(zip(valued, vals))
            w = PartialFunction((c, val[c]) for c in stem)
            sigmas = tuple(PartialFunction((c, val[c]) for c in g) for g in groups)
            out.append(qhn.QCondition(w, sigmas, 0, {0: range(len(sigmas))}, ORDER_SEQ, range(window)))
    return out


def exhaustive_order_disagreements(window: int, alphabet: Alphabet = Alphabet.cyclic(2)) -> tuple:
    """``(pairs checked, disagreements)`` over all ordered pairs of the exhaustive family."""
    family = exhaustive_order_family(window, alphabet_size=alphabet.size)
    space = PointSpace(range(window), alphabet)
    masks = [sum(1 << int(r) for r in np.flatnonzero(qhn.qpos_mask(p, space))) for p in family]
    bad = []
    for i, p in enumerate(family):
        for j, q in enumerate(family):
            semantic = masks[j] & ~masks[i] == 0
            if qhn.leq_syntactic(p, q) != semantic:
                bad.append((p, q))
    return len(family) ** 2, bad


def order_representatives(window: int, max_sigmas: int = 3, min_sigma: int = 2) -> List[qhn.QCondition]:
    """One condition per orbit of the exhaustive family under coordinate
    permutations and symbol translations: zero stem first, then zero σ's on
    consecutive coordinates in nonincreasing size."""

    def sizes(room: int, count: int, cap: int):
        if count == 0:
            yield ()
            return
        for k in range(min(cap, room), min_sigma - 1, -1):
            for rest in sizes(room - k, count - 1, k):
                yield (k,) + rest

    out = []
    for stem in range(window + 1):
        for count in range(max_sigmas + 1):
            for ks in sizes(window - stem, count, window):
                w = PartialFunction.constant(range(stem), 0)
                sigmas, c = [], stem
                for k in ks:
                    sigmas.append(PartialFunction.constant(range(c, c + k), 0))
                    c += k
                out.append(qhn.QCondition(w, tuple(sigmas), 0, {0: range(len(sigmas))}, ORDER_SEQ, range(window)))
    return out


def symmetric_order_disagreements(window: int, alphabet: Alphabet = Alphabet.cyclic(2)) -> tuple:
    """``(pairs checked, disagreements)`` with ``p`` over orbit representatives
    and ``q`` over the whole exhaustive family; every ordered pair of the family
    is the image of a checked pair under a symmetry that preserves both orders."""
    family = exhaustive_order_family(window, alphabet_size=alphabet.size)
    space = PointSpace(range(window), alphabet)

    def mask(p):
        return sum(1 << int(r) for r in np.flatnonzero(qhn.qpos_mask(p, space)))

    masks = [mask(q) for q in family]
    reps = order_representatives(window)
    bad = []
    for p in reps:
        mp = mask(p)
        for q, mq in zip(family, masks):
            if qhn.leq_syntactic(p, q) != (mq & ~mp == 0):
                bad.append((p, q))
    return len(reps) * len(family), bad



def order_atoms(p: qhn.QCondition) -> List[qhn.QCondition]:
    """One condition per stem entry and per σ of ``p``.

    ``POS(p)`` is the intersection of the atoms' POS sets and ``leq_syntactic(p, q)``
    is the conjunction of its clauses per atom, so both orders split over atoms.
    """
    out = [qhn.QCondition(PartialFunction([kv]), (), 0, {}, p.seq, p.window) for kv in p.w.items]
    out += [qhn.QCondition(PartialFunction({}), (s,), 0, {0: [0]}, p.seq, p.window) for s in p.sigmas]
    return out


def atomic_order_pairs(window: int, max_sigmas: int = 3, min_sigma: int = 2, alphabet_size: int = 2):
    """``(atom, q)`` pairs covering every ordered pair of the exhaustive family up to symmetry.

    The atom is a stem entry ``{0: 0}`` or a zero σ on ``range(k)``.  Its
    stabilizer permutes the atom's coordinates and the rest separately and
    translates the rest freely, so ``q`` is a multiset of valued labels on the
    atom's coordinates and a multiset of zero-valued labels elsewhere.
    """
    inside = [("free",)] + [("stem", v) for v in range(alphabet_size)] + \
        [("sig", j, v) for j in range(max_sigmas) for v in range(alphabet_size)]
    outside = [("free",), ("stem", 0)] + [("sig", j, 0) for j in range(max_sigmas)]
    atoms = [(1, qhn.QCondition(PartialFunction({0: 0}), (), 0, {}, ORDER_SEQ, range(window)))]
    atoms += [(k, qhn.QCondition(PartialFunction({}), (PartialFunction.constant(range(k), 0),), 0, {0: [0]},
                                 ORDER_SEQ, range(window))) for k in range(max(2, min_sigma), window + 1)]
    for k, atom in atoms:
        for head in itertools.combinations_with_replacement(inside, k):
            for tail in itertools.combinations_with_replacement(outside, window - k):
                labels = head + tail
                groups: Dict[int, list] = {}
                stem = []
                for c, lab in enumerate(labels):
                    if lab[0] == "stem":
                        stem.append((c, lab[1]))
                    elif lab[0] == "sig":
                        groups.setdefault(lab[1], []).append((c, lab[2]))
                if sorted(groups) != list(range(len(groups))):
                    continue
                if any(len(g) < min_sigma for g in groups.values()):
                    continue
                sigmas = tuple(PartialFunction(groups[j]) for j in range(len(groups)))
                yield atom, qhn.QCondition(PartialFunction(stem), sigmas, 0, {0: range(len(sigmas))},
                                           ORDER_SEQ, range(window))


def atomic_order_disagreements(window: int, alphabet: Alphabet = Alphabet.cyclic(2)) -> tuple:
    """``(pairs checked, disagreements)`` over :func:`atomic_order_pairs`, POS inclusion by enumeration."""
    space = PointSpace(range(window), alphabet)
    outside_atom: Dict[Any, np.ndarray] = {}
    checked, bad = 0, []
    for atom, q in atomic_order_pairs(window, alphabet_size=alphabet.size):
        if atom not in outside_atom:
            outside_atom[atom] = ~qhn.qpos_mask(atom, space)
        semantic = not np.any(qhn.qpos_mask(q, space) & outside_atom[atom])
        if qhn.leq_syntactic(atom, q) != semantic:
            bad.append((atom, q))
        checked += 1
    return checked, bad

# --- qhn compatibility ----------------------------------------------------------------------

STRICT_SEQ = qhn.minimal_strict_sequence(4)


def _make_qcompat(rng, cfg, i):
    x = cfg.alphabet or Alphabet.cyclic(2)
    window = list(range(rng.randint(10, 16)))
    p0 = random_qcondition(rng, x, STRICT_SEQ, window, max_sigmas=2, min_sigma=5, max_sigma=6, max_stem=3,
                           strict=True)
    roll = rng.random()
    stem = None
    if roll < 0.25 and p0.sigmas:
        # a stem that swallows one of p0's σ's makes the pair incompatible
        stem = rng.choice(p0.sigmas)
    elif roll < 0.5 and p0.w:
        k = rng.choice(sorted(p0.w.dom))
        stem = PartialFunction({k: x.other_than(p0.w[k])})
    p1 = random_qcondition(rng, x, STRICT_SEQ, window, max_sigmas=2, min_sigma=5, max_sigma=6, max_stem=3,
                           strict=True, stem=stem)
    return {"alphabet": alphabet_to(x), "p0": qcond_to(p0), "p1": qcond_to(p1)}


def _check_qcompat(inst, cfg):
    x = alphabet_from(inst["alphabet"])
    p0, p1 = qcond_from(inst["p0"]), qcond_from(inst["p1"])
    eta = qhn.compatible_bruteforce(p0, p1, x, cfg.budget)
    q = qhn.compatible_constructive(p0, p1, eta.as_dict() if eta else None, x, strict=True, budget=cfg.budget) \
        if eta is not None else None
    out = {"agreement": (eta is None) == (q is None)}
    if q is not None:
        out["above-both"] = qhn.leq_syntactic(p0, q) and qhn.leq_syntactic(p1, q)
        out["pos-inside-both"] = qhn.leq_semantic_q(p0, q, x, cfg.budget) and qhn.leq_semantic_q(p1, q, x, cfg.budget)
        out["result-valid-strict"] = qhn.validate_cond(q, strict=True)
    return out


# --- linked classes ----------------------------------------------------------------------------


def _make_classes(rng, cfg, i):
    x = cfg.alphabet or Alphabet.cyclic(2)
    n = 1 + i % 2
    seq = relaxed_sequence(n + 5, 1, 1)
    ps = class_tuple(rng, x, seq, n, window=14)
    return {"alphabet": alphabet_to(x), "n": n, "conditions": [qcond_to(p) for p in ps]}


def _check_classes(inst, cfg):
    x = alphabet_from(inst["alphabet"])
    n = inst["n"]
    ps = [qcond_from(p) for p in inst["conditions"]]
    q = qhn.amalgamate_class(ps, n)
    space = PointSpace(q.window, x, cfg.budget)
    return {
        "shared-key": len({qhn.class_key(p, n) for p in ps}) == 1,
        "above-all-syntactic": all(qhn.leq_syntactic(p, q) for p in ps),
        "above-all-semantic": all(qhn.leq_semantic_q(p, q, x, cfg.budget) for p in ps),
        "pos-nonempty": bool(qhn.qpos_mask(q, space).any()),
        "result-valid": qhn.validate_cond(q, strict=False),
        "m-star-shift": q.m_star == ps[0].m_star + n + 2,
    }


# --- measure ----------------------------------------------------------------------------------


def _make_measure(rng, cfg, i):
    x = _alphabet(rng, cfg)
    n0 = rng.randint(1, 3 if x.size == 2 else 2)
    n1 = x.size ** (2 * n0) + rng.randint(1, 40)
    window = list(range(rng.randint(2, 8)))
    rng.shuffle(window)
    sigmas, free = [], window
    while free and len(sigmas) < 3:
        k = rng.randint(1, len(free))
        sigmas.append(random_pf(rng, free[:k], x, min_size=k))
        free = free[k:]
    overlapping = [random_pf(rng, range(6), x) for _ in range(rng.randint(1, 3))]
    return {"alphabet": alphabet_to(x), "n0": n0, "n1": n1, "sigmas": [pf_to(s) for s in sigmas],
            "overlapping": [pf_to(s) for s in overlapping]}


def _enumerated_measure(sigmas, x: Alphabet, budget: int) -> Fraction:
    coords = sorted(set().union(*(s.dom for s in sigmas))) if sigmas else []
    space = PointSpace(coords, x, budget)
    return Fraction(int(space.avoid_all(sigmas).sum()), len(space))


def _check_measure(inst, cfg):
    x = alphabet_from(inst["alphabet"])
    n0, n1 = inst["n0"], inst["n1"]
    mu = block_measure(x.size, n0, n1)
    sigmas = [pf_from(s) for s in inst["sigmas"]]
    overlapping = [pf_from(s) for s in inst["overlapping"]]
    product = Fraction(1)
    for s in sigmas:
        product *= 1 - Fraction(1, x.size ** len(s))
    return {
        "block-bound": certify_at_most_exp_neg(mu, x.size ** n0),
        "product-formula": avoidance_measure(sigmas, x.size) == product == _enumerated_measure(sigmas, x, cfg.budget),
        "inclusion-exclusion": avoidance_measure(overlapping, x.size) == _enumerated_measure(overlapping, x, cfg.budget),
    }


# --- invariance ---------------------------------------------------------------------------------


def _make_invariance(rng, cfg, i):
    x = _alphabet(rng, cfg)
    t = random_creature(rng, x, max_z=4, max_delta=4, min_n=0)
    v = PartialFunction((c, rng.randrange(x.size)) for c in sorted(t.z))
    targets = rng.sample(range(12), len(t.z))
    pi = dict(zip(sorted(t.z), targets))
    return {"alphabet": alphabet_to(x), "creature": creature_to(t), "v": pf_to(v),
            "pi": [[a, b] for a, b in sorted(pi.items())]}


def _check_invariance(inst, cfg):
    x = alphabet_from(inst["alphabet"])
    t, v = creature_from(inst["creature"]), pf_from(inst["v"])
    pi = {a: b for a, b in inst["pi"]}
    tv, tp = translate_creature(t, v, x), permute_creature(t, pi)
    n = brute_norm(t.delta) if t.delta else None
    vals = {PartialFunction(b) for b in brute_value_set(t.z, t.delta, x)}
    shifted = {translate_pf(w, v, x) for w in vals}
    moved = {PartialFunction((pi[k], s) for k, s in w.items) for w in vals}
    ident = permute_creature(t, {c: c for c in t.z})
    return {
        "translate-norm": (brute_norm(tv.delta) if tv.delta else None) == n and tv.n == t.n,
        "translate-values": {PartialFunction(b) for b in brute_value_set(tv.z, tv.delta, x)} == shifted,
        "permute-norm": (brute_norm(tp.delta) if tp.delta else None) == n and tp.n == t.n,
        "permute-values": {PartialFunction(b) for b in brute_value_set(tp.z, tp.delta, x)} == moved,
        "identity-embedding": ident == t,
    }



def _all_pfs(coords, size: int) -> List[PartialFunction]:
    out = []
    for vals in itertools.product([None] + list(range(size)), repeat=len(coords)):
        eta = PartialFunction((c, v) for c, v in zip(coords, vals) if v is not None)
        if eta:
            out.append(eta)
    return out


def exhaustive_invariance(max_z: int = 4, sizes=(2, 3), max_delta: int = 2, full_below: int = 2) -> tuple:
    """``(checks, failures)`` for translation and permutation invariance.

    For ``|z| <= max_z`` and cyclic ``X`` of each size, every family of at most
    ``max_delta`` constraints is moved by every vector of ``X^z`` and every
    permutation of ``z`` (onto shifted coordinates); when ``|z| <= full_below``
    over Z_2 every family is used.  The packing number is recomputed by the
    brute-force oracle and value sets are compared on the enumerated point space,
    where translation is a cyclic roll and permutation a transpose.
    """
    checks, failures = 0, []
    for size in sizes:
        x = Alphabet.cyclic(size)
        for k in range(1, max_z + 1):
            z = list(range(k))
            pfs = _all_pfs(z, size)
            top = len(pfs) if size == 2 and k <= full_below else min(max_delta, len(pfs))
            source, target = PointSpace(z, x), PointSpace(range(10, 10 + k), x)
            norms: Dict[frozenset, int] = {}
            masks: Dict[frozenset, np.ndarray] = {}

            def norm(delta) -> int:
                key = frozenset(delta)
                if key not in norms:
                    norms[key] = brute_norm(key)
                return norms[key]

            def values(space: PointSpace, delta) -> np.ndarray:
                key = frozenset(delta)
                if key not in masks:
                    masks[key] = space.avoid_all(key)
                return masks[key]

            # where each point lands: moved[r] = values[index[r]]
            grid = np.arange(len(source)).reshape((size,) * k)
            vectors = []
            for shift in itertools.product(range(size), repeat=k):
                index = np.roll(grid, shift=shift, axis=tuple(range(k))).ravel()
                vectors.append((PartialFunction(zip(z, shift)), index))
            perms = []
            for perm in itertools.permutations(range(k)):
                # axis j of the target holds the coordinate c with perm[c] = j
                index = np.transpose(grid, axes=[perm.index(j) for j in range(k)]).ravel()
                perms.append(({c: 10 + perm[c] for c in z}, index))
            for r in range(1, top + 1):
                for delta in itertools.combinations(pfs, r):
                    t = Creature.make(z, delta)
                    n = norm(delta)
                    base = values(source, delta)
                    for v, index in vectors:
                        tv = translate_creature(t, v, x)
                        checks += 1
                        if not (tv.n == n == norm(tv.delta)
                                and np.array_equal(values(source, tv.delta), base[index])):
                            failures.append(("translate", size, t, v))
                    for pi, index in perms:
                        tp = permute_creature(t, pi)
                        checks += 1
                        if not (tp.n == n == norm(tp.delta)
                                and np.array_equal(values(target, tp.delta), base[index])):
                            failures.append(("permute", size, t, pi))
    return checks, failures

SUITES: Dict[str, Suite] = {s.name: s for s in [
    Suite("norm-baseline", "n(z, {0_z}) = |z| for |z| <= 6 over Z_2 and Z_3", 12, _make_baseline, _check_baseline),
    Suite("witness", "Hall witness lies in the enumerated value set", 1000, _make_witness, _check_witness),
    Suite("norm-bounds", "restriction, glue and link keep the packing number up", 1000, _make_bounds, _check_bounds),
    Suite("axioms", "composition and decomposition axioms on glue and cut outputs", 500, _make_axioms, _check_axioms),
    Suite("invariance", "translation and permutation preserve norms and value sets", 500,
          _make_invariance, _check_invariance),
    Suite("order-soundness", "certified truncated pairs have nested POS sets", 300, _make_order, _check_order),
    Suite("amalgamation", "pairs and triples amalgamate with replaying certificates", 100,
          _make_amalgam, _check_amalgam),
    Suite("qhn-order", "syntactic order agrees with POS inclusion", 2000, _make_qorder, _check_qorder),
    Suite("qhn-compat", "constructive compatibility agrees with enumeration", 300, _make_qcompat, _check_qcompat),
    Suite("linked-classes", "class-sharing tuples have verified common upper bounds", 100,
          _make_classes, _check_classes),
    Suite("measure", "exact avoidance measures and the e^{-N} block bound", 300, _make_measure, _check_measure),
]}


def make_instance(name: str, cfg: SuiteConfig, index: int) -> Dict[str, Any]:
    return SUITES[name].make(rng_for(cfg.seed, index, name), cfg, index)


def check_instance(name: str, inst: Dict[str, Any], cfg: SuiteConfig) -> Dict[str, bool]:
    try:
        return {k: bool(v) for k, v in SUITES[name].check(inst, cfg).items()}
    except NormbenchError as exc:
        return {f"no-error ({exc.code})": False}


def _run_one(args) -> tuple:
    name, cfg, index = args
    inst = make_instance(name, cfg, index)
    return index, inst, check_instance(name, inst, cfg)


def run_suite(name: str, cfg: Optional[SuiteConfig] = None) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(name)
    cfg = cfg or SuiteConfig()
    suite = SUITES[name]
    count = suite.default_count if cfg.count is None else cfg.count
    start = time.perf_counter()
    jobs = [(name, cfg, i) for i in range(count)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            results = list(pool.map(_run_one, jobs, chunksize=max(1, count // (4 * cfg.workers))))
    else:
        results = [_run_one(j) for j in jobs]
    report = SuiteReport(name, cfg.echo(), count)
    for index, inst, res in sorted(results, key=lambda r: r[0]):
        for prop, ok in res.items():
            c = report.counts.setdefault(prop, {"pass": 0, "fail": 0})
            c["pass" if ok else "fail"] += 1
            if not ok:
                report.counterexamples.append({"schema": 1, "suite": name, "index": index,
                                               "property": prop, "config": cfg.echo(), "instance": inst})
    report.seconds = time.perf_counter() - start
    return report


def replay(counterexample: Dict[str, Any], budget: int = DEFAULT_BUDGET) -> Dict[str, bool]:
    """Rerun the checks of one stored counterexample."""
    cfg = SuiteConfig(budget=budget)
    return check_instance(counterexample["suite"], counterexample["instance"], cfg)
