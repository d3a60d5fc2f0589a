"""Conditions ``(w, σ_0, σ_1, ...)`` with a block partition, on a finite window.

A norm sequence is only known up to a finite prefix ``M``; a condition lists
finitely many σ's, each assigned to a block ``V_m`` with ``m* <= m < M``.
Every fraction of the form ``n⁰_m / 2^k`` is compared after clearing the
denominator.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .core import (
    DEFAULT_BUDGET,
    Alphabet,
    PartialFunction,
    PointSpace,
    invert_embedding,
    permute_pf,
    pf_union,
)
from .errors import (
    IncompatibleFunctions,
    InsufficientCapacity,
    InvalidCondition,
    MissingCoordinate,
    NoSelection,
    NotAligned,
    TruncationTooShort,
)
from .matching import distinct_representatives, maximum_matching
from .measure import avoidance_measure, block_measure, certify_at_most_exp_neg


@dataclass(frozen=True)
class NormSeqPrefix:
    pairs: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((int(a), int(b)) for a, b in self.pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def n0(self, m: int) -> int:
        return self.pairs[m][0]

    def n1(self, m: int) -> int:
        return self.pairs[m][1]


@dataclass
class SeqReport:
    violations: List[str] = field(default_factory=list)
    waived: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def seq_report(s: NormSeqPrefix, strict: bool = True) -> SeqReport:
    """Check the finitary clauses on the prefix.

    Relaxed mode keeps ``1 <= n⁰_m <= n¹_m < n⁰_{m+1}`` and waives the lower
    bound ``4 < n⁰_m`` and the growth clause; waived failures are listed but do
    not invalidate the prefix.
    """
    rep = SeqReport()

    def flag(message: str, waivable: bool) -> None:
        (rep.waived if waivable and not strict else rep.violations).append(message)

    total = 0
    for m, (a, b) in enumerate(s.pairs):
        if a < 1:
            rep.violations.append(f"m={m}: n0={a} is not positive")
        if not 4 < a:
            flag(f"m={m}: n0={a} is not above 4", True)
        if not a <= b:
            rep.violations.append(f"m={m}: n1={b} < n0={a}")
        if m + 1 < len(s) and not b < s.n0(m + 1):
            rep.violations.append(f"m={m}: n1={b} is not below the next n0={s.n0(m + 1)}")
        if not 2 ** (2 * (m + 2)) * total < a:
            flag(f"m={m}: growth clause fails, 2^{2 * (m + 2)} * {total} >= {a}", True)
        total += a * b
    return rep


def validate_seq(s: NormSeqPrefix, strict: bool = True) -> bool:
    return seq_report(s, strict).ok


def minimal_strict_sequence(length: int, first: int = 5) -> NormSeqPrefix:
    """The pointwise least prefix passing strict mode with ``n⁰_0 = first`` and ``n¹_m = n⁰_m``."""
    pairs, total, prev = [], 0, first - 1
    for m in range(length):
        a = max(prev + 1, 2 ** (2 * (m + 2)) * total + 1, 5)
        pairs.append((a, a))
        total += a * a
        prev = a
    return NormSeqPrefix(tuple(pairs))


@dataclass(frozen=True)
class QCondition:
    w: PartialFunction
    sigmas: Tuple[PartialFunction, ...]
    m_star: int
    # (m, indices) pairs sorted by m; absent blocks are empty
    blocks: Tuple[Tuple[int, Tuple[int, ...]], ...]
    seq: NormSeqPrefix
    window: frozenset

    def __post_init__(self):
        blocks = self.blocks.items() if isinstance(self.blocks, Mapping) else self.blocks
        norm = tuple(sorted((int(m), tuple(sorted(int(j) for j in idx))) for m, idx in blocks if idx))
        object.__setattr__(self, "blocks", norm)
        object.__setattr__(self, "sigmas", tuple(self.sigmas))
        object.__setattr__(self, "window", frozenset(self.window))

    def block(self, m: int) -> Tuple[int, ...]:
        for k, idx in self.blocks:
            if k == m:
                return idx
        return ()

    def block_map(self) -> Dict[int, Tuple[int, ...]]:
        return dict(self.blocks)

    def block_of(self, j: int) -> int:
        for m, idx in self.blocks:
            if j in idx:
                return m
        raise KeyError(j)

    def blocks_in(self, lo: int, hi: float) -> List[Tuple[int, int]]:
        """``(m, j)`` for every σ index in blocks ``lo <= m < hi``."""
        return [(m, j) for m, idx in self.blocks if lo <= m < hi for j in idx]


def cond_report(p: QCondition, strict: bool = True) -> List[str]:
    out = [f"sequence: {v}" for v in seq_report(p.seq, strict).violations]
    if p.m_star < 0:
        out.append("m* is negative")
    mentioned = set(p.w.dom)
    if not p.w.dom <= p.window:
        out.append("stem leaves the window")
    for j, s in enumerate(p.sigmas):
        if not s:
            out.append(f"sigma {j} is empty")
        if not s.dom <= p.window:
            out.append(f"sigma {j} leaves the window")
        if mentioned & s.dom:
            out.append(f"sigma {j} overlaps the stem or an earlier sigma")
        mentioned |= s.dom
    seen: List[int] = []
    for m, idx in p.blocks:
        if not p.m_star <= m < len(p.seq):
            out.append(f"block {m} outside [m*, M) = [{p.m_star}, {len(p.seq)})")
            seen.extend(idx)
            continue
        if len(idx) > p.seq.n1(m) * 2 ** p.m_star:
            out.append(f"block {m} has {len(idx)} > n1*2^m* = {p.seq.n1(m) * 2 ** p.m_star} members")
        for j in idx:
            if 0 <= j < len(p.sigmas) and len(p.sigmas[j]) * 2 ** p.m_star < p.seq.n0(m):
                out.append(f"sigma {j} in block {m} has size {len(p.sigmas[j])} < n0/2^m*")
        seen.extend(idx)
    if sorted(seen) != list(range(len(p.sigmas))):
        out.append("blocks do not partition the sigma indices")
    return out


def validate_cond(p: QCondition, strict: bool = True) -> bool:
    return not cond_report(p, strict)


def qpos_member(p: QCondition, x: Mapping[int, int]) -> bool:
    x = x.as_dict() if isinstance(x, PartialFunction) else x
    missing = p.window - set(x)
    if missing:
        raise MissingCoordinate(f"point misses {sorted(missing)}")
    return p.w.subfunction_of(x) and not any(s.subfunction_of(x) for s in p.sigmas)


def qpos_mask(p: QCondition, space: PointSpace) -> np.ndarray:
    return space.cylinder(p.w) & space.avoid_all(p.sigmas)


def _contradicts(w: PartialFunction, s: PartialFunction) -> bool:
    return any(k in w and w[k] != v for k, v in s.items)


def leq_syntactic(p: QCondition, q: QCondition) -> bool:
    """``w^p ⊆ w^q`` and every σ^p_i contains some σ^q_j or is contradicted by ``w^q``."""
    if not p.w.subfunction_of(q.w):
        return False
    for s in p.sigmas:
        if _contradicts(q.w, s):
            continue
        if not any(t.subfunction_of(s) for t in q.sigmas):
            return False
    return True


def leq_semantic_q(p: QCondition, q: QCondition, alphabet: Alphabet, budget: int = DEFAULT_BUDGET) -> bool:
    """``POS(q) ⊆ POS(p)`` by enumeration over the union of the windows."""
    space = PointSpace(p.window | q.window, alphabet, budget)
    return not np.any(qpos_mask(q, space) & ~qpos_mask(p, space))


def compatible_bruteforce(p0: QCondition, p1: QCondition, alphabet: Alphabet,
                          budget: int = DEFAULT_BUDGET) -> Optional[PartialFunction]:
    """First point of ``POS(p0) ∩ POS(p1)`` in enumeration order, or ``None``."""
    space = PointSpace(p0.window | p1.window, alphabet, budget)
    hits = np.flatnonzero(qpos_mask(p0, space) & qpos_mask(p1, space))
    return space.point(int(hits[0])) if len(hits) else None


def hall_select_u(requests: Sequence[Tuple[Iterable[int], int]]) -> List[frozenset]:
    """Pairwise disjoint ``u_i ⊆ dom_i`` with ``|u_i| = size_i``.

    Each request is expanded into ``size_i`` copies of its coordinate set and a
    system of distinct representatives is matched; the copies of request ``i``
    give ``u_i``.  Requests may pass a PartialFunction for its domain.
    """
    copies, owner = [], []
    for i, (dom, size) in enumerate(requests):
        coords = sorted(dom.dom if isinstance(dom, PartialFunction) else set(dom))
        copies.extend([coords] * size)
        owner.extend([i] * size)
    reps = distinct_representatives(copies)
    if reps is None:
        matched = sum(r is not None for r in maximum_matching(copies))
        raise NoSelection(f"only {matched} of {len(copies)} representatives can be chosen")
    out: List[set] = [set() for _ in requests]
    for i, r in zip(owner, reps):
        out[i].add(r)
    return [frozenset(u) for u in out]


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _check_same_sequence(ps: Sequence[QCondition]) -> NormSeqPrefix:
    seq = ps[0].seq
    if any(p.seq != seq for p in ps):
        raise InvalidCondition("conditions use different norm sequences")
    return seq


def compatible_constructive(p0: QCondition, p1: QCondition, eta: Optional[Mapping[int, int]] = None,
                            alphabet: Optional[Alphabet] = None, strict: bool = True,
                            budget: int = DEFAULT_BUDGET) -> Optional[QCondition]:
    """A common upper bound built from a point ``eta`` of ``POS(p0) ∩ POS(p1)``.

    Without ``eta`` the brute-force oracle supplies one (needs ``alphabet``).
    Returns ``None`` when the intersection is empty.
    """
    seq = _check_same_sequence([p0, p1])
    if eta is None:
        if alphabet is None:
            raise ValueError("an alphabet is needed to search for a common point")
        found = compatible_bruteforce(p0, p1, alphabet, budget)
        if found is None:
            return None
        eta = found.as_dict()
    eta = eta.as_dict() if isinstance(eta, PartialFunction) else dict(eta)
    if not (qpos_member(p0, eta) and qpos_member(p1, eta)):
        raise InvalidCondition("the supplied point is not in both POS sets")
    stem_dom = p0.w.dom | p1.w.dom
    m_star = p0.m_star + p1.m_star + 3
    while 2 ** (m_star + 1) <= len(stem_dom):
        m_star += 1
    a = set(stem_dom)
    for p in (p0, p1):
        for _, j in p.blocks_in(p.m_star, m_star):
            s = p.sigmas[j]
            a.add(min(k for k, v in s.items if eta[k] != v))
    high = [(p, m, j) for p in (p0, p1) for m, j in p.blocks_in(m_star, len(seq))]
    if m_star < len(seq):
        if not len(a) * 2 ** m_star < seq.n0(m_star):
            if strict:
                raise TruncationTooShort(f"|a|={len(a)} is not below n0/2^m* at m*={m_star}")
    elif strict:
        raise TruncationTooShort(f"m*={m_star} lies beyond the prefix length {len(seq)}")
    requests = []
    for p, m, j in high:
        shrunk = p.sigmas[j].without(a)
        requests.append((shrunk, _ceil_div(seq.n0(m), 2 ** m_star)))
    us = hall_select_u(requests)
    sigmas, blocks = [], {}
    for (p, m, j), u in zip(high, us):
        blocks.setdefault(m, []).append(len(sigmas))
        sigmas.append(p.sigmas[j].restrict(u))
    w = PartialFunction((k, eta[k]) for k in sorted(a))
    q = QCondition(w, tuple(sigmas), m_star, blocks, seq, p0.window | p1.window)
    if not (leq_syntactic(p0, q) and leq_syntactic(p1, q)):
        raise InvalidCondition("constructed bound is not above both inputs")
    return q


def class_key(p: QCondition, n: int) -> str:
    """Canonical text of ``(m*, w, V_m and σ_j for m* <= m < m*+n+2)``."""
    lo, hi = p.m_star, p.m_star + n + 2
    blocks = {str(m): list(p.block(m)) for m in range(lo, hi)}
    sigmas = {str(j): [list(kv) for kv in p.sigmas[j].items] for _, j in p.blocks_in(lo, hi)}
    return json.dumps({"m_star": p.m_star, "w": [list(kv) for kv in p.w.items],
                       "blocks": blocks, "sigmas": sigmas}, sort_keys=True, separators=(",", ":"))


def _contradicting_stem(w: PartialFunction, sigmas: Iterable[PartialFunction]) -> PartialFunction:
    """Extend ``w`` over every coordinate of ``sigmas`` with the lowest other symbol."""
    extra = [(k, 1 if v == 0 else 0) for s in sigmas for k, v in s.items]
    return pf_union(w, PartialFunction(extra))


def amalgamate_class(ps: Sequence[QCondition], n: int) -> QCondition:
    """Common upper bound of at most ``n+1`` conditions sharing ``class_key(·, n)``."""
    if not ps:
        raise ValueError("nothing to amalgamate")
    if len(ps) > n + 1:
        raise ValueError(f"{len(ps)} conditions exceed n+1 = {n + 1}")
    seq = _check_same_sequence(ps)
    key = class_key(ps[0], n)
    if any(class_key(p, n) != key for p in ps):
        raise InvalidCondition("conditions do not share a class key")
    m_star = ps[0].m_star
    cutoff = m_star + n + 2
    high = [(l, m, j) for l, p in enumerate(ps) for m, j in p.blocks_in(cutoff, len(seq))]
    requests = [(ps[l].sigmas[j], seq.n0(m) // 2 ** (m_star + n + 1) + 1) for l, m, j in high]
    try:
        us = hall_select_u(requests)
    except NoSelection as exc:
        raise InsufficientCapacity(str(exc)) from exc
    sigmas, blocks = [], {}
    for (l, m, j), u in zip(high, us):
        blocks.setdefault(m, []).append(len(sigmas))
        sigmas.append(ps[l].sigmas[j].restrict(u))
    low = [ps[0].sigmas[j] for _, j in ps[0].blocks_in(m_star, cutoff)]
    w = _contradicting_stem(ps[0].w, low)
    window = frozenset().union(*(p.window for p in ps))
    q = QCondition(w, tuple(sigmas), cutoff, blocks, seq, window)
    if not all(leq_syntactic(p, q) for p in ps):
        raise InvalidCondition("amalgam is not above every input")
    return q


def normal_size(p: QCondition, m: int, m_star: Optional[int] = None) -> int:
    k = p.m_star if m_star is None else m_star
    return p.seq.n0(m) // 2 ** k + 1


def is_normal(p: QCondition) -> bool:
    return all(len(p.sigmas[j]) == normal_size(p, m) for m, j in p.blocks_in(p.m_star, len(p.seq)))


def normalize_dense(p: QCondition) -> QCondition:
    """Shrink every σ_j to its lowest ``⌊n⁰_m/2^{m*}⌋+1`` coordinates.

    A σ whose size equals ``n⁰_m/2^{m*}`` exactly cannot reach the normal size;
    then the block ``V_{m*}`` is contradicted into the stem and ``m*`` goes up
    by one, which halves the targets, and the shrink is retried.
    """
    q = p
    while True:
        short = [j for m, j in q.blocks_in(q.m_star, len(q.seq)) if len(q.sigmas[j]) < normal_size(q, m)]
        if not short:
            break
        q = _raise_m_star(q)
    sigmas = list(q.sigmas)
    for m, j in q.blocks_in(q.m_star, len(q.seq)):
        keep = sorted(sigmas[j].dom)[:normal_size(q, m)]
        sigmas[j] = sigmas[j].restrict(keep)
    return QCondition(q.w, tuple(sigmas), q.m_star, q.blocks, q.seq, q.window)


def _raise_m_star(p: QCondition) -> QCondition:
    dropped = set(p.block(p.m_star))
    w = _contradicting_stem(p.w, [p.sigmas[j] for j in sorted(dropped)])
    renumber, sigmas = {}, []
    for j, s in enumerate(p.sigmas):
        if j not in dropped:
            renumber[j] = len(sigmas)
            sigmas.append(s)
    blocks = {m: [renumber[j] for j in idx] for m, idx in p.blocks if m != p.m_star}
    return QCondition(w, tuple(sigmas), p.m_star + 1, blocks, p.seq, p.window)


# --- measure and category witnesses ---------------------------------------------------


@dataclass
class BlockMeasure:
    k: int
    n0: int
    n1: int
    measure: Fraction
    exponent: int  # N in the bound e^{-N}
    bound_applies: bool  # n1 > |X|^{2 n0}
    certified: bool  # measure <= e^{-N} certified exactly


@dataclass
class NullRefinement:
    q: QCondition
    blocks: List[BlockMeasure]
    measure: Fraction
    witness: Optional[PartialFunction]


def null_refinement(p: QCondition, alphabet: Alphabet, strict: bool = False) -> NullRefinement:
    """Add fresh σ blocks whose avoidance measure is below ``e^{-|X|^{n⁰_k}}``.

    ``m*`` is the least index above ``m*(p)+5`` from which ``n¹_k > |X|^{2n⁰_k}``
    holds to the end of the prefix; σ_{k,j} for ``j < n¹_k`` get disjoint domains of
    size ``n⁰_k`` (lowest free window coordinates, value 0) avoiding the stem and
    the σ's of blocks below ``m*``.
    """
    if strict and not validate_cond(p, True):
        raise InvalidCondition("; ".join(cond_report(p, True)))
    seq, size = p.seq, alphabet.size
    start = None
    for m in range(p.m_star + 6, len(seq)):
        if all(seq.n1(k) > size ** (2 * seq.n0(k)) for k in range(m, len(seq))):
            start = m
            break
    if start is None:
        raise TruncationTooShort("no index above m*(p)+5 where n1 > |X|^(2 n0) holds to the end of the prefix")
    blocked = set(p.w.dom)
    for _, j in p.blocks_in(p.m_star, start):
        blocked |= p.sigmas[j].dom
    free = iter(c for c in sorted(p.window) if c not in blocked)
    sigmas, blocks, report = [], {}, []
    for k in range(start, len(seq)):
        n0, n1 = seq.n0(k), seq.n1(k)
        for _ in range(n1):
            dom = [next(free, None) for _ in range(n0)]
            if None in dom:
                raise TruncationTooShort(f"window too small for block {k}")
            blocks.setdefault(k, []).append(len(sigmas))
            sigmas.append(PartialFunction.constant(dom, 0))
        mu = block_measure(size, n0, n1)
        exponent = size ** n0
        report.append(BlockMeasure(k, n0, n1, mu, exponent, n1 > size ** (2 * n0),
                                   certify_at_most_exp_neg(mu, exponent)))
    q = QCondition(p.w, tuple(sigmas), start, blocks, seq, p.window)
    total = Fraction(1)
    for b in report:
        total *= b.measure
    return NullRefinement(q, report, total, _common_point(p, q, alphabet))


def _common_point(p: QCondition, q: QCondition, alphabet: Alphabet) -> Optional[PartialFunction]:
    """A point of ``POS(p) ∩ POS(q)``: stems merged, one disagreeing coordinate per σ."""
    try:
        w = pf_union(p.w, q.w)
    except IncompatibleFunctions:
        return None
    family = [s for s in p.sigmas + q.sigmas if not _contradicts(w, s)]
    doms = [sorted(s.dom - w.dom) for s in family]
    reps = distinct_representatives(doms)
    if reps is None:
        return None
    x = {c: 0 for c in p.window | q.window}
    x.update(w.as_dict())
    for s, r in zip(family, reps):
        x[r] = alphabet.other_than(s[r])
    point = PartialFunction(x)
    if qpos_member(p, x) and qpos_member(q, x):
        return point
    return None


@dataclass
class NowhereDense:
    holds: bool
    stem_coords: Tuple[int, ...]
    reason: str

    def __bool__(self) -> bool:
        return self.holds


def default_stem_coords(p: QCondition) -> Tuple[int, ...]:
    """Window coordinates below the last-starting σ; the whole window when there are no σ's."""
    if not p.sigmas:
        return tuple(sorted(p.window))
    last = max(min(s.dom) for s in p.sigmas)
    return tuple(c for c in sorted(p.window) if c < last)


def nowhere_dense_check(p: QCondition, stem_coords: Optional[Iterable[int]] = None) -> NowhereDense:
    """Every stem on ``stem_coords`` has an extension on the window outside ``POS(p)``.

    A stem fails exactly when it contains ``w`` and contradicts every σ; since
    the σ's have disjoint domains such a stem exists iff ``dom(w)`` lies inside
    the stem coordinates and every σ meets them.
    """
    coords = tuple(sorted(set(default_stem_coords(p) if stem_coords is None else stem_coords)))
    s = set(coords)
    if not p.w.dom <= s:
        c = min(p.w.dom - s)
        return NowhereDense(True, coords, f"any stem extends to contradict the stem at {c}")
    for j, sig in enumerate(p.sigmas):
        if not sig.dom & s:
            return NowhereDense(True, coords, f"sigma {j} avoids the stem coordinates")
    return NowhereDense(False, coords, "a stem containing w and contradicting every sigma has no exit")


def nowhere_dense_bruteforce(p: QCondition, alphabet: Alphabet, stem_coords: Optional[Iterable[int]] = None,
                             budget: int = DEFAULT_BUDGET) -> bool:
    coords = sorted(set(default_stem_coords(p) if stem_coords is None else stem_coords))
    space = PointSpace(p.window, alphabet, budget)
    outside = ~qpos_mask(p, space)
    if not coords:
        return bool(outside.any())
    stems = space.restrict_rows(coords).astype(np.int64)
    code = np.zeros(len(space), dtype=np.int64)
    for col in range(stems.shape[1]):
        code = code * alphabet.size + stems[:, col]
    exits = np.zeros(alphabet.size ** len(coords), dtype=bool)
    exits[code[outside]] = True
    return bool(exits.all())


# --- projection along an embedding --------------------------------------------------------


def aligned(p: QCondition, pi: Mapping[int, int]) -> bool:
    rng = set(pi.values())
    return all(s.dom <= rng or not (s.dom & rng) for s in p.sigmas)


def pullback_q(p: QCondition, pi: Mapping[int, int]) -> QCondition:
    """``(w∘π, σ_j∘π for σ_j inside rng π)`` with the blocks of ``p``."""
    if not aligned(p, pi):
        raise NotAligned("a sigma straddles the range of the embedding")
    inv = invert_embedding(pi)
    keep = [j for j, s in enumerate(p.sigmas) if s.dom <= set(inv)]
    renumber = {j: i for i, j in enumerate(keep)}
    sigmas = [permute_pf(p.sigmas[j], inv) for j in keep]
    blocks = {m: [renumber[j] for j in idx if j in renumber] for m, idx in p.blocks}
    w = permute_pf(p.w.restrict(inv), inv)
    window = frozenset(inv[c] for c in p.window if c in inv)
    return QCondition(w, tuple(sigmas), p.m_star, blocks, p.seq, window)


def project_pi_q(p: QCondition, pi: Mapping[int, int], r: QCondition) -> QCondition:
    """Strengthen ``p`` to ``p*`` whose points pull back along ``π`` into ``POS(r)``.

    ``r`` must lie above the pullback of ``p``.  With ``m* = m*(p)+m*(r)+1`` the
    low σ's (outside ``rng π`` from ``p``, images of ``r``'s) are contradicted in
    the stem at every coordinate; the high ones are kept.
    """
    if not aligned(p, pi):
        raise NotAligned("a sigma straddles the range of the embedding")
    seq = _check_same_sequence([p, r])
    base = pullback_q(p, pi)
    if not leq_syntactic(base, r):
        raise InvalidCondition("r is not above the pullback of p")
    if not r.window <= set(pi):
        raise NotAligned("r mentions coordinates outside the domain of the embedding")
    rng = set(pi.values())
    m_star = p.m_star + r.m_star + 1
    outside = [j for j, s in enumerate(p.sigmas) if not (s.dom & rng)]
    low_p = [p.sigmas[j] for m, j in p.blocks_in(p.m_star, m_star) if j in outside]
    low_r = [permute_pf(r.sigmas[i], pi) for _, i in r.blocks_in(r.m_star, m_star)]
    w = pf_union(p.w.without(rng), permute_pf(r.w, pi))
    w = _contradicting_stem(w, low_p + low_r)
    sigmas, blocks = [], {}
    for m, j in p.blocks_in(m_star, len(seq)):
        if j in outside:
            blocks.setdefault(m, []).append(len(sigmas))
            sigmas.append(p.sigmas[j])
    for m, i in r.blocks_in(m_star, len(seq)):
        blocks.setdefault(m, []).append(len(sigmas))
        sigmas.append(permute_pf(r.sigmas[i], pi))
    q = QCondition(w, tuple(sigmas), m_star, blocks, seq, p.window | frozenset(pi[c] for c in r.window))
    if not leq_syntactic(p, q):
        raise InvalidCondition("projection output is not above p")
    return q


def pullback_contained(p_star: QCondition, pi: Mapping[int, int], r: QCondition, alphabet: Alphabet,
                       budget: int = DEFAULT_BUDGET) -> bool:
    """Every point of ``POS(p*)`` composed with ``π`` lies in ``POS(r)``, by enumeration."""
    # x∘π avoids r's cylinders exactly when x avoids their images under π
    missing = [c for c in r.window if c not in pi or pi[c] not in p_star.window]
    if missing:
        raise NotAligned(f"coordinates {sorted(missing)} of r do not map into the window")
    space = PointSpace(p_star.window, alphabet, budget)
    pushed = space.cylinder(permute_pf(r.w, pi)) & space.avoid_all(permute_pf(s, pi) for s in r.sigmas)
    return not np.any(qpos_mask(p_star, space) & ~pushed)


def pos_measure(p: QCondition, alphabet: Alphabet) -> Fraction:
    """Lebesgue measure of ``POS(p)`` in ``X^ω``."""
    return Fraction(1, alphabet.size ** len(p.w)) * avoidance_measure(
        [s for s in p.sigmas if not _contradicts(p.w, s)], alphabet.size)
