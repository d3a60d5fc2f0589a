"""Truncated conditions ``(w, t_0, t_1, ...)`` over a finite window.

A condition fixes the stem ``w`` and covers the rest of the window with
creatures.  The order is generated by three moves (decide, compose,
decompose); a :class:`MoveCertificate` records a sequence of them and
:func:`leq_check` replays it.  :func:`amalgamate` builds a common upper bound
of several conditions sharing a stem, with a certificate from each.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

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
from .creatures import (
    NORM_BUDGET,
    Creature,
    cut,
    glue,
    link_all,
    norm_exceeds,
    permute_creature,
    sigma_bot_member,
    sigma_member,
    value_member,
)
from .errors import (
    IllegalComposition,
    IllegalDecision,
    IllegalDecomposition,
    InsufficientNorm,
    InvalidCertificate,
    InvalidCondition,
    MissingCoordinate,
    NormbenchError,
    NotAligned,
    TruncationTooShort,
)

FLAVOR_EMPTY = "empty"
FLAVOR_PLUS = "plus-infinity"
FLAVORS = (FLAVOR_EMPTY, FLAVOR_PLUS)


@dataclass(frozen=True)
class TruncatedCondition:
    window: FrozenSet[int]
    w: PartialFunction
    creatures: Tuple[Creature, ...]
    flavor: str = FLAVOR_PLUS
    # per-slot lower bounds on the norm, in log_8 units; None means undeclared
    bounds: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        object.__setattr__(self, "window", frozenset(self.window))
        object.__setattr__(self, "creatures", tuple(sorted(self.creatures, key=Creature.sort_key)))
        if self.bounds is not None:
            object.__setattr__(self, "bounds", tuple(self.bounds))

    def index_of(self, t: Creature) -> int:
        for i, s in enumerate(self.creatures):
            if s == t:
                return i
        raise KeyError(t)

    def all_constraints(self) -> List[PartialFunction]:
        return [eta for t in self.creatures for eta in t.delta]


def first_violation(p: TruncatedCondition, flavor: Optional[str] = None) -> Optional[str]:
    """The first broken clause of the condition, or ``None``."""
    flavor = p.flavor if flavor is None else flavor
    if flavor not in FLAVORS:
        return f"unknown flavor {flavor!r}"
    if not p.w.dom <= p.window:
        return "stem leaves the window"
    covered = set(p.w.dom)
    for i, t in enumerate(p.creatures):
        if not t.in_K:
            return f"creature {i} has packing number 0"
        if covered & t.z:
            return f"creature {i} overlaps earlier material at {sorted(covered & t.z)}"
        covered |= t.z
    if covered != set(p.window):
        missing = sorted(set(p.window) - covered)
        extra = sorted(covered - set(p.window))
        return f"stem and creatures do not partition the window (missing {missing}, extra {extra})"
    if flavor == FLAVOR_PLUS:
        for i, t in enumerate(p.creatures):
            if t.infinite:
                return f"creature {i} has infinite norm"
        if p.bounds is not None:
            if len(p.bounds) != len(p.creatures):
                return "bound profile length differs from the number of creatures"
            if any(a > b for a, b in zip(p.bounds, p.bounds[1:])):
                return "bound profile is not nondecreasing"
            for i, (t, b) in enumerate(zip(p.creatures, p.bounds)):
                if not norm_exceeds(t.n, b):
                    return f"creature {i} does not exceed its declared bound {b}"
    return None


def validate(p: TruncatedCondition, flavor: Optional[str] = None) -> bool:
    return first_violation(p, flavor) is None


def pos_member(p: TruncatedCondition, x: Union[PartialFunction, Mapping[int, int]]) -> bool:
    m = x.as_dict() if isinstance(x, PartialFunction) else dict(x)
    missing = p.window - set(m)
    if missing:
        raise MissingCoordinate(f"point misses {sorted(missing)}")
    return p.w.subfunction_of(m) and all(value_member(t, m) for t in p.creatures)


def pos_mask(p: TruncatedCondition, space: PointSpace) -> np.ndarray:
    return space.cylinder(p.w) & space.avoid_all(p.all_constraints())


# --- moves -------------------------------------------------------------------


@dataclass(frozen=True)
class Decide:
    indices: Tuple[int, ...]
    wstar: PartialFunction


@dataclass(frozen=True)
class ApplySigma:
    groups: Tuple[Tuple[int, ...], ...]
    results: Tuple[Creature, ...]


@dataclass(frozen=True)
class ApplySigmaBot:
    index: int
    pieces: Tuple[Creature, ...]


Move = Union[Decide, ApplySigma, ApplySigmaBot]


@dataclass(frozen=True)
class MoveCertificate:
    moves: Tuple[Move, ...] = ()

    def __len__(self) -> int:
        return len(self.moves)


def _intermediate(p: TruncatedCondition, w: PartialFunction, creatures: Iterable[Creature]) -> TruncatedCondition:
    q = replace(p, w=w, creatures=tuple(creatures), bounds=None)
    problem = first_violation(q, FLAVOR_EMPTY)
    if problem:
        raise InvalidCondition(problem)
    return q


def move_decide(p: TruncatedCondition, indices: Iterable[int], wstar: PartialFunction) -> TruncatedCondition:
    idx = sorted(set(indices))
    if any(not 0 <= i < len(p.creatures) for i in idx):
        raise IllegalDecision(f"creature index out of range in {idx}")
    if not p.w.subfunction_of(wstar):
        raise IllegalDecision("the new stem does not extend the old one")
    decided = [p.creatures[i] for i in idx]
    target = set(p.w.dom).union(*(t.z for t in decided))
    if wstar.dom != target:
        raise IllegalDecision("the new stem must cover exactly the old stem and the decided creatures")
    for i, t in zip(idx, decided):
        if not value_member(t, wstar.restrict(t.z)):
            raise IllegalDecision(f"decided value is forbidden by creature {i}")
    rest = [t for i, t in enumerate(p.creatures) if i not in set(idx)]
    return _intermediate(p, wstar, rest)


def move_sigma(p: TruncatedCondition, groups: Sequence[Sequence[int]],
               results: Sequence[Creature]) -> TruncatedCondition:
    flat = [i for g in groups for i in g]
    if sorted(flat) != list(range(len(p.creatures))) or any(not g for g in groups):
        raise IllegalComposition("groups must partition the creature indices into nonempty sets")
    if len(groups) != len(results):
        raise IllegalComposition("one replacement is needed per group")
    for g, r in zip(groups, results):
        if not sigma_member(r, [p.creatures[i] for i in g]):
            raise IllegalComposition(f"replacement for group {list(g)} is not a composition")
    return _intermediate(p, p.w, results)


def move_sigma_bot(p: TruncatedCondition, index: int, pieces: Sequence[Creature]) -> TruncatedCondition:
    if not 0 <= index < len(p.creatures):
        raise IllegalDecomposition(f"creature index {index} out of range")
    t = p.creatures[index]
    if not sigma_bot_member(list(pieces), t):
        raise IllegalDecomposition(f"pieces do not decompose creature {index}")
    rest = [s for i, s in enumerate(p.creatures) if i != index]
    return _intermediate(p, p.w, rest + list(pieces))


def apply_move(p: TruncatedCondition, move: Move) -> TruncatedCondition:
    if isinstance(move, Decide):
        return move_decide(p, move.indices, move.wstar)
    if isinstance(move, ApplySigma):
        return move_sigma(p, move.groups, move.results)
    if isinstance(move, ApplySigmaBot):
        return move_sigma_bot(p, move.index, move.pieces)
    raise TypeError(f"not a move: {move!r}")


def replay(p: TruncatedCondition, cert: MoveCertificate) -> TruncatedCondition:
    state = p
    for k, move in enumerate(cert.moves):
        try:
            state = apply_move(state, move)
        except NormbenchError as exc:
            raise InvalidCertificate(f"move {k} failed: {exc}") from exc
    return state


def same_condition(a: TruncatedCondition, b: TruncatedCondition) -> bool:
    return a.window == b.window and a.w == b.w and a.creatures == b.creatures


def leq_check(p: TruncatedCondition, q: TruncatedCondition, cert: MoveCertificate) -> bool:
    """``p ≤ q`` witnessed by replaying ``cert`` from ``p``."""
    if p.window != q.window or p.flavor != q.flavor:
        return False
    if not validate(q):
        return False
    return same_condition(replay(p, cert), q)


def leq_semantic(p: TruncatedCondition, q: TruncatedCondition, alphabet: Alphabet,
                 budget: int = DEFAULT_BUDGET) -> bool:
    """``POS(q) ⊆ POS(p)`` by enumeration of the window."""
    if p.window != q.window:
        raise InvalidCondition("conditions live on different windows")
    space = PointSpace(p.window, alphabet, budget)
    return not np.any(pos_mask(q, space) & ~pos_mask(p, space))


# --- certificate search --------------------------------------------------------


def _atoms(t: Creature, q: TruncatedCondition) -> List[Tuple[FrozenSet[int], Optional[Creature]]]:
    """Pieces of ``dom[t]`` cut out by the partition of ``q``; ``None`` marks stem coordinates."""
    out = []
    in_stem = t.z & q.w.dom
    if in_stem:
        out.append((frozenset(in_stem), None))
    for s in q.creatures:
        part = t.z & s.z
        if part:
            out.append((frozenset(part), s))
    return sorted(out, key=lambda a: min(a[0]))


def _piece_choices(t: Creature, q: TruncatedCondition, bound: int) -> Optional[List[Creature]]:
    atoms = _atoms(t, q)
    options = []
    for eta in t.sorted_delta():
        feasible = []
        for k, (part, target) in enumerate(atoms):
            nu = eta.restrict(part)
            if not nu:
                continue
            if target is None:
                if not nu.subfunction_of(q.w):
                    feasible.append(k)
            elif nu in target.delta:
                feasible.append(k)
        if not feasible:
            return None
        options.append(feasible)
    etas = t.sorted_delta()
    for tries, choice in enumerate(itertools.product(*options)):
        if tries >= bound:
            return None
        deltas: List[set] = [set() for _ in atoms]
        for eta, k in zip(etas, choice):
            deltas[k].add(eta.restrict(atoms[k][0]))
        pieces = [Creature.make(part, d) for (part, _), d in zip(atoms, deltas)]
        if all(s.in_K for s in pieces):
            return pieces
    return None


def search_certificate(p: TruncatedCondition, q: TruncatedCondition,
                       bound: int = 4096) -> Optional[MoveCertificate]:
    """Bounded search for a split/decide/compose certificate from ``p`` to ``q``.

    Each creature of ``p`` is split along the partition of ``q``; at most
    ``bound`` assignments of constraints to pieces are tried per creature.  A
    ``None`` result is not a proof that ``p ≰ q``.
    """
    if p.window != q.window or not p.w.subfunction_of(q.w) or not validate(q):
        return None
    moves: List[Move] = []
    state = p
    try:
        for t in p.creatures:
            pieces = _piece_choices(t, q, bound)
            if pieces is None:
                return None
            if len(pieces) > 1:
                move = ApplySigmaBot(state.index_of(t), tuple(pieces))
                state = apply_move(state, move)
                moves.append(move)
        decided = [i for i, s in enumerate(state.creatures) if s.z <= q.w.dom]
        if decided:
            move = Decide(tuple(decided), q.w)
            state = apply_move(state, move)
            moves.append(move)
        elif state.w != q.w:
            return None
        groups = []
        for target in q.creatures:
            groups.append(tuple(i for i, s in enumerate(state.creatures) if s.z <= target.z))
        move = ApplySigma(tuple(groups), q.creatures)
        state = apply_move(state, move)
        moves.append(move)
    except NormbenchError:
        return None
    cert = MoveCertificate(tuple(moves))
    return cert if same_condition(state, q) else None


# --- amalgamation ----------------------------------------------------------------

Slack = Callable[[int], int]


def safe_slack(n_conditions: int) -> Slack:
    """Packing-number thresholds that make amalgamation of ``n_conditions`` inputs succeed.

    Cutting halves the packing number at worst and the balanced link tree halves it
    ``⌈log2 n_conditions⌉`` more times.  A creature in block ``i >= 1`` reaches past
    ``m_{i-1}``, so it starts above ``slack(i-1)`` and the linked creature of block
    ``i`` keeps packing number at least ``max(1, i)``.
    """
    levels = math.ceil(math.log2(n_conditions)) if n_conditions > 1 else 0
    factor = 2 ** (1 + levels)
    return lambda i: factor * (i + 1) - 1


def exponential_slack(n: int) -> Slack:
    """Strict thresholds: norm above ``n + 5 + i``, i.e. packing number above ``8^(n+5+i)``."""
    return lambda i: 8 ** (n + 5 + i)


@dataclass
class Amalgam:
    q: TruncatedCondition
    certificates: List[MoveCertificate]
    boundaries: List[int]
    steps: List[dict] = field(default_factory=list)


def _inside(t: Creature, lo: float, hi: float) -> bool:
    return lo <= min(t.z) and max(t.z) < hi


def _choose_boundaries(ps: Sequence[TruncatedCondition], slack: Slack) -> List[int]:
    window = sorted(ps[0].window)
    end = window[-1] + 1
    lo = max(ps[0].w.dom) + 1 if ps[0].w else 0
    candidates = sorted({c + 1 for c in window if c + 1 >= lo} | {end})

    def has_creature(a: float, b: float) -> bool:
        return all(any(_inside(t, a, b) for t in p.creatures) for p in ps)

    def tail_ok(m: int) -> bool:
        return m == end or has_creature(m, end)

    m0 = next((m for m in candidates if has_creature(-math.inf, m) and tail_ok(m)), None)
    if m0 is None:
        raise TruncationTooShort("some condition has no creature inside the window")
    bounds = [m0]
    while bounds[-1] < end:
        prev, i = bounds[-1], len(bounds)
        chosen = end
        for m in candidates:
            if m <= prev or m == end:
                continue
            if not has_creature(prev, m) or not tail_ok(m):
                continue
            if any(min(t.z) < prev and max(t.z) >= m for p in ps for t in p.creatures):
                continue
            if any(max(t.z) >= m and not t.n > slack(i) for p in ps for t in p.creatures):
                continue
            chosen = m
            break
        bounds.append(chosen)
    return bounds


def _block_of(c: int, bounds: Sequence[int]) -> int:
    for k, m in enumerate(bounds):
        if c < m:
            return k
    raise ValueError(f"coordinate {c} beyond the last boundary")


def amalgamate(ps: Sequence[TruncatedCondition], slack: Optional[Slack] = None,
               norm_budget: int = NORM_BUDGET) -> Amalgam:
    """Common upper bound of conditions that share their stem.

    Boundaries ``m_0 < m_1 < ...`` are chosen greedily so that every condition has
    a whole creature in each block, creatures straddle at most one boundary, and
    creatures reaching past ``m_i`` have packing number above ``slack(i)``.
    Straddling creatures are cut, each block is glued per condition, and the
    glued creatures are linked across conditions.
    """
    if not ps:
        raise ValueError("nothing to amalgamate")
    base = ps[0]
    for k, p in enumerate(ps):
        if p.window != base.window or p.w != base.w:
            raise InvalidCondition(f"condition {k} differs from condition 0 in window or stem")
        if p.flavor != FLAVOR_PLUS:
            raise InvalidCondition(f"condition {k} is not a plus-infinity condition")
        problem = first_violation(p)
        if problem:
            raise InvalidCondition(f"condition {k}: {problem}")
    slack = slack or safe_slack(len(ps))
    for k, p in enumerate(ps):
        if not p.creatures:
            raise TruncationTooShort(f"condition {k} has no creatures")
        for t in p.creatures:
            if not t.n > slack(0):
                raise InsufficientNorm(f"condition {k} has a creature with packing number {t.n} <= {slack(0)}")
    bounds = _choose_boundaries(ps, slack)
    steps: List[dict] = []
    moves: List[List[Move]] = []
    glued: List[List[Creature]] = []
    states = []
    for p in ps:
        state, mv = p, []
        for t in p.creatures:
            blocks = sorted({_block_of(c, bounds) for c in t.z})
            if len(blocks) == 1:
                continue
            low = frozenset(c for c in t.z if _block_of(c, bounds) == blocks[0])
            s0, s1 = cut(t, low, norm_budget)
            steps.append({"kind": "cut", "inputs": [t.n], "outputs": [s0.n, s1.n]})
            move = ApplySigmaBot(state.index_of(t), (s0, s1))
            state = apply_move(state, move)
            mv.append(move)
        groups: Dict[int, List[int]] = {}
        for i, s in enumerate(state.creatures):
            groups.setdefault(_block_of(min(s.z), bounds), []).append(i)
        order = sorted(groups)
        results = []
        for b in order:
            members = [state.creatures[i] for i in groups[b]]
            r = glue(members, norm_budget)
            steps.append({"kind": "glue", "inputs": [s.n for s in members], "outputs": [r.n]})
            results.append(r)
        move = ApplySigma(tuple(tuple(groups[b]) for b in order), tuple(results))
        state = apply_move(state, move)
        mv.append(move)
        moves.append(mv)
        glued.append(list(state.creatures))
        states.append(state)
    n_blocks = len(glued[0])
    if any(len(g) != n_blocks for g in glued):
        raise InvalidCondition("glued conditions have misaligned blocks")
    linked = []
    for b in range(n_blocks):
        inputs = [g[b] for g in glued]
        s = link_all(inputs, norm_budget)
        steps.append({"kind": "link", "inputs": [r.n for r in inputs], "outputs": [s.n]})
        if not s.in_K or s.infinite:
            raise InsufficientNorm(f"linked creature of block {b} has packing number {s.n}")
        linked.append(s)
    q = TruncatedCondition(base.window, base.w, tuple(linked), FLAVOR_PLUS)
    certs = []
    for state, mv in zip(states, moves):
        singletons = tuple((i,) for i in range(n_blocks))
        mv.append(ApplySigma(singletons, tuple(linked)))
        certs.append(MoveCertificate(tuple(mv)))
    for k, (p, cert) in enumerate(zip(ps, certs)):
        if not leq_check(p, q, cert):
            raise InvalidCertificate(f"certificate for condition {k} does not replay")
    return Amalgam(q, certs, bounds, steps)


def pos_intersection_contains(ps: Sequence[TruncatedCondition], q: TruncatedCondition,
                              alphabet: Alphabet, budget: int = DEFAULT_BUDGET) -> Tuple[bool, bool]:
    """``(POS(q) ⊆ ⋂ POS(p), POS(q) ≠ ∅)`` by enumeration."""
    space = PointSpace(q.window, alphabet, budget)
    mq = pos_mask(q, space)
    inter = np.ones(len(space), dtype=bool)
    for p in ps:
        inter &= pos_mask(p, space)
    return (not np.any(mq & ~inter), bool(np.any(mq)))


# --- index projection --------------------------------------------------------------


def in_Q_pi(p: TruncatedCondition, pi: Mapping[int, int]) -> bool:
    rng = set(pi.values())
    return all(t.z <= rng or not (t.z & rng) for t in p.creatures)


def project_pi(p: TruncatedCondition, pi: Mapping[int, int]) -> TruncatedCondition:
    """Pull ``p`` back along the embedding ``pi``; creatures outside ``rng(pi)`` are dropped."""
    if not in_Q_pi(p, pi):
        raise NotAligned("a creature straddles the range of the embedding")
    inv = invert_embedding(pi)
    window = frozenset(inv[c] for c in p.window if c in inv)
    w = PartialFunction((inv[k], v) for k, v in p.w.items if k in inv)
    creatures = tuple(permute_creature(t, inv) for t in p.creatures if t.z <= set(inv))
    return TruncatedCondition(window, w, creatures, p.flavor)


def _transport_move(move: Move, pre: TruncatedCondition, img: TruncatedCondition,
                    pi: Mapping[int, int]) -> Move:
    def idx(i: int) -> int:
        return img.index_of(permute_creature(pre.creatures[i], pi))

    if isinstance(move, Decide):
        fresh = move.wstar.without(pre.w.dom)
        return Decide(tuple(idx(i) for i in move.indices), pf_union(img.w, permute_pf(fresh, pi)))
    if isinstance(move, ApplySigmaBot):
        return ApplySigmaBot(idx(move.index), tuple(permute_creature(s, pi) for s in move.pieces))
    if isinstance(move, ApplySigma):
        mapped = {permute_creature(t, pi) for t in pre.creatures}
        extra = [i for i, t in enumerate(img.creatures) if t not in mapped]
        groups = tuple(tuple(idx(i) for i in g) for g in move.groups) + tuple((i,) for i in extra)
        results = tuple(permute_creature(r, pi) for r in move.results) + tuple(img.creatures[i] for i in extra)
        return ApplySigma(groups, results)
    raise TypeError(f"not a move: {move!r}")


def lift_pi(p: TruncatedCondition, pi: Mapping[int, int], r: TruncatedCondition,
            cert: Optional[MoveCertificate] = None) -> Tuple[TruncatedCondition, Optional[MoveCertificate]]:
    """Given ``r`` above the projection of ``p``, build ``q ≥ p`` whose projection is ``r``.

    With a certificate for the projection of ``p`` below ``r`` the matching
    certificate for ``p ≤ q`` is returned as well.
    """
    fp = project_pi(p, pi)
    if r.window != fp.window:
        raise NotAligned("r does not live on the pulled-back window")
    rng = set(pi.values())
    w = pf_union(permute_pf(r.w, pi), p.w.without(rng))
    outside = [t for t in p.creatures if not (t.z & rng)]
    inside = [permute_creature(t, pi) for t in r.creatures]
    q = TruncatedCondition(p.window, w, tuple(outside + inside), p.flavor)
    if cert is None:
        return q, None
    pre, img, moved = fp, p, []
    for move in cert.moves:
        m2 = _transport_move(move, pre, img, pi)
        pre = apply_move(pre, move)
        img = apply_move(img, m2)
        moved.append(m2)
    return q, MoveCertificate(tuple(moved))


def projection_monotone(p: TruncatedCondition, q: TruncatedCondition, pi: Mapping[int, int],
                        alphabet: Alphabet, budget: int = DEFAULT_BUDGET) -> bool:
    """Semantic form of ``p ≤ q ⇒ f(p) ≤ f(q)`` on one pair."""
    return leq_semantic(project_pi(p, pi), project_pi(q, pi), alphabet, budget)
