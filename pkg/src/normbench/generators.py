"""Seeded random instances for the property suites.

Every generator takes a :class:`random.Random` and rejects samples until the
relevant validator accepts, giving up with :class:`GenerationFailed` after
``retries`` attempts.
"""

from __future__ import annotations

import random
from typing import Callable, List, Optional, Sequence, Tuple, TypeVar

from .conditions import (
    FLAVOR_PLUS,
    ApplySigma,
    ApplySigmaBot,
    Decide,
    Move,
    MoveCertificate,
    TruncatedCondition,
    apply_move,
    validate,
)
from .core import Alphabet, PartialFunction
from .creatures import Creature, cut, glue, witness_value
from .errors import GenerationFailed, NormbenchError
from .qhn import NormSeqPrefix, QCondition, validate_cond

T = TypeVar("T")

RETRIES = 1000


def rng_for(seed: int, index: int, tag: str = "") -> random.Random:
    """Independent stream per instance so suites can be replayed one index at a time."""
    return random.Random(f"{tag}:{seed}:{index}")


def retry(make: Callable[[], Optional[T]], retries: int = RETRIES, what: str = "instance") -> T:
    for _ in range(retries):
        out = make()
        if out is not None:
            return out
    raise GenerationFailed(f"no valid {what} after {retries} attempts")


def random_pf(rng: random.Random, coords: Sequence[int], alphabet: Alphabet,
              min_size: int = 1, max_size: Optional[int] = None) -> PartialFunction:
    coords = sorted(coords)
    hi = len(coords) if max_size is None else min(max_size, len(coords))
    k = rng.randint(min(min_size, hi), hi)
    dom = rng.sample(coords, k)
    return PartialFunction((c, rng.randrange(alphabet.size)) for c in dom)


def random_creature(rng: random.Random, alphabet: Alphabet, max_z: int = 6, max_delta: int = 5,
                    coords: Optional[Sequence[int]] = None, min_n: int = 1,
                    retries: int = RETRIES) -> Creature:
    """A creature with packing number at least ``min_n`` (``min_n=0`` allows any)."""

    def make() -> Optional[Creature]:
        z = sorted(coords) if coords is not None else sorted(rng.sample(range(2 * max_z), rng.randint(1, max_z)))
        k = rng.randint(1, max_delta)
        t = Creature.make(z, {random_pf(rng, z, alphabet) for _ in range(k)})
        return t if t.n >= min_n else None

    return retry(make, retries, "creature")


def random_partition(rng: random.Random, coords: Sequence[int], parts: int,
                     contiguous: bool = True) -> List[List[int]]:
    coords = sorted(coords)
    parts = max(1, min(parts, len(coords)))
    if contiguous:
        cuts = sorted(rng.sample(range(1, len(coords)), parts - 1)) if parts > 1 else []
        bounds = [0] + cuts + [len(coords)]
        return [coords[a:b] for a, b in zip(bounds, bounds[1:])]
    shuffled = coords[:]
    rng.shuffle(shuffled)
    out = [shuffled[i::parts] for i in range(parts)]
    return [sorted(p) for p in out if p]


def random_truncated(rng: random.Random, alphabet: Alphabet, window: int, max_parts: int = 3,
                     max_stem: int = 2, min_n: int = 1, max_delta: int = 4,
                     stem: Optional[PartialFunction] = None, contiguous: bool = True,
                     retries: int = RETRIES) -> TruncatedCondition:
    """A plus-infinity condition on ``range(window)`` whose creatures have ``n >= min_n``."""

    def make() -> Optional[TruncatedCondition]:
        if stem is None:
            s = rng.randint(0, min(max_stem, window - 1))
            w = PartialFunction((c, rng.randrange(alphabet.size)) for c in range(s))
        else:
            w = stem
        rest = [c for c in range(window) if c not in w]
        if not rest:
            return None
        creatures = []
        for part in random_partition(rng, rest, rng.randint(1, max_parts), contiguous):
            k = rng.randint(1, max_delta)
            # large constraints keep the packing number high
            etas = {random_pf(rng, part, alphabet, min_size=max(1, len(part) // 2)) for _ in range(k)}
            t = Creature.make(part, etas)
            if t.n < min_n:
                return None
            creatures.append(t)
        p = TruncatedCondition(range(window), w, tuple(creatures), FLAVOR_PLUS)
        return p if validate(p) else None

    return retry(make, retries, "truncated condition")


def _random_move(rng: random.Random, state: TruncatedCondition, alphabet: Alphabet) -> Optional[Move]:
    cs = state.creatures
    kind = rng.choice(["decide", "split", "merge", "strengthen"])
    if kind == "decide" and len(cs) > 1:
        i = rng.randrange(len(cs))
        t = cs[i]
        x = witness_value(t, alphabet)
        return Decide((i,), state.w.union(x))
    if kind == "split":
        i = rng.randrange(len(cs))
        t = cs[i]
        if len(t.z) < 2 or not (t.infinite or t.n >= 2):
            return None
        zs = sorted(t.z)
        part = frozenset(rng.sample(zs, rng.randint(1, len(zs) - 1)))
        return ApplySigmaBot(i, cut(t, part))
    if kind == "merge" and len(cs) > 1:
        i, j = sorted(rng.sample(range(len(cs)), 2))
        merged = glue([cs[i], cs[j]])
        groups = [(i, j)] + [(k,) for k in range(len(cs)) if k not in (i, j)]
        results = [merged] + [cs[k] for k in range(len(cs)) if k not in (i, j)]
        return ApplySigma(tuple(groups), tuple(results))
    if kind == "strengthen":
        i = rng.randrange(len(cs))
        t = cs[i]
        extra = random_pf(rng, sorted(t.z), alphabet, min_size=max(1, len(t.z) // 2))
        s = Creature.make(t.z, set(t.delta) | {extra})
        if not s.in_K:
            return None
        groups = tuple((k,) for k in range(len(cs)))
        return ApplySigma(groups, tuple(s if k == i else cs[k] for k in range(len(cs))))
    return None


def _close_off(state: TruncatedCondition, alphabet: Alphabet) -> List[Move]:
    """Moves that remove infinite-norm creatures so the end state is plus-infinity valid."""
    moves: List[Move] = []
    while any(t.infinite for t in state.creatures):
        cs = state.creatures
        i = next(k for k, t in enumerate(cs) if t.infinite)
        finite = [k for k, t in enumerate(cs) if not t.infinite]
        if finite:
            j = finite[0]
            merged = glue([cs[i], cs[j]])
            groups = [tuple(sorted((i, j)))] + [(k,) for k in range(len(cs)) if k not in (i, j)]
            results = [merged] + [cs[k] for k in range(len(cs)) if k not in (i, j)]
            move: Move = ApplySigma(tuple(groups), tuple(results))
        else:
            move = Decide((i,), state.w.union(PartialFunction.constant(cs[i].z, 0)))
        state = apply_move(state, move)
        moves.append(move)
    return moves


def certified_pair(rng: random.Random, alphabet: Alphabet, window: int, steps: int = 4,
                   retries: int = RETRIES) -> Tuple[TruncatedCondition, TruncatedCondition, MoveCertificate]:
    """``(p, q, cert)`` with ``q`` reached from ``p`` by random legal moves."""

    def make():
        p = random_truncated(rng, alphabet, window, max_parts=3, min_n=2)
        state, moves = p, []
        for _ in range(steps):
            try:
                move = _random_move(rng, state, alphabet)
                if move is None:
                    continue
                state = apply_move(state, move)
                moves.append(move)
            except NormbenchError:
                continue
        try:
            tail = _close_off(state, alphabet)
        except NormbenchError:
            return None
        for move in tail:
            state = apply_move(state, move)
        moves.extend(tail)
        if not validate(state):
            return None
        return p, state, MoveCertificate(tuple(moves))

    return retry(make, retries, "certified pair")


def _high_norm_creature(rng: random.Random, alphabet: Alphabet, z: Sequence[int], min_n: int,
                        retries: int = 50) -> Optional[Creature]:
    for _ in range(retries):
        k = rng.randint(1, 3)
        etas = {random_pf(rng, z, alphabet, min_size=max(1, (2 * len(z)) // 3)) for _ in range(k)}
        t = Creature.make(z, etas)
        if t.n >= min_n:
            return t
    return None


def _composition(rng: random.Random, span: Sequence[int], pieces: int, least: int) -> List[List[int]]:
    """``span`` cut into ``pieces`` consecutive runs of at least ``least`` coordinates."""
    sizes = [least] * pieces
    for _ in range(len(span) - least * pieces):
        sizes[rng.randrange(pieces)] += 1
    out, at = [], 0
    for k in sizes:
        out.append(list(span[at:at + k]))
        at += k
    return out


def amalgam_family(rng: random.Random, alphabet: Alphabet, count: int, window: int,
                   min_n: int, regions: Optional[int] = None, retries: int = RETRIES) -> List[TruncatedCondition]:
    """``count`` conditions sharing a stem whose creatures all have ``n >= min_n``.

    The window after the stem is split into common regions; each condition
    partitions every region into parts of at least ``min_n`` coordinates and
    may merge two neighbouring parts across a region border, so that the
    amalgamation sees several blocks and straddling creatures.
    """

    def make() -> Optional[List[TruncatedCondition]]:
        s = rng.randint(0, 2)
        stem = PartialFunction((c, rng.randrange(alphabet.size)) for c in range(s))
        rest = list(range(s, window))
        if regions:
            r = regions
        elif len(rest) >= 4 * min_n:
            r = 2  # room for two split regions and a straddler between them
        else:
            r = max(1, min(3, len(rest) // min_n))
        if len(rest) < r * min_n:
            return None
        cuts = sorted(rng.sample(range(min_n, len(rest) - min_n + 1), r - 1)) if r > 1 else []
        if any(b - a < min_n for a, b in zip([0] + cuts, cuts + [len(rest)])):
            return None
        spans = [rest[a:b] for a, b in zip([0] + cuts, cuts + [len(rest)])]
        out = []
        for c in range(count):
            parts: List[List[int]] = []
            for span in spans:
                most = len(span) // min_n
                # the first condition splits as finely as it can so straddlers are possible
                pieces = most if c == 0 or rng.random() < 0.5 else rng.randint(1, most)
                parts.extend(_composition(rng, span, pieces, min_n))
            # a straddler only forces a cut when parts survive on both sides of it
            borders = [i for i in range(1, len(parts) - 2)
                       if any(parts[i][-1] < sp[0] <= parts[i + 1][0] for sp in spans[1:])]
            if borders and (c == 0 or rng.random() < 0.3):
                i = rng.choice(borders)
                parts[i:i + 2] = [parts[i] + parts[i + 1]]
            creatures = []
            for z in parts:
                t = _high_norm_creature(rng, alphabet, z, min_n)
                if t is None:
                    return None
                creatures.append(t)
            p = TruncatedCondition(range(window), stem, tuple(creatures), FLAVOR_PLUS)
            if not validate(p):
                return None
            out.append(p)
        return out

    return retry(make, retries, "amalgamation family")


# --- QCondition generators ----------------------------------------------------------


def relaxed_sequence(length: int, n0: int = 2, n1: int = 3) -> NormSeqPrefix:
    """Small increasing pairs for end-to-end tests; only the monotone clauses hold."""
    pairs, a = [], n0
    for _ in range(length):
        pairs.append((a, a + (n1 - n0)))
        a += (n1 - n0) + 1
    return NormSeqPrefix(tuple(pairs))


def flat_sequence(length: int, n0: int, n1: int) -> NormSeqPrefix:
    """Constant-size relaxed blocks; breaks ``n¹_m < n⁰_{m+1}`` so only for bookkeeping-free tests."""
    return NormSeqPrefix(tuple((n0, n1) for _ in range(length)))


def random_qcondition(rng: random.Random, alphabet: Alphabet, seq: NormSeqPrefix, window: Sequence[int],
                      max_sigmas: int = 3, min_sigma: int = 1, max_sigma: Optional[int] = None,
                      max_stem: int = 2, m_star: int = 0, strict: bool = False,
                      stem: Optional[PartialFunction] = None, retries: int = RETRIES) -> QCondition:
    """Disjoint σ's placed on random free coordinates and assigned to random admissible blocks."""
    window = sorted(window)

    def make() -> Optional[QCondition]:
        if stem is None:
            k = rng.randint(0, min(max_stem, len(window)))
            w = PartialFunction((c, rng.randrange(alphabet.size)) for c in rng.sample(window, k))
        else:
            w = stem
        free = [c for c in window if c not in w]
        rng.shuffle(free)
        sigmas, blocks = [], {}
        for _ in range(rng.randint(0, max_sigmas)):
            hi = len(free) if max_sigma is None else min(max_sigma, len(free))
            if hi < min_sigma:
                break
            size = rng.randint(min_sigma, hi)
            dom, free = free[:size], free[size:]
            options = [m for m in range(m_star, len(seq))
                       if size * 2 ** m_star >= seq.n0(m) and len(blocks.get(m, [])) < seq.n1(m) * 2 ** m_star]
            if not options:
                free = dom + free
                continue
            m = rng.choice(options)
            blocks.setdefault(m, []).append(len(sigmas))
            sigmas.append(PartialFunction((c, rng.randrange(alphabet.size)) for c in dom))
        p = QCondition(w, tuple(sigmas), m_star, blocks, seq, window)
        return p if validate_cond(p, strict) else None

    return retry(make, retries, "qhn condition")


def class_tuple(rng: random.Random, alphabet: Alphabet, seq: NormSeqPrefix, n: int, window: int,
                low_sigma: int = 2, high_sigma: int = 4, high_count: int = 2,
                retries: int = RETRIES) -> List[QCondition]:
    """``n+1`` conditions with ``m* = 0`` sharing stem, low blocks and low σ's.

    Low blocks are ``[0, n+2)``; each condition adds its own σ's in blocks ``>= n+2``
    on coordinates no other condition has claimed for its low part.
    """
    if len(seq) <= n + 2:
        raise GenerationFailed("sequence too short to host high blocks")
    coords = list(range(window))

    def make() -> Optional[List[QCondition]]:
        free = coords[:]
        rng.shuffle(free)
        w = PartialFunction((free.pop(), rng.randrange(alphabet.size)) for _ in range(rng.randint(0, 1)))
        low_sigmas, low_blocks = [], {}
        for _ in range(rng.randint(0, 2)):
            m = rng.randrange(0, n + 2)
            size = max(low_sigma, seq.n0(m))
            if len(free) < size:
                return None
            dom = [free.pop() for _ in range(size)]
            low_blocks.setdefault(m, []).append(len(low_sigmas))
            low_sigmas.append(PartialFunction((c, rng.randrange(alphabet.size)) for c in dom))
        out = []
        for _ in range(n + 1):
            avail = free[:]
            rng.shuffle(avail)
            sigmas, blocks = list(low_sigmas), {m: list(v) for m, v in low_blocks.items()}
            for _ in range(rng.randint(1, high_count)):
                m = rng.randrange(n + 2, len(seq))
                size = max(high_sigma, seq.n0(m))
                if len(avail) < size:
                    break
                dom = [avail.pop() for _ in range(size)]
                blocks.setdefault(m, []).append(len(sigmas))
                sigmas.append(PartialFunction((c, rng.randrange(alphabet.size)) for c in dom))
            p = QCondition(w, tuple(sigmas), 0, blocks, seq, coords)
            if not validate_cond(p, strict=False):
                return None
            out.append(p)
        return out

    return retry(make, retries, "class tuple")
