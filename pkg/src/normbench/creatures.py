"""Semi-creatures ``(z, Δ)`` with the packing norm.

A creature forbids every cylinder ``η ∈ Δ`` on its coordinate set ``z``.  Its
packing number ``n(z, Δ)`` is the largest ``k`` such that every subfamily
``Δ'`` contains pairwise domain-disjoint members covering at least
``k·|Δ'|`` coordinates; the norm is ``log_8`` of that number, or infinite
when ``Δ`` is empty.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import chain
from typing import Dict, FrozenSet, Iterable, List, Mapping, Sequence, Tuple, Union

import numpy as np

from .core import (
    DEFAULT_BUDGET,
    Alphabet,
    PartialFunction,
    PointSpace,
    enumerate_points,
    permute_pf,
    translate_pf,
)
from .errors import (
    DomainMismatch,
    DomainOverlap,
    EmptyRestriction,
    EnumerationTooLarge,
    InvalidCreature,
    MissingCoordinate,
    NoSDR,
    NoWitness,
)
from .matching import distinct_representatives

INF = math.inf

# Largest |Δ| accepted by the exhaustive packing norm (2^|Δ| table entries).
NORM_BUDGET = 20

Norm = Union[int, float]


def _packing_table(delta: Sequence[PartialFunction]) -> np.ndarray:
    """``pack[S]`` = largest coordinate count covered by a domain-disjoint subfamily of ``S``."""
    m = len(delta)
    sizes = [len(eta) for eta in delta]
    doms = [eta.dom for eta in delta]
    pack = np.zeros(1 << m, dtype=np.int64)
    for b in range(m):
        compat = 0
        for a in range(b):
            if not (doms[a] & doms[b]):
                compat |= 1 << a
        lo = np.arange(1 << b, dtype=np.int64)
        pack[(1 << b):(1 << (b + 1))] = np.maximum(pack[lo], sizes[b] + pack[lo & compat])
    return pack


def _popcounts(m: int) -> np.ndarray:
    pop = np.zeros(1 << m, dtype=np.int64)
    for b in range(m):
        pop[(1 << b):(1 << (b + 1))] = pop[:(1 << b)] + 1
    return pop


def norm_n(z: Iterable[int], delta: Iterable[PartialFunction], budget: int = NORM_BUDGET) -> Norm:
    """Packing number ``n(z, Δ)``; ``INF`` for empty ``Δ``.

    The outer quantifier over subfamilies is exhaustive; the best packing of every
    subfamily comes from one subset-lattice dynamic programme, so the cost is
    ``O(2^|Δ|)`` numpy work.
    """
    z = frozenset(z)
    delta = sorted(set(delta))
    if not delta:
        return INF
    for eta in delta:
        if not eta or not eta.dom <= z:
            raise InvalidCreature(f"{eta!r} is empty or leaves z")
    if len(delta) > budget:
        raise EnumerationTooLarge(f"|Δ| = {len(delta)} exceeds the norm budget {budget}")
    m = len(delta)
    pack = _packing_table(delta)
    pop = _popcounts(m)
    return int((pack[1:] // pop[1:]).min())


def nor(n: Norm) -> float:
    """``log_8`` of a packing number; display only, comparisons use :func:`norm_exceeds`."""
    if n == INF:
        return INF
    if n == 0:
        return -INF
    return math.log(n, 8)


def norm_exceeds(n: Norm, threshold: int) -> bool:
    """``log_8 n > threshold`` for an integer threshold, decided in integers."""
    return n == INF or n > 8 ** threshold


@dataclass(frozen=True)
class Creature:
    """The pair ``(z, Δ)``; ``dis`` is the pair itself, so equality is structural."""

    z: FrozenSet[int]
    delta: FrozenSet[PartialFunction]
    n: Norm

    @classmethod
    def make(cls, z: Iterable[int], delta: Iterable[PartialFunction] = (),
             budget: int = NORM_BUDGET) -> "Creature":
        z = frozenset(int(c) for c in z)
        delta = frozenset(delta)
        if not z:
            raise InvalidCreature("creature domain must be nonempty")
        for eta in delta:
            if not eta:
                raise InvalidCreature("members of Δ must be nonempty")
            if not eta.dom <= z:
                raise InvalidCreature(f"{eta!r} has coordinates outside z")
        return cls(z, delta, norm_n(z, delta, budget))

    @classmethod
    def free(cls, z: Iterable[int]) -> "Creature":
        """The unconstrained creature on ``z`` (norm ∞)."""
        return cls.make(z, ())

    @property
    def in_K(self) -> bool:
        """Membership in the creature family: ``Δ = ∅`` or ``n ≥ 1``."""
        return self.n >= 1

    @property
    def nor(self) -> float:
        return nor(self.n)

    @property
    def infinite(self) -> bool:
        return self.n == INF

    @property
    def dis(self) -> Tuple[FrozenSet[int], FrozenSet[PartialFunction]]:
        return (self.z, self.delta)

    @property
    def min_coord(self) -> int:
        return min(self.z)

    def sorted_delta(self) -> List[PartialFunction]:
        return sorted(self.delta)

    def sort_key(self):
        return (min(self.z), tuple(sorted(self.z)), tuple(eta.items for eta in self.sorted_delta()))

    def __repr__(self) -> str:
        n = "inf" if self.infinite else self.n
        return f"Creature(z={sorted(self.z)}, delta={self.sorted_delta()}, n={n})"


def value_member(t: Creature, x: Union[PartialFunction, Mapping[int, int]]) -> bool:
    """``x ∈ v(z, Δ)``: ``x`` is total on ``z`` and extends no member of ``Δ``."""
    m = x.as_dict() if isinstance(x, PartialFunction) else x
    missing = [c for c in t.z if c not in m]
    if missing:
        raise MissingCoordinate(f"assignment misses coordinates {sorted(missing)}")
    return not any(eta.subfunction_of(m) for eta in t.delta)


def value_set(t: Creature, alphabet: Alphabet, budget: int = DEFAULT_BUDGET) -> List[PartialFunction]:
    return [x for x in enumerate_points(t.z, alphabet, budget) if value_member(t, x)]


def sdr(delta: Iterable[PartialFunction]) -> Dict[PartialFunction, int]:
    """Distinct representatives ``x_η ∈ dom(η)`` for the domains of ``Δ``."""
    members = sorted(set(delta))
    reps = distinct_representatives([eta.dom for eta in members])
    if reps is None:
        raise NoSDR("the domains of Δ admit no system of distinct representatives")
    return dict(zip(members, reps))


def witness_value(t: Creature, alphabet: Alphabet) -> PartialFunction:
    """A member of ``v(z, Δ)`` built from an SDR of the domains."""
    if not t.in_K:
        raise NoWitness("witness needs n(z, Δ) > 0 or Δ = ∅")
    values = {c: alphabet.zero for c in t.z}
    if t.delta:
        for eta, x in sdr(t.delta).items():
            values[x] = alphabet.other_than(eta[x])
    w = PartialFunction(values)
    if not value_member(t, w):
        raise NoWitness("constructed assignment left the value set")
    return w


def _majority_restriction(delta: Iterable[PartialFunction], part: FrozenSet[int]) -> FrozenSet[PartialFunction]:
    return frozenset(
        eta.restrict(part) for eta in delta if 2 * len(eta.dom & part) >= len(eta)
    )


def restrict_half(t: Creature, zstar: Iterable[int], budget: int = NORM_BUDGET) -> Creature:
    """``(z*, Δ*)`` keeping restrictions of the members with at least half their domain in ``z*``.

    The result may have packing number 0 (it is then outside the creature family);
    ``n(z*, Δ*) ≥ ⌊n(z, Δ)/2⌋`` always holds.
    """
    zstar = frozenset(zstar)
    if not zstar or not zstar <= t.z:
        raise DomainMismatch("z* must be a nonempty subset of z")
    dstar = _majority_restriction(t.delta, zstar)
    if not dstar:
        raise EmptyRestriction("no member of Δ keeps half its domain inside z*")
    return Creature.make(zstar, dstar, budget)


def glue(ts: Sequence[Creature], budget: int = NORM_BUDGET) -> Creature:
    """``(⋃ z_k, ⋃ Δ_k)`` for creatures with pairwise disjoint domains."""
    if not ts:
        raise InvalidCreature("cannot glue an empty family")
    seen: set = set()
    for t in ts:
        if seen & t.z:
            raise DomainOverlap(f"domains overlap at {sorted(seen & t.z)}")
        seen |= t.z
    return Creature.make(seen, chain.from_iterable(t.delta for t in ts), budget)


def link(t0: Creature, t1: Creature, budget: int = NORM_BUDGET) -> Creature:
    """``(z, Δ_0 ∪ Δ_1)``: a common composition of two creatures on the same domain."""
    if t0.z != t1.z:
        raise DomainMismatch("link needs equal domains")
    return Creature.make(t0.z, t0.delta | t1.delta, budget)


def link_all(ts: Sequence[Creature], budget: int = NORM_BUDGET) -> Creature:
    """Pairwise links arranged as a balanced tree (⌈log2 len⌉ halvings at worst)."""
    if not ts:
        raise InvalidCreature("cannot link an empty family")
    level = list(ts)
    while len(level) > 1:
        nxt = [link(level[i], level[i + 1], budget) for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
    return level[0]


def cut(t: Creature, z: Iterable[int], budget: int = NORM_BUDGET) -> Tuple[Creature, Creature]:
    """Split ``t`` into pieces on ``z`` and ``dom[t] ∖ z`` by the majority rule.

    Needs ``n(t) ≥ 2`` (or ``Δ = ∅``) so both pieces stay in the family; a side that
    receives no restriction becomes the free creature.
    """
    z = frozenset(z)
    if not z or not z < t.z:
        raise DomainMismatch("cut needs a nonempty proper subset of the domain")
    if t.n < 2:
        raise InvalidCreature(f"cut needs packing number >= 2, got {t.n}")
    rest = t.z - z
    d0 = _majority_restriction(t.delta, z)
    d1 = _majority_restriction(t.delta, rest)
    return Creature.make(z, d0, budget), Creature.make(rest, d1, budget)


def _disjoint(members: Sequence[Creature]) -> bool:
    total = sum(len(s.z) for s in members)
    return total == len(frozenset().union(*(s.z for s in members))) if members else True


def sigma_member(t: Creature, members: Sequence[Creature]) -> bool:
    """``t ∈ Σ(members)``."""
    if not members or not _disjoint(members):
        return False
    if not t.in_K or not all(s.in_K for s in members):
        return False
    if t.z != frozenset().union(*(s.z for s in members)):
        return False
    return all(s.delta <= t.delta for s in members)


def sigma_bot_member(members: Sequence[Creature], t: Creature) -> bool:
    """``members ∈ Σ⊥(t)``: the domains partition ``z_t`` and every ``η`` survives on some piece."""
    if not members or not _disjoint(members):
        return False
    if not t.in_K or not all(s.in_K for s in members):
        return False
    if t.z != frozenset().union(*(s.z for s in members)):
        return False
    return all(any(eta.restrict(s.z) in s.delta for s in members) for eta in t.delta)


def translate_creature(t: Creature, v: PartialFunction, alphabet: Alphabet) -> Creature:
    missing = t.z - v.dom
    if missing:
        raise MissingCoordinate(f"translation vector misses {sorted(missing)}")
    delta = frozenset(translate_pf(eta, v, alphabet) for eta in t.delta)
    # Translation is a bijection on Δ preserving domains, so the packing number is unchanged.
    return Creature(t.z, delta, t.n)


def permute_creature(t: Creature, pi: Mapping[int, int]) -> Creature:
    missing = [c for c in t.z if c not in pi]
    if missing:
        raise MissingCoordinate(f"embedding misses {sorted(missing)}")
    z = frozenset(pi[c] for c in t.z)
    if len(z) != len(t.z):
        raise ValueError("embedding is not injective on the domain")
    return Creature(z, frozenset(permute_pf(eta, pi) for eta in t.delta), t.n)


# --- axiom checks -----------------------------------------------------------


def _restriction_ok(t: Creature, members: Sequence[Creature], alphabet: Alphabet,
                    budget: int) -> bool:
    # v ∈ sval[t] and s ∈ members ⇒ v↾dom[s] ∈ sval[s]
    if not all(s.z <= t.z for s in members):
        return False
    space = PointSpace(t.z, alphabet, budget)
    inside = space.avoid_all(t.delta)
    return not any(np.any(inside & ~space.avoid_all(s.delta)) for s in members)


def _decomposition_sound(members: Sequence[Creature], t: Creature, alphabet: Alphabet,
                         budget: int) -> bool:
    # {v : every piece accepts v↾dom[s]} ⊆ sval[t]
    if not all(s.z <= t.z for s in members):
        return False
    space = PointSpace(t.z, alphabet, budget)
    accepted = np.ones(len(space), dtype=bool)
    for s in members:
        accepted &= space.avoid_all(s.delta)
    return not np.any(accepted & ~space.avoid_all(t.delta))


def sigma_axioms(t: Creature, members: Sequence[Creature], alphabet: Alphabet,
                 budget: int = DEFAULT_BUDGET) -> Dict[str, bool]:
    """Clause-by-clause check of ``t ∈ Σ(members)`` against the composition axioms."""
    union = frozenset().union(*(s.z for s in members)) if members else frozenset()
    return {
        "identity": sigma_member(t, [t]),
        "domain-union": t.z == union,
        "restriction": _restriction_ok(t, members, alphabet, budget),
        "disjoint": _disjoint(members),
    }


def sigma_bot_axioms(members: Sequence[Creature], t: Creature, alphabet: Alphabet,
                     budget: int = DEFAULT_BUDGET) -> Dict[str, bool]:
    union = frozenset().union(*(s.z for s in members)) if members else frozenset()
    return {
        "identity": sigma_bot_member([t], t),
        "domain-union": t.z == union,
        "soundness": _decomposition_sound(members, t, alphabet, budget),
    }


def sigma_associative(t: Creature, groups: Sequence[Tuple[Creature, Sequence[Creature]]]) -> bool:
    """If ``t ∈ Σ(S)`` and each ``s ∈ S`` lies in ``Σ(S_s)`` then ``t ∈ Σ(⋃ S_s)``."""
    top = [s for s, _ in groups]
    if not sigma_member(t, top) or not all(sigma_member(s, sub) for s, sub in groups):
        return True
    return sigma_member(t, [x for _, sub in groups for x in sub])


def sigma_bot_associative(t: Creature, parts: Sequence[Tuple[Creature, Sequence[Creature]]]) -> bool:
    """Concatenating decompositions of the pieces of a decomposition of ``t`` decomposes ``t``."""
    top = [s for s, _ in parts]
    if not sigma_bot_member(top, t) or not all(sigma_bot_member(sub, s) for s, sub in parts):
        return True
    return sigma_bot_member([x for _, sub in parts for x in sub], t)
