"""Slow reference implementations that share no code path with the fast ones.

They read the defining formulas literally: enumerate every subfamily, every
packing, every point.  The property suites and the test-suite use them to
check the production routines.
"""

from __future__ import annotations

import itertools
from typing import Iterable, List, Sequence

from .core import Alphabet, PartialFunction


def _subfamilies(items: Sequence) -> Iterable[tuple]:
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)


def _pairwise_disjoint(etas: Sequence[PartialFunction]) -> bool:
    seen: set = set()
    for eta in etas:
        d = {k for k, _ in eta.items}
        if seen & d:
            return False
        seen |= d
    return True


def best_packing(etas: Sequence[PartialFunction]) -> int:
    best = 0
    for sub in _subfamilies(list(etas)):
        if _pairwise_disjoint(sub):
            best = max(best, sum(len(e) for e in sub))
    return best


def brute_norm(delta: Iterable[PartialFunction]) -> int:
    """Largest ``k`` with every ``Δ'`` admitting a disjoint ``Δ''`` covering ``k·|Δ'|`` coordinates."""
    delta = sorted(set(delta))
    if not delta:
        raise ValueError("the packing number of an empty family is unbounded")
    ceiling = min(len(e) for e in delta)
    packs = [(len(sub), best_packing(sub)) for sub in _subfamilies(delta) if sub]
    for k in range(ceiling, -1, -1):
        if all(p >= k * size for size, p in packs):
            return k
    return 0


def brute_points(coords: Iterable[int], alphabet: Alphabet) -> List[dict]:
    coords = sorted(set(coords))
    return [dict(zip(coords, vals)) for vals in itertools.product(range(alphabet.size), repeat=len(coords))]


def extends(x: dict, eta: PartialFunction) -> bool:
    return all(x.get(k) == v for k, v in eta.items)


def brute_value_set(z: Iterable[int], delta: Iterable[PartialFunction], alphabet: Alphabet) -> List[dict]:
    delta = list(delta)
    return [x for x in brute_points(z, alphabet) if not any(extends(x, eta) for eta in delta)]


def brute_sdr_exists(sets: Sequence[Iterable[int]]) -> bool:
    """Hall's condition checked over every subfamily."""
    sets = [frozenset(s) for s in sets]
    for sub in _subfamilies(sets):
        if sub and len(frozenset().union(*sub)) < len(sub):
            return False
    return True
