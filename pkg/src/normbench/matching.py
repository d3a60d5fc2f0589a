"""Systems of distinct representatives via augmenting paths.

Left vertices are processed in list order and right vertices in sorted order,
so the matching returned for a given input is always the same.
"""

from __future__ import annotations

from collections import deque
from typing import Hashable, Iterable, List, Optional, Sequence, TypeVar

R = TypeVar("R", bound=Hashable)


def _augment(start: int, adj: List[List[R]], match_right: dict, match_left: list) -> bool:
    # BFS over alternating paths; the first free right vertex reached closes the path.
    parent_left = {}
    seen = set()
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for r in adj[u]:
            if r in seen:
                continue
            seen.add(r)
            parent_left[r] = u
            owner = match_right.get(r)
            if owner is None:
                while True:
                    u2 = parent_left[r]
                    prev = match_left[u2]
                    match_left[u2] = r
                    match_right[r] = u2
                    if u2 == start:
                        return True
                    r = prev
            queue.append(owner)
    return False


def maximum_matching(sets: Sequence[Iterable[R]]) -> List[Optional[R]]:
    """Maximum matching of indices to elements; ``None`` marks unmatched indices."""
    adj = [sorted(set(s)) for s in sets]
    match_left: List[Optional[R]] = [None] * len(adj)
    match_right: dict = {}
    for i in range(len(adj)):
        _augment(i, adj, match_right, match_left)
    return match_left


def distinct_representatives(sets: Sequence[Iterable[R]]) -> Optional[List[R]]:
    """An SDR for ``sets`` or ``None`` when Hall's condition fails."""
    matched = maximum_matching(sets)
    if any(r is None for r in matched):
        return None
    return matched  # type: ignore[return-value]
