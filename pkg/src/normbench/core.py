"""Finite abelian alphabets, partial functions and point enumeration.

Symbols are stored as integers ``0 <= s < |X|``.  An alphabet given by cyclic
orders ``(o_0, ..., o_k)`` encodes the tuple ``(c_0, ..., c_k)`` in mixed radix
with ``c_0`` most significant, so the identity element is always ``0`` and a
single cyclic group ``Z_n`` uses the plain residues.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple, Union

import numpy as np

from .errors import (
    EnumerationTooLarge,
    IncompatibleFunctions,
    InvalidAlphabet,
    InvalidSymbol,
    MissingCoordinate,
)

DEFAULT_BUDGET = 2 ** 24

Symbol = Union[int, Tuple[int, ...]]


@dataclass(frozen=True)
class Alphabet:
    orders: Tuple[int, ...]

    def __post_init__(self):
        orders = tuple(int(o) for o in self.orders)
        if not orders or any(o < 1 for o in orders):
            raise InvalidAlphabet(f"orders must be a nonempty list of integers >= 1, got {self.orders!r}")
        if math.prod(orders) < 2:
            raise InvalidAlphabet("alphabet needs at least two symbols")
        object.__setattr__(self, "orders", orders)

    @classmethod
    def cyclic(cls, n: int) -> "Alphabet":
        return cls((n,))

    @classmethod
    def parse(cls, text: str) -> "Alphabet":
        """Parse ``"2"``, ``"3x2"`` or ``"3,2"``."""
        parts = text.replace(",", "x").split("x")
        try:
            return cls(tuple(int(p) for p in parts if p.strip()))
        except ValueError as exc:
            raise InvalidAlphabet(f"cannot parse alphabet {text!r}") from exc

    @cached_property
    def size(self) -> int:
        return math.prod(self.orders)

    @property
    def zero(self) -> int:
        return 0

    def symbols(self) -> range:
        return range(self.size)

    def check(self, s: int) -> int:
        if not isinstance(s, (int, np.integer)) or not 0 <= s < self.size:
            raise InvalidSymbol(f"{s!r} is not a symbol of {self}")
        return int(s)

    def encode(self, parts: Sequence[int]) -> int:
        if len(parts) != len(self.orders):
            raise InvalidSymbol(f"{tuple(parts)!r} has wrong arity for {self}")
        value = 0
        for c, o in zip(parts, self.orders):
            if not 0 <= c < o:
                raise InvalidSymbol(f"{tuple(parts)!r} out of range for {self}")
            value = value * o + c
        return value

    def decode(self, s: int) -> Tuple[int, ...]:
        s = self.check(s)
        out = []
        for o in reversed(self.orders):
            s, c = divmod(s, o)
            out.append(c)
        return tuple(reversed(out))

    def _as_int(self, s: Symbol) -> int:
        return self.encode(s) if isinstance(s, tuple) else self.check(s)

    def add(self, a: Symbol, b: Symbol) -> Symbol:
        """Componentwise addition; returns a tuple iff ``a`` was given as one."""
        if len(self.orders) == 1 and not isinstance(a, tuple) and not isinstance(b, tuple):
            return (self.check(a) + self.check(b)) % self.size
        da, db = self.decode(self._as_int(a)), self.decode(self._as_int(b))
        total = self.encode(tuple((x + y) % o for x, y, o in zip(da, db, self.orders)))
        return self.decode(total) if isinstance(a, tuple) else total

    def neg(self, a: Symbol) -> Symbol:
        da = self.decode(self._as_int(a))
        out = self.encode(tuple((-x) % o for x, o in zip(da, self.orders)))
        return self.decode(out) if isinstance(a, tuple) else out

    def other_than(self, s: int) -> int:
        """Lowest symbol different from ``s``."""
        return 1 if s == 0 else 0

    def __str__(self) -> str:
        return " x ".join(f"Z_{o}" for o in self.orders)


class PartialFunction:
    """Immutable finite map from coordinates to symbols.

    Equality, hashing and ordering use the sorted item tuple, which is also the
    canonical serialized form.
    """

    __slots__ = ("_items", "_map", "_hash")

    def __init__(self, entries: Union[Mapping[int, int], Iterable[Tuple[int, int]], None] = None):
        if entries is None:
            pairs: Iterable[Tuple[int, int]] = ()
        elif isinstance(entries, Mapping):
            pairs = entries.items()
        else:
            pairs = entries
        mapping: Dict[int, int] = {}
        for k, v in pairs:
            k, v = int(k), int(v)
            if k < 0:
                raise ValueError(f"coordinates are natural numbers, got {k}")
            if k in mapping and mapping[k] != v:
                raise IncompatibleFunctions(f"conflicting values at coordinate {k}")
            mapping[k] = v
        self._items = tuple(sorted(mapping.items()))
        self._map = dict(self._items)
        self._hash = hash(self._items)

    @classmethod
    def _trusted(cls, items: Tuple[Tuple[int, int], ...]) -> "PartialFunction":
        """Build from items already sorted by coordinate with distinct int keys."""
        out = cls.__new__(cls)
        out._items = items
        out._map = dict(items)
        out._hash = hash(items)
        return out

    @classmethod
    def constant(cls, coords: Iterable[int], value: int = 0) -> "PartialFunction":
        return cls({c: value for c in coords})

    @property
    def items(self) -> Tuple[Tuple[int, int], ...]:
        return self._items

    @property
    def dom(self) -> frozenset:
        return frozenset(self._map)

    def as_dict(self) -> Dict[int, int]:
        return dict(self._map)

    def __getitem__(self, k: int) -> int:
        return self._map[k]

    def get(self, k: int, default=None):
        return self._map.get(k, default)

    def __contains__(self, k) -> bool:
        return k in self._map

    def __iter__(self) -> Iterator[int]:
        return iter(self._map)

    def __len__(self) -> int:
        return len(self._items)

    def __bool__(self) -> bool:
        return bool(self._items)

    def __eq__(self, other) -> bool:
        return isinstance(other, PartialFunction) and self._items == other._items

    def __lt__(self, other: "PartialFunction") -> bool:
        return self._items < other._items

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{k}:{v}" for k, v in self._items)
        return "{" + body + "}"

    def restrict(self, coords: Iterable[int]) -> "PartialFunction":
        keep = set(coords)
        return PartialFunction((k, v) for k, v in self._items if k in keep)

    def without(self, coords: Iterable[int]) -> "PartialFunction":
        drop = set(coords)
        return PartialFunction((k, v) for k, v in self._items if k not in drop)

    def compatible(self, other: "PartialFunction") -> bool:
        small, big = (self, other) if len(self) <= len(other) else (other, self)
        return all(big._map.get(k, v) == v for k, v in small._items)

    def subfunction_of(self, other: Union["PartialFunction", Mapping[int, int]]) -> bool:
        """``self ⊆ other`` as sets of pairs."""
        m = other._map if isinstance(other, PartialFunction) else other
        return all(k in m and m[k] == v for k, v in self._items)

    def union(self, other: "PartialFunction") -> "PartialFunction":
        return pf_union(self, other)


def pf_union(a: PartialFunction, b: PartialFunction) -> PartialFunction:
    for k, v in b.items:
        if k in a and a[k] != v:
            raise IncompatibleFunctions(f"functions disagree at coordinate {k}")
    return PartialFunction(a.items + b.items)


def translate_pf(eta: PartialFunction, v: PartialFunction, alphabet: Alphabet) -> PartialFunction:
    missing = eta.dom - v.dom
    if missing:
        raise MissingCoordinate(f"translation vector misses coordinates {sorted(missing)}")
    # translation keeps the domain, so the sorted item order carries over
    return PartialFunction._trusted(tuple((k, alphabet.add(s, v[k])) for k, s in eta.items))


def negate_pf(v: PartialFunction, alphabet: Alphabet) -> PartialFunction:
    return PartialFunction((k, alphabet.neg(s)) for k, s in v.items)


def permute_pf(eta: PartialFunction, pi: Mapping[int, int]) -> PartialFunction:
    """Relabel coordinates: the result takes value ``eta(pi^-1(i))`` at ``i``."""
    missing = [k for k in eta if k not in pi]
    if missing:
        raise MissingCoordinate(f"embedding misses coordinates {missing}")
    return PartialFunction((pi[k], s) for k, s in eta.items)


def invert_embedding(pi: Mapping[int, int]) -> Dict[int, int]:
    inv = {}
    for a, b in pi.items():
        if b in inv:
            raise ValueError(f"embedding is not injective at image {b}")
        inv[b] = a
    return inv


def check_budget(alphabet: Alphabet, n_coords: int, budget: int = DEFAULT_BUDGET) -> int:
    count = alphabet.size ** n_coords
    if count > budget:
        raise EnumerationTooLarge(f"{alphabet.size}^{n_coords} = {count} points exceeds budget {budget}")
    return count


def enumerate_points(window: Iterable[int], alphabet: Alphabet,
                     budget: int = DEFAULT_BUDGET) -> Iterator[PartialFunction]:
    """All total assignments on ``window``, lexicographic over sorted coordinates."""
    coords = sorted(set(window))
    check_budget(alphabet, len(coords), budget)
    for values in itertools.product(alphabet.symbols(), repeat=len(coords)):
        yield PartialFunction(zip(coords, values))


class PointSpace:
    """Vectorised view of ``X^window`` used by the enumeration oracles.

    Row ``r`` is the ``r``-th assignment of ``enumerate_points``.  Columns are
    computed on demand from the row index, so memory stays linear in the
    number of points rather than points times coordinates.
    """

    def __init__(self, window: Iterable[int], alphabet: Alphabet, budget: int = DEFAULT_BUDGET):
        self.coords = sorted(set(window))
        self.alphabet = alphabet
        self.size = check_budget(alphabet, len(self.coords), budget)
        self.column = {c: i for i, c in enumerate(self.coords)}
        self._rows = np.arange(self.size, dtype=np.int64)

    def __len__(self) -> int:
        return self.size

    def values(self, coord: int) -> np.ndarray:
        """Symbol at ``coord`` for every row."""
        if coord not in self.column:
            raise MissingCoordinate(f"coordinate {coord} outside the window")
        k = len(self.coords)
        step = self.alphabet.size ** (k - 1 - self.column[coord])
        return (self._rows // step) % self.alphabet.size

    def _index(self, eta: PartialFunction) -> tuple:
        """Slice of the ``|X|^k`` tensor view that holds the cylinder of ``eta``."""
        idx = [slice(None)] * len(self.coords)
        for k, s in eta.items:
            if k not in self.column:
                raise MissingCoordinate(f"coordinate {k} outside the window")
            idx[self.column[k]] = s
        return tuple(idx)

    def _tensor(self, mask: np.ndarray) -> np.ndarray:
        return mask.reshape((self.alphabet.size,) * len(self.coords))

    def cylinder(self, eta: PartialFunction) -> np.ndarray:
        """Mask of points extending ``eta``."""
        mask = np.zeros(self.size, dtype=bool)
        self._tensor(mask)[self._index(eta)] = True
        return mask

    def avoid_all(self, etas: Iterable[PartialFunction]) -> np.ndarray:
        """Mask of points extending none of ``etas``."""
        mask = np.ones(self.size, dtype=bool)
        view = self._tensor(mask)
        for eta in etas:
            view[self._index(eta)] = False
        return mask

    def point(self, row: int) -> PartialFunction:
        digits = []
        for _ in self.coords:
            row, d = divmod(int(row), self.alphabet.size)
            digits.append(d)
        return PartialFunction(zip(self.coords, reversed(digits)))

    def restrict_rows(self, coords: Sequence[int]) -> np.ndarray:
        """Matrix of the symbols at ``coords`` (one column each) for every row."""
        return np.stack([self.values(c) for c in coords], axis=1) if coords else np.zeros((self.size, 0), np.int64)
