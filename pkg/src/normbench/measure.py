"""Exact measures of cylinder-avoidance sets and a certified enclosure of ``e^{-N}``."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Sequence, Tuple

from .core import PartialFunction
from .errors import EnumerationTooLarge

INCLUSION_EXCLUSION_LIMIT = 20


def _pairwise_disjoint(sigmas: Sequence[PartialFunction]) -> bool:
    seen: set = set()
    for s in sigmas:
        if seen & s.dom:
            return False
        seen |= s.dom
    return True


def avoidance_measure(sigmas: Sequence[PartialFunction], alphabet_size: int,
                      limit: int = INCLUSION_EXCLUSION_LIMIT) -> Fraction:
    """Measure of the points of ``X^ω`` extending none of ``sigmas``.

    Disjoint domains give the product ``∏(1 - |X|^{-|σ|})``; otherwise
    inclusion-exclusion runs over all subfamilies with a common extension.
    """
    sigmas = list(sigmas)
    if _pairwise_disjoint(sigmas):
        out = Fraction(1)
        for s in sigmas:
            out *= 1 - Fraction(1, alphabet_size ** len(s))
        return out
    if len(sigmas) > limit:
        raise EnumerationTooLarge(f"{len(sigmas)} overlapping cylinders exceed the inclusion-exclusion limit {limit}")
    total = Fraction(0)
    for r in range(len(sigmas) + 1):
        for sub in itertools.combinations(sigmas, r):
            joint: dict = {}
            ok = True
            for s in sub:
                for k, v in s.items:
                    if joint.setdefault(k, v) != v:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                total += (-1) ** r * Fraction(1, alphabet_size ** len(joint))
    return total


def block_measure(alphabet_size: int, n0: int, n1: int) -> Fraction:
    """``(1 - |X|^{-n0})^{n1}``: avoiding ``n1`` disjoint cylinders of size ``n0``."""
    return (1 - Fraction(1, alphabet_size ** n0)) ** n1


def exp_neg_enclosure(n: int, terms: int) -> Tuple[Fraction, Fraction]:
    """Rationals ``lo <= e^{-n} <= hi`` from ``terms`` terms of the series for ``e^n``.

    With ``S`` the partial sum up to ``n^K/K!`` the tail is at most
    ``n^{K+1}/(K+1)! / (1 - n/(K+2))`` once ``K + 2 > n``.
    """
    if n < 0:
        raise ValueError("exponent must be nonnegative")
    k = max(terms, n)
    partial, term = Fraction(0), Fraction(1)
    for i in range(k + 1):
        if i:
            term = term * n / i
        partial += term
    nxt = term * n / (k + 1)
    tail = nxt / (1 - Fraction(n, k + 2))
    return 1 / (partial + tail), 1 / partial


def exp_neg_bounds(n: int, precision_bits: int = 64) -> Tuple[Fraction, Fraction]:
    """An enclosure of ``e^{-n}`` whose relative width is below ``2^-precision_bits``."""
    terms = 2 * n + 8
    while True:
        lo, hi = exp_neg_enclosure(n, terms)
        if (hi - lo) * 2 ** precision_bits <= hi:
            return lo, hi
        terms *= 2


def certify_at_most_exp_neg(value: Fraction, n: int, max_bits: int = 4096) -> bool:
    """``value <= e^{-n}`` decided exactly; ``False`` also when undecidable at ``max_bits``."""
    bits = 64
    while bits <= max_bits:
        lo, hi = exp_neg_bounds(n, bits)
        if value <= lo:
            return True
        if value > hi:
            return False
        bits *= 4
    return False


def decimal(value: Fraction, digits: int = 12) -> str:
    """Rounded decimal rendering in scientific notation."""
    if value == 0:
        return "0"
    sign = "-" if value < 0 else ""
    v = abs(value)
    exp = 0
    while v >= 10:
        v /= 10
        exp += 1
    while v < 1:
        v *= 10
        exp -= 1
    scaled = round(v * 10 ** (digits - 1))
    if scaled >= 10 ** digits:
        scaled //= 10
        exp += 1
    text = str(scaled)
    return f"{sign}{text[0]}.{text[1:]}e{exp:+d}"
