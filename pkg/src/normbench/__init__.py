"""Finite workbench for creature packing norms and the forcing conditions built from them."""

from .core import Alphabet, PartialFunction, PointSpace
from .creatures import INF, Creature, cut, glue, link, link_all, norm_n, restrict_half, witness_value
from .conditions import TruncatedCondition, amalgamate, leq_check
from .qhn import NormSeqPrefix, QCondition, compatible_constructive, leq_syntactic

__version__ = "0.1.0"

__all__ = [
    "Alphabet", "PartialFunction", "PointSpace", "INF", "Creature", "cut", "glue", "link", "link_all",
    "norm_n", "restrict_half", "witness_value", "TruncatedCondition", "amalgamate", "leq_check",
    "NormSeqPrefix", "QCondition", "compatible_constructive", "leq_syntactic",
]
