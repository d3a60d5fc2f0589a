"""Exception hierarchy.

Every error carries a short machine-readable ``code`` so the CLI can report
failures in JSON without parsing messages.
"""

from __future__ import annotations


class NormbenchError(Exception):
    code = "error"


class InvalidSymbol(NormbenchError):
    code = "invalid-symbol"


class InvalidAlphabet(NormbenchError):
    code = "invalid-alphabet"


class IncompatibleFunctions(NormbenchError):
    code = "incompatible-functions"


class MissingCoordinate(NormbenchError):
    code = "missing-coordinate"


class EnumerationTooLarge(NormbenchError):
    code = "enumeration-too-large"


class InvalidCreature(NormbenchError):
    code = "invalid-creature"


class NoSDR(NormbenchError):
    code = "no-sdr"


class NoWitness(NormbenchError):
    code = "no-witness"


class EmptyRestriction(NormbenchError):
    code = "empty-restriction"


class DomainOverlap(NormbenchError):
    code = "domain-overlap"


class DomainMismatch(NormbenchError):
    code = "domain-mismatch"


class InvalidCondition(NormbenchError):
    code = "invalid-condition"


class IllegalDecision(NormbenchError):
    code = "illegal-decision"


class IllegalComposition(NormbenchError):
    code = "illegal-composition"


class IllegalDecomposition(NormbenchError):
    code = "illegal-decomposition"


class InvalidCertificate(NormbenchError):
    code = "invalid-certificate"


class TruncationTooShort(NormbenchError):
    code = "truncation-too-short"


class InsufficientNorm(NormbenchError):
    code = "insufficient-norm"


class NotAligned(NormbenchError):
    code = "not-aligned"


class NoSelection(NormbenchError):
    code = "no-selection"


class InsufficientCapacity(NormbenchError):
    code = "insufficient-capacity"


class GenerationFailed(NormbenchError):
    code = "generation-failed"


class SchemaError(NormbenchError):
    code = "schema-error"
