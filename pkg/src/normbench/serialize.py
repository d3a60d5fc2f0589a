"""JSON interchange for every domain object.

Documents carry ``"schema": 1`` and a ``"kind"``; partial functions are lists of
``[coord, symbol]`` pairs in coordinate order, an infinite packing number is the
string ``"inf"``.
"""

from __future__ import annotations

import json
from typing import Any, Dict, List

from .conditions import ApplySigma, ApplySigmaBot, Decide, Move, MoveCertificate, TruncatedCondition
from .core import Alphabet, PartialFunction
from .creatures import INF, Creature
from .errors import SchemaError
from .qhn import NormSeqPrefix, QCondition

SCHEMA = 1


def pf_to(eta: PartialFunction) -> List[List[int]]:
    return [[k, v] for k, v in eta.items]


def pf_from(data: Any) -> PartialFunction:
    if isinstance(data, dict):
        return PartialFunction({int(k): int(v) for k, v in data.items()})
    return PartialFunction((int(k), int(v)) for k, v in data)


def alphabet_to(x: Alphabet) -> List[int]:
    return list(x.orders)


def alphabet_from(data: Any) -> Alphabet:
    if isinstance(data, str):
        return Alphabet.parse(data)
    if isinstance(data, int):
        return Alphabet.cyclic(data)
    return Alphabet(tuple(data))


def creature_to(t: Creature) -> Dict[str, Any]:
    return {"z": sorted(t.z), "delta": [pf_to(e) for e in t.sorted_delta()],
            "n": "inf" if t.infinite else int(t.n)}


def creature_from(data: Dict[str, Any]) -> Creature:
    t = Creature.make(data["z"], [pf_from(e) for e in data.get("delta", [])])
    stated = data.get("n")
    if stated is not None and stated != ("inf" if t.n == INF else t.n):
        raise SchemaError(f"stated packing number {stated} differs from computed {t.n}")
    return t


def truncated_to(p: TruncatedCondition) -> Dict[str, Any]:
    out = {"window": sorted(p.window), "w": pf_to(p.w), "flavor": p.flavor,
           "creatures": [creature_to(t) for t in p.creatures]}
    if p.bounds is not None:
        out["bounds"] = list(p.bounds)
    return out


def truncated_from(data: Dict[str, Any]) -> TruncatedCondition:
    bounds = data.get("bounds")
    return TruncatedCondition(frozenset(data["window"]), pf_from(data.get("w", [])),
                              tuple(creature_from(t) for t in data.get("creatures", [])),
                              data.get("flavor", "plus-infinity"), tuple(bounds) if bounds is not None else None)


def move_to(move: Move) -> Dict[str, Any]:
    if isinstance(move, Decide):
        return {"move": "decide", "indices": list(move.indices), "wstar": pf_to(move.wstar)}
    if isinstance(move, ApplySigma):
        return {"move": "sigma", "groups": [list(g) for g in move.groups],
                "results": [creature_to(t) for t in move.results]}
    if isinstance(move, ApplySigmaBot):
        return {"move": "sigma-bot", "index": move.index, "pieces": [creature_to(t) for t in move.pieces]}
    raise TypeError(f"not a move: {move!r}")


def move_from(data: Dict[str, Any]) -> Move:
    kind = data.get("move")
    if kind == "decide":
        return Decide(tuple(data["indices"]), pf_from(data["wstar"]))
    if kind == "sigma":
        return ApplySigma(tuple(tuple(g) for g in data["groups"]),
                          tuple(creature_from(t) for t in data["results"]))
    if kind == "sigma-bot":
        return ApplySigmaBot(int(data["index"]), tuple(creature_from(t) for t in data["pieces"]))
    raise SchemaError(f"unknown move {kind!r}")


def certificate_to(cert: MoveCertificate) -> List[Dict[str, Any]]:
    return [move_to(m) for m in cert.moves]


def certificate_from(data: List[Dict[str, Any]]) -> MoveCertificate:
    return MoveCertificate(tuple(move_from(m) for m in data))


def seq_to(s: NormSeqPrefix) -> List[List[int]]:
    return [list(p) for p in s.pairs]


def seq_from(data: Any) -> NormSeqPrefix:
    return NormSeqPrefix(tuple((int(a), int(b)) for a, b in data))


def qcond_to(p: QCondition) -> Dict[str, Any]:
    return {"w": pf_to(p.w), "sigmas": [pf_to(s) for s in p.sigmas], "m_star": p.m_star,
            "blocks": {str(m): list(idx) for m, idx in p.blocks}, "seq": seq_to(p.seq),
            "window": sorted(p.window)}


def qcond_from(data: Dict[str, Any]) -> QCondition:
    blocks = {int(m): idx for m, idx in data.get("blocks", {}).items()}
    sigmas = tuple(pf_from(s) for s in data.get("sigmas", []))
    w = pf_from(data.get("w", []))
    window = data.get("window")
    if window is None:
        window = sorted(set(w.dom).union(*(s.dom for s in sigmas)))
    return QCondition(w, sigmas, int(data.get("m_star", 0)), blocks, seq_from(data["seq"]), frozenset(window))


_ENCODERS = {
    "creature": creature_to,
    "truncated": truncated_to,
    "certificate": certificate_to,
    "qcondition": qcond_to,
    "sequence": seq_to,
}

_DECODERS = {
    "creature": creature_from,
    "truncated": truncated_from,
    "certificate": certificate_from,
    "qcondition": qcond_from,
    "sequence": seq_from,
}


def document(kind: str, payload: Any, **extra: Any) -> Dict[str, Any]:
    doc = {"schema": SCHEMA, "kind": kind}
    doc.update(extra)
    doc["payload"] = payload
    return doc


def encode(kind: str, obj: Any) -> Any:
    return _ENCODERS[kind](obj)


def decode(kind: str, data: Any) -> Any:
    if kind not in _DECODERS:
        raise SchemaError(f"unknown kind {kind!r}")
    try:
        return _DECODERS[kind](data)
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed {kind}: {exc}") from exc


def check_schema(doc: Dict[str, Any]) -> Dict[str, Any]:
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA:
        raise SchemaError(f"expected a document with schema {SCHEMA}")
    return doc


def dumps(data: Any) -> str:
    """Deterministic JSON text."""
    return json.dumps(data, sort_keys=True, indent=2) + "\n"
