"""``normbench`` command line: creature, condition and qhn verbs plus the property suites.

Inputs are JSON files (``-`` for stdin) holding either a bare object or a
``{"schema": 1, "kind": ..., "payload": ...}`` document; a file whose payload is
a list contributes every element.  Exit codes: 0 pass, 1 property failure or
domain error, 2 usage, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional

from . import conditions as cond
from . import qhn
from .core import DEFAULT_BUDGET, Alphabet, PartialFunction, PointSpace
from .creatures import (
    INF,
    cut,
    glue,
    link,
    link_all,
    restrict_half,
    value_member,
    value_set,
    witness_value,
)
from .errors import (
    EnumerationTooLarge,
    GenerationFailed,
    IncompatibleFunctions,
    NormbenchError,
    SchemaError,
    TruncationTooShort,
)
from .generators import random_creature, random_qcondition, random_truncated, relaxed_sequence, rng_for
from .measure import avoidance_measure, certify_at_most_exp_neg, decimal
from .serialize import (
    SCHEMA,
    alphabet_from,
    alphabet_to,
    certificate_from,
    certificate_to,
    check_schema,
    creature_from,
    creature_to,
    document,
    dumps,
    pf_from,
    pf_to,
    qcond_from,
    qcond_to,
    seq_from,
    truncated_from,
    truncated_to,
)
from .suites import SUITES, SuiteConfig, make_instance, replay, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


# --- input and output -----------------------------------------------------------------------

def _read(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not JSON: {exc}") from exc


def _payload(data: Any) -> Any:
    if isinstance(data, dict) and "schema" in data:
        return check_schema(data).get("payload")
    return data


def _load(paths: List[str], convert) -> list:
    out = []
    for path in paths:
        data = _payload(_read(path))
        items = data if isinstance(data, list) and data and isinstance(data[0], dict) else [data]
        try:
            out.extend(convert(item) for item in items)
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise SchemaError(f"{path}: malformed input ({exc!r})") from exc
    return out


def _one(path: str, convert):
    items = _load([path], convert)
    if len(items) != 1:
        raise UsageError(f"{path} holds {len(items)} objects, expected one")
    return items[0]


def _certificate(path: str):
    return certificate_from(_payload(_read(path)))


def _mapping(text: Optional[str]) -> Dict[int, int]:
    """``"0:3,1:5"`` or a JSON object/list of pairs."""
    if not text:
        raise UsageError("an embedding is required (--pi)")
    try:
        data = json.loads(text)
        pairs = data.items() if isinstance(data, dict) else data
    except json.JSONDecodeError:
        pairs = [part.split(":") for part in text.split(",") if part]
    try:
        return {int(a): int(b) for a, b in pairs}
    except (TypeError, ValueError) as exc:
        raise UsageError(f"cannot parse embedding {text!r}") from exc


def _coords(text: Optional[str]) -> List[int]:
    if text is None:
        raise UsageError("coordinates are required (--coords)")
    try:
        return [int(c) for c in text.split(",") if c.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse coordinates {text!r}") from exc


def _rational(v: Fraction) -> Dict[str, Any]:
    return {"numerator": str(v.numerator), "denominator": str(v.denominator), "decimal": decimal(v)}


def _norm(n) -> Any:
    return "inf" if n == INF else int(n)


def _emit(args, data: Any, text: Optional[str] = None) -> None:
    out = text if text is not None else dumps(data)
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _alphabet(args) -> Alphabet:
    """``--alphabet``, else the ``alphabet`` field of the first input document, else Z_2."""
    if args.alphabet:
        return Alphabet.parse(args.alphabet)
    paths = getattr(args, "inputs", None) or [getattr(args, "input", None)]
    if paths[0] and paths[0] != "-":
        data = _read(paths[0])
        if isinstance(data, dict) and "alphabet" in data and "schema" in data:
            return alphabet_from(data["alphabet"])
    return Alphabet.cyclic(2)


SLACKS = {
    "safe": cond.safe_slack,
    "exponential": lambda count: cond.exponential_slack(count - 1),
    "linear": lambda count: (lambda i: i + 1),
}


# --- creature -------------------------------------------------------------------------------

def cmd_creature(args) -> int:
    verb = args.verb
    ts = _load(args.inputs, creature_from)
    x = _alphabet(args)
    if verb == "norm":
        # nor of a zero packing number is -inf, which JSON cannot carry
        _emit(args, [{"n": _norm(t.n), "nor": "inf" if t.infinite else (t.nor if t.n else None), "in_K": t.in_K}
                     for t in ts])
        return EXIT_OK
    if verb == "value":
        t = _single(ts)
        if args.point:
            point = pf_from(json.loads(args.point))
            ok = value_member(t, point)
            _emit(args, {"point": pf_to(point), "member": ok})
            return EXIT_OK if ok else EXIT_FAIL
        values = value_set(t, x, args.budget)
        _emit(args, {"count": len(values), "values": [pf_to(v) for v in values]})
        return EXIT_OK
    if verb == "witness":
        t = _single(ts)
        v = witness_value(t, x)
        ok = value_member(t, v)
        _emit(args, {"witness": pf_to(v), "member": ok})
        return EXIT_OK if ok else EXIT_FAIL
    if verb == "cut":
        t = _single(ts)
        a, b = cut(t, _coords(args.coords))
        _emit(args, {"pieces": [creature_to(a), creature_to(b)], "input_n": _norm(t.n)})
        return EXIT_OK
    if verb == "glue":
        _emit(args, creature_to(glue(ts)))
        return EXIT_OK
    if verb == "link":
        if len(ts) < 2:
            raise UsageError("link needs at least two creatures")
        _emit(args, creature_to(link(*ts) if len(ts) == 2 else link_all(ts)))
        return EXIT_OK
    if verb == "restrict":
        t = _single(ts)
        s = restrict_half(t, _coords(args.coords))
        _emit(args, {"creature": creature_to(s), "input_n": _norm(t.n), "n": _norm(s.n)})
        return EXIT_OK
    raise UsageError(f"unknown verb {verb}")


def _single(items: list):
    if len(items) != 1:
        raise UsageError(f"expected one input object, got {len(items)}")
    return items[0]


# --- truncated conditions --------------------------------------------------------------------

def cmd_cond(args) -> int:
    verb = args.verb
    x = _alphabet(args)
    if verb == "amalgamate":
        return _amalgamate_q_infty(args, _load(args.inputs, truncated_from), x)
    ps = _load(args.inputs, truncated_from)
    if verb == "validate":
        out = [{"valid": cond.first_violation(p, args.flavor) is None,
                "violation": cond.first_violation(p, args.flavor)} for p in ps]
        _emit(args, out)
        return EXIT_OK if all(o["valid"] for o in out) else EXIT_FAIL
    if verb == "pos":
        p = _single(ps)
        space = PointSpace(p.window, x, args.budget)
        count = int(cond.pos_mask(p, space).sum())
        _emit(args, {"points": count, "of": space.size, "measure": _rational(Fraction(count, space.size))})
        return EXIT_OK
    if verb == "move":
        p = _single(ps)
        cert = _certificate(args.cert) if args.cert else None
        if cert is None:
            raise UsageError("move needs --cert")
        q = cond.replay(p, cert)
        _emit(args, truncated_to(q))
        return EXIT_OK
    if verb == "leq":
        if len(ps) != 2:
            raise UsageError("leq needs two conditions")
        p, q = ps
        cert = _certificate(args.cert) if args.cert else cond.search_certificate(p, q)
        certified = cert is not None and cond.leq_check(p, q, cert)
        out: Dict[str, Any] = {"certified": certified,
                               "certificate": certificate_to(cert) if cert is not None else None}
        try:
            out["semantic"] = cond.leq_semantic(p, q, x, args.budget)
        except EnumerationTooLarge:
            out["semantic"] = None
        _emit(args, out)
        return EXIT_OK if certified else EXIT_FAIL
    if verb == "project":
        p = _single(ps)
        pi = _mapping(args.pi)
        _emit(args, {"in_Q_pi": cond.in_Q_pi(p, pi), "projection": truncated_to(cond.project_pi(p, pi))})
        return EXIT_OK
    raise UsageError(f"unknown verb {verb}")


def _amalgamate_q_infty(args, ps, x: Alphabet) -> int:
    if not ps:
        raise UsageError("nothing to amalgamate")
    slack = SLACKS[args.slack](len(ps))
    am = cond.amalgamate(ps, slack)
    replayed = [cond.leq_check(p, am.q, c) for p, c in zip(ps, am.certificates)]
    try:
        inside, nonempty = cond.pos_intersection_contains(ps, am.q, x, args.budget)
    except EnumerationTooLarge:
        inside = nonempty = None
    ok = all(replayed) and inside is not False and nonempty is not False
    _emit(args, {"mode": "q-infty", "q": truncated_to(am.q),
                 "certificates": [certificate_to(c) for c in am.certificates],
                 "boundaries": am.boundaries, "steps": am.steps,
                 "verification": {"certificates_replay": replayed, "pos_inside_intersection": inside,
                                  "pos_nonempty": nonempty}, "ok": ok})
    return EXIT_OK if ok else EXIT_FAIL


# --- qhn ------------------------------------------------------------------------------------

def cmd_qhn(args) -> int:
    verb = args.verb
    strict = args.strict
    x = _alphabet(args)
    if verb == "seq-check":
        s = _one(args.inputs[0], seq_from)
        rep = qhn.seq_report(s, strict)
        _emit(args, {"ok": rep.ok, "violations": rep.violations, "waived": rep.waived})
        return EXIT_OK if rep.ok else EXIT_FAIL
    if verb == "amalgamate":
        return _amalgamate_qhn(args, _load(args.inputs, qcond_from), x)
    ps = _load(args.inputs, qcond_from)
    if verb == "validate":
        out = [{"valid": not r, "violations": r} for r in (qhn.cond_report(p, strict) for p in ps)]
        _emit(args, out)
        return EXIT_OK if all(o["valid"] for o in out) else EXIT_FAIL
    if verb == "leq":
        p, q = _pair(ps)
        out: Dict[str, Any] = {"syntactic": qhn.leq_syntactic(p, q)}
        try:
            out["semantic"] = qhn.leq_semantic_q(p, q, x, args.budget)
        except EnumerationTooLarge:
            out["semantic"] = None
        _emit(args, out)
        return EXIT_OK if out["semantic"] in (None, out["syntactic"]) else EXIT_FAIL
    if verb == "compat":
        p0, p1 = _pair(ps)
        point = qhn.compatible_bruteforce(p0, p1, x, args.budget)
        out = {"bruteforce": pf_to(point) if point is not None else None}
        try:
            q = qhn.compatible_constructive(p0, p1, point, x, strict, args.budget) if point is not None else None
            out["constructive"] = qcond_to(q) if q is not None else None
        except TruncationTooShort as exc:
            # the constructive bound needs more blocks than the prefix has; nothing to compare
            out["constructive"] = None
            out["reason"] = exc.code
            out["agree"] = None
            _emit(args, out)
            return EXIT_OK
        out["agree"] = (out["bruteforce"] is None) == (out["constructive"] is None)
        _emit(args, out)
        return EXIT_OK if out["agree"] else EXIT_FAIL
    if verb == "normalize":
        p = _single(ps)
        q = qhn.normalize_dense(p)
        _emit(args, {"normal": qhn.is_normal(q), "above_input": qhn.leq_syntactic(p, q), "q": qcond_to(q)})
        return EXIT_OK
    if verb == "measure":
        return _measure_conditions(args, ps, x)
    if verb == "project":
        p = _single(ps)
        if not args.r:
            raise UsageError("project needs --r")
        r = _one(args.r, qcond_from)
        pi = _mapping(args.pi)
        p_star = qhn.project_pi_q(p, pi, r)
        out = {"p_star": qcond_to(p_star), "above_p": qhn.leq_syntactic(p, p_star)}
        try:
            out["pullback_contained"] = qhn.pullback_contained(p_star, pi, r, x, args.budget)
        except EnumerationTooLarge:
            out["pullback_contained"] = None
        _emit(args, out)
        return EXIT_OK if out["above_p"] and out["pullback_contained"] is not False else EXIT_FAIL
    if verb == "nowhere-dense":
        p = _single(ps)
        stem = _coords(args.coords) if args.coords else None
        res = qhn.nowhere_dense_check(p, stem)
        _emit(args, {"holds": res.holds, "stem_coords": list(res.stem_coords), "reason": res.reason})
        return EXIT_OK if res.holds else EXIT_FAIL
    if verb == "null":
        p = _single(ps)
        res = qhn.null_refinement(p, x, strict)
        blocks = [{"k": b.k, "n0": b.n0, "n1": b.n1, "measure": _rational(b.measure), "exponent": b.exponent,
                   "bound_applies": b.bound_applies, "certified": b.certified} for b in res.blocks]
        _emit(args, {"q": qcond_to(res.q), "blocks": blocks, "measure": _rational(res.measure),
                     "witness": pf_to(res.witness) if res.witness is not None else None})
        return EXIT_OK if all(b.certified for b in res.blocks if b.bound_applies) else EXIT_FAIL
    raise UsageError(f"unknown verb {verb}")


def _pair(ps):
    if len(ps) != 2:
        raise UsageError("this verb needs two conditions")
    return ps


def _amalgamate_qhn(args, ps, x: Alphabet) -> int:
    if not ps:
        raise UsageError("nothing to amalgamate")
    n = len(ps) - 1
    if len({qhn.class_key(p, n) for p in ps}) == 1:
        q = qhn.amalgamate_class(ps, n)
        above = [qhn.leq_syntactic(p, q) for p in ps]
        _emit(args, {"mode": "qhn", "method": "class", "q": qcond_to(q), "verification": {"above_inputs": above},
                     "ok": all(above)})
        return EXIT_OK if all(above) else EXIT_FAIL
    if len(ps) != 2:
        raise UsageError("inputs do not share a class key; only pairs fall back to compatibility")
    p0, p1 = ps
    try:
        p0.w.union(p1.w)
    except IncompatibleFunctions:
        _emit(args, {"mode": "qhn", "method": "compatibility", "q": None, "reason": "contradictory-stems",
                     "ok": True})
        return EXIT_OK
    q = qhn.compatible_constructive(p0, p1, None, x, args.strict, args.budget)
    if q is None:
        _emit(args, {"mode": "qhn", "method": "compatibility", "q": None, "reason": "empty-intersection",
                     "ok": True})
        return EXIT_OK
    above = [qhn.leq_syntactic(p, q) for p in ps]
    _emit(args, {"mode": "qhn", "method": "compatibility", "q": qcond_to(q), "verification": {"above_inputs": above},
                 "ok": all(above)})
    return EXIT_OK if all(above) else EXIT_FAIL


def _family_verdict(sigmas: List[PartialFunction], x: Alphabet, exponent: Optional[int]) -> Dict[str, Any]:
    value = avoidance_measure(sigmas, x.size)
    out: Dict[str, Any] = {"sigmas": len(sigmas), "measure": _rational(value)}
    sizes = {len(s) for s in sigmas}
    if exponent is None and len(sizes) == 1:
        # (1 - a^-1)^b <= e^{-b/a} with a = |X|^{size}
        exponent = len(sigmas) // x.size ** sizes.pop()
    if exponent is not None:
        out["exponent"] = exponent
        out["at_most_exp_neg"] = certify_at_most_exp_neg(value, exponent)
    return out


def _measure_conditions(args, ps, x: Alphabet) -> int:
    out = []
    for p in ps:
        entry = {"pos_measure": _rational(qhn.pos_measure(p, x)), "blocks": []}
        for m, idx in p.blocks:
            entry["blocks"].append({"m": m, **_family_verdict([p.sigmas[j] for j in idx], x, args.exponent)})
        out.append(entry)
    _emit(args, out)
    return EXIT_OK if all(b.get("at_most_exp_neg", True) for e in out for b in e["blocks"]) else EXIT_FAIL


def cmd_measure(args) -> int:
    """Measure of a bare σ family (list of partial functions)."""
    x = _alphabet(args)
    data = _payload(_read(args.input))
    if isinstance(data, dict) and "sigmas" in data and "seq" in data:
        return _measure_conditions(args, [qcond_from(data)], x)
    sigmas = [pf_from(s) for s in (data.get("sigmas", []) if isinstance(data, dict) else data)]
    out = _family_verdict(sigmas, x, args.exponent)
    _emit(args, out)
    return EXIT_OK if out.get("at_most_exp_neg", True) else EXIT_FAIL


# --- suites ---------------------------------------------------------------------------------

GEN_KINDS = ("creature", "cond", "qcond")


def cmd_suite(args) -> int:
    if args.verb == "list":
        rows = [{"name": s.name, "default_count": s.default_count, "summary": s.summary} for s in SUITES.values()]
        _emit(args, rows)
        return EXIT_OK
    if args.verb == "gen":
        return _gen(args)
    if args.verb == "verify":
        return _verify(args)
    raise UsageError(f"unknown verb {args.verb}")


def _gen(args) -> int:
    kind, count = args.kind, args.count or 10
    x = _alphabet(args)
    if kind in SUITES:
        cfg = SuiteConfig(seed=args.seed, count=count, alphabet=Alphabet.parse(args.alphabet) if args.alphabet else None,
                          budget=args.budget)
        items = [make_instance(kind, cfg, i) for i in range(count)]
        _emit(args, document("instances", items, suite=kind, seed=args.seed))
        return EXIT_OK
    if kind not in GEN_KINDS:
        raise UsageError(f"unknown kind {kind!r}; use one of {', '.join(GEN_KINDS)} or a suite name")
    items = []
    for i in range(count):
        rng = rng_for(args.seed, i, kind)
        if kind == "creature":
            t = random_creature(rng, x, args.max_z, args.max_delta, min_n=args.min_n, retries=args.retries)
            items.append(creature_to(t))
        elif kind == "cond":
            p = random_truncated(rng, x, args.window, min_n=args.min_n, max_delta=args.max_delta,
                                 retries=args.retries)
            items.append(truncated_to(p))
        else:
            if args.seq:
                seq = _one(args.seq, seq_from)
            else:
                seq = qhn.minimal_strict_sequence(2) if args.strict else relaxed_sequence(3)
            q = random_qcondition(rng, x, seq, range(args.window), strict=args.strict, retries=args.retries)
            items.append(qcond_to(q))
    _emit(args, document(kind, items, seed=args.seed, alphabet=alphabet_to(x)))
    return EXIT_OK


def _verify(args) -> int:
    if args.replay:
        data = _read(args.replay)
        cases = data if isinstance(data, list) else data.get("counterexamples", [data])
        results = []
        for case in cases:
            res = replay(case, args.budget)
            prop = case.get("property")
            reproduced = res.get(prop) is False if prop in res else not all(res.values())
            results.append({"suite": case["suite"], "index": case.get("index"), "property": prop,
                            "results": res, "reproduced": reproduced})
        _emit(args, {"schema": SCHEMA, "replayed": results})
        return EXIT_FAIL if any(not all(r["results"].values()) for r in results) else EXIT_OK
    if not args.suite:
        raise UsageError("name a suite or pass --replay")
    names = list(SUITES) if args.suite == ["all"] else args.suite
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s): {', '.join(unknown)}")
    alphabet = Alphabet.parse(args.alphabet) if args.alphabet else None
    reports = [run_suite(n, SuiteConfig(args.seed, args.count, alphabet, args.budget, args.workers)) for n in names]
    if args.format == "csv":
        text = "".join(r.to_csv() if i == 0 else r.to_csv().split("\n", 1)[1] for i, r in enumerate(reports))
        _emit(args, None, text)
    else:
        _emit(args, {"schema": SCHEMA, "reports": [r.to_json() for r in reports],
                     "ok": all(r.ok for r in reports)})
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


# --- parser ---------------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alphabet", help="symbol group orders, e.g. 2 or 3x2 (default Z_2)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="enumeration cap in points")
    p.add_argument("--seed", type=int, default=0)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--strict", dest="strict", action="store_true", default=True,
                      help="check every sequence clause (default)")
    mode.add_argument("--relaxed", dest="strict", action="store_false",
                      help="waive the growth clauses that small examples cannot meet")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("-o", "--output", help="write to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="normbench", description="Creature norm and forcing-condition workbench.")
    groups = parser.add_subparsers(dest="group", required=True)

    p = groups.add_parser("creature", help="packing norms and creature operations")
    p.add_argument("verb", choices=["norm", "value", "witness", "cut", "glue", "link", "restrict"])
    p.add_argument("inputs", nargs="+", help="creature JSON files")
    p.add_argument("--coords", help="comma separated coordinates for cut/restrict")
    p.add_argument("--point", help="JSON point to test for value membership")
    _common(p)
    p.set_defaults(func=cmd_creature)

    p = groups.add_parser("cond", help="truncated conditions")
    p.add_argument("verb", choices=["validate", "pos", "move", "leq", "amalgamate", "project"])
    p.add_argument("inputs", nargs="+", help="condition JSON files")
    p.add_argument("--cert", help="certificate JSON file")
    p.add_argument("--flavor", choices=[cond.FLAVOR_EMPTY, cond.FLAVOR_PLUS])
    p.add_argument("--pi", help="embedding as 'i:j,...' or JSON")
    p.add_argument("--slack", choices=sorted(SLACKS), default="safe",
                   help="norm threshold per block: safe, exponential (8^(n+5+i)) or linear (i+1)")
    _common(p)
    p.set_defaults(func=cmd_cond)

    p = groups.add_parser("qhn", help="conditions with norm-sequence blocks")
    p.add_argument("verb", choices=["seq-check", "validate", "leq", "compat", "amalgamate", "normalize", "measure",
                                    "project", "nowhere-dense", "null"])
    p.add_argument("inputs", nargs="+", help="sequence or condition JSON files")
    p.add_argument("--pi", help="embedding as 'i:j,...' or JSON")
    p.add_argument("--r", help="condition above the pullback, for project")
    p.add_argument("--coords", help="stem coordinates for nowhere-dense")
    p.add_argument("--exponent", type=int, help="N in the bound e^{-N} for measure")
    _common(p)
    p.set_defaults(func=cmd_qhn)

    p = groups.add_parser("amalgamate", help="amalgamate conditions and verify the result")
    p.add_argument("mode", choices=["q-infty", "qhn"])
    p.add_argument("inputs", nargs="+")
    p.add_argument("--slack", choices=sorted(SLACKS), default="safe",
                   help="norm threshold per block: safe, exponential (8^(n+5+i)) or linear (i+1)")
    _common(p)
    p.set_defaults(func=lambda a: _amalgamate_q_infty(a, _load(a.inputs, truncated_from), _alphabet(a))
                   if a.mode == "q-infty" else _amalgamate_qhn(a, _load(a.inputs, qcond_from), _alphabet(a)))

    p = groups.add_parser("measure", help="exact measure of a σ family or condition")
    p.add_argument("input")
    p.add_argument("--exponent", type=int, help="N in the bound e^{-N}")
    _common(p)
    p.set_defaults(func=cmd_measure)

    p = groups.add_parser("suite", help="property suites and instance generation")
    sub = p.add_subparsers(dest="verb", required=True)
    s = sub.add_parser("list")
    _common(s)
    s = sub.add_parser("gen", help="deterministic random instances")
    s.add_argument("kind", help=f"{', '.join(GEN_KINDS)} or a suite name")
    s.add_argument("--count", type=int)
    s.add_argument("--max-z", type=int, default=4)
    s.add_argument("--max-delta", type=int, default=4)
    s.add_argument("--min-n", type=int, default=1)
    s.add_argument("--window", type=int, default=8)
    s.add_argument("--seq", help="sequence JSON file for qcond")
    s.add_argument("--retries", type=int, default=1000)
    _common(s)
    s = sub.add_parser("verify", help="run property suites")
    s.add_argument("suite", nargs="*", help="suite names or 'all'")
    s.add_argument("--count", type=int)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--replay", help="counterexample or report JSON to rerun")
    _common(s)
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"normbench: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EnumerationTooLarge, GenerationFailed) as exc:
        print(json.dumps({"error": exc.code, "message": str(exc)}), file=sys.stderr)
        return EXIT_BUDGET
    except NormbenchError as exc:
        print(json.dumps({"error": exc.code, "message": str(exc)}), file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
