import json
import random

import pytest

from normbench import qhn
from normbench.core import Alphabet, PartialFunction
from normbench.creatures import Creature
from normbench.errors import SchemaError
from normbench.generators import certified_pair, random_creature, random_qcondition, relaxed_sequence
from normbench.serialize import (
    alphabet_from,
    alphabet_to,
    certificate_from,
    certificate_to,
    check_schema,
    creature_from,
    creature_to,
    decode,
    document,
    dumps,
    encode,
    pf_from,
    qcond_from,
    qcond_to,
    truncated_from,
    truncated_to,
)

Z2 = Alphabet.cyclic(2)


def through_json(data):
    return json.loads(dumps(data))


def test_partial_function_forms():
    eta = PartialFunction({3: 1, 0: 0})
    assert pf_from([[0, 0], [3, 1]]) == eta == pf_from({"3": 1, "0": 0})


def test_alphabet_forms():
    x = Alphabet((3, 2))
    assert alphabet_from(through_json(alphabet_to(x))) == x
    assert alphabet_from("3x2") == x and alphabet_from(2) == Z2


@pytest.mark.parametrize("seed", range(20))
def test_creature_round_trip(seed):
    t = random_creature(random.Random(seed), Z2)
    assert creature_from(through_json(creature_to(t))) == t


def test_infinite_creature_round_trip():
    t = Creature.free([0, 1])
    data = through_json(creature_to(t))
    assert data["n"] == "inf" and creature_from(data) == t


def test_wrong_stated_norm_is_rejected():
    data = creature_to(Creature.make([0, 1], [PartialFunction({0: 0})]))
    data["n"] = 2
    with pytest.raises(SchemaError):
        creature_from(data)


@pytest.mark.parametrize("seed", range(10))
def test_truncated_and_certificate_round_trip(seed):
    p, q, cert = certified_pair(random.Random(seed), Z2, 8)
    assert truncated_from(through_json(truncated_to(p))) == p
    assert truncated_from(through_json(truncated_to(q))) == q
    assert certificate_from(through_json(certificate_to(cert))) == cert


@pytest.mark.parametrize("seed", range(10))
def test_qcondition_round_trip(seed):
    p = random_qcondition(random.Random(seed), Z2, relaxed_sequence(3), range(7))
    assert qcond_from(through_json(qcond_to(p))) == p
    assert decode("qcondition", encode("qcondition", p)) == p


def test_qcondition_window_defaults_to_mentioned_coordinates():
    p = qcond_from({"w": [[4, 1]], "sigmas": [[[1, 0], [2, 0]]], "blocks": {"0": [0]}, "seq": [[2, 3]]})
    assert p.window == frozenset({1, 2, 4}) and p.seq == qhn.NormSeqPrefix(((2, 3),))


def test_schema_errors():
    with pytest.raises(SchemaError):
        check_schema({"kind": "creature"})
    with pytest.raises(SchemaError):
        decode("unknown", {})
    with pytest.raises(SchemaError):
        decode("creature", {"delta": []})
    with pytest.raises(SchemaError):
        decode("certificate", [{"move": "teleport"}])
    doc = document("creature", {"z": [0]}, name="x")
    assert check_schema(doc) is doc and doc["schema"] == 1


def test_dumps_is_deterministic():
    a = dumps({"b": 1, "a": [1, 2]})
    assert a == dumps({"a": [1, 2], "b": 1}) and a.endswith("\n")
