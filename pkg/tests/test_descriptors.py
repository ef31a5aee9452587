import json

import pytest

from kummerlab.descriptors import (
    build_arboreal,
    build_matgroup,
    dump_arboreal,
    dump_matgroup,
    parse_arboreal,
    parse_matgroup,
)
from kummerlab.errors import DescriptorError
from kummerlab.matgroups import sl2_group


def test_matgroup_roundtrip():
    g = sl2_group(5)
    doc = dump_matgroup(g)
    assert doc["schema_version"] == 1
    rebuilt = build_matgroup(json.dumps(doc))
    assert rebuilt == g


def test_arboreal_roundtrip():
    doc = {"modulus": 12,
           "generators": [{"t": [1, 0], "m": [5, 0, 0, 5]}]}
    g = build_arboreal(doc)
    assert g.order == 4
    dumped = dump_arboreal(g)
    assert build_arboreal(dumped) == g


@pytest.mark.parametrize("bad", [
    "not json at all",
    '{"generators": []}',
    '{"modulus": 1, "generators": []}',
    '{"modulus": 5, "generators": [[1, 2, 3]]}',
    '{"modulus": 5, "generators": "x"}',
    '[1, 2]',
])
def test_matgroup_bad_descriptors(bad):
    with pytest.raises(DescriptorError):
        parse_matgroup(bad)


@pytest.mark.parametrize("bad", [
    '{"modulus": 5, "generators": [{"t": [1, 0]}]}',
    '{"modulus": 5, "generators": [{"t": [1], "m": [1, 0, 0, 1]}]}',
    '{"modulus": 5, "generators": [[1, 0, 0, 1]]}',
])
def test_arboreal_bad_descriptors(bad):
    with pytest.raises(DescriptorError):
        parse_arboreal(bad)
