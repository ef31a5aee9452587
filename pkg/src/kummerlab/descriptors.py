"""JSON descriptors for matrix and arboreal groups.

Matrix group:   {"modulus": N, "generators": [[a, b, c, d], ...]}
Arboreal group: {"modulus": N, "generators": [{"t": [x, y], "m": [a, b, c, d]}, ...]}

Emitted documents additionally carry a schema_version field; loaders accept
documents with or without it.
"""

from __future__ import annotations

import json

from .errors import DescriptorError
from .kummer import ArborealGroup, close_arboreal
from .matgroups import DEFAULT_GROUP_CAP, MatGroup, close_group

SCHEMA_VERSION = 1


def _load_json(source):
    if isinstance(source, (dict, list)):
        return source
    try:
        return json.loads(source)
    except (TypeError, ValueError) as exc:
        raise DescriptorError(f"invalid JSON: {exc}") from exc


def _check_modulus(obj):
    if not isinstance(obj, dict):
        raise DescriptorError("descriptor must be a JSON object")
    n = obj.get("modulus")
    if not isinstance(n, int) or n < 2:
        raise DescriptorError("modulus must be an integer >= 2")
    return n


def _int_list(xs, length, what):
    if (not isinstance(xs, (list, tuple)) or len(xs) != length
            or not all(isinstance(x, int) for x in xs)):
        raise DescriptorError(f"{what} must be a list of {length} integers")
    return tuple(xs)


def parse_matgroup(source):
    """(modulus, generator tuples) from a descriptor."""
    obj = _load_json(source)
    n = _check_modulus(obj)
    gens = obj.get("generators")
    if not isinstance(gens, list):
        raise DescriptorError("generators must be a list")
    return n, [_int_list(g, 4, "matrix generator") for g in gens]


def build_matgroup(source, cap: int = DEFAULT_GROUP_CAP) -> MatGroup:
    n, gens = parse_matgroup(source)
    return close_group(gens, n, cap)


def dump_matgroup(g: MatGroup) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "modulus": g.modulus,
        "generators": [list(m) for m in g.generating_set()],
        "order": g.order,
    }


def parse_arboreal(source):
    obj = _load_json(source)
    n = _check_modulus(obj)
    gens = obj.get("generators")
    if not isinstance(gens, list):
        raise DescriptorError("generators must be a list")
    out = []
    for g in gens:
        if not isinstance(g, dict) or "t" not in g or "m" not in g:
            raise DescriptorError("arboreal generator needs 't' and 'm' fields")
        out.append((_int_list(g["t"], 2, "translation part"),
                    _int_list(g["m"], 4, "matrix part")))
    return n, out


def build_arboreal(source, cap: int = DEFAULT_GROUP_CAP) -> ArborealGroup:
    n, gens = parse_arboreal(source)
    return close_arboreal(gens, n, cap)


def dump_arboreal(g: ArborealGroup) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "modulus": g.modulus,
        "generators": [{"t": list(t), "m": list(m)} for t, m in g.generating_set()],
        "order": g.order,
    }
