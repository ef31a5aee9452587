"""Command-line surface.

Exit codes: 0 success/pass, 1 check or suite failure, 2 resource cap,
3 parse error, 4 inconsistent input, 64 usage.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .cohomology import GModule, h1
from .descriptors import (
    SCHEMA_VERSION,
    build_arboreal,
    build_matgroup,
    dump_matgroup,
)
from .errors import (
    CohomologyCapError,
    DescriptorError,
    GroupTooLargeError,
    InconsistentGroupError,
    KummerlabError,
    ModulusMismatchError,
    NonInvertibleError,
    OverflowGuardError,
)
from .kummer import total_failure_identity_check
from .matgroups import CartanData, cartan, cartan_normaliser, scalars_in
from .suites import run_suite, suite_names

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CAP = 2
EXIT_PARSE = 3
EXIT_INCONSISTENT = 4
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _emit(payload: dict, as_json: bool, table_lines):
    if as_json:
        payload = {"schema_version": SCHEMA_VERSION, **payload}
        print(json.dumps(payload, indent=2))
    else:
        print(f"# schema-version {SCHEMA_VERSION}")
        for line in table_lines:
            print(line)


def _read_source(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise DescriptorError(f"cannot read {path}: {exc}") from exc


def cmd_cartan(args) -> int:
    try:
        data = CartanData(args.gamma, args.delta, args.prime, args.level)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    C = cartan(data)
    payload = {
        "parameters": {"gamma": args.gamma, "delta": args.delta,
                       "prime": args.prime, "level": args.level},
        "order": C.order,
        "abelian": C.is_abelian(),
        "scalar_order": scalars_in(C).order,
        "descriptor": dump_matgroup(C),
    }
    lines = [
        f"Cartan subgroup mod {args.prime}^{args.level}, "
        f"(gamma, delta) = ({args.gamma}, {args.delta})",
        f"order          {C.order}",
        f"abelian        {C.is_abelian()}",
        f"scalar order   {scalars_in(C).order}",
    ]
    if args.normaliser:
        N = cartan_normaliser(C, data)
        payload["normaliser_order"] = N.order
        payload["normaliser_descriptor"] = dump_matgroup(N)
        lines.append(f"normaliser     {N.order} (index {N.order // C.order})")
    lines.append("descriptor     " + json.dumps(dump_matgroup(C)))
    _emit(payload, args.json, lines)
    return EXIT_OK


def cmd_h1(args) -> int:
    group = build_matgroup(_read_source(args.group))
    p, k = group.prime_power()
    level = args.module_level or k
    res = h1(group, GModule(p, level), cap=args.cap)
    payload = {
        "group_order": group.order,
        "module": f"(Z/{p}^{level})^2",
        "invariant_factors": list(res.invariant_factors),
        "order": res.order,
        "exponent": res.exponent,
    }
    lines = [
        f"H1 of group of order {group.order} mod {group.modulus} "
        f"acting on (Z/{p ** level})^2",
        f"H1 = {res}",
        f"order {res.order}, exponent {res.exponent}",
    ]
    _emit(payload, args.json, lines)
    return EXIT_OK


def cmd_kummer(args) -> int:
    group = build_arboreal(_read_source(args.group))
    rep = total_failure_identity_check(group)
    payload = {
        "modulus": rep.modulus,
        "order": group.order,
        "fiber_order": rep.fiber_order,
        "total_failure": rep.total_failure,
        "per_prime": [
            {"ell": ell, "n": n, "A": a, "B": b}
            for ell, n, a, b in rep.per_prime
        ],
        "identity_holds": rep.identity_holds,
    }
    lines = [
        f"arboreal group mod {rep.modulus}: order {group.order}, "
        f"fiber order {rep.fiber_order}",
        f"N^2 / #V_N = {rep.total_failure}",
    ]
    for ell, n, a, b in rep.per_prime:
        lines.append(f"  ell = {ell} (n = {n}):  A = {a}  B = {b}")
    lines.append(f"factorisation identity holds: {rep.identity_holds}")
    _emit(payload, args.json, lines)
    return EXIT_OK if rep.identity_holds else EXIT_FAIL


def cmd_verify(args) -> int:
    if args.suite not in suite_names():
        print(f"error: unknown suite {args.suite!r}; known: "
              f"{', '.join(suite_names())}", file=sys.stderr)
        return EXIT_USAGE
    rep = run_suite(args.suite, seed=args.seed, instances=args.instances)
    payload = rep.to_dict()
    lines = [
        f"suite {rep.suite} (seed {rep.seed}): "
        f"{sum(r.passed for r in rep.results)}/{rep.instance_count} pass",
    ]
    for key, val in rep.stats.items():
        lines.append(f"  {key}: {val}")
    for r in rep.results:
        if not r.passed:
            lines.append(f"  FAIL #{r.index}: {r.detail}")
            lines.append(f"       repro: seed={rep.seed} index={r.index} "
                         f"data={json.dumps(r.data)}")
    _emit(payload, args.json, lines)
    return EXIT_OK if rep.passed else EXIT_FAIL


def build_parser() -> _Parser:
    parser = _Parser(prog="kummerlab",
                     description="finite-level Kummer theory toolkit")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cartan", help="build a Cartan subgroup")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--level", type=int, default=1)
    p.add_argument("--gamma", type=int, default=0)
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--normaliser", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_cartan)

    p = sub.add_parser("h1", help="first cohomology of a matrix group")
    p.add_argument("group", help="group descriptor JSON file ('-' for stdin)")
    p.add_argument("--module-level", type=int, default=None)
    p.add_argument("--cap", type=int, default=10_000)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_h1)

    p = sub.add_parser("kummer", help="Kummer failures of an arboreal group")
    p.add_argument("group", help="arboreal descriptor JSON file ('-' for stdin)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_kummer)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("--suite", required=True,
                   help=f"one of: {', '.join(suite_names())}")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--instances", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    try:
        return args.fn(args)
    except (GroupTooLargeError, CohomologyCapError, OverflowGuardError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except DescriptorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (InconsistentGroupError, ModulusMismatchError,
            NonInvertibleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except KummerlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
