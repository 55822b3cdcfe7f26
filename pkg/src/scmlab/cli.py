"""Command-line interface.

Subcommands: verify (family invariant suites), gaps (separation table), sep
(pairwise distance check), decode (oracle file to parameter), nfl
(no-free-lunch runs), dump-oracle and dump-scm (canonical artifacts for
a parameter file).

Report commands emit a deterministic JSON envelope (tool version, active
caps, config echo, results; keys sorted). dump-oracle writes raw
canonical oracle bytes and dump-scm / decode write raw JSON documents,
so their outputs feed straight back in as inputs.

Exit codes: 0 success, 1 a verification or internal consistency check
failed, 2 invalid input or a decode failure, 3 an enumeration cap was
exceeded.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import sys
from fractions import Fraction

from . import __version__
from .caps import all_caps
from .errors import (
    BadPositionError,
    BadRangeError,
    InvalidScmError,
    InvalidSequenceError,
    InvalidTreeError,
    KindMismatchError,
    LengthMismatchError,
    MTooLargeError,
    NotMemberError,
    NTooLargeError,
    OracleDecodeError,
    OracleFormatError,
    ScmLabError,
    SupportTooLargeError,
)
from .families import BIPARTITE, TREE, XOR, Family
from .gap import pairwise_separation_check, separation_table
from .jsonio import param_from_json, param_to_json, scm_to_json
from .learning import EXACT, MONTE_CARLO, run_nfl
from .oracle import KINDS, compute_oracle, parse, serialize
from .rational import frac_str
from .verify import all_passed, verify_family

_CAP_ERRORS = (NTooLargeError, MTooLargeError, SupportTooLargeError)
_INPUT_ERRORS = (
    OracleDecodeError,
    OracleFormatError,
    InvalidScmError,
    InvalidTreeError,
    InvalidSequenceError,
    LengthMismatchError,
    KindMismatchError,
    BadRangeError,
    BadPositionError,
    NotMemberError,
)

GAP_CSV_COLUMNS = [
    "family",
    "size_param",
    "n",
    "lower_kind",
    "higher_kind",
    "ambiguity_count",
    "log2_ambiguity",
    "encoder_bits",
    "entropy_bits",
    "min_pairwise_d_int",
]


def _jsonable(value):
    """Exact-arithmetic friendly JSON conversion; Fractions stay text."""
    if isinstance(value, Fraction):
        return frac_str(value)
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {
            f.name: _jsonable(getattr(value, f.name))
            for f in dataclasses.fields(value)
        }
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, frozenset):
        return sorted(_jsonable(v) for v in value)
    if isinstance(value, bytes):
        return value.decode("ascii")
    return value


def _envelope(command: str, config: dict, results) -> str:
    doc = {
        "tool": {"name": "scmlab", "version": __version__},
        "command": command,
        "config": _jsonable({**config, "caps": all_caps()}),
        "results": _jsonable(results),
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _write(out_path: str | None, data: bytes) -> None:
    if out_path:
        with open(out_path, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)


def _gap_rows_csv(rows) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(GAP_CSV_COLUMNS)
    for row in rows:
        writer.writerow(
            [
                row.family,
                row.size_param,
                row.n,
                row.lower_kind,
                row.higher_kind,
                row.ambiguity_count,
                repr(row.log2_ambiguity),
                row.encoder_bits,
                repr(row.entropy_bits),
                "" if row.min_pairwise_d_int is None else frac_str(row.min_pairwise_d_int),
            ]
        )
    return buffer.getvalue()


def _family_from_args(args) -> Family:
    return Family(args.family, args.size)


def _load_param(args):
    with open(args.param_file, "r", encoding="ascii") as fh:
        doc = json.load(fh)
    return param_from_json(args.family, doc)


def _cmd_verify(args) -> int:
    family = _family_from_args(args)
    results = verify_family(family)
    config = {"family": family.kind, "size": family.size, "n": family.n_vars()}
    _write(args.out, _envelope("verify", config, results).encode("ascii"))
    return 0 if all_passed(results) else 1


def _cmd_gaps(args) -> int:
    family = _family_from_args(args)
    rows = separation_table(family, args.lower, args.higher)
    if args.format == "csv":
        _write(args.out, _gap_rows_csv(rows).encode("ascii"))
    else:
        config = {"family": family.kind, "size": family.size}
        _write(args.out, _envelope("gaps", config, rows).encode("ascii"))
    return 0


def _cmd_sep(args) -> int:
    epsilon = Fraction(args.epsilon)
    check = pairwise_separation_check(args.size, epsilon)
    if args.format == "csv":
        rows = separation_table(Family(BIPARTITE, args.size))
        rows = [
            dataclasses.replace(row, min_pairwise_d_int=check.min_pairwise_d_int)
            for row in rows
        ]
        _write(args.out, _gap_rows_csv(rows).encode("ascii"))
    else:
        config = {"family": BIPARTITE, "size": args.size, "epsilon": epsilon}
        _write(args.out, _envelope("sep", config, check).encode("ascii"))
    return 0


def _cmd_decode(args) -> int:
    from .decoders import graph_from_int1, string_from_cf1, tree_from_int1

    with open(args.oracle_file, "rb") as fh:
        oracle = parse(fh.read())
    decoder = {
        TREE: tree_from_int1,
        BIPARTITE: graph_from_int1,
        XOR: string_from_cf1,
    }[args.family]
    param = decoder(oracle)
    doc = param_to_json(args.family, param)
    _write(args.out, (json.dumps(doc, sort_keys=True, indent=2) + "\n").encode("ascii"))
    return 0


def _cmd_nfl(args) -> int:
    report = run_nfl(
        m=args.size,
        n_samples=args.n_samples,
        learner_id=args.learner,
        mode=args.mode,
        trials=args.trials,
        seed=args.seed,
    )
    config = {
        "m": args.size,
        "n_samples": args.n_samples,
        "learner": args.learner,
        "mode": args.mode,
        "trials": args.trials,
        "seed": args.seed,
    }
    _write(args.out, _envelope("nfl", config, report).encode("ascii"))
    return 0


def _cmd_dump_oracle(args) -> int:
    family = _family_from_args(args)
    param = _load_param(args)
    oracle = compute_oracle(family.build(param), args.kind)
    _write(args.out, serialize(oracle))
    return 0


def _cmd_dump_scm(args) -> int:
    family = _family_from_args(args)
    param = _load_param(args)
    doc = scm_to_json(family.build(param))
    _write(args.out, (json.dumps(doc, sort_keys=True, indent=2) + "\n").encode("ascii"))
    return 0


def _add_family_size(parser: argparse.ArgumentParser, families=None) -> None:
    parser.add_argument(
        "--family",
        required=True,
        choices=list(families or (TREE, BIPARTITE, XOR)),
        help="family kind",
    )
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--n", dest="size", type=int, help="tree size parameter")
    group.add_argument("--m", dest="size", type=int, help="layer/module size parameter")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="scmlab",
        description="exact answer oracles for binary acyclic SCMs",
    )
    parser.add_argument("--version", action="version", version=f"scmlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run a family's exhaustive invariant suite")
    _add_family_size(p)
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("gaps", help="emit the separation table for a family")
    _add_family_size(p)
    p.add_argument("--lower", choices=list(KINDS), help="lower oracle kind")
    p.add_argument("--higher", choices=list(KINDS), help="higher oracle kind")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.set_defaults(fn=_cmd_gaps)

    p = sub.add_parser("sep", help="pairwise interventional distances (layer graphs)")
    p.add_argument("--m", dest="size", type=int, required=True)
    p.add_argument("--epsilon", required=True, help="ball radius, e.g. 1/5")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.set_defaults(fn=_cmd_sep)

    p = sub.add_parser("decode", help="recover a family parameter from an oracle file")
    p.add_argument("--family", required=True, choices=[TREE, BIPARTITE, XOR])
    p.add_argument("--oracle-file", required=True)
    p.add_argument("--out", help="write the parameter JSON here instead of stdout")
    p.set_defaults(fn=_cmd_decode)

    p = sub.add_parser("nfl", help="no-free-lunch measurement on layer graphs")
    p.add_argument("--m", dest="size", type=int, required=True)
    p.add_argument("--n-samples", type=int, required=True)
    p.add_argument("--learner", required=True)
    p.add_argument("--mode", choices=[EXACT, MONTE_CARLO], default=MONTE_CARLO)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.set_defaults(fn=_cmd_nfl)

    p = sub.add_parser("dump-oracle", help="canonical oracle bytes for a parameter")
    _add_family_size(p)
    p.add_argument("--param-file", required=True)
    p.add_argument("--kind", required=True, choices=list(KINDS))
    p.add_argument("--out", help="write the oracle bytes here instead of stdout")
    p.set_defaults(fn=_cmd_dump_oracle)

    p = sub.add_parser("dump-scm", help="SCM JSON document for a parameter")
    _add_family_size(p)
    p.add_argument("--param-file", required=True)
    p.add_argument("--out", help="write the SCM JSON here instead of stdout")
    p.set_defaults(fn=_cmd_dump_scm)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except _CAP_ERRORS as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 3
    except _INPUT_ERRORS as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError, ValueError, ZeroDivisionError) as exc:
        print(f"error[INPUT]: {exc}", file=sys.stderr)
        return 2
    except ScmLabError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
