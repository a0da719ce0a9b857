"""``claspkit`` command line.

Exit codes: 0 success, 1 usage or configuration error, 2 parse error,
3 domain error, 4 resource cap hit, 5 self-test failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .alexander import alexander, alexander_via_seifert, conway, knot_determinant, s_matrix, seifert_genus_bound
from .braid import comb, descending_diagram, eliminate_inadmissible, free_reduce, parse_word, serialize_word, word_to_clasp
from .core import diagram_count, enumerate_diagrams, is_descending, mirror, parse_diagram, read_corpus
from .errors import ConfigError, DomainError, ParseError, ResourceError
from .moves import (
    MOVE_KINDS, MoveInstance, apply_move, equiv_search, load_c4_rules, set_c4_rules, validate_c4_rule,
)

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_DOMAIN, EXIT_RESOURCE, EXIT_SELFTEST = 0, 1, 2, 3, 4, 5


@dataclass
class CommandResult:
    exit_code: int
    payload: str


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True)


# -- shared helpers ------------------------------------------------------------

def _items(args, attr: str = "diagram") -> list[str]:
    if getattr(args, "file", None):
        try:
            lines = Path(args.file).read_text().splitlines()
        except OSError as exc:
            raise UsageError(f"cannot read {args.file}: {exc}") from exc
        return read_corpus(lines)
    value = getattr(args, attr)
    if value is None:
        raise UsageError("give an item on the command line or --file PATH")
    return [value]


def _calibrated_v23(args):
    """v2/v3 evaluator: shipped weights, or a presentation when --cache is given."""
    from .vassiliev import an_presentation, calibrate_v23, v2v3

    if getattr(args, "cache", None):
        P = an_presentation(3, cache_dir=args.cache)
        cal = calibrate_v23(P)
        return lambda d: v2v3(d, P, cal)
    return v2v3


def _invariants(d, v23: Callable) -> dict:
    alex = alexander(d)
    v2, v3 = v23(d)
    return {
        "diagram": d.key,
        "s_matrix": [[str(e) for e in row] for row in s_matrix(d)],
        "alexander": str(alex),
        "conway": str(conway(alex)),
        "determinant": knot_determinant(d),
        "genus_bound": seifert_genus_bound(d),
        "v2": v2,
        "v3": v3,
    }


def _format_invariants(rec: dict) -> str:
    width = max((len(e) for row in rec["s_matrix"] for e in row), default=1)
    lines = [f"diagram: {rec['diagram']}", "S_D:"]
    for row in rec["s_matrix"]:
        lines.append("  " + " ".join(e.rjust(width) for e in row))
    for key in ("alexander", "conway", "determinant", "genus_bound", "v2", "v3"):
        lines.append(f"{key}: {rec[key]}")
    return "\n".join(lines)


# -- subcommands ---------------------------------------------------------------

def cmd_validate(args) -> CommandResult:
    out = []
    for text in _items(args):
        d = parse_diagram(text)
        out.append({"diagram": d.key, "chords": d.n, "descending": is_descending(d)})
    if args.json:
        return CommandResult(0, _dump(out if args.file else out[0]))
    return CommandResult(0, "\n".join(f"ok {r['diagram']}" for r in out))


def cmd_invariants(args) -> CommandResult:
    v23 = _calibrated_v23(args)
    recs = [_invariants(parse_diagram(t), v23) for t in _items(args)]
    if args.json:
        return CommandResult(0, _dump(recs if args.file else recs[0]))
    return CommandResult(0, "\n\n".join(_format_invariants(r) for r in recs))


def cmd_mirror(args) -> CommandResult:
    out = [mirror(parse_diagram(t)).key for t in _items(args)]
    if args.json:
        return CommandResult(0, _dump(out if args.file else {"diagram": out[0]}))
    return CommandResult(0, "\n".join(out))


_INT_FIELDS = ("k", "direction", "gap", "gap2", "slot", "sign", "order", "rule")


def _parse_move(kind: str, params: Sequence[str]) -> MoveInstance:
    if kind not in MOVE_KINDS:
        raise ParseError(f"unknown move kind {kind!r}; expected one of {', '.join(MOVE_KINDS)}")
    fields: dict = {}
    for p in params:
        name, sep, value = p.partition("=")
        if not sep:
            raise ParseError(f"move parameter {p!r} must look like name=value")
        try:
            if name == "chords":
                fields["chords"] = tuple(int(x) for x in value.split(","))
            elif name in _INT_FIELDS:
                fields[name] = {"+": 1, "-": -1}.get(value, None) if value in "+-" else int(value)
            else:
                raise ParseError(f"unknown move parameter {name!r}")
        except ValueError as exc:
            raise ParseError(f"bad value in {p!r}") from exc
    return MoveInstance(kind, **fields)


def cmd_move_apply(args) -> CommandResult:
    d = parse_diagram(args.diagram)
    inst = _parse_move(args.kind, args.params)
    try:
        out = apply_move(d, inst)
    except IndexError as exc:
        raise DomainError(str(exc)) from exc
    except TypeError as exc:
        raise ParseError(f"missing parameters for {args.kind}") from exc
    if args.json:
        return CommandResult(0, _dump({"diagram": out.key, "move": inst.to_json()}))
    return CommandResult(0, out.key)


def cmd_move_search(args) -> CommandResult:
    d1, d2 = parse_diagram(args.d1), parse_diagram(args.d2)
    res = equiv_search(d1, d2, budget=args.budget, max_chords=args.max_chords)
    if args.json:
        return CommandResult(0, _dump(res.to_json()))
    lines = [f"status: {res.status}"]
    if res.status == "connected":
        lines += [f"  {m}" for m in res.path]
    if res.status == "distinct":
        lines.append(f"witness: {res.witness} {res.values[0]} vs {res.values[1]}")
    lines.append(f"nodes expanded: {res.nodes_expanded}; max chords: {res.max_chords_seen}")
    return CommandResult(0, "\n".join(lines))


def cmd_move_validate_c4(args) -> CommandResult:
    rules = load_c4_rules(args.path)
    reports = [validate_c4_rule(r, contexts=args.contexts, seed=args.seed) for r in rules]
    code = EXIT_OK if all(r.accepted for r in reports) else EXIT_DOMAIN
    if args.json:
        return CommandResult(code, _dump([r.to_json() for r in reports]))
    lines = []
    for idx, r in enumerate(reports):
        verdict = "accepted" if r.accepted else "rejected"
        lines.append(f"rule {idx}: {verdict} ({r.contexts - r.failures if r.accepted else r.failures} "
                     f"{'contexts' if r.accepted else 'failure'})")
        if r.counterexample:
            lines.append(f"  lhs in context: {r.counterexample[0]}")
            lines.append(f"  rhs in context: {r.counterexample[1]}")
    return CommandResult(code, "\n".join(lines))


def cmd_braid(args) -> CommandResult:
    out = []
    for text in _items(args, "word"):
        w = parse_word(text)
        if args.op == "comb":
            out.append(serialize_word(comb(w)))
        elif args.op == "eliminate":
            out.append(serialize_word(eliminate_inadmissible(free_reduce(w))))
        elif args.op == "to-clasp":
            out.append(word_to_clasp(w).key)
        else:
            out.append(descending_diagram(w).key)
    if args.json:
        return CommandResult(0, _dump(out if args.file else {"result": out[0]}))
    return CommandResult(0, "\n".join(out))


def cmd_an(args) -> CommandResult:
    from .vassiliev import AnConfig, an_presentation

    config = AnConfig(
        move_chords=args.max_chords,
        braid_max_strand=args.strands,
        braid_context=args.context,
    )
    P = an_presentation(args.order, config, cache_dir=args.cache)
    summary = P.summary()
    summary["config"] = config.digest(args.order)
    if args.json:
        return CommandResult(0, _dump(summary))
    lines = [f"A_{P.order}: free rank {P.free_rank}, torsion {P.torsion or 'none'} ({summary['status']})",
             f"generators: {len(P.generators)}; relations: {P.relation_shape[0]} rows, rank {P.relation_rank}",
             f"basis representatives: {', '.join(P.basis_representatives) or '(not diagonal)'}",
             "provenance: " + ", ".join(f"{k}={v}" for k, v in sorted(P.provenance.items()))]
    return CommandResult(0, "\n".join(lines))


def cmd_pair(args) -> CommandResult:
    from .vassiliev import pair

    value = pair(parse_diagram(args.a), parse_diagram(args.b))
    return CommandResult(0, _dump({"pair": value}) if args.json else str(value))


def cmd_enumerate(args) -> CommandResult:
    if args.count_only:
        n = diagram_count(args.k)
        return CommandResult(0, _dump({"count": n}) if args.json else str(n))
    cap = None if args.no_cap else args.cap
    ds = enumerate_diagrams(args.k, cap=cap)
    if args.json:
        return CommandResult(0, _dump([d.key for d in ds]))
    return CommandResult(0, "\n".join(d.key for d in ds))


def _selftest(seed: int, cases: int) -> list[dict]:
    """Property suites on seeded random inputs; one record per suite."""
    from .alexander import equal_up_to_unit, alexander_raw
    from .braid import random_word
    from .core import random_diagram
    from .moves import applicable_moves
    from .vassiliev import I_inverse, I_map, FormalSum, v2_from_conway, v2v3

    rng = np.random.default_rng(seed)
    suites = []

    def suite(name, fn):
        failures = 0
        for _ in range(cases):
            if not fn():
                failures += 1
        suites.append({"suite": name, "cases": cases, "failures": failures})

    def seifert():
        d = random_diagram(int(rng.integers(0, 7)), rng)
        return equal_up_to_unit(alexander_via_seifert(d, check=False), alexander_raw(d))

    def moves():
        d = random_diagram(int(rng.integers(0, 7)), rng)
        ms = applicable_moves(d, ["A", "B", "C1_delete", "C1_insert", "C2_delete", "C2_insert"], max_chords=d.n + 2)
        if not ms:
            return True
        e = apply_move(d, ms[int(rng.integers(len(ms)))])
        return alexander(d) == alexander(e) and v2v3(d) == v2v3(e)

    def v2():
        d = random_diagram(int(rng.integers(0, 7)), rng)
        v2_, v3_ = v2v3(d)
        return v2_ == v2_from_conway(d) and v2v3(mirror(d)) == (v2_, -v3_)

    def imap():
        s = FormalSum((random_diagram(int(rng.integers(0, 4)), rng), int(rng.integers(-3, 4))) for _ in range(3))
        return I_map(I_inverse(s)) == s and I_inverse(I_map(s)) == s

    def braid():
        w = random_word(rng, 5, 6)
        d = descending_diagram(w)
        return is_descending(d) and alexander(d) == alexander(word_to_clasp(w))

    suite("seifert-oracle", seifert)
    suite("move-invariance", moves)
    suite("v2-conway-mirror", v2)
    suite("imap-inverse", imap)
    suite("braid-descending", braid)
    return suites


def cmd_selftest(args) -> CommandResult:
    suites = _selftest(args.seed, args.cases)
    failed = sum(s["failures"] for s in suites)
    if args.json:
        payload = _dump({"seed": args.seed, "suites": suites, "failures": failed})
    else:
        payload = "\n".join(
            f"{'PASS' if s['failures'] == 0 else 'FAIL'} {s['suite']}: {s['cases'] - s['failures']}/{s['cases']}"
            for s in suites
        )
    return CommandResult(EXIT_OK if failed == 0 else EXIT_SELFTEST, payload)


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--cache", metavar="DIR", help="relation-matrix cache directory")
    common.add_argument("--c4-rules", metavar="PATH", help="four-clasp rule file")
    common.add_argument("--budget", type=int, default=20_000, metavar="N", help="search node budget")
    common.add_argument("--max-chords", type=int, default=None, metavar="K", help="chord cap for searches and A_n moves")
    common.add_argument("--seed", type=int, default=0, metavar="S", help="random seed")

    p = _Parser(prog="claspkit", description="Clasp diagrams of knots: invariants, moves, braids, A_n.",
                parents=[common])
    p.add_argument("--version", action="version", version=f"claspkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    for name, fn, help_ in (
        ("validate", cmd_validate, "parse and check diagrams"),
        ("invariants", cmd_invariants, "Alexander, Conway, determinant, genus bound, v2, v3"),
        ("mirror", cmd_mirror, "mirror image of a diagram"),
    ):
        sp = add(name, fn, help_)
        sp.add_argument("diagram", nargs="?")
        sp.add_argument("--file", metavar="PATH", help="corpus file, one diagram per line")

    mv = sub.add_parser("move", help="apply moves or search for move sequences")
    msub = mv.add_subparsers(dest="move_command", required=True, parser_class=_Parser)
    ap = msub.add_parser("apply", parents=[common], help="apply one move")
    ap.add_argument("diagram")
    ap.add_argument("kind", help=" | ".join(MOVE_KINDS))
    ap.add_argument("params", nargs="*", help="name=value, e.g. k=1, chords=1,2, sign=+")
    ap.set_defaults(func=cmd_move_apply)
    se = msub.add_parser("search", parents=[common], help="bounded equivalence search")
    se.add_argument("d1")
    se.add_argument("d2")
    se.set_defaults(func=cmd_move_search)
    vc = msub.add_parser("validate-c4", parents=[common], help="check a four-clasp rule file in random contexts")
    vc.add_argument("path")
    vc.add_argument("--contexts", type=int, default=10_000)
    vc.set_defaults(func=cmd_move_validate_c4)

    br = add("braid", cmd_braid, "pure braid word operations")
    br.add_argument("op", choices=["comb", "eliminate", "to-clasp", "descending"])
    br.add_argument("word", nargs="?")
    br.add_argument("--file", metavar="PATH", help="corpus file, one word per line")

    an = add("an", cmd_an, "present the group A_n")
    an.add_argument("--order", type=int, default=3)
    an.add_argument("--strands", type=int, default=7, help="strands for braid-derived relations")
    an.add_argument("--context", type=int, default=1, help="context letters around braid relations")

    pa = add("pair", cmd_pair, "number of subdiagrams of B equal to A")
    pa.add_argument("a")
    pa.add_argument("b")

    en = add("enumerate", cmd_enumerate, "list all diagrams with k chords")
    en.add_argument("k", type=int)
    en.add_argument("--cap", type=int, default=6)
    en.add_argument("--no-cap", action="store_true")
    en.add_argument("--count-only", action="store_true")

    st = add("selftest", cmd_selftest, "seeded property suites")
    st.add_argument("--cases", type=int, default=50)
    return p


def run(argv: Sequence[str] | None = None) -> CommandResult:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        set_c4_rules(load_c4_rules(args.c4_rules) if args.c4_rules else [])
        return args.func(args)
    except UsageError as exc:
        return CommandResult(EXIT_USAGE, str(exc))
    except ConfigError as exc:
        return CommandResult(EXIT_USAGE, f"error: {exc}")
    except ParseError as exc:
        return CommandResult(EXIT_PARSE, f"parse error: {exc}")
    except DomainError as exc:
        return CommandResult(EXIT_DOMAIN, f"domain error: {exc}")
    except ResourceError as exc:
        return CommandResult(EXIT_RESOURCE, f"resource limit: {exc}")


def main(argv: Sequence[str] | None = None) -> int:
    try:
        result = run(argv)
    except SystemExit as exc:  # --help and --version
        return int(exc.code or 0)
    stream = sys.stdout if result.exit_code == 0 else sys.stderr
    if result.payload:
        print(result.payload, file=stream)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
