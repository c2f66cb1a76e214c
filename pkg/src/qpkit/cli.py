"""Command line front end.

Exit codes: 0 when every check passed, 1 on a check failure, 2 on bad usage or input.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import harness
from .pathalg import mutate_qp, make_qp, quiver_from_matrix, read_potential, read_quiver, write_potential, write_quiver
from .polycore import format_polynomial
from .repeng import DegenerateError, build_cluster_rep, write_rep
from .seedeng import check_word, format_word, invariants_along, parse_word


class InputError(Exception):
    pass


def read_matrix(text: str) -> tuple:
    """First line 'm n', then m rows of n integers."""
    rows = [l.split("#")[0].split() for l in text.splitlines()]
    rows = [r for r in rows if r]
    if not rows or len(rows[0]) != 2:
        raise InputError("matrix file must start with 'm n'")
    m, n = int(rows[0][0]), int(rows[0][1])
    body = [tuple(int(x) for x in r) for r in rows[1:]]
    if len(body) != m or any(len(r) != n for r in body):
        raise InputError("matrix file declares %dx%d but the rows disagree" % (m, n))
    if m != n:
        raise InputError("exchange matrix must be square")
    return tuple(body)


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as e:
        raise InputError(str(e))


def _load_config(path: str) -> dict:
    text = _read(path)
    if path.endswith(".toml"):
        import tomllib
        return tomllib.loads(text)
    return json.loads(text)


def _out(data) -> None:
    if isinstance(data, str):
        data = data.encode()
    sys.stdout.buffer.write(data)
    sys.stdout.flush()


# ---------------------------------------------------------------- commands

def cmd_seed_walk(args) -> int:
    B = read_matrix(_read(args.matrix))
    word = check_word(parse_word(args.word), len(B))
    states = invariants_along(B, word, max_terms=args.max_terms)
    rows = []
    for j, st in enumerate(states):
        for l in range(len(B)):
            rows.append({"t": j, "prefix": format_word(word[:j]), "ell": l + 1, "g": list(st.g[l]),
                         "F": format_polynomial(st.F[l]), "h": list(st.h[l])})
    if args.format == "json":
        doc = {"schema_version": harness.SCHEMA_VERSION, "matrix": [list(r) for r in B],
               "word": format_word(word), "extended": [[list(r) for r in st.Bt] for st in states], "rows": rows}
        _out(json.dumps(doc, indent=1, sort_keys=True) + "\n")
    else:
        lines = ["t\tprefix\tell\tg\tF\th"]
        for r in rows:
            lines.append("%d\t%s\t%d\t%s\t%s\t%s" % (r["t"], r["prefix"], r["ell"], ",".join(map(str, r["g"])),
                                                     r["F"], ",".join(map(str, r["h"]))))
        _out("\n".join(lines) + "\n")
    return 0


def cmd_table_a2(args) -> int:
    report = harness.reproduce_a2()
    if args.format == "json":
        _out(harness.emit(report, "json"))
    else:
        _out(harness.table_tsv(harness.a2_table_rows()))
    for r in report.failures():
        print("FAIL %s %s" % (r.name, r.instance), file=sys.stderr)
    return 0 if report.ok else 1


def cmd_qp_mutate(args) -> int:
    Q = read_quiver(_read(args.quiver))
    S = read_potential(_read(args.potential), Q, args.truncation)
    k = args.at - 1
    if not 0 <= k < Q.n:
        raise InputError("vertex %d out of range" % args.at)
    if Q.has_two_cycle_at(k):
        raise InputError("vertex %d lies on a 2-cycle" % args.at)
    m = mutate_qp(make_qp(Q, S.terms, args.truncation), k)
    if m.degenerate:
        print("warning: the reduced mutation still has 2-cycles", file=sys.stderr)
    _out("# quiver\n" + write_quiver(m.qp.quiver) + "# potential\n" + write_potential(m.qp.potential))
    return 0


def cmd_rep_build(args) -> int:
    B = read_matrix(_read(args.matrix))
    Q = quiver_from_matrix(B)
    S = read_potential(_read(args.potential), Q, args.truncation)
    word = check_word(parse_word(args.word), len(B))
    if not 1 <= args.ell <= len(B):
        raise InputError("ell must lie in 1..%d" % len(B))
    M = build_cluster_rep(B, S, word, args.ell - 1, rng_seed=args.seed)
    _out(write_rep(M))
    return 0


def cmd_verify_all(args) -> int:
    cfg = _load_config(args.config) if args.config else None
    report = harness.verify_theorems(cfg)
    a2 = harness.reproduce_a2()
    report.records = a2.records + report.records
    _out(harness.emit(report, args.format))
    for r in report.failures():
        print("FAIL %s %s" % (r.name, r.instance), file=sys.stderr)
    return 0 if report.ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qpkit", description="Cluster invariants and QP representations.")
    sub = p.add_subparsers(dest="group", required=True)

    seed = sub.add_parser("seed").add_subparsers(dest="cmd", required=True)
    w = seed.add_parser("walk", help="g-vectors, F-polynomials and h-vectors along a word")
    w.add_argument("--matrix", required=True)
    w.add_argument("--word", required=True)
    w.add_argument("--format", choices=("json", "tsv"), default="json")
    w.add_argument("--max-terms", type=int, default=10 ** 6)
    w.set_defaults(func=cmd_seed_walk)
    t = seed.add_parser("table-a2", help="recompute the type A2 table")
    t.add_argument("--format", choices=("json", "tsv"), default="tsv")
    t.set_defaults(func=cmd_table_a2)

    qp = sub.add_parser("qp").add_subparsers(dest="cmd", required=True)
    m = qp.add_parser("mutate", help="mutate a quiver with potential")
    m.add_argument("--quiver", required=True)
    m.add_argument("--potential", required=True)
    m.add_argument("--at", type=int, required=True)
    m.add_argument("--truncation", type=int, default=12)
    m.set_defaults(func=cmd_qp_mutate)

    rep = sub.add_parser("rep").add_subparsers(dest="cmd", required=True)
    b = rep.add_parser("build", help="cluster representation for (word, ell)")
    b.add_argument("--matrix", required=True)
    b.add_argument("--potential", required=True)
    b.add_argument("--word", required=True)
    b.add_argument("--ell", type=int, required=True)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--truncation", type=int, default=12)
    b.set_defaults(func=cmd_rep_build)

    ver = sub.add_parser("verify").add_subparsers(dest="cmd", required=True)
    a = ver.add_parser("all", help="run the verification campaign")
    a.add_argument("--config")
    a.add_argument("--format", choices=("json", "tsv"), default="json")
    a.set_defaults(func=cmd_verify_all)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError, KeyError, DegenerateError, OverflowError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
