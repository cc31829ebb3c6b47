"""Command-line interface.

Exit codes: 0 success, 2 when a checked property is violated (fan not
complete, fan not regular, signature tally with bad or zero determinants,
non-bipartite contraction), 1 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import coxeter, viz
from .complexes import SubwordComplex, multiassoc_word, obs_a3
from .counting import (
    ParamSet,
    a4_builtin_matrices,
    check_signature_inequalities,
    counting_matrix,
    counting_matrix_for_word,
    enumerate_embeddings,
    param_counting,
    restricted_matrix,
    signature_report,
)
from .fan import (
    ConeMembership,
    build_fan,
    builtin_fan,
    check_complete,
    fold_to_b2,
)
from .linalg import QMatrix
from .regularity import CACHE_ENV_VAR, check_regular, survey, survey_obs_deletions

PROG = "subword-fans"


class CliError(Exception):
    pass


def _parse_c(text: str, rank: int) -> tuple[int, ...]:
    try:
        c = tuple(int(ch) for ch in text.replace(",", ""))
    except ValueError as exc:
        raise CliError(f"cannot parse Coxeter element {text!r}") from exc
    if not coxeter.is_coxeter_word(rank, c):
        raise CliError(f"{text!r} is not a Coxeter element word of rank {rank}")
    return c


def _parse_word(spec: str, rank: int, c: tuple[int, ...] | None) -> tuple[int, ...]:
    """Word specs: cm:M, multiassoc:k=K, letters:1212321212."""
    kind, _, arg = spec.partition(":")
    if kind == "cm":
        if c is None:
            raise CliError("word spec cm:M needs --c")
        return c * int(arg)
    if kind == "multiassoc":
        if c is None:
            raise CliError("word spec multiassoc needs --c")
        k = int(arg.split("=")[-1])
        return multiassoc_word(rank, k, c)
    if kind == "letters":
        word = tuple(int(ch) for ch in arg.replace(",", ""))
        if any(not 1 <= x <= rank for x in word):
            raise CliError(f"letters out of range for rank {rank}")
        return word
    raise CliError(f"unknown word spec {spec!r} (use cm:, multiassoc:, letters:)")


def _parse_embedding(spec: str, word, target) -> tuple[int, ...]:
    """Embedding specs: identity, first, positions:1,2,4,5,7 (1-based)."""
    if spec == "identity":
        if tuple(word) != tuple(target):
            raise CliError("identity embedding requires word == c^m")
        return tuple(range(len(word)))
    if spec == "first":
        try:
            return next(iter(enumerate_embeddings(word, target)))
        except StopIteration:
            raise CliError("word does not embed into c^m") from None
    if spec.startswith("positions:"):
        pos = tuple(int(x) - 1 for x in spec.split(":", 1)[1].split(","))
        for t, p in zip(word, pos):
            if not 0 <= p < len(target) or target[p] != t:
                raise CliError(f"position list does not embed the word letterwise")
        if list(pos) != sorted(set(pos)):
            raise CliError("embedding positions must be strictly increasing")
        return pos
    raise CliError(f"unknown embedding spec {spec!r}")


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _matrix_text(m: QMatrix, fmt: str) -> str:
    if fmt == "printed":
        return m.pretty()
    if fmt == "csv":
        return m.to_csv()
    return m.to_json()


def _fan_from_args(args) -> tuple:
    """(fan, gale_dual) from either a builtin family or an embedded word."""
    if args.family:
        if args.family == "M_12":
            fan = builtin_fan("M_12", args.m)
            return fan, fan.rays.kernel_basis()
        fan = builtin_fan(args.family, args.m)
        n, c = {"M_213": (3, (2, 1, 3)), "M_123": (3, (1, 2, 3)),
                "M_1": (1, (1,)), "M_12_A2": (2, (1, 2))}[args.family]
        return fan, counting_matrix(n, c, args.m)
    if args.a4 is not None:
        b = a4_builtin_matrices()
        c4 = (2, 4, 1, 3)
        word = multiassoc_word(4, args.a4, c4)
        if args.a4 == 2:
            return build_fan(SubwordComplex(4, word), b.rays_9_2.transpose()), b.signature_9_2
        if args.a4 == 3:
            return build_fan(SubwordComplex(4, word), b.rays_11_3.transpose()), b.signature_11_3
        raise CliError("built-in rank-4 fans exist for k = 2 and k = 3 only")
    if not (args.c and args.word):
        raise CliError("need --family, --a4, or --c/--word (with --m) to build a fan")
    c = _parse_c(args.c, args.rank)
    word = _parse_word(args.word, args.rank, c)
    m = args.m or -(-len(word) // args.rank)
    target = c * m
    emb = _parse_embedding(args.embedding, word, target)
    D = restricted_matrix(counting_matrix(args.rank, c, m), emb)
    fan = build_fan(SubwordComplex(args.rank, word), D.kernel_basis())
    return fan, D


def _add_common(p: argparse.ArgumentParser, word_opts: bool = True) -> None:
    p.add_argument("--rank", type=int, default=3, help="Coxeter rank n")
    p.add_argument("--c", help="Coxeter element word, e.g. 213")
    if word_opts:
        p.add_argument("--word", help="word spec: cm:M | multiassoc:k=K | letters:...")
        p.add_argument("--m", type=int, default=None, help="power of c for embeddings")
        p.add_argument("--embedding", default="first",
                       help="identity | first | positions:1,2,4 (1-based)")
    p.add_argument("--format", default="printed", choices=["printed", "json", "csv"])
    p.add_argument("--out", help="write output to a file instead of stdout")
    p.add_argument("--figure", help="also render a figure to this path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog=PROG,
        description="Exact fans and regularity checks for spherical subword complexes")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("counting-matrix", help="counting matrix of c^m or a word")
    _add_common(p)

    p = sub.add_parser("gale", help="Gale dual (kernel basis) of a restricted counting matrix")
    _add_common(p)

    p = sub.add_parser("facets", help="facets of a subword complex")
    _add_common(p)

    p = sub.add_parser("fvector", help="f-vector of a subword complex")
    _add_common(p)

    p = sub.add_parser("signature", help="determinant-sign tally of a counting matrix")
    _add_common(p)
    p.add_argument("--params", help="parametric family values a1,..;b1,..;c1,.. (rank 3)")

    for name, help_ in [("build-fan", "assemble a fan and emit rays/facets"),
                        ("check-fan", "verify completeness (signature + injectivity)"),
                        ("check-regular", "decide polytopality of a complete fan")]:
        p = sub.add_parser(name, help=help_)
        _add_common(p)
        p.add_argument("--family", choices=["M_213", "M_123", "M_12", "M_1", "M_12_A2"])
        p.add_argument("--a4", type=int, default=None,
                       help="built-in rank-4 fan: 2 (18 rays) or 3 (22 rays)")
        if name == "build-fan":
            p.add_argument("--transpose", action="store_true",
                           help="print the transposed ray matrix (rays as rows)")
        if name == "check-fan":
            p.add_argument("--covering-points", type=int, default=0,
                           help="also sample generic points and report covering numbers")

    p = sub.add_parser("survey", help="regularity survey over embeddings")
    _add_common(p, word_opts=False)
    p.add_argument("--k", type=int, default=None,
                   help="multi-associahedron parameter (not needed with --obs-deletions)")
    p.add_argument("--m-max", type=int, required=True)
    p.add_argument("--limit", type=int, default=None, help="max new instances")
    p.add_argument("--max-words", type=int, default=None)
    p.add_argument("--obs-deletions", action="store_true",
                   help="instead survey the ten deletions of the obstruction word")

    p = sub.add_parser("a4-table", help="sign tally of the rank-4 counting matrix")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--format", default="csv", choices=["printed", "json", "csv"])
    p.add_argument("--out")
    p.add_argument("--figure")
    p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("braid-graph", help="graph of reduced expressions")
    _add_common(p)
    p.add_argument("--contract", default=None,
                   help="comma list of braid pairs to keep, e.g. 12,23 (contracts the rest)")
    p.add_argument("--dot", action="store_true", help="emit DOT instead of JSON")

    p = sub.add_parser("fold-b2", help="fold the bipartite rank-3 rays to rank 2")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--format", default="printed", choices=["printed", "json", "csv"])
    p.add_argument("--out")
    return ap


def _cmd_counting_matrix(args) -> int:
    c = _parse_c(args.c, args.rank)
    if args.word:
        word = _parse_word(args.word, args.rank, c)
        D = counting_matrix_for_word(args.rank, c, word)
    else:
        D = counting_matrix(args.rank, c, args.m or 3)
    _emit(_matrix_text(D, args.format), args.out)
    return 0


def _cmd_gale(args) -> int:
    c = _parse_c(args.c, args.rank)
    word = _parse_word(args.word, args.rank, c) if args.word else c * (args.m or 3)
    m = args.m or -(-len(word) // args.rank)
    emb = _parse_embedding(args.embedding, word, c * m)
    D = restricted_matrix(counting_matrix(args.rank, c, m), emb)
    _emit(_matrix_text(D.kernel_basis(), args.format), args.out)
    return 0


def _complex_from_args(args) -> SubwordComplex:
    if args.word and args.word.startswith("obs"):
        return obs_a3()
    c = _parse_c(args.c, args.rank) if args.c else None
    word = _parse_word(args.word, args.rank, c)
    return SubwordComplex(args.rank, word)


def _cmd_facets(args) -> int:
    K = _complex_from_args(args)
    if args.format == "printed":
        _emit(K.facets_polymake(), args.out)
    elif args.format == "csv":
        _emit("\n".join(",".join(str(p + 1) for p in F) for F in K.facets()), args.out)
    else:
        _emit(K.to_json(), args.out)
    return 0


def _cmd_fvector(args) -> int:
    K = _complex_from_args(args)
    fv = K.f_vector()
    if args.figure:
        viz.draw_f_vector(fv, args.figure)
    if args.format == "json":
        _emit(json.dumps({"f_vector": list(fv)}), args.out)
    else:
        _emit(",".join(map(str, fv)), args.out)
    return 0


def _parse_params(text: str, m: int) -> ParamSet:
    try:
        fams = [tuple(x.strip() for x in part.split(",")) for part in text.split(";")]
        a, b, c = fams
        return ParamSet(m, a, b, c)
    except Exception as exc:
        raise CliError(f"cannot parse --params {text!r}: {exc}") from exc


def _cmd_signature(args) -> int:
    c = _parse_c(args.c, args.rank)
    word = _parse_word(args.word, args.rank, c) if args.word else c * (args.m or 3)
    K = SubwordComplex(args.rank, word)
    if args.params:
        m = args.m or (len(word) // args.rank)
        params = _parse_params(args.params, m)
        ok, violated = check_signature_inequalities(c, params)
        D = param_counting(c, params)
        rep = signature_report(D, K, workers=args.threads)
        payload = {"good": rep.good, "bad": rep.bad, "zero": rep.zero,
                   "total": rep.total, "linear_inequalities_ok": ok,
                   "violated": violated}
        _emit(json.dumps(payload, sort_keys=True) if args.format == "json"
              else rep.csv_row(), args.out)
    else:
        D = counting_matrix_for_word(args.rank, c, word)
        rep = signature_report(D, K, workers=args.threads)
        _emit(rep.to_json() if args.format == "json" else rep.csv_row(), args.out)
    if args.figure:
        viz.draw_signature_counts([("tally", rep.good, rep.bad, rep.zero)], args.figure)
    return 0 if rep.is_signature else 2


def _cmd_build_fan(args) -> int:
    fan, _ = _fan_from_args(args)
    if args.format == "json":
        _emit(fan.to_json(), args.out)
    else:
        m = fan.rays.transpose() if args.transpose else fan.rays
        _emit(_matrix_text(m, args.format), args.out)
    return 0


def _cmd_check_fan(args) -> int:
    fan, D = _fan_from_args(args)
    report = check_complete(fan, D, workers=args.threads)
    payload = json.loads(report.to_json())
    if args.covering_points and report.complete:
        rng = random.Random(args.seed)
        tester = ConeMembership(fan)
        covers = [tester.sample_generic_point(rng)[1]
                  for _ in range(args.covering_points)]
        payload["covering_numbers"] = sorted(set(covers))
    _emit(json.dumps(payload, sort_keys=True), args.out)
    return 0 if report.complete else 2


def _cmd_check_regular(args) -> int:
    fan, D = _fan_from_args(args)
    report = check_complete(fan, D, workers=args.threads)
    if not report.complete:
        _emit(json.dumps({"error": "fan is not complete", **json.loads(report.to_json())}),
              args.out)
        return 2
    result = check_regular(fan, completeness=report)
    _emit(result.to_json(), args.out)
    return 0 if result.regular else 2


def _cmd_survey(args) -> int:
    c = _parse_c(args.c, args.rank)
    out_csv = args.out
    if out_csv is None and os.environ.get(CACHE_ENV_VAR):
        tag = f"survey_n{args.rank}_k{args.k}_c{''.join(map(str, c))}.csv"
        out_csv = os.path.join(os.environ[CACHE_ENV_VAR], tag)
    if args.obs_deletions:
        rows = survey_obs_deletions(m=args.m_max, c=c)
        tally = {"regular": sum(1 for _, s in rows if s == "regular"),
                 "non_regular": sum(1 for _, s in rows if s == "non_regular"),
                 "incomplete": sum(1 for _, s in rows
                                   if s not in ("regular", "non_regular")),
                 "rows": len(rows)}
    else:
        if args.k is None:
            raise CliError("survey needs --k (or --obs-deletions)")
        tally = survey(args.rank, args.k, c, args.m_max, out_csv=out_csv,
                       limit=args.limit, max_words=args.max_words)
    if args.figure:
        viz.draw_survey_tally(tally, args.figure)
    _emit(json.dumps(tally, sort_keys=True), None)
    return 0


def _cmd_a4_table(args) -> int:
    c4 = (2, 4, 1, 3)
    word = multiassoc_word(4, args.k, c4)
    D = counting_matrix_for_word(4, c4, word)
    rep = signature_report(D, SubwordComplex(4, word), workers=args.threads)
    if args.figure:
        viz.draw_signature_counts([(f"k={args.k}", rep.good, rep.bad, rep.zero)],
                                  args.figure)
    _emit(rep.to_json() if args.format == "json" else rep.csv_row(), args.out)
    return 0


def _cmd_braid_graph(args) -> int:
    c = _parse_c(args.c, args.rank) if args.c else None
    if args.word:
        word = _parse_word(args.word, args.rank, c)
        element = coxeter.evaluate(args.rank, word)
    else:
        element = coxeter.longest_element(args.rank)
    graph = coxeter.braid_graph(args.rank, element)
    rc = 0
    payload = graph.to_dot() if args.dot else graph.to_json()
    if args.contract is not None:
        Z = set()
        for pair in args.contract.split(","):
            if pair:
                i, j = sorted(int(ch) for ch in pair)
                Z.add((i, j))
        ok, cycle = coxeter.contracted_bipartite(graph, Z)
        extra = {"stabled": coxeter.is_stabled(args.rank, Z),
                 "bipartite": ok,
                 "odd_cycle": cycle}
        payload = json.dumps({**json.loads(graph.to_json()), **extra}, sort_keys=True)
        rc = 0 if ok else 2
    _emit(payload, args.out)
    if args.figure:
        viz.draw_braid_graph(graph, args.figure)
    return rc


def _cmd_fold_b2(args) -> int:
    _emit(_matrix_text(fold_to_b2(args.m), args.format), args.out)
    return 0


_COMMANDS = {
    "counting-matrix": _cmd_counting_matrix,
    "gale": _cmd_gale,
    "facets": _cmd_facets,
    "fvector": _cmd_fvector,
    "signature": _cmd_signature,
    "build-fan": _cmd_build_fan,
    "check-fan": _cmd_check_fan,
    "check-regular": _cmd_check_regular,
    "survey": _cmd_survey,
    "a4-table": _cmd_a4_table,
    "braid-graph": _cmd_braid_graph,
    "fold-b2": _cmd_fold_b2,
}


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (CliError, ValueError) as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
