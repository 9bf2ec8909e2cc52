"""Command-line front end.

Exit codes: 0 success, 2 proven-negative, 3 undecided at the given budget,
64 malformed or invalid input, 70 internal assertion failure.  Every
command accepts --seed (default 0); no command reads the wall clock for
randomness.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional

from . import experiments, formats, products, semicoloring, words
from .factorization import exact_edge_chromatic, perfect_matching
from .graph import (
    InternalCheckError,
    MultiGraph,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    from_permutations,
    petersen_graph,
    prism_graph,
    structural_predicates,
)

EXIT_OK = 0
EXIT_NEGATIVE = 2
EXIT_UNDECIDED = 3
EXIT_INPUT = 64
EXIT_INTERNAL = 70


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _load_graph(path: str) -> MultiGraph:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    first = next((l.strip() for l in text.splitlines() if l.strip()), "")
    if first.startswith("tpp"):
        return from_permutations(formats.parse_permutation_graph(text))
    return formats.parse_graph(text)


def _write(path: Optional[str], text: str, default_stream=None) -> None:
    if path is None:
        (default_stream or sys.stdout).write(text)
    else:
        formats.dump(path, text)


def build_parser() -> _Parser:
    parser = _Parser(prog="tightprod")
    parser.add_argument("--seed", type=int, default=0, help="master random seed")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate graphs and presentations")
    gen.add_argument("kind", choices=[
        "cycle", "complete", "complete-bipartite", "petersen", "prism",
        "random-regular", "gadget",
    ])
    gen.add_argument("params", nargs="*", type=int)
    gen.add_argument("--out", help="output file (stdout if omitted)")
    gen.add_argument("--as", dest="fmt", choices=["tpg", "tpp"], default="tpg")

    vc = sub.add_parser("verify-cover", help="check a covering map")
    vc.add_argument("source")
    vc.add_argument("target")
    vc.add_argument("map")

    prod = sub.add_parser("product", help="construct a tight product")
    prod.add_argument("route", choices=["even", "odd-matching", "semicolor", "brute"])
    prod.add_argument("g1")
    prod.add_argument("g2")
    prod.add_argument("--out", help="output directory")

    sc = sub.add_parser("semicolor", help="semi-color a graph")
    sc.add_argument("graph")
    sc.add_argument("--out")

    vz = sub.add_parser("vizing4", help="4-edge-color a cubic graph")
    vz.add_argument("graph")
    vz.add_argument("--out")

    ec = sub.add_parser("edgechroma", help="exact edge coloring within a budget")
    ec.add_argument("graph")
    ec.add_argument("--budget", type=int, required=True)
    ec.add_argument("--node-cap", type=int, default=2_000_000)
    ec.add_argument("--out")

    cl = sub.add_parser("classify", help="class-1 test via the gadget")
    cl.add_argument("graph")
    cl.add_argument("--k", type=int, required=True)
    cl.add_argument("--node-cap", type=int, default=2_000_000)
    cl.add_argument("--out", help="directory for the witness product")

    wd = sub.add_parser("words", help="word-map utilities")
    wsub = wd.add_subparsers(dest="word_command", required=True)
    wo = wsub.add_parser("order")
    wo.add_argument("letters", nargs="+", type=int)
    wr = wsub.add_parser("reduce")
    wr.add_argument("letters", nargs="+", type=int)
    wp = wsub.add_parser("p-estimate")
    wp.add_argument("letters", nargs="+", type=int)
    wp.add_argument("--n", type=int, required=True)
    wp.add_argument("--samples", type=int, default=100_000)
    wp.add_argument("--exact", action="store_true")
    wc = wsub.add_parser("count-imprimitive")
    wc.add_argument("--d", type=int, required=True)
    wc.add_argument("--k", type=int, required=True)

    ex = sub.add_parser("experiment", help="run a random-product experiment")
    ex.add_argument("config")
    ex.add_argument("--out", help="output directory")
    ex.add_argument("--jobs", type=int, default=1)
    return parser


def _cmd_gen(args) -> int:
    p = args.params
    need = {"cycle": 1, "complete": 1, "complete-bipartite": 2, "petersen": 0,
            "prism": 0, "random-regular": 2, "gadget": 1}
    if len(p) != need[args.kind]:
        raise UsageError(f"{args.kind} takes {need[args.kind]} integer parameter(s)")
    pg = None
    if args.kind == "cycle":
        g = cycle_graph(p[0])
    elif args.kind == "complete":
        g = complete_graph(p[0])
    elif args.kind == "complete-bipartite":
        g = complete_bipartite_graph(p[0], p[1])
    elif args.kind == "petersen":
        g = petersen_graph()
    elif args.kind == "prism":
        g = prism_graph()
    elif args.kind == "gadget":
        g = semicoloring.build_gadget(p[0]).graph
    else:
        v, deg = p
        if deg < 0 or v < 1:
            raise UsageError("need positive size and non-negative degree")
        rng = experiments.rng_from(args.seed, 0)
        pg = experiments.random_permutation_graph(v, deg // 2, rng, pairing=bool(deg % 2))
        g = from_permutations(pg)
    if args.fmt == "tpp":
        if pg is None:
            raise UsageError("--as tpp is only available for random-regular")
        _write(args.out, formats.write_permutation_graph(pg))
    else:
        _write(args.out, formats.write_graph(g))
    return EXIT_OK


def _cmd_verify_cover(args) -> int:
    src = _load_graph(args.source)
    dst = _load_graph(args.target)
    with open(args.map, "r", encoding="utf-8") as fh:
        cm = formats.parse_covering_map(fh.read(), src, dst)
    report = products.verify_covering(cm)
    if report.ok:
        print(f"covering ok; fibers {sorted(set(report.fiber_sizes))}, "
              f"covering number {report.covering_number}")
        return EXIT_OK
    print(f"not a covering: {report.violations}")
    return EXIT_NEGATIVE


def _write_product(tp: products.TightProduct, outdir: Optional[str]) -> None:
    if outdir is None:
        return
    os.makedirs(outdir, exist_ok=True)
    nf = products.family_from_product(tp)
    formats.dump(os.path.join(outdir, "g1.tpg"), formats.write_graph(tp.g1))
    formats.dump(os.path.join(outdir, "g2.tpg"), formats.write_graph(tp.g2))
    formats.dump(os.path.join(outdir, "h.tpg"), formats.write_graph(tp.h))
    formats.dump(os.path.join(outdir, "family.txt"), formats.write_family(nf))
    formats.dump(os.path.join(outdir, "proj1.tpm"), formats.write_covering_map(tp.proj1))
    formats.dump(os.path.join(outdir, "proj2.tpm"), formats.write_covering_map(tp.proj2))


def _semicolor_auto(g: MultiGraph) -> Optional[semicoloring.SemiColoring]:
    if g.max_degree() <= 3:
        return semicoloring.semi_color_subcubic(g)
    try:
        return semicoloring.semi_color_family(g)
    except ValueError:
        return None


def _cmd_product(args) -> int:
    g1 = _load_graph(args.g1)
    g2 = _load_graph(args.g2)
    if args.route == "even":
        tp = products.product_even_regular(g1, g2)
    elif args.route == "odd-matching":
        m1 = perfect_matching(g1)
        m2 = perfect_matching(g2)
        if m1 is None or m2 is None:
            print("a factor has no perfect matching; route inapplicable")
            return EXIT_UNDECIDED
        tp = products.product_odd_matching(g1, g2, m1, m2)
    elif args.route == "semicolor":
        sc = _semicolor_auto(g1)
        if sc is None:
            print("cannot semi-color the first factor; route inapplicable")
            return EXIT_UNDECIDED
        delta = g2.max_degree()
        search = exact_edge_chromatic(g2, delta)
        if search.status != "found":
            print(f"second factor has no known 1-factorization ({search.status})")
            return EXIT_UNDECIDED
        tp = products.product_via_semicoloring(g1, sc, g2, search.coloring.classes())
    else:
        result = products.brute_force_tight_product(g1, g2)
        if result.status == "absent":
            print(f"no tight product exists: {result.reason}")
            return EXIT_NEGATIVE
        if result.status == "undecided":
            print(f"undecided: {result.reason}")
            return EXIT_UNDECIDED
        tp = result.product
    _write_product(tp, args.out)
    print(f"tight product on {tp.h.n} vertices, {tp.h.num_edges} edges; verified")
    return EXIT_OK


def _cmd_semicolor(args) -> int:
    g = _load_graph(args.graph)
    sc = _semicolor_auto(g)
    if sc is None:
        print("no supported construction applies to this graph")
        return EXIT_UNDECIDED
    report = semicoloring.validate_semi_coloring(sc)
    if not report.ok:
        raise InternalCheckError("constructed semi-coloring failed validation")
    _write(args.out, formats.write_semi_coloring(sc))
    if args.out:
        print(f"semi-coloring with delta {sc.delta} written to {args.out}")
    return EXIT_OK


def _cmd_vizing4(args) -> int:
    g = _load_graph(args.graph)
    ec = semicoloring.vizing4_cubic(g)
    _write(args.out, formats.write_edge_coloring(ec))
    if args.out:
        print(f"proper coloring with {ec.num_colors} colors written to {args.out}")
    return EXIT_OK


def _cmd_edgechroma(args) -> int:
    g = _load_graph(args.graph)
    search = exact_edge_chromatic(g, args.budget, args.node_cap)
    if search.status == "found":
        _write(args.out, formats.write_edge_coloring(search.coloring))
        print(f"coloring with {search.coloring.num_colors} colors found "
              f"({search.nodes} nodes)")
        return EXIT_OK
    if search.status == "absent":
        print(f"no coloring with {args.budget} colors exists ({search.nodes} nodes)")
        return EXIT_NEGATIVE
    print(f"undecided at this budget ({search.nodes} nodes)")
    return EXIT_UNDECIDED


def _cmd_classify(args) -> int:
    g = _load_graph(args.graph)
    result = products.classify_class1_via_gadget(g, args.k, node_cap=args.node_cap)
    if result.status == "class-1":
        print("class-1")
        if args.out:
            _write_product(result.product, args.out)
            formats.dump(
                os.path.join(args.out, "coloring.txt"),
                formats.write_edge_coloring(result.coloring),
            )
        return EXIT_OK
    if result.status == "class-2":
        nodes = result.search.nodes if result.search else 0
        print(f"class-2 (coloring absence proven exhaustively, {nodes} nodes)")
        return EXIT_NEGATIVE
    print("undecided at this search budget")
    return EXIT_UNDECIDED


def _cmd_words(args) -> int:
    if args.word_command == "order":
        w = words.word(args.letters)
        o = words.word_order(w)
        print(f"order {o} ({'primitive' if o == 1 else 'not primitive'})")
        return EXIT_OK
    if args.word_command == "reduce":
        r = words.reduce_word(args.letters)
        print(" ".join(str(x) for x in r) if r else "(empty)")
        return EXIT_OK
    if args.word_command == "p-estimate":
        if args.exact:
            p = words.exact_p(args.letters, args.n)
            print(f"p = {p} (exact)")
        else:
            est = words.estimate_p(args.letters, args.n, args.samples, args.seed)
            print(f"p = {est.p_hat} +- {est.std_error} ({est.samples} samples)")
        return EXIT_OK
    count = words.count_imprimitive(args.d, args.k)
    total = (2 * args.d) ** (2 * args.k)
    print(f"{count} imprimitive words of {total}")
    return EXIT_OK


def _cmd_experiment(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        text = fh.read()
    loader = lambda path: formats.load(path, formats.parse_permutation_graph)
    cfg = experiments.ExperimentConfig.from_text(text, base_loader=loader)
    if cfg.seed != args.seed and args.seed != 0:
        raise UsageError("config and --seed disagree; set the seed in one place")
    result = experiments.run_experiment(cfg, jobs=args.jobs)
    csv_text = experiments.to_csv(result)
    summary = experiments.summary_text(result)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        formats.dump(os.path.join(args.out, "experiment.csv"), csv_text)
        formats.dump(os.path.join(args.out, "summary.txt"), summary)
    else:
        sys.stdout.write(csv_text)
    sys.stdout.write(summary)
    return EXIT_OK


def dispatch(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "verify-cover":
            return _cmd_verify_cover(args)
        if args.command == "product":
            return _cmd_product(args)
        if args.command == "semicolor":
            return _cmd_semicolor(args)
        if args.command == "vizing4":
            return _cmd_vizing4(args)
        if args.command == "edgechroma":
            return _cmd_edgechroma(args)
        if args.command == "classify":
            return _cmd_classify(args)
        if args.command == "words":
            return _cmd_words(args)
        if args.command == "experiment":
            return _cmd_experiment(args)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except formats.FormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FileNotFoundError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InternalCheckError, AssertionError) as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
