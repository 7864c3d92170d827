"""Command-line front end.

Exit codes: 0 success / linked / pass, 1 verified negative (infeasible,
not linked, failed check), 2 usage or format error, 3 hypothesis violated,
4 search budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import _kernel
from .connectivity import kappa
from .digraph import (
    composition_from_digraph,
    is_l_quasi_transitive,
    is_semicomplete,
)
from .dominators import (
    goodness_profile,
    is_in_king,
    nearly_in_dominating_vertex,
    verify_nearly_in_dominating,
)
from .errors import FormatError, KLinkageError
from .generators import (
    circulant_tournament,
    non_linked_family,
    random_composition,
    random_extended_tournament,
    random_semicomplete,
    random_tournament,
)
from .jsonio import (
    digraph_from_obj,
    digraph_to_dot,
    digraph_to_obj,
    dumps_canonical,
    load_digraph,
    parse_json,
    pathsystem_from_obj,
    pathsystem_to_obj,
    report_to_obj,
)
from .linkage_composition import solve_composition
from .linkage_lqt import solve_lqt
from .linkage_semicomplete import solve_semicomplete
from .paths import BudgetExceeded, Infeasible, LinkageInstance
from .reports import HYPOTHESIS_VIOLATED, LINKED
from .verify import brute_force_disjoint_paths, brute_force_k_linked, verify_linkage

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_HYPOTHESIS = 3
EXIT_BUDGET = 4


def _parse_pairs(text: str) -> list[tuple[int, int]]:
    pairs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            a, b = chunk.split(":")
            pairs.append((int(a), int(b)))
        except ValueError:
            raise FormatError(f"pair {chunk!r} is not of the form x:y") from None
    if not pairs:
        raise FormatError("no terminal pairs given")
    return pairs


def _read_digraph(path: str):
    if path == "-":
        return digraph_from_obj(parse_json(sys.stdin.read(), "<stdin>"), "<stdin>")
    return load_digraph(path)


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_gen(args) -> int:
    meta = {"family": args.family, "seed": args.seed}
    parts = None
    if args.family == "tournament":
        d = random_tournament(args.n, args.seed)
    elif args.family == "circulant":
        d = circulant_tournament(args.n)
        meta.pop("seed")
    elif args.family == "semicomplete":
        d = random_semicomplete(args.n, args.p_double, args.seed)
        meta["p_double"] = args.p_double
    elif args.family in ("composition", "extended-tournament"):
        try:
            sizes = [int(s) for s in args.part_sizes.split(",")]
        except ValueError:
            raise FormatError("--part-sizes must be a comma-separated list, e.g. 2,3,2") from None
        if args.family == "composition":
            spec = random_composition(len(sizes), sizes, args.p_double, args.seed, args.part_arcs)
            meta["p_double"] = args.p_double
        else:
            spec = random_extended_tournament(len(sizes), sizes, args.seed)
        meta["part_sizes"] = sizes
        from .digraph import compose

        d = compose(spec)
        parts = spec.part_vertex_ids()
    elif args.family == "non-linked":
        core = None
        if args.core:
            core, _ = _read_digraph(args.core)
        spec, bad_pairs = non_linked_family(args.k, core)
        from .digraph import compose

        d = compose(spec)
        parts = spec.part_vertex_ids()
        meta.pop("seed")
        meta["k"] = args.k
        meta["bad_pairs"] = [list(p) for p in bad_pairs]
    else:
        raise FormatError(f"unknown family {args.family!r}")

    text = dumps_canonical(digraph_to_obj(d, parts, meta))
    _emit(text, args.output)
    if args.dot:
        if not args.output:
            raise FormatError("--dot needs -o to name the sibling file")
        dot_path = args.output.rsplit(".", 1)[0] + ".dot"
        with open(dot_path, "w", encoding="utf-8") as fh:
            fh.write(digraph_to_dot(d))
    return EXIT_OK


def _cmd_check(args) -> int:
    d, _parts = _read_digraph(args.input)
    result: dict = {"n": d.n, "order": d.order}
    code = EXIT_OK
    if args.kappa:
        result["kappa"] = kappa(d)
    if args.semicomplete:
        result["semicomplete"] = is_semicomplete(d)
        code = EXIT_OK if result["semicomplete"] else EXIT_NEGATIVE
    if args.lqt is not None:
        result["l"] = args.lqt
        result["l_quasi_transitive"] = is_l_quasi_transitive(d, args.lqt)
        code = EXIT_OK if result["l_quasi_transitive"] else EXIT_NEGATIVE
    if args.king is not None:
        result["vertex"] = args.king
        result["in_king"] = is_in_king(d, args.king)
        code = EXIT_OK if result["in_king"] else EXIT_NEGATIVE
    if args.nid:
        vertex = args.vertex if args.vertex is not None else nearly_in_dominating_vertex(d)
        cmax = args.cmax if args.cmax is not None else d.order
        rep = verify_nearly_in_dominating(d, vertex, cmax)
        result["vertex"] = vertex
        result["c_max"] = cmax
        result["nearly_in_dominating"] = rep.ok
        if not rep.ok:
            result["worst_c"] = rep.worst_c
            result["bad_vertices"] = list(rep.bad_vertices)
        if args.profile:
            prof = goodness_profile(d, vertex)
            result["widths"] = {str(v): w for v, w in sorted(prof.widths.items())}
            result["dominators"] = sorted(prof.dominators)
        code = EXIT_OK if rep.ok else EXIT_NEGATIVE
    if args.seed is not None:
        result["seed"] = args.seed
    _emit(dumps_canonical(result), args.output)
    return code


def _cmd_solve(args) -> int:
    d, parts = _read_digraph(args.input)
    pairs = _parse_pairs(args.pairs)
    if args.klass == "semicomplete":
        report = solve_semicomplete(LinkageInstance(d, tuple(pairs)), skip_audit=args.skip_audit)
    elif args.klass == "composition":
        if parts is None:
            raise FormatError("composition solving needs a 'parts' field in the digraph file")
        spec = composition_from_digraph(d, parts)
        report = solve_composition(spec, pairs, skip_audit=args.skip_audit)
    elif args.klass == "lqt":
        report = solve_lqt(
            d,
            pairs,
            args.l,
            threshold=args.threshold,
            anchor_budget=args.anchor_budget,
            skip_audit=args.skip_audit,
        )
    else:
        raise FormatError(f"unknown class {args.klass!r}")

    obj = report_to_obj(report)
    obj["pairs"] = [list(p) for p in pairs]
    if args.seed is not None:
        obj["seed"] = args.seed
    _emit(dumps_canonical(obj), args.output)
    if args.dot:
        if not args.output:
            raise FormatError("--dot needs -o to name the sibling file")
        dot_path = args.output.rsplit(".", 1)[0] + ".dot"
        with open(dot_path, "w", encoding="utf-8") as fh:
            fh.write(digraph_to_dot(d, highlight=report.system))
    if report.outcome == LINKED:
        return EXIT_OK
    if report.outcome == HYPOTHESIS_VIOLATED:
        return EXIT_HYPOTHESIS
    return EXIT_NEGATIVE


def _cmd_verify(args) -> int:
    d, _parts = _read_digraph(args.input)
    with open(args.paths, encoding="utf-8") as fh:
        ps = pathsystem_from_obj(parse_json(fh.read(), args.paths), args.paths)
    pairs = _parse_pairs(args.pairs) if args.pairs else [tuple(p) for p in ps.pairing]
    report = verify_linkage(d, pairs, ps)
    obj = {"ok": report.ok}
    if not report.ok:
        obj["clause"] = report.clause
        obj["detail"] = report.detail
    if args.seed is not None:
        obj["seed"] = args.seed
    _emit(dumps_canonical(obj), args.output)
    return EXIT_OK if report.ok else EXIT_NEGATIVE


def _cmd_oracle(args) -> int:
    d, _parts = _read_digraph(args.input)
    obj: dict = {"budget": args.budget}
    if args.pairs:
        pairs = _parse_pairs(args.pairs)
        res = brute_force_disjoint_paths(d, pairs, args.budget)
        if isinstance(res, BudgetExceeded):
            obj["outcome"] = "budget_exceeded"
            code = EXIT_BUDGET
        elif isinstance(res, Infeasible):
            obj["outcome"] = "infeasible"
            code = EXIT_NEGATIVE
        else:
            obj["outcome"] = "found"
            obj["pathsystem"] = pathsystem_to_obj(res)
            code = EXIT_OK
    elif args.k is not None:
        res = brute_force_k_linked(d, args.k, args.budget)
        if isinstance(res, BudgetExceeded):
            obj["outcome"] = "budget_exceeded"
            code = EXIT_BUDGET
        elif res is True:
            obj["outcome"] = "k_linked"
            code = EXIT_OK
        else:
            obj["outcome"] = "not_k_linked"
            obj["witness_pairs"] = [list(p) for p in res]
            code = EXIT_NEGATIVE
    else:
        raise FormatError("oracle needs --k or --pairs")
    if args.seed is not None:
        obj["seed"] = args.seed
    _emit(dumps_canonical(obj), args.output)
    return code


def _cmd_bench(args) -> int:
    if args.kernel:
        return _bench_kernel(args)
    from .acceptance import run_criteria

    only = None
    if args.only:
        only = [int(s) for s in args.only.split(",")]
    if args.workers > 1:
        from multiprocessing import Pool

        from .acceptance import _CRITERIA

        numbers = [n for n, _, _ in _CRITERIA if only is None or n in only]
        with Pool(args.workers) as pool:
            batches = pool.map(run_criteria, [[n] for n in numbers])
        results = [r for batch in batches for r in batch]
    else:
        results = run_criteria(only)
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        sys.stdout.write(f"{status}  {r.name:<{width}}  {r.seconds:7.2f}s  {r.detail}\n")
    total = sum(r.seconds for r in results)
    ok = all(r.passed for r in results)
    sys.stdout.write(f"{'OK' if ok else 'FAILED'}  {len(results)} criteria in {total:.2f}s\n")
    return EXIT_OK if ok else EXIT_NEGATIVE


def _bench_kernel(args) -> int:
    from .connectivity import is_k_strong

    backends = _kernel.available_backends()
    d = random_tournament(args.n, args.seed)
    sys.stdout.write(
        f"kernel benchmark: {args.k}-strong audit of a random tournament, "
        f"n={args.n}, seed={args.seed}\n"
    )
    answers = {}
    for name in backends:
        start = time.perf_counter()
        answers[name] = is_k_strong(d, args.k, backend=name)
        elapsed = time.perf_counter() - start
        sys.stdout.write(f"  {name:>7}: {elapsed:8.3f}s  -> {answers[name]}\n")
    if len(set(answers.values())) > 1:
        sys.stdout.write("backends disagree!\n")
        return EXIT_NEGATIVE
    if len(backends) == 1:
        sys.stdout.write("compiled kernel not built; only the python backend ran\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="klinkage", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a digraph family member")
    gen.add_argument("--family", required=True,
                     choices=["tournament", "circulant", "semicomplete",
                              "composition", "extended-tournament", "non-linked"])
    gen.add_argument("--n", type=int, default=10)
    gen.add_argument("--k", type=int, default=3, help="linkage size for the non-linked family")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--p-double", type=float, default=0.0, dest="p_double")
    gen.add_argument("--part-sizes", default="", dest="part_sizes")
    gen.add_argument("--part-arcs", action="store_true", dest="part_arcs")
    gen.add_argument("--core", help="digraph file for the non-linked family core part")
    gen.add_argument("-o", "--output")
    gen.add_argument("--dot", action="store_true")
    gen.set_defaults(func=_cmd_gen)

    check = sub.add_parser("check", help="run structural checks")
    check.add_argument("--input", required=True)
    check.add_argument("--kappa", action="store_true")
    check.add_argument("--semicomplete", action="store_true")
    check.add_argument("--lqt", type=int, default=None, metavar="L")
    check.add_argument("--king", type=int, default=None, metavar="V")
    check.add_argument("--nid", action="store_true")
    check.add_argument("--vertex", type=int, default=None)
    check.add_argument("--cmax", type=int, default=None)
    check.add_argument("--profile", action="store_true", help="dump the goodness profile")
    check.add_argument("--seed", type=int, default=None)
    check.add_argument("-o", "--output")
    check.set_defaults(func=_cmd_check)

    solve = sub.add_parser("solve", help="run a linkage solver")
    solve.add_argument("--input", required=True)
    solve.add_argument("--class", required=True, dest="klass",
                       choices=["semicomplete", "composition", "lqt"])
    solve.add_argument("--pairs", required=True, help="x1:y1,x2:y2,...")
    solve.add_argument("--l", type=int, default=2)
    solve.add_argument("--threshold", type=int, default=None)
    solve.add_argument("--anchor-budget", type=int, default=20000, dest="anchor_budget")
    solve.add_argument("--skip-audit", action="store_true", dest="skip_audit")
    solve.add_argument("--seed", type=int, default=None)
    solve.add_argument("-o", "--output")
    solve.add_argument("--dot", action="store_true")
    solve.set_defaults(func=_cmd_solve)

    verify = sub.add_parser("verify", help="certify a path system")
    verify.add_argument("--input", required=True, help="digraph file")
    verify.add_argument("--paths", required=True, help="path system file")
    verify.add_argument("--pairs", default=None)
    verify.add_argument("--seed", type=int, default=None)
    verify.add_argument("-o", "--output")
    verify.set_defaults(func=_cmd_verify)

    oracle = sub.add_parser("oracle", help="exhaustive linkage search")
    oracle.add_argument("--input", required=True)
    oracle.add_argument("--k", type=int, default=None)
    oracle.add_argument("--pairs", default=None)
    oracle.add_argument("--budget", type=int, default=2_000_000)
    oracle.add_argument("--seed", type=int, default=None)
    oracle.add_argument("-o", "--output")
    oracle.set_defaults(func=_cmd_oracle)

    bench = sub.add_parser("bench", help="acceptance suite or kernel benchmark")
    bench.add_argument("--suite", choices=["acceptance"], default=None)
    bench.add_argument("--only", default=None, help="comma-separated criterion numbers")
    bench.add_argument("--workers", type=int, default=1, help="criteria run in parallel")
    bench.add_argument("--kernel", action="store_true", help="compare flow kernels")
    bench.add_argument("--n", type=int, default=150)
    bench.add_argument("--k", type=int, default=6)
    bench.add_argument("--seed", type=int, default=1)
    bench.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KLinkageError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
