"""Command-line entry point: ``hamkit <command> ...``.

Results go to ``--out`` (or stdout).  Every run also emits one JSON run
report, to ``--report`` if given and otherwise as a single line on stderr.
Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from pathlib import Path

from . import __version__
from .families import (
    PARTIAL_WORD_HEADER,
    base_reversing_family,
    cfk_family,
    k24_paths_from_reversing,
    read_partial_words,
    recursive_c4_family,
    reversing_permutations,
    tricolor_family,
    tripartite_family,
    write_partial_words,
)
from .graphcore import PATH_FAMILY_HEADER, read_graph, read_path_family, write_graph, write_path_family
from .numtheory import find_good_prime, lps_params, next_prime_square, prime_square_gap_scan
from .oracle import (
    ResourceLimitError,
    enumerate_ham_paths,
    enumerate_matchings,
    enumerate_permutations,
    exact_extremal,
    count_ham,
    kriv_estimate,
    make_relation,
    parse_pattern,
)
from .relations import SHARED_CONVENTIONS, parse_ways, relabel_filter, verify_family

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

FORMAT_VERSIONS = {
    "hampath-family": 1,
    "partialword": 1,
    "graph": 1,
    "run-report": 1,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


class _Version(argparse.Action):
    def __init__(self, option_strings, dest, **kw):
        super().__init__(option_strings, dest, nargs=0, default=argparse.SUPPRESS, help="print versions and exit")

    def __call__(self, parser, namespace, values, option_string=None):
        formats = " ".join(f"{k}=v{v}" for k, v in FORMAT_VERSIONS.items())
        print(f"hamkit {__version__} ({formats})")
        parser.exit(0)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


class _Run:
    def __init__(self, args):
        self.args = args
        self.artifacts: list[str] = []

    def emit(self, text: str) -> None:
        out = getattr(self.args, "out", None)
        if out:
            Path(out).write_text(text)
            self.artifacts.append(str(out))
        else:
            sys.stdout.write(text)


# -- commands ---------------------------------------------------------------


def cmd_construct(run: _Run) -> int:
    a = run.args
    fam = a.family
    if fam == "reversing":
        words = reversing_permutations(a.n) if a.variant == "perms" else base_reversing_family(a.n)
        run.emit(write_partial_words(words))
        return EXIT_OK
    builders = {
        "cfk": cfk_family,
        "recursive": recursive_c4_family,
        "tricolor": tricolor_family,
        "tripartite": tripartite_family,
        # --n is the permutation length m; paths live on 4m+1 vertices
        "k24": lambda m: k24_paths_from_reversing(reversing_permutations(m)),
    }
    run.emit(write_path_family(builders[fam](a.n)))
    return EXIT_OK


def _read_family(path: str):
    text = Path(path).read_text()
    first = text.lstrip().splitlines()[0].strip() if text.strip() else ""
    if first == PATH_FAMILY_HEADER:
        return read_path_family(text)
    if first == PARTIAL_WORD_HEADER:
        return read_partial_words(text)
    raise ValueError(f"{path}: unrecognised header {first!r}")


def cmd_verify(run: _Run) -> int:
    a = run.args
    family = _read_family(a.input)
    pattern = parse_pattern(a.pattern)
    ways = parse_ways(a.ways) if a.ways else None
    report = verify_family(family, pattern, a.mode, ways=ways, shared=a.shared, jobs=a.jobs)
    run.emit(_dump(report.to_json()))
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_certify(run: _Run) -> int:
    a = run.args
    from .pseudorandom import build_gp, build_lps, lps_report, spectral_certificate

    if a.target == "gp":
        cert = spectral_certificate(a.p, with_numeric=a.numeric)
        if a.edges:
            Path(a.edges).write_text(write_graph(build_gp(a.p)))
            run.artifacts.append(str(a.edges))
        run.emit(_dump(cert.to_json()))
        ok = cert.blocks_ok and cert.c4_free and cert.inf_norm == cert.lambda_sq_bound
        if cert.numeric_lambda2 is not None:
            ok &= cert.numeric_lambda2 <= math.sqrt(cert.lambda_sq_bound) + 1e-8
        return EXIT_OK if ok else EXIT_FAIL
    lps = build_lps(a.p, a.q)
    rep = lps_report(lps, with_girth=a.girth, with_spectrum=a.spectrum)
    if a.edges:
        Path(a.edges).write_text(write_graph(lps.graph))
        run.artifacts.append(str(a.edges))
    run.emit(_dump(rep))
    ok = rep["degree"] == a.p + 1 and rep["inverse_closed"] and rep["connected"]
    if a.girth and rep["girth"] is not None:
        ok &= rep["girth"] >= math.ceil(rep["girth_lower_bound"] - 1e-12)
    if a.spectrum:
        ok &= rep["max_nontrivial_abs_eigenvalue"] <= rep["ramanujan_bound"] + 1e-6
    return EXIT_OK if ok else EXIT_FAIL


def cmd_primes(run: _Run) -> int:
    a = run.args
    if a.search == "next-square":
        p, sq, e = next_prime_square(a.n)
        run.emit(_dump({"n": a.n, "p": p, "p_squared": sq, "gap_exponent": e}))
        return EXIT_OK
    if a.search == "scan":
        res = prime_square_gap_scan(a.lo, a.hi, a.exponent)
        run.emit(_dump(res.to_json()))
        return EXIT_OK
    if a.search == "good":
        pair = find_good_prime(a.eps, a.k, a.x)
        params = {"eps": a.eps, "k": a.k, "x": a.x}
    else:
        pair = lps_params(a.n, a.eps, a.k)
        params = {"eps": a.eps, "k": a.k, "n": a.n}
    body = {"found": pair is not None, **params}
    if pair is not None:
        body.update(pair.to_json())
    run.emit(_dump(body))
    return EXIT_OK if pair is not None else EXIT_FAIL


def cmd_oracle(run: _Run) -> int:
    a = run.args
    if a.objects == "paths":
        objects = list(enumerate_ham_paths(a.n))
    elif a.objects == "matchings":
        objects = enumerate_matchings(a.n)
    else:
        if not 2 <= a.n <= 6:
            raise ValueError("permutation oracle needs 2 <= n <= 6")
        objects = enumerate_permutations(a.n)
    ways = parse_ways(a.ways) if a.ways else None
    rel = make_relation(a.objects, a.relation, ways, a.shared, n=a.n)
    mode = {"clique": "max-clique", "independent": "max-independent"}[a.mode]
    # relabelling the vertices of K_n acts transitively and preserves every relation offered here
    res = exact_extremal(objects, rel, mode, transitive=True)
    body = res.to_json()
    body.update(
        {
            "relation": a.relation,
            "ways": sorted(w.name.lower() for w in ways) if ways else None,
            "shared": a.shared,
            "mode": a.mode,
            "objects": a.objects,
            "n": a.n,
            "witness": [_object_text(objects[i]) for i in res.witness],
        }
    )
    run.emit(_dump(body))
    return EXIT_OK


def _object_text(obj) -> str:
    if isinstance(obj, tuple):
        return " ".join(f"{u}-{v}" for u, v in obj)
    return str(obj)


def cmd_count(run: _Run) -> int:
    a = run.args
    g = read_graph(Path(a.graph).read_text())
    c = count_ham(g, a.kind)
    run.emit(_dump({"kind": a.kind, "n": g.n, "m": g.num_edges, "count": c, "log_count": math.log(c) if c else None}))
    return EXIT_OK


def cmd_estimate(run: _Run) -> int:
    a = run.args
    val = kriv_estimate(a.n, a.d)
    run.emit(_dump({"n": a.n, "d": a.d, "log_estimate": val}))
    return EXIT_OK


def cmd_relabel(run: _Run) -> int:
    a = run.args
    x = read_path_family(Path(a.x).read_text())
    i = read_path_family(Path(a.i).read_text())
    run.emit(write_path_family(relabel_filter(x, i, a.trials, a.seed)))
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", help="write results here instead of stdout")
    common.add_argument("--report", help="write the JSON run report here instead of stderr")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="maximum worker processes")

    p = _Parser(prog="hamkit", description="Cycle-creating Hamiltonian path toolkit.")
    p.add_argument("--version", action=_Version)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct", parents=[common], help="write an explicit family")
    c.add_argument("--family", required=True, choices=["cfk", "recursive", "tricolor", "reversing", "k24", "tripartite"])
    c.add_argument("--n", type=int, required=True, help="vertex count (word length for reversing, m for k24)")
    c.add_argument("--variant", choices=["words", "perms"], default="words", help="reversing: partial words or permutations")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", parents=[common], help="check every pair of a family")
    v.add_argument("--in", dest="input", required=True)
    v.add_argument("--pattern", required=True, help="c3|c4|c2k:<k>|k24|k33|odd|even|good-k24|reverse")
    v.add_argument("--mode", choices=["all-create", "none-create"], default="all-create")
    v.add_argument("--ways", help="comma list of h1,h2,h3 (c4 only)")
    v.add_argument("--shared", choices=SHARED_CONVENTIONS, default="assign", help="shared-edge convention for ways")
    v.set_defaults(func=cmd_verify)

    ce = sub.add_parser("certify", help="certificates for the upper-bound graphs")
    csub = ce.add_subparsers(dest="target", required=True, parser_class=_Parser)
    g = csub.add_parser("gp", parents=[common])
    g.add_argument("--p", type=int, required=True)
    g.add_argument("--numeric", action="store_true", help="also run the iterative eigensolver")
    g.add_argument("--edges", help="also write the graph as an edge list")
    g.set_defaults(func=cmd_certify)
    lp = csub.add_parser("lps", parents=[common])
    lp.add_argument("--p", type=int, required=True)
    lp.add_argument("--q", type=int, required=True)
    lp.add_argument("--girth", action="store_true")
    lp.add_argument("--spectrum", action="store_true")
    lp.add_argument("--edges", help="also write the graph as an edge list")
    lp.set_defaults(func=cmd_certify)

    pr = sub.add_parser("primes", help="number-theoretic searches")
    psub = pr.add_subparsers(dest="search", required=True, parser_class=_Parser)
    ns = psub.add_parser("next-square", parents=[common])
    ns.add_argument("--n", type=int, required=True)
    sc = psub.add_parser("scan", parents=[common])
    sc.add_argument("--lo", type=int, required=True)
    sc.add_argument("--hi", type=int, required=True)
    sc.add_argument("--exponent", type=float, required=True)
    gd = psub.add_parser("good", parents=[common])
    gd.add_argument("--eps", type=float, required=True)
    gd.add_argument("--k", type=float, required=True)
    gd.add_argument("--x", type=int, required=True)
    lpp = psub.add_parser("lps-params", parents=[common])
    lpp.add_argument("--n", type=int, required=True)
    lpp.add_argument("--eps", type=float, required=True)
    lpp.add_argument("--k", type=float, required=True)
    for s in (ns, sc, gd, lpp):
        s.set_defaults(func=cmd_primes)

    o = sub.add_parser("oracle", parents=[common], help="exact extremal value by branch-and-bound")
    o.add_argument("--objects", choices=["paths", "matchings", "perms"], required=True)
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--relation", required=True, help="c3|c4|c2k:<k>|k24|k33|odd|even|good-k24|reverse")
    o.add_argument("--mode", choices=["clique", "independent"], default="clique")
    o.add_argument("--ways", help="comma list of h1,h2,h3 (c4 on paths only)")
    o.add_argument("--shared", choices=SHARED_CONVENTIONS, default="assign")
    o.set_defaults(func=cmd_oracle)

    cn = sub.add_parser("count", parents=[common], help="count Hamiltonian cycles or paths")
    cn.add_argument("--graph", required=True)
    cn.add_argument("--kind", choices=["cycles", "paths"], default="cycles")
    cn.set_defaults(func=cmd_count)

    es = sub.add_parser("estimate", parents=[common], help="log of n! (d/n)^n")
    es.add_argument("--n", type=int, required=True)
    es.add_argument("--d", type=int, required=True)
    es.set_defaults(func=cmd_estimate)

    rl = sub.add_parser("relabel", parents=[common], help="best overlap of X with a random relabelling of I")
    rl.add_argument("--x", required=True)
    rl.add_argument("--i", required=True)
    rl.add_argument("--trials", type=int, default=100)
    rl.add_argument("--seed", type=int, required=True)
    rl.set_defaults(func=cmd_relabel)
    return p


def _params(args) -> dict:
    skip = {"func", "out", "report"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _write_report(path, report: dict) -> None:
    if path:
        Path(path).write_text(_dump(report))
    else:
        sys.stderr.write(json.dumps(report) + "\n")


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    t0 = time.perf_counter()
    report = {"command": "", "parameters": {}, "outcome": "failure", "artifacts": [], "wall_time_ms": 0}
    report_path = None
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:  # --help and --version
        return int(e.code or 0)
    except UsageError as e:
        sys.stderr.write(str(e) + "\n")
        report["parameters"] = {"argv": argv}
        report["error"] = str(e).splitlines()[-1]
        code = EXIT_USAGE
        # the report flag may still be recoverable from raw argv
        if "--report" in argv[:-1]:
            report_path = argv[argv.index("--report") + 1]
    else:
        report_path = getattr(args, "report", None)
        report["command"] = " ".join(x for x in (args.command, getattr(args, "target", None), getattr(args, "search", None)) if x)
        report["parameters"] = _params(args)
        run = _Run(args)
        try:
            code = args.func(run)
        except ResourceLimitError as e:
            report["error"] = str(e)
            code = EXIT_RESOURCE
        except (ValueError, OSError) as e:
            report["error"] = f"{type(e).__name__}: {e}"
            sys.stderr.write(f"hamkit: error: {e}\n")
            code = EXIT_USAGE
        report["artifacts"] = run.artifacts
    report["outcome"] = "success" if code == EXIT_OK else "failure"
    report["exit_code"] = code
    report["wall_time_ms"] = int(round((time.perf_counter() - t0) * 1000))
    _write_report(report_path, report)
    return code


if __name__ == "__main__":
    sys.exit(main())
