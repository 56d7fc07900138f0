"""Command-line front end: ``prime-moduli <command> [options]``.

Exit codes: 0 on success, 1 on invalid input, 2 when an iso-class or
Groebner pair cap is exhausted.  Results go to stdout (JSON by default,
keys sorted so identical runs give identical bytes); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import confcoh, galgebra, graphs, hgamma, limits, verify
from .errors import InvalidInputError, PrimeModuliError, ResourceCapError

MAX_DEGREE_ENV = "PRIME_MODULI_MAX_DEGREE"
DEFAULT_MAX_DEGREE = 24

EXIT_OK, EXIT_INVALID, EXIT_CAP = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; here bad usage is invalid input (1)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _default_max_degree() -> int:
    raw = os.environ.get(MAX_DEGREE_ENV)
    if raw is None:
        return DEFAULT_MAX_DEGREE
    try:
        return int(raw)
    except ValueError:
        raise InvalidInputError(f"{MAX_DEGREE_ENV} must be an integer, got {raw!r}") from None


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--max-degree", type=int, default=None, help=f"degree cap (default ${MAX_DEGREE_ENV} or {DEFAULT_MAX_DEGREE})")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--json", dest="format", action="store_const", const="json", help="same as --format json")
    p.add_argument("--iso-cap", type=_positive, default=None, help="cap on isomorphism classes during enumeration")
    p.add_argument("--pair-cap", type=_positive, default=None, help="cap on S-pairs during Buchberger")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="prime-moduli", description="Rational cohomology of graph categories and prime 3-manifold moduli.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("graphs", parents=[common], help="enumerate Gr_{g,n} up to isomorphism")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--no-redundant", action="store_true", help="drop graphs with redundant edges")
    p.add_argument("--poset", action="store_true", help="also report the poset of chains")
    p.add_argument("--show-graphs", action="store_true", help="include each graph's JSON")

    for name, text in (("ring", "print a presentation"), ("betti", "print a Betti table")):
        p = sub.add_parser(name, parents=[common], help=text)
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--conf", type=int, metavar="D", help="configuration ring of D points")
        src.add_argument("--graph", help="built-in name (theta, rose2), JSON text or JSON file")
        p.add_argument("--variant", choices=confcoh.VARIANTS, default="plain")
        p.add_argument("--factor-data", help="JSON list of dimension vectors, one per marked point")
        if name == "betti":
            p.add_argument("--even-only", action="store_true", help="Betti table of the even subring only")

    p = sub.add_parser("conf", parents=[common], help="configuration ring of d points in S^3")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--variant", choices=confcoh.VARIANTS, default="plain")
    p.add_argument("--betti", type=int, metavar="D", help="also report the Betti table to degree D")

    p = sub.add_parser("hgamma", parents=[common], help="ring attached to a marked graph")
    p.add_argument("--graph", required=True, help="built-in name (theta, rose2), JSON text or JSON file")
    p.add_argument("--factor-data", help="JSON list of dimension vectors, one per marked point")
    p.add_argument("--betti", type=int, metavar="D", help="also report the Betti table to degree D")

    p = sub.add_parser("invariants", parents=[common], help="Betti table of a group's invariants")
    p.add_argument("--graph", required=True)
    p.add_argument("--group", default="aut", help="aut, trivial, s3xc2, c2xc2 (theta), d8 (rose2)")

    p = sub.add_parser("colimit", parents=[common], help="derived limits over the chain poset")
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--factor-data", help="JSON list of dimension vectors, one per marked point")

    p = sub.add_parser("verify", parents=[common], help="run the reference checks")
    p.add_argument("--inject-fault", choices=verify.FAULTS, default=None, help="corrupt a built-in for testing")
    p.add_argument("--only", action="append", metavar="ANCHOR", help="run only the named check (repeatable)")
    return parser


# ---------------------------------------------------------------------------
# output helpers


def _emit(data, fmt: str, table_lines) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(data, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write("\n".join(table_lines(data)) + "\n")


def _betti_lines(betti: dict) -> list[str]:
    lines = ["degree  rank"]
    lines += [f"{int(d):>6}  {r}" for d, r in sorted(betti.items(), key=lambda kv: int(kv[0]))]
    return lines


def _factor_data(text):
    if text is None:
        return None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"--factor-data is not valid JSON: {exc}") from None


def _presentation_for(args) -> tuple[galgebra.GradedPresentation, dict]:
    if args.conf is not None:
        ring = confcoh.conf_ring(args.conf, args.variant)
        return ring.presentation, ring.presentation.to_json()
    ring = hgamma.build_ring(graphs.resolve_graph(args.graph), _factor_data(args.factor_data))
    return ring, ring.to_json()


# ---------------------------------------------------------------------------
# commands


def cmd_graphs(args) -> int:
    found = graphs.enumerate_graphs(args.g, args.n, no_redundant=args.no_redundant)
    classes = []
    for mg in found:
        entry = {
            "edges": mg.graph.num_edges,
            "vertices": mg.graph.num_vertices,
            "automorphisms": len(graphs.automorphisms(mg)),
            "redundant_edges": len(mg.redundant_edges()),
        }
        if args.show_graphs:
            entry["graph"] = mg.to_json()
        classes.append(entry)
    data = {"g": args.g, "n": args.n, "no_redundant": args.no_redundant, "count": len(found), "classes": classes}
    if args.poset:
        P = graphs.chain_poset(args.g, args.n, no_redundant=args.no_redundant)
        data["poset"] = {"elements": len(P.elements), "depth": P.depth, "relations": [list(r) for r in P.relations()]}

    def lines(d):
        out = [f"Gr_{{{d['g']},{d['n']}}}{' (no redundant edges)' if d['no_redundant'] else ''}: {d['count']} classes"]
        out.append("  #  edges  vertices  |Aut|")
        out += [f"{i:>3}  {c['edges']:>5}  {c['vertices']:>8}  {c['automorphisms']:>5}" for i, c in enumerate(d["classes"])]
        if "poset" in d:
            out.append(f"chain poset: {d['poset']['elements']} elements, depth {d['poset']['depth']}")
        return out

    _emit(data, args.format, lines)
    return EXIT_OK


def cmd_ring(args) -> int:
    _, data = _presentation_for(args)
    _emit(data, args.format, _ring_lines)
    return EXIT_OK


def cmd_betti(args) -> int:
    D = args.max_degree
    obj, _ = _presentation_for(args)
    if isinstance(obj, hgamma.HGammaRing):
        table = obj.even_presentation.betti(D) if args.even_only else obj.betti(D)
    else:
        table = (obj.even_part() if args.even_only else obj).betti(D)
    data = {"max_degree": D, "betti": {str(d): r for d, r in enumerate(table.ranks)}}
    _emit(data, args.format, lambda d: _betti_lines(d["betti"]))
    return EXIT_OK


def _ring_lines(d):
    out = ["even generators: " + ", ".join(f"{g['name']} (deg {g['degree']})" for g in d["even_generators"])]
    out.append("odd generators: " + ", ".join(f"{g['name']} (deg {g['degree']})" for g in d["odd_generators"]))
    out.append("Groebner basis:")
    out += [f"  {g}" for g in d["groebner_basis"]]
    if "betti" in d:
        out += _betti_lines(d["betti"])
    return out


def _with_betti(data: dict, table) -> dict:
    data["betti"] = {str(d): r for d, r in enumerate(table.ranks)}
    return data


def cmd_conf(args) -> int:
    ring = confcoh.conf_ring(args.d, args.variant)
    data = {"d": args.d, "variant": args.variant, **ring.presentation.to_json()}
    if args.betti is not None:
        if args.betti < 0:
            raise InvalidInputError("--betti needs a non-negative degree")
        _with_betti(data, ring.presentation.betti(args.betti))
    _emit(data, args.format, _ring_lines)
    return EXIT_OK


def cmd_hgamma(args) -> int:
    ring = hgamma.build_ring(graphs.resolve_graph(args.graph), _factor_data(args.factor_data))
    data = ring.to_json()
    if args.betti is not None:
        if args.betti < 0:
            raise InvalidInputError("--betti needs a non-negative degree")
        _with_betti(data, ring.betti(args.betti))
    _emit(data, args.format, _ring_lines)
    return EXIT_OK


def cmd_invariants(args) -> int:
    D = args.max_degree
    ring = hgamma.build_ring(graphs.resolve_graph(args.graph))
    group = limits.named_group(ring.graph, args.group)
    action = limits.group_action(ring, group)
    table = limits.invariant_betti(ring.presentation, action, D)
    data = {"group": args.group, "group_order": len(group), "max_degree": D, "betti": {str(d): r for d, r in enumerate(table.ranks)}}
    _emit(data, args.format, lambda d: [f"group {d['group']} of order {d['group_order']}"] + _betti_lines(d["betti"]))
    return EXIT_OK


def cmd_colimit(args) -> int:
    D = args.max_degree
    if (args.g, args.n) == (2, 0):
        betti, report = limits.assemble_u2(D)
        data = {
            "g": 2,
            "n": 0,
            "max_degree": D,
            "betti": {str(d): r for d, r in enumerate(betti.ranks)},
            "lim1_zero": report["lim1_zero"],
            "pi_star_iso": report["pi_star_iso"],
            "mayer_vietoris_exact": report["mayer_vietoris_exact"],
            "generators_span": report["generators_span"],
            "relations_checked": report["relations_checked"],
        }

        def lines(d):
            out = _betti_lines(d["betti"])
            out.append(f"lim^1 = 0: {d['lim1_zero']}    pi^* iso: {d['pi_star_iso']}")
            out += [f"{r['product']} = {r['normal_form']}" for r in d["relations_checked"]]
            return out

        _emit(data, args.format, lines)
        return EXIT_OK
    report = limits.e2_page(args.g, args.n, D, _factor_data(args.factor_data))
    data = {"g": args.g, "n": args.n, "max_degree": D, **report.to_json()}

    def lines(d):
        out = [f"E_2 page (rows p = 0..{d['depth']}), {d['note']}", "   q  " + "  ".join(f"p={p}" for p in sorted(d["e2"]))]
        for q in range(D + 1):
            out.append(f"{q:>4}  " + "  ".join(f"{d['e2'][p][str(q)]:>3}" for p in sorted(d["e2"])))
        return out

    _emit(data, args.format, lines)
    return EXIT_OK


def cmd_verify(args) -> int:
    results = verify.run_checks(args.max_degree, args.inject_fault, args.only)
    if args.only:
        unknown = set(args.only) - {r.anchor for r in results}
        if unknown:
            raise InvalidInputError(f"unknown check(s): {', '.join(sorted(unknown))}")
    failed = [r for r in results if not r.ok]
    if args.format == "json":
        data = {
            "max_degree": args.max_degree,
            "passed": len(results) - len(failed),
            "failed": [r.anchor for r in failed],
            "checks": [{"anchor": r.anchor, "ok": r.ok, "detail": r.detail} for r in results],
        }
        _emit(data, "json", None)
    else:
        for r in results:
            sys.stdout.write(f"{'PASS' if r.ok else 'FAIL'}  {r.anchor}: {r.detail}\n")
        sys.stdout.write(f"{len(results) - len(failed)}/{len(results)} checks passed\n")
    for r in results:
        print(f"[verify] {r.anchor} {r.seconds:.2f}s", file=sys.stderr)
    return EXIT_INVALID if failed else EXIT_OK


COMMANDS = {
    "graphs": cmd_graphs,
    "ring": cmd_ring,
    "betti": cmd_betti,
    "conf": cmd_conf,
    "hgamma": cmd_hgamma,
    "invariants": cmd_invariants,
    "colimit": cmd_colimit,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        if args.max_degree is None:
            args.max_degree = _default_max_degree()
        if args.max_degree < 0:
            raise InvalidInputError("max degree must be non-negative")
        if args.iso_cap is not None:
            graphs.DEFAULT_ISO_CLASS_CAP = args.iso_cap
        if args.pair_cap is not None:
            galgebra.DEFAULT_PAIR_CAP = args.pair_cap
        code = COMMANDS[args.command](args)
    except ResourceCapError as exc:
        print(f"prime-moduli: resource cap exhausted: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (PrimeModuliError, InvalidInputError, ValueError) as exc:
        print(f"prime-moduli: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(f"[{args.command}] finished in {time.perf_counter() - start:.2f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
