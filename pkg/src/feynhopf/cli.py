"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""
from __future__ import annotations

import argparse
import sys
import time

from .enumerate import HALF_EDGE_CAP, EnumerationError, count_by_degree, corpus, enumerate_graphs
from .graph import GraphError, loop_number
from .hopf import antipode, coproduct_hopf, coproduct_tilde
from .momenta import momentum_space
from .poly import PolyParseError
from .renorm import Birkhoff, CharacterError, Convolution, inverse_character
from .schemes import I_minus_P_ms, P_ms
from .specified import SpecificationError, SpecifiedGraph, residue_signature, specification_problems
from .textio import TextFormatError, format_algebra_element, format_tensor_sum, graph_code, load_graphs, parse_characters
from .theory import TheoryError, is_in_theory, load_theory, refinement_indices, vertex_signature
from .toys import builtin_character, tabulated_character
from .verify import check_structure, run_suite

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _theory(args):
    try:
        return load_theory(args.theory)
    except OSError as e:
        raise InputError(f"cannot read theory {args.theory!r}: {e.strerror}") from None


def _records(args, validate=True, select=True):
    if not args.graph:
        raise InputError("--graph is required")
    recs = {}
    for path in args.graph:
        try:
            for name, r in load_graphs(path, validate=validate).items():
                if name in recs:
                    raise InputError(f"graph name {name!r} appears in more than one file")
                recs[name] = r
        except OSError as e:
            raise InputError(f"cannot read {path!r}: {e.strerror}") from None
    if select and getattr(args, "name", None):
        if args.name not in recs:
            raise InputError(f"no graph named {args.name!r}")
        return {args.name: recs[args.name]}
    return recs


def _specified(rec, theory) -> SpecifiedGraph:
    g = rec.graph
    if not is_in_theory(g, theory):
        for v in g.vertices:
            sig = vertex_signature(g, v)
            if theory.vertex_type_name(sig) is None:
                shown = ", ".join(f"{t}:{c}" for t, c in sig) or "no half-edges"
                raise InputError(f"graph {rec.name!r}: vertex {v} has signature {{{shown}}}, not a vertex type of {theory.name}")
        raise InputError(f"graph {rec.name!r}: half-edge types or pairings not allowed in {theory.name}")
    spec = {}
    for comp in g.component_graphs:
        rep = comp.vertices[0]
        given = [rec.spec[v] for v in comp.vertices if v in rec.spec]
        if given:
            spec[rep] = given[0]
        elif comp.internal_edges:
            allowed = refinement_indices(theory, residue_signature(comp))
            if len(allowed) != 1:
                raise InputError(
                    f"graph {rec.name!r}: component {rep} needs a 'spec {rep} = <n>' line (admissible: {sorted(allowed)})"
                )
            spec[rep] = next(iter(allowed))
    G = SpecifiedGraph(g, spec)
    problems = specification_problems(G, theory)
    if problems:
        raise InputError(f"graph {rec.name!r}: " + "; ".join(problems))
    return G


def _kv(pairs) -> str:
    return "\n".join(f"{k}={v}" for k, v in pairs)


def _emit(args, name, text_lines, kv_pairs):
    if args.format == "kv":
        print(_kv([("graph", name)] + kv_pairs))
    else:
        print("\n".join(text_lines))


def cmd_coproduct(args) -> int:
    theory = _theory(args)
    for name, rec in _records(args).items():
        G = _specified(rec, theory)
        d = coproduct_tilde(G, theory) if args.mode == "tilde" else coproduct_hopf(G, theory)
        body = format_tensor_sum(d)
        _emit(
            args,
            name,
            [f"# {name}: {args.mode} coproduct, {len(d)} terms", body],
            [("mode", args.mode), ("terms", len(d))] + [("term", line) for line in body.splitlines() if d],
        )
    return EXIT_OK


def cmd_antipode(args) -> int:
    theory = _theory(args)
    for name, rec in _records(args).items():
        s = antipode(_specified(rec, theory), theory)
        body = format_algebra_element(s)
        _emit(
            args,
            name,
            [f"# {name}: antipode, {len(s)} terms", body],
            [("terms", len(s))] + [("term", line) for line in body.splitlines() if s],
        )
    return EXIT_OK


def _character(args, theory, records):
    spec = args.char or "toy"
    if spec == "toy" or spec.startswith("random:"):
        return builtin_character(spec, theory, args.mode, args.dimension)
    try:
        with open(spec) as fh:
            cf = parse_characters(fh.read(), source=spec)
    except OSError as e:
        raise InputError(f"cannot read character file {spec!r}: {e.strerror}") from None
    if cf.mode != args.mode:
        raise InputError(f"character file is mode={cf.mode}, but --mode {args.mode} was requested")
    return tabulated_character(cf, records, theory, args.dimension)


def cmd_birkhoff(args) -> int:
    theory = _theory(args)
    records = _records(args)
    phi = _character(args, theory, _records(args, select=False))
    B = Birkhoff(phi)
    recon = Convolution(inverse_character(B.minus), B.plus)
    status = EXIT_OK
    for name, rec in records.items():
        G = _specified(rec, theory)
        if args.max_degree is not None and loop_number(G.graph) > args.max_degree:
            continue
        minus, plus = B(G)
        L = loop_number(G.graph)
        residual = recon(G) - phi(G)
        recon_ok = residual.is_zero()
        if args.mode == "ms":
            split_ok = L == 0 or (I_minus_P_ms(minus).is_zero() and P_ms(plus).is_zero())
            split_desc = "phi_- pole part only, phi_+ regular"
        else:
            split_ok = L == 0 or all(sum(e for _, e in m) > L for m in plus.poly.terms)
            split_desc = f"every monomial of phi_+ has degree > {L}"
        if not (recon_ok and split_ok):
            status = EXIT_FAIL
        sp = momentum_space(G.graph, args.dimension)
        coords = ", ".join(sp.name(v) for v in sp.free) or "none"
        _emit(
            args,
            name,
            [
                f"# {name}: Birkhoff decomposition, scheme {args.mode}, loops {L}",
                f"coordinates: {coords}",
                f"phi   = {phi(G)}",
                f"phi_- = {minus}",
                f"phi_+ = {plus}",
                f"check phi_-^(-1) * phi_+ - phi = {residual}  [{'ok' if recon_ok else 'FAIL'}]",
                f"check {split_desc}  [{'ok' if split_ok else 'FAIL'}]",
            ],
            [
                ("scheme", args.mode),
                ("loops", L),
                ("coordinates", coords),
                ("phi", phi(G)),
                ("minus", minus),
                ("plus", plus),
                ("residual", residual),
                ("reconstruction_ok", recon_ok),
                ("split_ok", split_ok),
            ],
        )
    return status


def cmd_verify(args) -> int:
    theory = _theory(args)
    records = []
    if args.graph:
        recs = _records(args, validate=False)
        records = list(recs.values())
        structure = check_structure(records)
        if not structure.passed:
            print(structure.line())
            return EXIT_FAIL
        graphs = [_specified(r, theory) for r in records]
    else:
        try:
            graphs = corpus(theory.name, args.max_degree)
        except KeyError:
            raise InputError(f"no shipped corpus for theory {theory.name!r}; pass --graph") from None
    if args.max_degree is not None:
        graphs = [G for G in graphs if loop_number(G.graph) <= args.max_degree]
    t = time.perf_counter()
    results = run_suite(graphs, theory, seed=args.seed, D=args.dimension, records=records)
    ok = all(r.passed for r in results)
    if args.format == "kv":
        print(_kv([("graphs", len(graphs))] + [(r.name.replace(" ", "_"), "pass" if r.passed else "fail") for r in results] + [("all", "pass" if ok else "fail")]))
    else:
        print(f"# {theory.name}: {len(graphs)} specified graphs, seed {args.seed}")
        for r in results:
            print(r.line())
        print(f"{'ALL PASS' if ok else 'FAILURES'} ({time.perf_counter() - t:.2f}s)")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_enumerate(args) -> int:
    theory = _theory(args)
    loops = 2 if args.max_degree is None else args.max_degree
    try:
        graphs = enumerate_graphs(theory, loops, args.max_half_edges, args.vertex_types, cap=args.cap)
    except EnumerationError as e:
        raise InputError(str(e)) from None
    counts = count_by_degree(graphs)
    if args.format == "kv":
        print(_kv([("theory", theory.name), ("total", len(graphs))] + [(f"degree_{d}", n) for d, n in counts.items()] + [("graph", graph_code(g)) for g in graphs]))
    else:
        print(f"# {theory.name}: loops <= {loops}, half-edges <= {args.max_half_edges}: {len(graphs)} graphs")
        for d, n in counts.items():
            print(f"# degree {d}: {n}")
        for g in graphs:
            print(f"L={loop_number(g)} {graph_code(g)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="feynhopf", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, graph=True):
        sp.add_argument("--theory", required=True, help="bundled theory (phi3, phi4, qed) or theory file")
        if graph:
            sp.add_argument("--graph", action="append", help="graph file (repeatable)")
            sp.add_argument("--name", help="only this graph of the file")
        sp.add_argument("--format", choices=("text", "kv"), default="text")
        sp.add_argument("--dimension", type=int, default=1, help="momentum components per half-edge")
        sp.add_argument("--max-degree", type=int, default=None, help="loop-number bound")
        sp.add_argument("--seed", type=int, default=0)

    sp = sub.add_parser("coproduct", help="coproduct of specified graphs")
    common(sp)
    sp.add_argument("--mode", choices=("tilde", "hopf"), default="hopf")
    sp.set_defaults(func=cmd_coproduct)

    sp = sub.add_parser("antipode", help="antipode in the Hopf quotient")
    common(sp)
    sp.set_defaults(func=cmd_antipode)

    sp = sub.add_parser("birkhoff", help="Birkhoff decomposition of a character")
    common(sp)
    sp.add_argument("--char", help="character file, 'toy' (default) or 'random:<seed>'")
    sp.add_argument("--mode", choices=("ms", "taylor"), default="ms")
    sp.set_defaults(func=cmd_birkhoff)

    sp = sub.add_parser("verify", help="run the invariant suite")
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("enumerate", help="list 1PI divergent graphs of a theory")
    common(sp, graph=False)
    sp.add_argument("--max-half-edges", type=int, default=12)
    sp.add_argument("--vertex-types", nargs="+", default=None, help="restrict to these vertex types")
    sp.add_argument("--cap", type=int, default=HALF_EDGE_CAP, help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_enumerate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK
    if args.dimension < 1 or (args.max_degree is not None and args.max_degree < 0):
        print("error: --dimension must be >= 1 and --max-degree >= 0", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except (
        InputError,
        TextFormatError,
        TheoryError,
        GraphError,
        SpecificationError,
        CharacterError,
        PolyParseError,
    ) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
