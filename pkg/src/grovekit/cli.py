"""``grovekit`` command line: every pipeline, exact JSON on stdout.

Exit codes: 1 usage, 2 unparsable input, 3 violated precondition,
4 internal invariant breach.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Any

from . import dimers, groves, network, oracle, reconstruction
from .exact import MultiPoly, SingularMatrixError
from .partitions import ColorSpec, Partition, project, tripartite_partition

EXIT_USAGE, EXIT_PARSE, EXIT_PRECONDITION, EXIT_INTERNAL = 1, 2, 3, 4


class InputError(Exception):
    """Input could not be parsed."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def q(x) -> str:
    if isinstance(x, MultiPoly):
        return str(x)
    return network.format_rational(Fraction(x))


def _matrix(L) -> list[list[str]]:
    return [[q(x) for x in row] for row in L]


def _read_json(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _load_network(path: str) -> network.Network:
    data = _read_json(path)
    try:
        return network.Network.from_dict(data)
    except (ValueError, TypeError) as exc:
        raise InputError(str(exc)) from exc


def _load_response(path: str):
    """Response matrix from a graph file or a matrix file."""
    data = _read_json(path)
    if isinstance(data, dict) and "edges" in data:
        try:
            return network.response_matrix(network.Network.from_dict(data))
        except (ValueError, TypeError) as exc:
            raise InputError(str(exc)) from exc
    try:
        return network.matrix_from_json(data)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _parse(fn, text: str, *args):
    try:
        return fn(text, *args)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _node_list(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise InputError(f"bad node list {text!r}") from exc


def _target(args, n: int | None) -> tuple[Partition, ColorSpec | None]:
    if args.colors:
        if n is None:
            raise InputError("--colors needs a graph or --n to fix the node count")
        c = _parse(ColorSpec.parse, args.colors, n)
        return tripartite_partition(c), c
    if args.partition:
        return _parse(Partition.parse, args.partition, n), None
    raise InputError("give --colors or --partition")


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, separators=(",", ":")) + "\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_response(args):
    L = _load_response(args.input)
    network.check_response_matrix(L)
    return network.matrix_to_json(L)


def cmd_resistance(args):
    L = _load_response(args.input)
    return {"n": len(L), "R": _matrix(network.resistance_matrix(L))}


def cmd_dual(args):
    L = _load_response(args.input)
    return {"n": len(L), "L": _matrix(network.dual_response(L))}


def cmd_grove_prob(args):
    L = _load_response(args.input) if args.input else None
    sigma, _ = _target(args, len(L) if L is not None else args.n)
    if L is None:
        return {"partition": str(sigma), "polynomial": str(groves.grove_probability(None, sigma).value)}
    prob = groves.grove_probability(L, sigma)
    if args.normalize == "tree":
        return {"partition": str(sigma), "p_tree": q(prob.per_tree(L).value)}
    return {"partition": str(sigma), "pu": q(prob.value)}


def cmd_project(args):
    p = _parse(Partition.parse, args.partition)
    rng = random.Random(args.seed) if args.seed is not None else None
    return {"partition": str(p), "terms": [[c, s] for c, s in project(p, rng).to_list()]}


def cmd_minors(args):
    L = _load_response(args.input)
    rows, cols = _node_list(args.rows), _node_list(args.cols)
    C = sorted(set(rows) & set(cols))
    A = [i for i in rows if i not in C]
    B = [j for j in cols if j not in C]
    D = [k for k in range(1, len(L) + 1) if k not in rows and k not in cols]
    lhs, rhs = groves.minor_grove_identity(L, A, B, C, D)
    return {"det": q(lhs), "groves": q(rhs), "equal": lhs == rhs}


def cmd_reconstruct(args):
    L = _load_response(args.input)
    ann = reconstruction.annotate(len(L))
    values = reconstruction.reconstruct(L)
    return {"n": len(L), "edges": [[u, v, q(c)] for (u, v), c in zip(ann.edges, values)]}


def cmd_dd_prob(args):
    if args.n is None and not args.input:
        raise InputError("give a bipartite graph or --n")
    if args.input:
        try:
            g = dimers.BipartiteNetwork.from_dict(_read_json(args.input))
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        n = len(g.nodes)
    else:
        g, n = None, args.n
    c = _parse(ColorSpec.parse, args.colors, n)
    sigma = tripartite_partition(c)
    if g is None:
        return {"partition": str(sigma), "polynomial": str(dimers.dd_tripartite_prob(None, c))}
    return {"partition": str(sigma), "pr": q(dimers.dd_tripartite_prob(dimers.x_matrix(g), c))}


def cmd_enumerate(args):
    net = _load_network(args.input)
    table = oracle.enumerate_groves(net, args.max_edges)
    return {"n": table.n, "groves": [[str(p), q(w)] for p, w in table.items()], "total": q(table.total)}


def cmd_carroll_speyer(args):
    count = oracle.cs_count(args.N)
    forests = oracle.forest_count_interior_rooted(network.cs_graph(args.N))
    if args.check_product and oracle.forest_count_product_formula(args.N) != forests:
        raise AssertionError("product formula disagrees with the matrix-tree count")
    return {"count": str(count), "forests": q(forests)}


def cmd_transform(args):
    net = _load_network(args.input)
    if args.move in ("parallel", "delta-wye"):
        location = tuple(_node_list(args.at))
    else:
        try:
            location = int(args.at)
        except ValueError as exc:
            raise InputError(f"--at must be a vertex id for {args.move}") from exc
    return network.apply_transform(net, args.move, location).to_dict()


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="grovekit", description="Exact grove and double-dimer connection probabilities.")
    p.add_argument("--seed", type=int, default=None, help="seed for randomized choices")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_text, input_required=True):
        s = sub.add_parser(name, help=help_text)
        s.set_defaults(fn=fn)
        if input_required:
            s.add_argument("input", help="JSON file ('-' for stdin)")
        return s

    add("response", cmd_response, "response matrix of a graph")
    add("resistance", cmd_resistance, "effective resistances between nodes")
    add("dual", cmd_dual, "response matrix of the dual graph")
    s = add("grove-prob", cmd_grove_prob, "normalized grove connection probability", input_required=False)
    s.add_argument("input", nargs="?", help="graph or response matrix; omit for the symbolic polynomial")
    s.add_argument("--colors", help="colour arcs, e.g. R=1-2,G=3-4,B=5-6")
    s.add_argument("--partition", help="target partition, e.g. 16|23|45")
    s.add_argument("--n", type=int, help="node count in symbolic mode")
    s.add_argument("--normalize", choices=("uncrossing", "tree"), default="uncrossing")
    s = add("project", cmd_project, "expand a partition over planar partitions", input_required=False)
    s.add_argument("--partition", required=True)
    s = add("minors", cmd_minors, "minor of L against its signed grove sum")
    s.add_argument("--rows", required=True, help="row nodes, e.g. 1,2,3")
    s.add_argument("--cols", required=True, help="column nodes, e.g. 3,4,5")
    add("reconstruct", cmd_reconstruct, "conductances of the standard graph with a given response matrix")
    s = add("dd-prob", cmd_dd_prob, "double-dimer tripartite pairing probability", input_required=False)
    s.add_argument("input", nargs="?", help="bipartite graph; omit for the symbolic determinant")
    s.add_argument("--colors", required=True)
    s.add_argument("--n", type=int, help="node count in symbolic mode")
    s = add("enumerate", cmd_enumerate, "brute-force grove table")
    s.add_argument("--max-edges", type=int, default=oracle.MAX_FRONTIER_EDGES)
    s = add("carroll-speyer", cmd_carroll_speyer, "grove count of the side-N triangle", input_required=False)
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--check-product", action="store_true", help="also evaluate the root-of-unity product")
    s = add("transform", cmd_transform, "apply one electrical move")
    s.add_argument("--move", required=True, choices=("series", "parallel", "pendant", "wye-delta", "delta-wye"))
    s.add_argument("--at", required=True, help="vertex id, or comma-separated vertices")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _emit(args.fn(args))
    except InputError as exc:
        print(f"grovekit: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ValueError, SingularMatrixError, ZeroDivisionError) as exc:
        print(f"grovekit: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (AssertionError, ArithmeticError) as exc:
        print(f"grovekit: internal check failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return 0


if __name__ == "__main__":
    sys.exit(main())
