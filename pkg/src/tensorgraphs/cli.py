"""Command-line interface.

Every run is fully determined by its flags; randomized checks take an
explicit ``--seed`` with a fixed default, so identical invocations produce
byte-identical output.  Exit status: 0 on success, 1 on verification
failure, 2 on usage or input errors.  All numeric input and output uses
rational strings; there are no floats anywhere in the interface.
"""

from __future__ import annotations

import argparse
import json
import sys

from .graphs import (
    GraphSchemaError,
    enumerate_graphs,
    export_dot,
    graph_to_json_text,
    parse_graph,
    serialize_graph,
    validate,
)
from .quotient import canonicalize
from .suite import DEFAULT_SEED, run_suite
from .tensors import tensor_from_json, tensor_to_json
from .evaluate import state_sum
from .verify import (
    verify_diagram,
    verify_extended_stable_range,
    verify_itt,
    verify_quotient_dimension,
)


def _write(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _load_json(path: str):
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def _load_vertices(path: str):
    obj = _load_json(path)
    if not isinstance(obj, dict) or "vertices" not in obj:
        raise GraphSchemaError("signature file: expected {'vertices': [...]}")
    return parse_graph({"vertices": obj["vertices"], "edges": []}).vertices


def _load_quotient_signature(path: str) -> tuple[list[int], list[int], list[int]]:
    obj = _load_json(path)
    if not isinstance(obj, dict):
        raise GraphSchemaError("quotient signature file: expected an object")
    white = obj.get("white", [])
    black = obj.get("black", [])
    nabla = obj.get("nabla", [])
    for name, arities in (("white", white), ("black", black), ("nabla", nabla)):
        if not isinstance(arities, list) or not all(isinstance(a, int) for a in arities):
            raise GraphSchemaError(f"quotient signature file: {name!r} must be a list of integers")
    return white, black, nabla


def _report_text(report) -> str:
    return json.dumps(report.to_json()) + "\n"


def _cmd_graphs_enumerate(args) -> int:
    vertices = _load_vertices(args.signature)
    graphs = enumerate_graphs(vertices)
    text = json.dumps([serialize_graph(g) for g in graphs], indent=2) + "\n"
    _write(text, args.out)
    return 0


def _cmd_graphs_eval(args) -> int:
    graph = parse_graph(_load_json(args.graph))
    inputs_obj = _load_json(args.inputs)
    if not isinstance(inputs_obj, list):
        raise GraphSchemaError("inputs file: expected a JSON array of tensors")
    inputs = [tensor_from_json(t) for t in inputs_obj]
    value = state_sum(graph, inputs, args.dim)
    _write(json.dumps(tensor_to_json(value), indent=2) + "\n", args.out)
    return 0


def _cmd_graphs_canon(args) -> int:
    graph = parse_graph(_load_json(args.graph))
    cg, sign = canonicalize(graph)
    payload = {
        "graph": serialize_graph(cg.graph),
        "sign": str(sign),
        "zero": cg.zero_flag,
    }
    _write(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def _cmd_export_dot(args) -> int:
    graph = parse_graph(_load_json(args.graph))
    _write(export_dot(graph), args.out)
    return 0


def _cmd_verify_itt(args) -> int:
    report = verify_itt(args.k, args.dim)
    _write(_report_text(report), args.out)
    return 0 if report.passed else 1


def _cmd_verify_diagram(args) -> int:
    vertices = _load_vertices(args.signature)
    report = verify_diagram(vertices, args.dim)
    _write(_report_text(report), args.out)
    return 0 if report.passed else 1


def _cmd_verify_quotient(args) -> int:
    white, black, nabla = _load_quotient_signature(args.signature)
    report = verify_quotient_dimension(white, black, nabla, args.dim, args.allow_small_white)
    _write(_report_text(report), args.out)
    return 0 if report.passed else 1


def _cmd_verify_stable_range(args) -> int:
    white, black, nabla = _load_quotient_signature(args.signature)
    report = verify_extended_stable_range(white, black, nabla)
    _write(_report_text(report), args.out)
    return 0 if report.passed else 1


def _cmd_suite(args) -> int:
    results = run_suite(args.seed)
    lines = [
        json.dumps(
            {"criterion": r.index, "name": r.name, "passed": r.passed, "details": r.details}
        )
        for r in results
    ]
    ok = all(r.passed for r in results)
    lines.append(json.dumps({"suite": "acceptance", "passed": ok}))
    _write("\n".join(lines) + "\n", args.out)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tensorgraphs",
        description="Exact evaluation and verification of invariant contraction graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        p.add_argument("--out", help="output file (default: stdout)")
        return p

    p = add("graphs-enumerate", _cmd_graphs_enumerate, "all matchings on a vertex signature")
    p.add_argument("--signature", required=True, help="JSON file with {'vertices': [...]}")

    p = add("graphs-eval", _cmd_graphs_eval, "evaluate a graph on input tensors")
    p.add_argument("--graph", required=True)
    p.add_argument("--inputs", required=True, help="JSON array of tensors, one per generator vertex")
    p.add_argument("--dim", type=int, required=True)

    p = add("graphs-canon", _cmd_graphs_canon, "canonical form, sign and zero flag")
    p.add_argument("--graph", required=True)

    p = add("export-dot", _cmd_export_dot, "render a graph as DOT")
    p.add_argument("--graph", required=True)

    p = add("verify-itt", _cmd_verify_itt, "rank of the realized permutations")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--dim", type=int, required=True)

    p = add("verify-diagram", _cmd_verify_diagram, "delta tensors against permutation tensors")
    p.add_argument("--signature", required=True)
    p.add_argument("--dim", type=int, required=True)

    p = add("verify-quotient", _cmd_verify_quotient, "rank of a canonical quotient basis")
    p.add_argument("--signature", required=True, help="JSON file {'white': [...], 'black': [...], 'nabla': [...]}")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--allow-small-white", action="store_true",
                   help="admit white vertices of arity below 2")

    p = add("verify-stable-range", _cmd_verify_stable_range, "extended stability range check")
    p.add_argument("--signature", required=True)

    p = add("suite", _cmd_suite, "run the full acceptance suite")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (GraphSchemaError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
