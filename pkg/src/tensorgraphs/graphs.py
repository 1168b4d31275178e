"""Directed contraction graphs: typed vertices, port matchings, orientations.

A graph consists of vertices carrying ordered output and input ports, a
total bijection from output ports to input ports (loops and parallel edges
are allowed), and an orientation, i.e. a linear order on the white vertices.
Ports are ordered slots even on vertices that will later be treated as
symmetric; symmetry is imposed by the quotient layer, not by the data
structure.

Global port order: non-anchor vertices in list order, then the anchor, with
slots ascending inside each vertex.  Edges are stored sorted by the global
position of their output port, which also fixes the edge order used by
labellings and serialization.

JSON schema::

    {"vertices": [{"id": str, "kind": "planar|black|white|nabla|anchor",
                   "in": int, "out": int, "label": str?, "nabla_v": int?}],
     "edges": [{"from": [id, slot], "to": [id, slot]}],
     "orientation": [id, ...]}

Slots are zero-indexed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

VERTEX_KINDS = ("planar", "black", "white", "nabla", "anchor")

Port = tuple[str, int]
Edge = tuple[Port, Port]


class GraphSchemaError(ValueError):
    """Raised when graph JSON violates the schema; the message names the spot."""


@dataclass(frozen=True)
class VertexSpec:
    id: str
    kind: str
    in_arity: int
    out_arity: int
    label: str | None = None

    def __post_init__(self):
        if self.kind not in VERTEX_KINDS:
            raise ValueError(f"vertex {self.id!r}: unknown kind {self.kind!r}")
        if self.in_arity < 0 or self.out_arity < 0:
            raise ValueError(f"vertex {self.id!r}: negative arity")

    @property
    def nabla_v(self) -> int:
        """Number of mutually symmetric leading inputs of a nabla vertex."""
        if self.kind != "nabla":
            raise ValueError(f"vertex {self.id!r} is not a nabla vertex")
        return self.in_arity - 2


@dataclass(frozen=True)
class TensorGraph:
    """A vertex list, an output-to-input port matching, and an orientation."""

    vertices: tuple[VertexSpec, ...]
    matching: tuple[Edge, ...]
    orientation: tuple[str, ...] = ()


def make_graph(
    vertices: Sequence[VertexSpec],
    matching: Iterable[Edge],
    orientation: Sequence[str] | None = None,
) -> TensorGraph:
    """Normalize the matching order and default the orientation.

    The default orientation lists the white vertices in vertex-list order.
    """
    vertices = tuple(vertices)
    positions = out_port_positions(vertices)
    edges = tuple(
        sorted(
            ((tuple(src), tuple(dst)) for src, dst in matching),
            key=lambda edge: positions.get(edge[0], len(positions)),
        )
    )
    if orientation is None:
        orientation = tuple(v.id for v in vertices if v.kind == "white")
    return TensorGraph(vertices, edges, tuple(orientation))


def ordered_vertices(g: TensorGraph) -> list[VertexSpec]:
    """Non-anchor vertices in list order, then the anchor vertices."""
    regular = [v for v in g.vertices if v.kind != "anchor"]
    anchors = [v for v in g.vertices if v.kind == "anchor"]
    return regular + anchors


def out_ports(vertices: Sequence[VertexSpec]) -> list[Port]:
    """All output ports in global order."""
    regular = [v for v in vertices if v.kind != "anchor"]
    anchors = [v for v in vertices if v.kind == "anchor"]
    ports: list[Port] = []
    for v in regular + anchors:
        ports.extend((v.id, s) for s in range(v.out_arity))
    return ports


def in_ports(vertices: Sequence[VertexSpec]) -> list[Port]:
    """All input ports in global order."""
    regular = [v for v in vertices if v.kind != "anchor"]
    anchors = [v for v in vertices if v.kind == "anchor"]
    ports: list[Port] = []
    for v in regular + anchors:
        ports.extend((v.id, s) for s in range(v.in_arity))
    return ports


def out_port_positions(vertices: Sequence[VertexSpec]) -> dict[Port, int]:
    return {port: i for i, port in enumerate(out_ports(vertices))}


def in_port_positions(vertices: Sequence[VertexSpec]) -> dict[Port, int]:
    return {port: i for i, port in enumerate(in_ports(vertices))}


def vertex_by_id(g: TensorGraph, vid: str) -> VertexSpec:
    for v in g.vertices:
        if v.id == vid:
            return v
    raise KeyError(f"no vertex {vid!r}")


def anchor_of(g: TensorGraph) -> VertexSpec:
    anchors = [v for v in g.vertices if v.kind == "anchor"]
    if len(anchors) != 1:
        raise ValueError(f"expected exactly one anchor, found {len(anchors)}")
    return anchors[0]


def white_ids(g: TensorGraph) -> list[str]:
    return [v.id for v in g.vertices if v.kind == "white"]


def edge_count(g: TensorGraph) -> int:
    return len(g.matching)


@dataclass
class ValidationResult:
    ok: bool
    problems: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def validate(g: TensorGraph) -> ValidationResult:
    """Check all structural invariants; the first problem names the violation."""
    problems: list[str] = []
    ids = [v.id for v in g.vertices]
    if len(set(ids)) != len(ids):
        problems.append("duplicate vertex ids")
    anchors = [v for v in g.vertices if v.kind == "anchor"]
    if len(anchors) != 1:
        problems.append(f"expected exactly one anchor, found {len(anchors)}")
    for v in g.vertices:
        if v.kind in ("black", "white", "nabla") and v.out_arity != 1:
            problems.append(f"vertex {v.id!r}: kind {v.kind} requires out arity 1")
        if v.kind == "nabla" and v.in_arity < 2:
            problems.append(f"vertex {v.id!r}: nabla requires in arity >= 2")

    outs = out_ports(g.vertices)
    ins = in_ports(g.vertices)
    if not problems:
        sources = [src for src, _ in g.matching]
        targets = [dst for _, dst in g.matching]
        known_out = set(outs)
        known_in = set(ins)
        for src in sources:
            if src not in known_out:
                problems.append(f"matching uses unknown output port {src}")
                break
        for dst in targets:
            if dst not in known_in:
                problems.append(f"matching uses unknown input port {dst}")
                break
        if not problems:
            if len(set(sources)) != len(sources) or len(set(targets)) != len(targets):
                problems.append("matching not injective")
            elif set(sources) != known_out or set(targets) != known_in:
                problems.append("matching not total")

    whites = white_ids(g)
    if sorted(g.orientation) != sorted(whites):
        problems.append(
            f"orientation {list(g.orientation)} does not list each white vertex exactly once"
        )
    return ValidationResult(not problems, problems)


@dataclass(frozen=True)
class Labelling:
    """One value from {1..n} per edge, aligned with the graph's edge order."""

    graph: TensorGraph
    values: tuple[int, ...]

    @property
    def by_edge(self) -> dict[Edge, int]:
        return dict(zip(self.graph.matching, self.values))


def enumerate_labellings(g: TensorGraph, n: int) -> Iterator[Labelling]:
    """All n^e labellings in lexicographic order of the edge-value tuples."""
    e = edge_count(g)
    values = [1] * e
    if e == 0:
        yield Labelling(g, ())
        return
    while True:
        yield Labelling(g, tuple(values))
        axis = e - 1
        while axis >= 0:
            values[axis] += 1
            if values[axis] <= n:
                break
            values[axis] = 1
            axis -= 1
        if axis < 0:
            return


def enumerate_graphs(vertices: Sequence[VertexSpec]) -> list[TensorGraph]:
    """All graphs on a vertex signature: one per bijection outputs -> inputs.

    Returns the empty list when the port counts do not balance.
    """
    import itertools

    outs = out_ports(vertices)
    ins = in_ports(vertices)
    if len(outs) != len(ins):
        return []
    graphs = []
    for arrangement in itertools.permutations(range(len(ins))):
        matching = [(outs[t], ins[arrangement[t]]) for t in range(len(outs))]
        graphs.append(make_graph(vertices, matching))
    return graphs


def _vertex_to_json(v: VertexSpec) -> dict:
    obj = {"id": v.id, "kind": v.kind, "in": v.in_arity, "out": v.out_arity}
    if v.label is not None:
        obj["label"] = v.label
    if v.kind == "nabla":
        obj["nabla_v"] = v.nabla_v
    return obj


def serialize_graph(g: TensorGraph) -> dict:
    return {
        "vertices": [_vertex_to_json(v) for v in g.vertices],
        "edges": [{"from": list(src), "to": list(dst)} for src, dst in g.matching],
        "orientation": list(g.orientation),
    }


def graph_to_json_text(g: TensorGraph) -> str:
    return json.dumps(serialize_graph(g), indent=2) + "\n"


def _parse_port(obj, where: str, ids: set[str]) -> Port:
    if not (isinstance(obj, (list, tuple)) and len(obj) == 2):
        raise GraphSchemaError(f"{where}: expected [id, slot], got {obj!r}")
    vid, slot = obj
    if not isinstance(vid, str) or not isinstance(slot, int):
        raise GraphSchemaError(f"{where}: expected [str, int], got {obj!r}")
    if vid not in ids:
        raise GraphSchemaError(f"{where}: unknown vertex id {vid!r}")
    return (vid, slot)


def parse_graph(source: str | dict) -> TensorGraph:
    """Parse graph JSON; raises :class:`GraphSchemaError` with a located message."""
    if isinstance(source, str):
        try:
            obj = json.loads(source)
        except json.JSONDecodeError as exc:
            raise GraphSchemaError(f"invalid JSON: {exc}") from exc
    else:
        obj = source
    if not isinstance(obj, dict):
        raise GraphSchemaError("top level: expected an object")
    if "vertices" not in obj or "edges" not in obj:
        raise GraphSchemaError("top level: 'vertices' and 'edges' are required")

    vertices = []
    for i, v in enumerate(obj["vertices"]):
        where = f"vertices[{i}]"
        if not isinstance(v, dict):
            raise GraphSchemaError(f"{where}: expected an object")
        for key in ("id", "kind", "in", "out"):
            if key not in v:
                raise GraphSchemaError(f"{where}: missing {key!r}")
        try:
            spec = VertexSpec(v["id"], v["kind"], v["in"], v["out"], v.get("label"))
        except ValueError as exc:
            raise GraphSchemaError(f"{where}: {exc}") from exc
        if "nabla_v" in v and spec.kind == "nabla" and v["nabla_v"] != spec.nabla_v:
            raise GraphSchemaError(
                f"{where}: nabla_v {v['nabla_v']} inconsistent with in arity {spec.in_arity}"
            )
        vertices.append(spec)
    ids = {v.id for v in vertices}

    matching = []
    for i, e in enumerate(obj["edges"]):
        where = f"edges[{i}]"
        if not isinstance(e, dict) or "from" not in e or "to" not in e:
            raise GraphSchemaError(f"{where}: expected {{'from': ..., 'to': ...}}")
        src = _parse_port(e["from"], f"{where}.from", ids)
        dst = _parse_port(e["to"], f"{where}.to", ids)
        matching.append((src, dst))

    orientation = obj.get("orientation")
    if orientation is not None:
        if not isinstance(orientation, list) or not all(isinstance(x, str) for x in orientation):
            raise GraphSchemaError("orientation: expected a list of vertex ids")
        for vid in orientation:
            if vid not in ids:
                raise GraphSchemaError(f"orientation: unknown vertex id {vid!r}")
    return make_graph(vertices, matching, orientation)


_DOT_STYLE = {
    "anchor": "shape=square, label=\"\"",
    "white": "shape=circle",
    "black": "shape=circle, style=filled, fillcolor=black, fontcolor=white",
    "nabla": "shape=triangle",
    "planar": "shape=ellipse",
}


def export_dot(g: TensorGraph) -> str:
    """Deterministic DOT rendering; same graph, same bytes."""
    result = validate(g)
    if not result:
        raise ValueError(f"cannot export invalid graph: {result.problems[0]}")
    lines = ["digraph contraction {"]
    for v in g.vertices:
        style = _DOT_STYLE[v.kind]
        if v.kind == "nabla":
            style += f", label=\"{v.id} (v={v.nabla_v})\""
        elif v.kind != "anchor":
            text = v.label if v.label is not None else v.id
            style += f", label=\"{text}\""
        lines.append(f"  \"{v.id}\" [{style}];")
    for (src_id, src_slot), (dst_id, dst_slot) in g.matching:
        lines.append(
            f"  \"{src_id}\" -> \"{dst_id}\" [taillabel=\"{src_slot}\", headlabel=\"{dst_slot}\"];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
