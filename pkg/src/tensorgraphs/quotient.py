"""Symmetry and orientation quotients of contraction graphs.

The quotient identifies graphs that differ by

* input-slot permutations at black and white vertices (fully symmetric
  inputs, no sign),
* permutations of the first ``v`` input slots of a nabla vertex (no sign),
* relabellings of white vertices of equal arity, weighted by the sign of
  the relabelling, together with the orientation rule: reordering the
  white vertices by an odd permutation flips a graph's sign.

Canonical form is the lexicographically minimal matching over the full
(finite) symmetry group, with the accumulated sign; a graph fixed by a
sign-reversing symmetry is zero in the quotient and carries ``zero_flag``.
All group sizes here are desk-scale, so the exhaustive orbit scan is cheap
and provably correct.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .evaluate import graph_delta_tensor, state_sum
from .graphs import (
    Edge,
    TensorGraph,
    VertexSpec,
    enumerate_graphs,
    make_graph,
    serialize_graph,
    validate,
    white_ids,
)
from .permutations import Permutation, sign, white_relabelling_group
from .tensors import DenseTensor, format_rational, parse_rational

MAX_GROUP_SIZE = 10**5

SlotPerm = tuple[int, ...]


@dataclass(frozen=True)
class SymmetryElement:
    """One symmetry: a white relabelling plus per-vertex input-slot moves."""

    white_map: tuple[tuple[str, str], ...]
    slot_perms: tuple[tuple[str, SlotPerm], ...]
    sign: int

    def relabel(self, vid: str) -> str:
        for old, new in self.white_map:
            if old == vid:
                return new
        return vid

    def slot_perm(self, vid: str) -> SlotPerm | None:
        for owner, perm in self.slot_perms:
            if owner == vid:
                return perm
        return None


def _vertex_slot_perms(v: VertexSpec) -> list[SlotPerm]:
    if v.kind in ("black", "white"):
        return [tuple(p) for p in itertools.permutations(range(v.in_arity))]
    if v.kind == "nabla":
        tail = tuple(range(v.nabla_v, v.in_arity))
        return [tuple(p) + tail for p in itertools.permutations(range(v.nabla_v))]
    return [tuple(range(v.in_arity))]


def symmetry_group(g: TensorGraph) -> list[SymmetryElement]:
    """Every element of the graph's symmetry group, identity included."""
    whites = [v for v in g.vertices if v.kind == "white"]
    arities = [v.in_arity for v in whites]
    relabellings = white_relabelling_group(arities) if whites else [Permutation(())]

    movable = [(v.id, _vertex_slot_perms(v)) for v in g.vertices if len(_vertex_slot_perms(v)) > 1]
    size = len(relabellings) * math.prod(len(perms) for _, perms in movable)
    if size > MAX_GROUP_SIZE:
        raise ValueError(f"symmetry group of size {size} exceeds the {MAX_GROUP_SIZE} guard")

    elements = []
    for rho in relabellings:
        white_map = tuple(
            (whites[i - 1].id, whites[rho(i) - 1].id) for i in range(1, len(whites) + 1)
        )
        rho_sign = sign(rho)
        for combo in itertools.product(*(perms for _, perms in movable)):
            slot_perms = tuple((vid, perm) for (vid, _), perm in zip(movable, combo))
            elements.append(SymmetryElement(white_map, slot_perms, rho_sign))
    return elements


def apply_symmetry(g: TensorGraph, element: SymmetryElement) -> TensorGraph:
    """Transform the matching; the orientation stays in reference order."""
    edges = []
    for (src_id, src_slot), (dst_id, dst_slot) in g.matching:
        new_src = (element.relabel(src_id), src_slot)
        new_dst_id = element.relabel(dst_id)
        perm = element.slot_perm(new_dst_id)
        new_dst = (new_dst_id, perm[dst_slot] if perm is not None else dst_slot)
        edges.append((new_src, new_dst))
    return make_graph(g.vertices, edges, g.orientation)


@dataclass(frozen=True)
class CanonicalGraph:
    """A quotient representative; ``zero_flag`` marks classes equal to zero."""

    graph: TensorGraph
    zero_flag: bool


def _matching_key(g: TensorGraph) -> tuple:
    index = {v.id: i for i, v in enumerate(g.vertices)}
    return tuple(
        sorted((index[s], ss, index[d], ds) for (s, ss), (d, ds) in g.matching)
    )


def graph_sort_key(g: TensorGraph) -> tuple:
    return (tuple((v.id, v.kind, v.in_arity, v.out_arity) for v in g.vertices), _matching_key(g))


def orientation_parity(g: TensorGraph) -> int:
    """Sign relating the graph's orientation to the reference (list) order."""
    reference = white_ids(g)
    images = tuple(reference.index(vid) + 1 for vid in g.orientation)
    return sign(Permutation(images))


def canonicalize(g: TensorGraph) -> tuple[CanonicalGraph, int]:
    """Minimal representative of the signed symmetry orbit.

    Returns ``(canonical, s)`` with the class of ``g`` equal to ``s`` times
    the class of the canonical graph.  The canonical graph carries the
    reference orientation (white vertices in list order); an off-reference
    orientation on ``g`` contributes its parity to ``s``.
    """
    result = validate(g)
    if not result:
        raise ValueError(f"invalid graph: {result.problems[0]}")
    base_sign = orientation_parity(g)

    best_key = None
    best_edges = None
    signs_at_best: set[int] = set()
    for element in symmetry_group(g):
        moved = apply_symmetry(g, element)
        key = _matching_key(moved)
        if best_key is None or key < best_key:
            best_key = key
            best_edges = moved.matching
            signs_at_best = {element.sign}
        elif key == best_key:
            signs_at_best.add(element.sign)

    reference = tuple(white_ids(g))
    canonical = make_graph(g.vertices, best_edges, reference)
    zero_flag = len(signs_at_best) == 2
    total_sign = 1 if zero_flag else base_sign * next(iter(signs_at_best))
    return CanonicalGraph(canonical, zero_flag), total_sign


class GraphSum:
    """A finite rational combination of nonzero canonical graphs."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[CanonicalGraph, Fraction] | None = None):
        cleaned: dict[CanonicalGraph, Fraction] = {}
        for cg, coeff in (terms or {}).items():
            coeff = Fraction(coeff)
            if coeff and not cg.zero_flag:
                cleaned[cg] = coeff
        self.terms = cleaned

    def add_term(self, cg: CanonicalGraph, coeff: Fraction | int) -> None:
        if cg.zero_flag:
            return
        total = self.terms.get(cg, Fraction(0)) + Fraction(coeff)
        if total:
            self.terms[cg] = total
        else:
            self.terms.pop(cg, None)

    def is_zero(self) -> bool:
        return not self.terms

    def items(self) -> list[tuple[CanonicalGraph, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: graph_sort_key(kv[0].graph))

    def __add__(self, other: GraphSum) -> GraphSum:
        out = GraphSum(dict(self.terms))
        for cg, coeff in other.terms.items():
            out.add_term(cg, coeff)
        return out

    def scale(self, scalar: Fraction | int) -> GraphSum:
        scalar = Fraction(scalar)
        return GraphSum({cg: scalar * c for cg, c in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, GraphSum) and self.terms == other.terms

    def __repr__(self) -> str:
        return f"GraphSum({len(self.terms)} terms)"


def graph_sum_to_json(s: GraphSum) -> list:
    return [
        {"coeff": format_rational(coeff), "graph": serialize_graph(cg.graph)}
        for cg, coeff in s.items()
    ]


def graph_sum_from_json(obj: list) -> GraphSum:
    from .graphs import parse_graph

    out = GraphSum()
    for item in obj:
        cg, extra = canonicalize(parse_graph(item["graph"]))
        out.add_term(cg, parse_rational(item["coeff"]) * extra)
    return out


def basis_vertices(
    white_arities: Sequence[int],
    black_arities: Sequence[int],
    nabla_arities: Sequence[int],
    allow_small_white: bool = False,
) -> list[VertexSpec]:
    """The standard vertex list for a quotient-space component."""
    low_white = 0 if allow_small_white else 2
    if any(a < low_white for a in white_arities):
        raise ValueError(f"white arities must be >= {low_white}: {list(white_arities)}")
    if any(a < 0 for a in black_arities):
        raise ValueError(f"black arities must be >= 0: {list(black_arities)}")
    if any(a < 2 for a in nabla_arities):
        raise ValueError(f"nabla arities must be >= 2: {list(nabla_arities)}")
    vertices = [
        VertexSpec(f"w{i + 1}", "white", a, 1) for i, a in enumerate(white_arities)
    ]
    vertices += [VertexSpec(f"b{i + 1}", "black", a, 1) for i, a in enumerate(black_arities)]
    vertices += [VertexSpec(f"n{i + 1}", "nabla", a, 1) for i, a in enumerate(nabla_arities)]
    vertices.append(VertexSpec("anchor", "anchor", 1, 0))
    return vertices


def enumerate_basis(
    white_arities: Sequence[int],
    black_arities: Sequence[int],
    nabla_arities: Sequence[int],
    allow_small_white: bool = False,
) -> list[CanonicalGraph]:
    """All nonzero canonical graphs on the given arity signature.

    The vertex counts and arities must balance: with every generator vertex
    contributing one output and the anchor one input, the number of vertices
    has to exceed the total input arity by exactly one, and every graph then
    has one edge per generator vertex.
    """
    vertices = basis_vertices(white_arities, black_arities, nabla_arities, allow_small_white)
    r = len(vertices) - 1
    total_inputs = sum(white_arities) + sum(black_arities) + sum(nabla_arities)
    if r != total_inputs + 1:
        raise ValueError(
            f"unbalanced signature: {r} generator vertices need total arity {r - 1}, "
            f"got {total_inputs}"
        )
    seen: dict[CanonicalGraph, None] = {}
    for graph in enumerate_graphs(vertices):
        cg, _ = canonicalize(graph)
        if not cg.zero_flag:
            seen.setdefault(cg, None)
    return sorted(seen, key=lambda cg: graph_sort_key(cg.graph))


def admissible_arities(
    m: int, b: int, c: int, allow_small_white: bool = False
) -> list[tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]]:
    """All balanced arity assignments for given white/black/nabla counts.

    Balance forces the arities to sum to ``m + b + c - 1``, so the list is
    finite without any external bound.
    """
    r = m + b + c
    total = r - 1
    low_white = 0 if allow_small_white else 2
    results = []
    for whites in _compositions(m, low_white, total):
        rest_after_white = total - sum(whites)
        for blacks in _compositions(b, 0, rest_after_white):
            rest = rest_after_white - sum(blacks)
            for nablas in _compositions(c, 2, rest):
                if sum(nablas) == rest:
                    results.append((whites, blacks, nablas))
    return results


def _compositions(count: int, low: int, total: int):
    if count == 0:
        yield ()
        return
    for head in range(low, total + 1):
        for tail in _compositions(count - 1, low, total - head):
            yield (head,) + tail


def graph_relation(g: TensorGraph, cut: Iterable[int | Edge]) -> GraphSum:
    """Signed sum over regluings of a cut edge set.

    Each permutation of the cut edges produces the graph whose cut sources
    are rewired to the permuted targets, weighted by the permutation's sign
    and canonicalized.  Cut entries may be edge indices or the edges
    themselves.
    """
    indices = []
    for item in cut:
        if isinstance(item, int):
            if not 0 <= item < len(g.matching):
                raise ValueError(f"edge index {item} out of range")
            indices.append(item)
        else:
            edge = (tuple(item[0]), tuple(item[1]))
            if edge not in g.matching:
                raise ValueError(f"{edge} is not an edge of the graph")
            indices.append(g.matching.index(edge))
    if not indices:
        raise ValueError("cut set must be nonempty")
    if len(set(indices)) != len(indices):
        raise ValueError("cut set has repeated edges")
    indices.sort()

    sources = [g.matching[i][0] for i in indices]
    targets = [g.matching[i][1] for i in indices]
    out = GraphSum()
    for arrangement in itertools.permutations(range(len(indices))):
        edges = list(g.matching)
        for pos, i in enumerate(indices):
            edges[i] = (sources[pos], targets[arrangement[pos]])
        parity = sign(Permutation(tuple(a + 1 for a in arrangement)))
        cg, extra = canonicalize(make_graph(g.vertices, edges, g.orientation))
        out.add_term(cg, parity * extra)
    return out


def antisymmetrized_state_sum(
    g: TensorGraph,
    white_inputs: Sequence[DenseTensor],
    other_inputs: Sequence[DenseTensor],
    n: int,
    method: str = "auto",
) -> DenseTensor:
    """State sum antisymmetrized over admissible white-input permutations.

    The i-th white input feeds the i-th white vertex in orientation order;
    the plain signed sum over the relabelling group is used, with no
    normalizing factor.  ``other_inputs`` feed the non-white generator
    vertices in list order.
    """
    result = validate(g)
    if not result:
        raise ValueError(f"invalid graph: {result.problems[0]}")
    whites = list(g.orientation)
    arities = [next(v.in_arity for v in g.vertices if v.id == w) for w in whites]
    if len(white_inputs) != len(whites):
        raise ValueError(f"expected {len(whites)} white inputs, got {len(white_inputs)}")

    others = iter(other_inputs)
    slots: list[tuple[str, int | None]] = []
    for v in g.vertices:
        if v.kind == "anchor":
            continue
        if v.kind == "white":
            slots.append(("white", whites.index(v.id)))
        else:
            slots.append(("other", None))

    total: DenseTensor | None = None
    for rho in white_relabelling_group(arities):
        others = iter(other_inputs)
        inputs = []
        for kind, w_index in slots:
            if kind == "white":
                inputs.append(white_inputs[rho(w_index + 1) - 1])
            else:
                inputs.append(next(others))
        term = state_sum(g, inputs, n, method=method).scale(sign(rho))
        total = term if total is None else total + term
    assert total is not None
    return total


def quotient_evaluation_tensor(g: TensorGraph, n: int) -> DenseTensor:
    """Signed symmetrization of the graph's delta tensor over its symmetry group.

    This is the faithful linear coordinate of the graph's quotient class:
    symmetrized over the input-slot moves, antisymmetrized over white
    relabellings, and weighted by the orientation parity.  Classes that are
    zero in the quotient evaluate to the zero tensor.
    """
    total: DenseTensor | None = None
    for element in symmetry_group(g):
        term = graph_delta_tensor(apply_symmetry(g, element), n)
        if element.sign < 0:
            term = -term
        total = term if total is None else total + term
    assert total is not None
    if orientation_parity(g) < 0:
        total = -total
    return total
