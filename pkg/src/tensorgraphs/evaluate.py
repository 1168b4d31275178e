"""Realization maps: permutations and graphs as explicit invariant tensors.

Two routes produce the same invariant tensors and the package keeps both:

* ``elementary_tensor`` realizes a permutation ``p`` as the map permuting
  tensor factors, sending ``v_1 (x) ... (x) v_k`` to
  ``v_{p^{-1}(1)} (x) ... (x) v_{p^{-1}(k)}``.  With this inverse convention
  the linear extension ``realize`` is a ring homomorphism.
* ``graph_delta_tensor`` realizes a graph as a product of Kronecker deltas,
  one per edge, and ``state_sum`` evaluates a graph on concrete input
  tensors as a sum over edge labellings.

The dictionary between the two is ``graph_to_permutation``: order all output
ports (vertices in list order, anchor last, slots ascending), all input
ports likewise, and read the matching as a permutation.  The layout of
realized tensors is dual-axes-first (see :mod:`tensorgraphs.tensors`), and
with these choices ``graph_delta_tensor(g, n)`` equals
``elementary_tensor(graph_to_permutation(g), n)`` on the nose; the test
suite checks this exhaustively on small signatures.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .graphs import (
    TensorGraph,
    VertexSpec,
    anchor_of,
    edge_count,
    in_ports,
    make_graph,
    ordered_vertices,
    out_ports,
    validate,
)
from .permutations import GroupAlgebraElement, Permutation
from .tensors import (
    MAX_ENTRIES,
    DenseTensor,
    HomSignature,
    contract,
    identity_matrix,
    inverse_matrix,
    multi_indices,
    permute_axes,
    phi_flatten,
    zeros,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class HomTensor:
    """A hom-space element: a signature plus a tensor in the blocked layout.

    The tensor's axes follow the per-factor block order of
    :func:`tensorgraphs.tensors.phi_flatten`, all with one common extent.
    """

    sig: HomSignature
    tensor: DenseTensor

    def __post_init__(self):
        expected = self.sig.dual_count + self.sig.primal_count
        if self.tensor.ndim != expected:
            raise ValueError(f"tensor rank {self.tensor.ndim}, signature needs {expected} axes")
        if len(set(self.tensor.shape)) > 1:
            raise ValueError(f"axes must share one extent, got shape {self.tensor.shape}")

    def flattened(self) -> DenseTensor:
        return phi_flatten(self.sig, self.tensor)


def elementary_positions(perm: Permutation, n: int) -> Iterator[tuple[int, ...]]:
    """Zero-based positions of the 1-entries of the realized permutation.

    Positions are ``I + J`` where ``J`` is ``I`` repositioned by the inverse
    permutation: ``J[s] = I[perm^{-1}(s)]`` (one-based slots).
    """
    k = perm.degree
    inv = perm.inverse()
    source = [inv(s) - 1 for s in range(1, k + 1)]
    shape = (n,) * k
    for left in multi_indices(shape):
        yield left + tuple(left[s] for s in source)


def elementary_tensor(perm: Permutation, n: int) -> DenseTensor:
    """The permutation realized on the k-th tensor power of an n-space.

    Shape ``[n]^k x [n]^k`` with input (dual) axes first: the entry at
    ``(i_1..i_k, j_1..j_k)`` is 1 exactly when ``j_s = i_{perm^{-1}(s)}``
    for every slot ``s``.
    """
    k = perm.degree
    if n ** (2 * k) > MAX_ENTRIES:
        raise ValueError("realized tensor exceeds the size guard")
    t = zeros((n,) * (2 * k))
    for pos in elementary_positions(perm, n):
        t.entries[t.offset(pos)] = _ONE
    return t


def realize(element: GroupAlgebraElement, n: int) -> DenseTensor:
    """Linear extension of :func:`elementary_tensor` to group-algebra elements."""
    k = element.degree
    total = zeros((n,) * (2 * k))
    for perm, coeff in element.items():
        for pos in elementary_positions(perm, n):
            off = total.offset(pos)
            total.entries[off] = total.entries[off] + coeff
    return total


def hom_compose(f: DenseTensor, g: DenseTensor) -> DenseTensor:
    """Composition ``f o g`` of maps stored dual-axes-first with equal rank."""
    if f.ndim != g.ndim or f.ndim % 2:
        raise ValueError("hom_compose needs two square hom tensors of equal rank")
    k = f.ndim // 2
    return contract(g, f, [(k + s, s) for s in range(k)])


def graph_to_permutation(g: TensorGraph) -> Permutation:
    """Read the matching as a permutation via the global port orders."""
    result = validate(g)
    if not result:
        raise ValueError(f"invalid graph: {result.problems[0]}")
    outs = out_ports(g.vertices)
    in_pos = {port: i for i, port in enumerate(in_ports(g.vertices))}
    matching = dict(g.matching)
    images = [0] * len(outs)
    for t, port in enumerate(outs):
        images[t] = in_pos[matching[port]] + 1
    return Permutation(tuple(images))


def permutation_to_graph(perm: Permutation, vertices: Sequence[VertexSpec]) -> TensorGraph:
    """Inverse of :func:`graph_to_permutation` for a fixed vertex signature."""
    outs = out_ports(vertices)
    ins = in_ports(vertices)
    if len(outs) != len(ins):
        raise ValueError(f"unbalanced signature: {len(outs)} outputs vs {len(ins)} inputs")
    if perm.degree != len(outs):
        raise ValueError(f"degree {perm.degree} does not match {len(outs)} ports")
    matching = [(outs[t], ins[perm(t + 1) - 1]) for t in range(len(outs))]
    return make_graph(vertices, matching)


def graph_delta_positions(g: TensorGraph, n: int) -> Iterator[tuple[int, ...]]:
    """Zero-based positions of the 1-entries of the graph's delta tensor.

    Computed purely from the edges: one position per labelling, holding the
    label of each port's edge, output ports first.
    """
    edges = g.matching
    e = len(edges)
    in_pos = {port: i for i, port in enumerate(in_ports(g.vertices))}
    # edge index feeding each global input position
    feeder = [0] * e
    for edge_index, (_, dst) in enumerate(edges):
        feeder[in_pos[dst]] = edge_index
    for labelling in multi_indices((n,) * e):
        yield labelling + tuple(labelling[feeder[s]] for s in range(e))


def graph_delta_tensor(g: TensorGraph, n: int) -> DenseTensor:
    """One Kronecker delta per edge, in the flattened dual-first layout."""
    result = validate(g)
    if not result:
        raise ValueError(f"invalid graph: {result.problems[0]}")
    k = edge_count(g)
    if len(out_ports(g.vertices)) != k or len(in_ports(g.vertices)) != k:
        raise ValueError("graph is not a total matching")
    if n ** (2 * k) > MAX_ENTRIES:
        raise ValueError("delta tensor exceeds the size guard")
    t = zeros((n,) * (2 * k))
    for pos in graph_delta_positions(g, n):
        t.entries[t.offset(pos)] = _ONE
    return t


def _input_layout(g: TensorGraph) -> list[VertexSpec]:
    return [v for v in ordered_vertices(g) if v.kind != "anchor"]


def _check_inputs(g: TensorGraph, inputs: Sequence[DenseTensor], n: int) -> list[VertexSpec]:
    factors = _input_layout(g)
    if len(inputs) != len(factors):
        raise ValueError(f"expected {len(factors)} input tensors, got {len(inputs)}")
    for v, t in zip(factors, inputs):
        expected = (n,) * (v.out_arity + v.in_arity)
        if t.shape != expected:
            raise ValueError(f"input for vertex {v.id!r} has shape {t.shape}, expected {expected}")
    return factors


def state_sum(
    g: TensorGraph, inputs: Sequence[DenseTensor], n: int, method: str = "auto"
) -> DenseTensor:
    """Evaluate a graph on input tensors by summing over all edge labellings.

    Each input tensor uses the ``(outputs, inputs)`` axis order of its
    vertex.  The result is the anchor's value, with its input (primal) axes
    first and its output (dual) axes last.

    ``method`` selects the literal labelling sum (``"labelling"``, the
    reference), the pairwise delta-contraction path (``"contract"``), or
    ``"auto"`` which uses contraction throughout; the two implementations
    agree exactly and the tests enforce it.
    """
    result = validate(g)
    if not result:
        raise ValueError(f"invalid graph: {result.problems[0]}")
    if method == "labelling":
        return _state_sum_labelling(g, inputs, n)
    if method in ("auto", "contract"):
        return _state_sum_contract(g, inputs, n)
    raise ValueError(f"unknown method {method!r}")


def _state_sum_labelling(g: TensorGraph, inputs: Sequence[DenseTensor], n: int) -> DenseTensor:
    factors = _check_inputs(g, inputs, n)
    anchor = anchor_of(g)
    e = edge_count(g)
    if n**e > MAX_ENTRIES:
        raise ValueError("labelling sum exceeds the size guard")

    out_edge = {src: i for i, (src, _) in enumerate(g.matching)}
    in_edge = {dst: i for i, (_, dst) in enumerate(g.matching)}
    # per factor: the edge indices read by its coordinate multi-index
    reads = []
    for v in factors:
        reads.append(
            [out_edge[(v.id, s)] for s in range(v.out_arity)]
            + [in_edge[(v.id, s)] for s in range(v.in_arity)]
        )
    anchor_reads = [in_edge[(anchor.id, s)] for s in range(anchor.in_arity)] + [
        out_edge[(anchor.id, s)] for s in range(anchor.out_arity)
    ]

    out_shape = (n,) * (anchor.in_arity + anchor.out_arity)
    total = zeros(out_shape)
    for labelling in multi_indices((n,) * e):
        term = _ONE
        for v_reads, tensor in zip(reads, inputs):
            term = term * tensor.get(tuple(labelling[i] for i in v_reads))
            if not term:
                break
        if term:
            pos = tuple(labelling[i] for i in anchor_reads)
            off = total.offset(pos)
            total.entries[off] = total.entries[off] + term
    return total


def _state_sum_contract(g: TensorGraph, inputs: Sequence[DenseTensor], n: int) -> DenseTensor:
    factors = _check_inputs(g, inputs, n)
    anchor = anchor_of(g)

    big = DenseTensor((), [_ONE])
    tokens: list[tuple] = []  # one token per live axis of `big`
    for v, tensor in zip(factors, inputs):
        big = contract(big, tensor, [])
        tokens.extend(("out", v.id, s) for s in range(v.out_arity))
        tokens.extend(("in", v.id, s) for s in range(v.in_arity))

    result_tokens = {}  # result slot -> live token
    pure_deltas = []  # anchor-to-anchor edges: pairs of result slots
    for src, dst in g.matching:
        src_is_anchor = src[0] == anchor.id
        dst_is_anchor = dst[0] == anchor.id
        if src_is_anchor and dst_is_anchor:
            pure_deltas.append((("J", dst[1]), ("I", src[1])))
        elif src_is_anchor:
            result_tokens[("I", src[1])] = ("in", dst[0], dst[1])
        elif dst_is_anchor:
            result_tokens[("J", dst[1])] = ("out", src[0], src[1])
        else:
            ax_src = tokens.index(("out", src[0], src[1]))
            ax_dst = tokens.index(("in", dst[0], dst[1]))
            big = contract(big, identity_matrix(n), [(ax_src, 0), (ax_dst, 1)])
            tokens = [tok for i, tok in enumerate(tokens) if i not in (ax_src, ax_dst)]

    for left, right in pure_deltas:
        big = contract(big, identity_matrix(n), [])
        tokens.extend([left, right])
        result_tokens[left] = left
        result_tokens[right] = right

    slots = [("J", s) for s in range(anchor.in_arity)] + [("I", s) for s in range(anchor.out_arity)]
    axis_map = [tokens.index(result_tokens[slot]) for slot in slots]
    return permute_axes(big, axis_map)


def apply_matrix_to_axis(t: DenseTensor, matrix: DenseTensor, axis: int) -> DenseTensor:
    """Multiply one axis by a square matrix, keeping the axis in place."""
    moved = contract(matrix, t, [(1, axis)])
    axis_map = list(range(1, axis + 1)) + [0] + list(range(axis + 1, t.ndim))
    return permute_axes(moved, axis_map)


def conjugate_input(tensor: DenseTensor, matrix: DenseTensor, n_out: int, n_in: int) -> DenseTensor:
    """Base change of a multilinear map: the matrix acts on every output axis
    and its inverse on every input axis."""
    inv = inverse_matrix(matrix)
    result = tensor
    for axis in range(n_out):
        result = apply_matrix_to_axis(result, matrix, axis)
    for axis in range(n_out, n_out + n_in):
        moved = contract(result, inv, [(axis, 0)])
        axis_map = list(range(axis)) + [result.ndim - 1] + list(range(axis, result.ndim - 1))
        result = permute_axes(moved, axis_map)
    return result
