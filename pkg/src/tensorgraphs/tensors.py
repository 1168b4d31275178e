"""Dense tensors over exact rationals, contraction, and hom-space reshuffling.

All tensors are stored flat in row-major order with zero-based offsets; axis
numbering in the docstrings is zero-based as well.  There is no floating
point anywhere: entries are ``fractions.Fraction`` values, so every equality
test in the package is exact.

Conventions
-----------
A linear map between tensor powers of an n-dimensional space is stored with
its dual (input) axes first and its primal (output) axes last.  A hom-space
element built from several tensor factors is stored in per-factor blocks
``(out_1, in_1, ..., out_r, in_r, out_anchor, in_anchor)``; the reshuffling
isomorphism :func:`phi_flatten` moves every dual axis to the front while
preserving relative order, which lands exactly in the dual-first layout
above.  Individual multilinear maps handed to evaluators use the plain
``(outputs, inputs)`` axis order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .permutations import GroupAlgebraElement, Permutation

MAX_ENTRIES = 10**7

_ZERO = Fraction(0)
_ONE = Fraction(1)


def format_rational(value: Fraction) -> str:
    """Canonical text form: ``"p/q"`` in lowest terms, or a plain integer."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational {text!r}") from exc


class DenseTensor:
    """An exact-rational multi-dimensional array with explicit shape."""

    __slots__ = ("shape", "entries", "strides")

    def __init__(self, shape: Sequence[int], entries: Sequence[Fraction | int]):
        shape = tuple(int(s) for s in shape)
        if any(s < 1 for s in shape):
            raise ValueError(f"axis extents must be positive: {shape}")
        size = math.prod(shape)
        if size > MAX_ENTRIES:
            raise ValueError(f"tensor with {size} entries exceeds the {MAX_ENTRIES} size guard")
        if len(entries) != size:
            raise ValueError(f"shape {shape} needs {size} entries, got {len(entries)}")
        self.shape = shape
        self.entries = [e if isinstance(e, Fraction) else Fraction(e) for e in entries]
        self.strides = _strides(shape)

    @property
    def ndim(self) -> int:
        return len(self.shape)

    def offset(self, index: Sequence[int]) -> int:
        return sum(i * s for i, s in zip(index, self.strides))

    def get(self, index: Sequence[int]) -> Fraction:
        return self.entries[self.offset(index)]

    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DenseTensor)
            and self.shape == other.shape
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.shape, tuple(self.entries)))

    def __add__(self, other: DenseTensor) -> DenseTensor:
        self._check_shape(other)
        return DenseTensor(self.shape, [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: DenseTensor) -> DenseTensor:
        self._check_shape(other)
        return DenseTensor(self.shape, [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> DenseTensor:
        return DenseTensor(self.shape, [-a for a in self.entries])

    def scale(self, scalar: Fraction | int) -> DenseTensor:
        scalar = Fraction(scalar)
        return DenseTensor(self.shape, [scalar * a for a in self.entries])

    def _check_shape(self, other: DenseTensor) -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")

    def __repr__(self) -> str:
        if self.ndim == 0:
            return f"DenseTensor([], {format_rational(self.entries[0])})"
        return f"DenseTensor(shape={self.shape}, {len(self.entries)} entries)"


def _strides(shape: Sequence[int]) -> tuple[int, ...]:
    strides = [1] * len(shape)
    for axis in range(len(shape) - 2, -1, -1):
        strides[axis] = strides[axis + 1] * shape[axis + 1]
    return tuple(strides)


def tensor_from_entries(shape: Sequence[int], entries: Sequence[Fraction | int]) -> DenseTensor:
    return DenseTensor(shape, entries)


def zeros(shape: Sequence[int]) -> DenseTensor:
    shape = tuple(shape)
    size = math.prod(shape)
    if size > MAX_ENTRIES:
        raise ValueError(f"tensor with {size} entries exceeds the {MAX_ENTRIES} size guard")
    return DenseTensor(shape, [_ZERO] * size)


def scalar(value: Fraction | int) -> DenseTensor:
    return DenseTensor((), [Fraction(value)])


def identity_matrix(n: int) -> DenseTensor:
    entries = [_ZERO] * (n * n)
    for i in range(n):
        entries[i * n + i] = _ONE
    return DenseTensor((n, n), entries)


def inverse_matrix(matrix: DenseTensor) -> DenseTensor:
    """Exact inverse of a square matrix via Gauss-Jordan elimination."""
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"not a square matrix: shape {matrix.shape}")
    n = matrix.shape[0]
    work = [[matrix.get((i, j)) for j in range(n)] for i in range(n)]
    out = [[_ONE if i == j else _ZERO for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if work[r][col]), None)
        if pivot_row is None:
            raise ValueError("matrix is singular")
        work[col], work[pivot_row] = work[pivot_row], work[col]
        out[col], out[pivot_row] = out[pivot_row], out[col]
        pivot = work[col][col]
        work[col] = [x / pivot for x in work[col]]
        out[col] = [x / pivot for x in out[col]]
        for r in range(n):
            if r != col and work[r][col]:
                factor = work[r][col]
                work[r] = [x - factor * y for x, y in zip(work[r], work[col])]
                out[r] = [x - factor * y for x, y in zip(out[r], out[col])]
    return DenseTensor((n, n), [x for row in out for x in row])


def multi_indices(shape: Sequence[int]):
    """Row-major iteration over all zero-based multi-indices of a shape."""
    if not shape:
        yield ()
        return
    index = [0] * len(shape)
    while True:
        yield tuple(index)
        axis = len(shape) - 1
        while axis >= 0:
            index[axis] += 1
            if index[axis] < shape[axis]:
                break
            index[axis] = 0
            axis -= 1
        if axis < 0:
            return


def contract(a: DenseTensor, b: DenseTensor, pairs: Sequence[tuple[int, int]]) -> DenseTensor:
    """Sum over the paired axes; remaining axes of ``a`` then ``b``, in order.

    ``pairs`` lists ``(axis_of_a, axis_of_b)``; with no pairs this is the
    outer product.
    """
    used_a = [axis for axis, _ in pairs]
    used_b = [axis for _, axis in pairs]
    if len(set(used_a)) != len(used_a) or len(set(used_b)) != len(used_b):
        raise ValueError(f"axis paired twice in {pairs}")
    for axis_a, axis_b in pairs:
        if not (0 <= axis_a < a.ndim and 0 <= axis_b < b.ndim):
            raise ValueError(f"axis pair ({axis_a}, {axis_b}) out of range")
        if a.shape[axis_a] != b.shape[axis_b]:
            raise ValueError(
                f"extent mismatch on pair ({axis_a}, {axis_b}): "
                f"{a.shape[axis_a]} vs {b.shape[axis_b]}"
            )
    free_a = [axis for axis in range(a.ndim) if axis not in used_a]
    free_b = [axis for axis in range(b.ndim) if axis not in used_b]
    out_shape = tuple(a.shape[i] for i in free_a) + tuple(b.shape[i] for i in free_b)
    sum_shape = tuple(a.shape[axis] for axis, _ in pairs)

    stride_a_free = [a.strides[i] for i in free_a]
    stride_b_free = [b.strides[i] for i in free_b]
    stride_a_sum = [a.strides[axis] for axis, _ in pairs]
    stride_b_sum = [b.strides[axis] for _, axis in pairs]

    if math.prod(out_shape) > MAX_ENTRIES:
        raise ValueError("contraction result exceeds the size guard")

    sum_offsets = [
        (sum(i * s for i, s in zip(idx, stride_a_sum)), sum(i * s for i, s in zip(idx, stride_b_sum)))
        for idx in multi_indices(sum_shape)
    ]

    n_free_a = len(free_a)
    out_entries = []
    ea, eb = a.entries, b.entries
    for idx in multi_indices(out_shape):
        base_a = sum(i * s for i, s in zip(idx[:n_free_a], stride_a_free))
        base_b = sum(i * s for i, s in zip(idx[n_free_a:], stride_b_free))
        acc = _ZERO
        for off_a, off_b in sum_offsets:
            va = ea[base_a + off_a]
            if va:
                vb = eb[base_b + off_b]
                if vb:
                    acc += va * vb
        out_entries.append(acc)
    return DenseTensor(out_shape, out_entries)


def permute_axes(t: DenseTensor, axis_map: Sequence[int]) -> DenseTensor:
    """Pure axis relocation: result axis ``j`` is source axis ``axis_map[j]``."""
    if sorted(axis_map) != list(range(t.ndim)):
        raise ValueError(f"axis map {axis_map} is not a permutation of 0..{t.ndim - 1}")
    out_shape = tuple(t.shape[axis_map[j]] for j in range(t.ndim))
    out = [_ZERO] * len(t.entries)
    out_strides = _strides(out_shape)
    # source axis axis_map[j] contributes with the result stride of axis j
    gather = [0] * t.ndim
    for j, src in enumerate(axis_map):
        gather[src] = out_strides[j]
    entries = t.entries
    for idx in multi_indices(t.shape):
        out[sum(i * s for i, s in zip(idx, gather))] = entries[t.offset(idx)]
    return DenseTensor(out_shape, out)


def apply_place_permutation(
    t: DenseTensor, perm: Permutation, axes: Sequence[int] | None = None
) -> DenseTensor:
    """Right place-permutation action on a block of equal-extent axes.

    With ``axes`` omitted the whole tensor is permuted: result axis ``s``
    (one-based within the block) is source axis ``perm(s)``, i.e.
    ``result[x_1..x_k] = t[x_{perm^{-1}(1)}..x_{perm^{-1}(k)}]``.  Applying
    ``p`` then ``q`` equals applying ``compose(p, q)``.
    """
    if axes is None:
        axes = list(range(t.ndim))
    if perm.degree != len(axes):
        raise ValueError(f"permutation degree {perm.degree} does not match {len(axes)} axes")
    extents = {t.shape[axis] for axis in axes}
    if len(extents) > 1:
        raise ValueError(f"permuted axes must share one extent, got {sorted(extents)}")
    axis_map = list(range(t.ndim))
    for s in range(1, perm.degree + 1):
        axis_map[axes[s - 1]] = axes[perm(s) - 1]
    return permute_axes(t, axis_map)


def kill_test(t: DenseTensor, element: GroupAlgebraElement, axes: Sequence[int] | None = None) -> bool:
    """Whether the signed combination of place permutations annihilates ``t``.

    By default the element acts on the trailing ``element.degree`` axes,
    which are the input axes in the ``(outputs, inputs)`` layout.  The zero
    element annihilates everything.
    """
    if axes is None:
        if element.degree > t.ndim:
            raise ValueError(f"element degree {element.degree} exceeds tensor rank {t.ndim}")
        axes = list(range(t.ndim - element.degree, t.ndim))
    if element.is_zero():
        return True
    total = zeros(t.shape)
    for perm, coeff in element.items():
        total = total + apply_place_permutation(t, perm, axes).scale(coeff)
    return total.is_zero()


@dataclass(frozen=True)
class HomSignature:
    """Axis bookkeeping for a hom space built from ``r`` factors and an anchor.

    ``outputs[i]``/``inputs[i]`` are the output/input counts of factor ``i``;
    ``c``/``d`` are the anchor's output/input counts.  Balance means the two
    sides of the flattened hom space have equal rank.
    """

    outputs: tuple[int, ...]
    inputs: tuple[int, ...]
    c: int = 0
    d: int = 1

    def __post_init__(self):
        if len(self.outputs) != len(self.inputs):
            raise ValueError("outputs and inputs must have one entry per factor")
        if any(p < 0 for p in self.outputs) or any(h < 0 for h in self.inputs):
            raise ValueError("arities must be nonnegative")
        if self.c < 0 or self.d < 0:
            raise ValueError("anchor arities must be nonnegative")

    @property
    def r(self) -> int:
        return len(self.outputs)

    @property
    def dual_count(self) -> int:
        return sum(self.outputs) + self.c

    @property
    def primal_count(self) -> int:
        return sum(self.inputs) + self.d

    def is_balanced(self) -> bool:
        return self.dual_count == self.primal_count

    def block_axes(self) -> tuple[list[int], list[int]]:
        """(dual axes, primal axes) of the blocked layout, in block order."""
        dual: list[int] = []
        primal: list[int] = []
        cursor = 0
        for p, h in zip(self.outputs, self.inputs):
            dual.extend(range(cursor, cursor + p))
            cursor += p
            primal.extend(range(cursor, cursor + h))
            cursor += h
        dual.extend(range(cursor, cursor + self.c))
        cursor += self.c
        primal.extend(range(cursor, cursor + self.d))
        return dual, primal


def phi_flatten(sig: HomSignature, t: DenseTensor) -> DenseTensor:
    """Reshuffle a blocked hom element into the dual-axes-first layout.

    Every dual axis moves to the front and every primal axis to the back,
    both keeping their relative order; entries are relocated, never changed.
    """
    dual, primal = sig.block_axes()
    if t.ndim != len(dual) + len(primal):
        raise ValueError(f"tensor rank {t.ndim} does not match signature axis count {len(dual) + len(primal)}")
    return permute_axes(t, dual + primal)


def phi_unflatten(sig: HomSignature, t: DenseTensor) -> DenseTensor:
    """Inverse axis permutation of :func:`phi_flatten`."""
    dual, primal = sig.block_axes()
    forward = dual + primal
    inverse = [0] * len(forward)
    for j, src in enumerate(forward):
        inverse[src] = j
    return permute_axes(t, inverse)


def tensor_to_json(t: DenseTensor) -> dict:
    return {"shape": list(t.shape), "entries": [format_rational(e) for e in t.entries]}


def tensor_from_json(obj: dict) -> DenseTensor:
    if not isinstance(obj, dict) or "shape" not in obj or "entries" not in obj:
        raise ValueError("tensor JSON needs 'shape' and 'entries'")
    return DenseTensor(obj["shape"], [parse_rational(e) for e in obj["entries"]])
