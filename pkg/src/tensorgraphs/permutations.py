"""Exact arithmetic in symmetric groups and their rational group algebras.

Permutations of {1..k} are kept in one-line notation (the tuple of images),
matching the usual index conventions for tensor slots.  Group-algebra
elements are finite rational linear combinations of equal-degree
permutations; they carry the antisymmetrizers, the generator families for
input symmetries of multilinear maps (full symmetry, and symmetry in all but
the last two arguments), and the arity-preserving relabelling group of
interchangeable unlabelled vertices.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1..k} stored as the image tuple ``(p(1), ..., p(k))``."""

    images: tuple[int, ...]

    def __post_init__(self):
        k = len(self.images)
        if sorted(self.images) != list(range(1, k + 1)):
            raise ValueError(f"not a permutation of 1..{k}: {self.images!r}")

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        if not 1 <= i <= self.degree:
            raise ValueError(f"argument {i} outside 1..{self.degree}")
        return self.images[i - 1]

    def inverse(self) -> Permutation:
        inv = [0] * self.degree
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(j == i for i, j in enumerate(self.images, start=1))

    def __str__(self) -> str:
        return format_permutation(self)


def identity(k: int) -> Permutation:
    return Permutation(tuple(range(1, k + 1)))


def transposition(k: int, i: int, j: int) -> Permutation:
    """The transposition exchanging i and j inside the identity of degree k."""
    if not (1 <= i <= k and 1 <= j <= k and i != j):
        raise ValueError(f"bad transposition ({i} {j}) for degree {k}")
    images = list(range(1, k + 1))
    images[i - 1], images[j - 1] = j, i
    return Permutation(tuple(images))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """The product p∘q sending i to p(q(i))."""
    if p.degree != q.degree:
        raise ValueError(f"degree mismatch: {p.degree} vs {q.degree}")
    return Permutation(tuple(p.images[qi - 1] for qi in q.images))


def sign(p: Permutation) -> int:
    """Parity of p as +1 or -1, via its cycle decomposition."""
    seen = [False] * p.degree
    cycles = 0
    for start in range(p.degree):
        if seen[start]:
            continue
        cycles += 1
        pos = start
        while not seen[pos]:
            seen[pos] = True
            pos = p.images[pos] - 1
    return 1 if (p.degree - cycles) % 2 == 0 else -1


def all_permutations(k: int) -> Iterator[Permutation]:
    """All elements of the degree-k symmetric group, in lexicographic order."""
    for images in itertools.permutations(range(1, k + 1)):
        yield Permutation(images)


def format_permutation(p: Permutation) -> str:
    """One-line text form, e.g. ``"2,1,3"``."""
    return ",".join(str(i) for i in p.images)


def parse_permutation(text: str) -> Permutation:
    parts = [s.strip() for s in text.split(",") if s.strip()]
    try:
        images = tuple(int(s) for s in parts)
    except ValueError as exc:
        raise ValueError(f"bad permutation text {text!r}") from exc
    return Permutation(images)


class GroupAlgebraElement:
    """A finite rational linear combination of permutations of one degree.

    Zero coefficients are dropped on every operation, so structural equality
    is semantic equality.  The product is the convolution induced by
    ``compose``.
    """

    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms: Mapping[Permutation, Fraction | int] | None = None):
        cleaned: dict[Permutation, Fraction] = {}
        for perm, coeff in (terms or {}).items():
            if perm.degree != degree:
                raise ValueError(f"degree mismatch: element of degree {degree}, term of degree {perm.degree}")
            coeff = Fraction(coeff)
            if coeff:
                cleaned[perm] = coeff
        self.degree = degree
        self.terms = cleaned

    @classmethod
    def zero(cls, degree: int) -> GroupAlgebraElement:
        return cls(degree)

    @classmethod
    def from_permutation(cls, perm: Permutation, coeff: Fraction | int = 1) -> GroupAlgebraElement:
        return cls(perm.degree, {perm: Fraction(coeff)})

    def is_zero(self) -> bool:
        return not self.terms

    def items(self) -> list[tuple[Permutation, Fraction]]:
        """Terms sorted by one-line notation; the canonical iteration order."""
        return sorted(self.terms.items(), key=lambda kv: kv[0].images)

    def coefficient(self, perm: Permutation) -> Fraction:
        return self.terms.get(perm, Fraction(0))

    def __add__(self, other: GroupAlgebraElement) -> GroupAlgebraElement:
        self._check(other)
        merged = dict(self.terms)
        for perm, coeff in other.terms.items():
            merged[perm] = merged.get(perm, Fraction(0)) + coeff
        return GroupAlgebraElement(self.degree, merged)

    def __sub__(self, other: GroupAlgebraElement) -> GroupAlgebraElement:
        return self + (-other)

    def __neg__(self) -> GroupAlgebraElement:
        return GroupAlgebraElement(self.degree, {p: -c for p, c in self.terms.items()})

    def scale(self, scalar: Fraction | int) -> GroupAlgebraElement:
        scalar = Fraction(scalar)
        return GroupAlgebraElement(self.degree, {p: scalar * c for p, c in self.terms.items()})

    def __mul__(self, other: GroupAlgebraElement) -> GroupAlgebraElement:
        """Algebra product; linear extension of ``compose``."""
        self._check(other)
        out: dict[Permutation, Fraction] = {}
        for p, a in self.terms.items():
            for q, b in other.terms.items():
                pq = compose(p, q)
                out[pq] = out.get(pq, Fraction(0)) + a * b
        return GroupAlgebraElement(self.degree, out)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupAlgebraElement)
            and self.degree == other.degree
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    def _check(self, other: GroupAlgebraElement) -> None:
        if self.degree != other.degree:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __str__(self) -> str:
        return format_algebra_element(self)

    def __repr__(self) -> str:
        return f"GroupAlgebraElement({self.degree}, {format_algebra_element(self)!r})"


def format_algebra_element(element: GroupAlgebraElement) -> str:
    """Signed rational sum of bracketed permutations, e.g. ``1·[1,2] − 1·[2,1]``."""
    if element.is_zero():
        return "0"
    pieces: list[str] = []
    for index, (perm, coeff) in enumerate(element.items()):
        magnitude = f"{abs(coeff)}·[{format_permutation(perm)}]"
        if index == 0:
            pieces.append(magnitude if coeff > 0 else f"−{magnitude}")
        else:
            pieces.append(("+ " if coeff > 0 else "− ") + magnitude)
    return " ".join(pieces)


_TERM_RE = re.compile(r"^\s*([0-9]+(?:/[0-9]+)?)[·*]\[([0-9,\s]*)\]\s*$")


def parse_algebra_element(text: str, degree: int) -> GroupAlgebraElement:
    """Inverse of :func:`format_algebra_element`; accepts ``-``/``*`` for ``−``/``·``."""
    text = text.strip()
    if text == "0":
        return GroupAlgebraElement.zero(degree)
    normalized = text.replace("−", "-")
    chunks = re.split(r"\s+(?=[+-])|(?<=\])\s*(?=[+-])", normalized)
    terms: dict[Permutation, Fraction] = {}
    for chunk in chunks:
        chunk = chunk.strip()
        if not chunk:
            continue
        sig = 1
        while chunk and chunk[0] in "+-":
            if chunk[0] == "-":
                sig = -sig
            chunk = chunk[1:].strip()
        match = _TERM_RE.match(chunk)
        if match is None:
            raise ValueError(f"bad group-algebra term {chunk!r}")
        coeff = sig * Fraction(match.group(1))
        perm = parse_permutation(match.group(2))
        if perm.degree != degree:
            raise ValueError(f"term degree {perm.degree} does not match {degree}")
        terms[perm] = terms.get(perm, Fraction(0)) + coeff
    return GroupAlgebraElement(degree, terms)


def antisymmetrizer(subset: Iterable[int], degree: int) -> GroupAlgebraElement:
    """Signed sum over the subgroup permuting ``subset`` and fixing its complement.

    Realizing this element gives zero exactly when the subset is larger than
    the dimension of the underlying space; these are the only relations among
    the elementary invariant tensors.
    """
    members = sorted(set(subset))
    if not members:
        raise ValueError("antisymmetrizer needs a nonempty subset")
    if members[0] < 1 or members[-1] > degree:
        raise ValueError(f"subset {members} not inside 1..{degree}")
    terms: dict[Permutation, Fraction] = {}
    for arrangement in itertools.permutations(members):
        images = list(range(1, degree + 1))
        for slot, value in zip(members, arrangement):
            images[slot - 1] = value
        perm = Permutation(tuple(images))
        terms[perm] = Fraction(sign(perm))
    return GroupAlgebraElement(degree, terms)


def symmetric_ideal_generators(arity: int) -> list[GroupAlgebraElement]:
    """Generators ``s - id`` of the augmentation ideal, one per adjacent transposition.

    Killing these characterizes the fully symmetric multilinear maps.  Any
    generating set of the symmetric group spans the same left quotient; the
    adjacent transpositions are a convenient canonical choice.
    """
    if arity < 1:
        raise ValueError("arity must be positive")
    ident = identity(arity)
    return [
        GroupAlgebraElement(arity, {transposition(arity, i, i + 1): Fraction(1), ident: Fraction(-1)})
        for i in range(1, arity)
    ]


def nabla_generators(arity: int) -> list[GroupAlgebraElement]:
    """Generators for symmetry in the first ``arity - 2`` arguments.

    These are the augmentation-ideal generators of the smaller symmetric
    group, embedded so that the last two arguments stay fixed (the symmetry
    pattern of Christoffel-type coefficients).
    """
    if arity < 2:
        raise ValueError("arity must be at least 2")
    v = arity - 2
    if v <= 1:
        return []
    ident = identity(arity)
    return [
        GroupAlgebraElement(arity, {transposition(arity, i, i + 1): Fraction(1), ident: Fraction(-1)})
        for i in range(1, v)
    ]


def white_relabelling_group(arities: Sequence[int]) -> list[Permutation]:
    """All permutations of positions that only move positions of equal arity.

    This is the group of admissible relabellings of interchangeable
    unlabelled vertices; it acts with a sign twist elsewhere in the package.
    """
    m = len(arities)
    return [
        perm
        for perm in all_permutations(m)
        if all(arities[perm(i) - 1] == arities[i - 1] for i in range(1, m + 1))
    ]
