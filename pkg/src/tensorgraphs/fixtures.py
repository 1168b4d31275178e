"""Access to the shipped example graphs.

The six ``bilinear_*`` fixtures are the complete family of contraction
graphs on two vector generators, one planar binary map and the anchor,
named by the permutation they realize; ``wedge_generator`` is the single
generator of the alternating two-generator component.  They double as
golden files for the serialization tests.
"""

from __future__ import annotations

from importlib import resources

from .graphs import TensorGraph, parse_graph

FIXTURE_NAMES = (
    "bilinear_123",
    "bilinear_213",
    "bilinear_132",
    "bilinear_231",
    "bilinear_321",
    "bilinear_312",
    "wedge_generator",
)


def fixture_text(name: str) -> str:
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(FIXTURE_NAMES)}")
    return (resources.files(__package__) / "fixtures" / f"{name}.json").read_text()


def load_fixture(name: str) -> TensorGraph:
    return parse_graph(fixture_text(name))
