import random
from fractions import Fraction

import pytest

from tensorgraphs.evaluate import state_sum
from tensorgraphs.graphs import VertexSpec, enumerate_graphs, make_graph
from tensorgraphs.quotient import (
    GraphSum,
    admissible_arities,
    antisymmetrized_state_sum,
    apply_symmetry,
    canonicalize,
    enumerate_basis,
    graph_relation,
    graph_sum_from_json,
    graph_sum_to_json,
    quotient_evaluation_tensor,
    symmetry_group,
)
from tensorgraphs.suite import (
    BILINEAR_IMAGES,
    bilinear_graph,
    random_symmetric_binary,
    random_tensor,
    wedge_generator_graph,
    wedge_pairing_graph,
    wedge_reference_value,
    wedge_vertices,
)


def test_canonicalize_identifies_input_reordered_graphs():
    # the two graphs plugging the generators into the symmetric map in the
    # two possible orders fall together, with no sign
    first, _ = canonicalize(bilinear_graph((1, 2, 3), symmetric=True))
    second, sign = canonicalize(bilinear_graph((2, 1, 3), symmetric=True))
    assert first == second
    assert sign == 1
    assert not first.zero_flag


def test_canonicalize_trivial_group_returns_graph_itself():
    g = bilinear_graph((1, 3, 2))  # planar vertices, no symmetries
    cg, sign = canonicalize(g)
    assert cg.graph == g
    assert sign == 1
    assert not cg.zero_flag


def test_canonicalize_detects_zero_classes():
    cg, _ = canonicalize(wedge_pairing_graph())
    assert cg.zero_flag
    assert quotient_evaluation_tensor(wedge_pairing_graph(), 2).is_zero()


def test_canonicalize_is_idempotent():
    for images in BILINEAR_IMAGES:
        cg, _ = canonicalize(bilinear_graph(images, symmetric=True))
        again, sign = canonicalize(cg.graph)
        assert again == cg
        assert sign == 1


def test_canonicalize_accounts_for_orientation():
    g = wedge_generator_graph()
    flipped = make_graph(g.vertices, g.matching, orientation=("w2", "w1"))
    cg1, s1 = canonicalize(g)
    cg2, s2 = canonicalize(flipped)
    assert cg1 == cg2
    assert s1 == -s2


def test_canonical_sign_matches_projected_evaluation():
    # the returned sign relates the projected tensors of graph and canonical form
    for vertices in (wedge_vertices(),):
        for g in enumerate_graphs(vertices):
            cg, sign = canonicalize(g)
            left = quotient_evaluation_tensor(g, 2)
            right = quotient_evaluation_tensor(cg.graph, 2).scale(sign)
            assert left == right


def test_symmetry_orbit_signs_compose():
    for g in enumerate_graphs(wedge_vertices()):
        cg, sign = canonicalize(g)
        for element in symmetry_group(g):
            cg2, sign2 = canonicalize(apply_symmetry(g, element))
            assert cg2 == cg
            if not cg.zero_flag:
                assert sign2 == sign * element.sign


def test_nabla_symmetry_moves_only_leading_slots():
    vertices = [
        VertexSpec("n1", "nabla", 4, 1),
        VertexSpec("b1", "black", 0, 1),
        VertexSpec("b2", "black", 0, 1),
        VertexSpec("b3", "black", 0, 1),
        VertexSpec("b4", "black", 0, 1),
        VertexSpec("anchor", "anchor", 1, 0),
    ]
    g = enumerate_graphs(vertices)[0]
    group = symmetry_group(g)
    assert len(group) == 2  # only the two leading inputs of the nabla vertex
    moved = apply_symmetry(g, next(e for e in group if e.slot_perms))
    changed = {dst for _, dst in set(g.matching) ^ set(moved.matching)}
    assert changed <= {("n1", 0), ("n1", 1)}


def test_enumerate_basis_single_black_generator():
    basis = enumerate_basis((), (0,), ())
    assert len(basis) == 1
    assert basis[0].graph.matching == ((("b1", 0), ("anchor", 0)),)


def test_enumerate_basis_two_black_generators():
    # arities (0, 1): composition chain or trace loop, never identified
    basis = enumerate_basis((), (0, 1), ())
    assert len(basis) == 2


def test_enumerate_basis_wedge_component():
    basis = enumerate_basis((0, 0), (2,), (), allow_small_white=True)
    assert len(basis) == 1
    assert not basis[0].zero_flag
    with pytest.raises(ValueError, match="white arities"):
        enumerate_basis((0, 0), (2,), ())


def test_enumerate_basis_checks_balance():
    with pytest.raises(ValueError, match="unbalanced"):
        enumerate_basis((2,), (0,), ())


def test_enumerate_basis_outputs_are_canonical_and_distinct():
    basis = enumerate_basis((2,), (0, 0), ())
    assert len(basis) == len(set(basis)) == 3
    for cg in basis:
        assert not cg.zero_flag
        again, sign = canonicalize(cg.graph)
        assert again == cg and sign == 1


def orbit_partition(vertices):
    """Independent oracle: partition all matchings into symmetry orbits by
    breadth-first search, tracking whether any orbit member is reached with
    both signs (a zero class)."""
    graphs = enumerate_graphs(vertices)
    index = {g.matching: i for i, g in enumerate(graphs)}
    seen = {}
    orbits = []
    for start, g in enumerate(graphs):
        if start in seen:
            continue
        members = {start: 1}
        frontier = [(g, 1)]
        is_zero = False
        while frontier:
            current, current_sign = frontier.pop()
            for element in symmetry_group(current):
                moved = apply_symmetry(current, element)
                j = index[moved.matching]
                s = current_sign * element.sign
                if j not in members:
                    members[j] = s
                    frontier.append((moved, s))
                elif members[j] != s:
                    is_zero = True
        seen.update(dict.fromkeys(members, True))
        orbits.append((frozenset(members), is_zero))
    return orbits


def test_enumerate_basis_counts_match_independent_orbit_partition():
    families = [
        ((), (0, 0, 2), (), False),
        ((0, 0), (2,), (), True),
        ((2,), (0, 0), (), False),
        ((2, 2), (0, 0, 0), (), False),
        ((), (0, 0, 0, 0), (4,), False),
    ]
    from tensorgraphs.quotient import basis_vertices

    for white, black, nabla, allow in families:
        vertices = basis_vertices(white, black, nabla, allow)
        orbits = orbit_partition(vertices)
        nonzero = [members for members, is_zero in orbits if not is_zero]
        basis = enumerate_basis(white, black, nabla, allow)
        assert len(basis) == len(nonzero)


def test_nabla_family_orbit_count_by_burnside():
    # a four-input vertex symmetric in its two leading slots: the slot swap
    # fixes no matching, so exactly half of the 5! matchings survive
    basis = enumerate_basis((), (0, 0, 0, 0), (4,))
    assert len(basis) == 60


def test_admissible_arities_enumeration():
    # one white and two blacks force total arity 2 on the white side or blacks
    options = admissible_arities(1, 2, 0)
    assert ((2,), (0, 0), ()) in options
    assert all(sum(w) + sum(b) + sum(nb) == 2 for w, b, nb in options)
    assert admissible_arities(0, 1, 0) == [((), (0,), ())]


def test_graph_relation_singleton_cut():
    g = bilinear_graph((1, 2, 3))
    total = graph_relation(g, [0])
    assert len(total.terms) == 1
    ((cg, coeff),) = total.items()
    assert coeff == 1 and cg.graph == g


def test_graph_relation_on_symmetric_inputs_vanishes():
    g = bilinear_graph((1, 2, 3), symmetric=True)
    # edges 0 and 1 are the two inputs of the symmetric binary vertex
    cut = [i for i, (_, dst) in enumerate(g.matching) if dst[0] == "F"]
    assert graph_relation(g, cut).is_zero()


def test_graph_relation_two_terms_opposite_signs():
    g = bilinear_graph((1, 2, 3))  # planar: no symmetries to cancel against
    total = graph_relation(g, [0, 1])
    assert sorted(coeff for _, coeff in total.items()) == [Fraction(-1), Fraction(1)]
    graphs = {cg.graph for cg, _ in total.items()}
    assert graphs == {bilinear_graph((1, 2, 3)), bilinear_graph((2, 1, 3))}


def test_graph_relation_accepts_edges_and_validates():
    g = bilinear_graph((1, 2, 3))
    by_index = graph_relation(g, [0, 1])
    by_edge = graph_relation(g, [g.matching[0], g.matching[1]])
    assert by_index == by_edge
    with pytest.raises(ValueError, match="nonempty"):
        graph_relation(g, [])
    with pytest.raises(ValueError, match="out of range"):
        graph_relation(g, [9])
    with pytest.raises(ValueError, match="not an edge"):
        graph_relation(g, [((("X", 0)), ("F", 1))])


def test_antisymmetrized_state_sum_is_alternating():
    rng = random.Random(71)
    g = wedge_generator_graph()
    n = 2
    x, y = random_tensor(rng, (n,)), random_tensor(rng, (n,))
    f = random_symmetric_binary(rng, n)
    plain = antisymmetrized_state_sum(g, [x, y], [f], n)
    swapped = antisymmetrized_state_sum(g, [y, x], [f], n)
    assert plain == -swapped
    assert antisymmetrized_state_sum(g, [x, x], [f], n).is_zero()
    assert plain == wedge_reference_value(x, y, f, n)


def test_antisymmetrized_state_sum_single_white_is_plain():
    vertices = [
        VertexSpec("w1", "white", 2, 1),
        VertexSpec("b1", "black", 0, 1),
        VertexSpec("b2", "black", 0, 1),
        VertexSpec("anchor", "anchor", 1, 0),
    ]
    g = enumerate_graphs(vertices)[0]
    rng = random.Random(73)
    n = 2
    f = random_tensor(rng, (n, n, n))
    x, y = random_tensor(rng, (n,)), random_tensor(rng, (n,))
    assert antisymmetrized_state_sum(g, [f], [x, y], n) == state_sum(g, [f, x, y], n)


def test_graph_sum_json_roundtrip():
    g = bilinear_graph((1, 2, 3), symmetric=True)
    total = graph_relation(g, [0, 2])
    doc = graph_sum_to_json(total)
    assert all(isinstance(item["coeff"], str) for item in doc)
    assert graph_sum_from_json(doc) == total


def test_quotient_evaluation_matches_symmetrized_realization():
    # summing delta tensors over the orbit equals projecting the delta tensor
    g = bilinear_graph((1, 3, 2), symmetric=True)
    total = quotient_evaluation_tensor(g, 2)
    from tensorgraphs.evaluate import graph_delta_tensor

    by_hand = None
    for element in symmetry_group(g):
        term = graph_delta_tensor(apply_symmetry(g, element), 2)
        by_hand = term if by_hand is None else by_hand + term
    assert total == by_hand
