from fractions import Fraction

import pytest

from tensorgraphs.graphs import VertexSpec
from tensorgraphs.permutations import GroupAlgebraElement, all_permutations, identity
from tensorgraphs.quotient import GraphSum, canonicalize
from tensorgraphs.suite import bilinear_graph, bilinear_vertices, wedge_pairing_graph
from tensorgraphs.tensors import identity_matrix
from tensorgraphs.verify import (
    RationalMatrix,
    VerificationReport,
    evaluation_matrix,
    kernel_ideal_dimension,
    matrix_from_rows,
    rank,
    rank_alt,
    verify_diagram,
    verify_extended_stable_range,
    verify_itt,
    verify_quotient_dimension,
)


def test_rank_identity_and_zero():
    eye = matrix_from_rows([[Fraction(int(i == j)) for j in range(3)] for i in range(3)])
    assert rank(eye) == rank_alt(eye) == 3
    zero = RationalMatrix(2, 4, [Fraction(0)] * 8)
    assert rank(zero) == rank_alt(zero) == 0


def test_rank_with_rational_entries():
    m = matrix_from_rows(
        [
            [Fraction(1, 2), Fraction(1, 3), Fraction(0)],
            [Fraction(1), Fraction(2, 3), Fraction(0)],
            [Fraction(0), Fraction(1), Fraction(5, 7)],
        ]
    )
    assert rank(m) == rank_alt(m) == 2


def test_rank_of_realized_degree_three_permutations_in_dimension_two():
    elements = [GroupAlgebraElement.from_permutation(p) for p in all_permutations(3)]
    matrix = evaluation_matrix(elements, 2)
    assert matrix.rows == 6 and matrix.cols == 2**6
    assert rank(matrix) == 5
    assert rank_alt(matrix) == 5  # independent pivot strategy


def test_evaluation_matrix_examples():
    single = evaluation_matrix([GroupAlgebraElement.from_permutation(identity(1))], 2)
    assert single.rows == 1
    assert single.row(0) == identity_matrix(2).entries

    degree_two = [GroupAlgebraElement.from_permutation(p) for p in all_permutations(2)]
    at_two = evaluation_matrix(degree_two, 2)
    assert (at_two.rows, at_two.cols) == (2, 16)
    assert rank(at_two) == 2

    at_one = evaluation_matrix(degree_two, 1)
    assert (at_one.rows, at_one.cols) == (2, 1)
    assert rank(at_one) == 1


def test_evaluation_matrix_accepts_graph_sums():
    sums = []
    for images in ((1, 2, 3), (1, 3, 2), (3, 1, 2)):
        cg, _ = canonicalize(bilinear_graph(images, symmetric=True))
        total = GraphSum()
        total.add_term(cg, 1)
        sums.append(total)
    matrix = evaluation_matrix(sums, 3)
    assert matrix.rows == 3
    assert rank(matrix) == 3
    empty = GraphSum()
    empty.add_term(canonicalize(wedge_pairing_graph())[0], 1)
    with pytest.raises(ValueError, match="empty graph sum"):
        evaluation_matrix([empty], 2)


def test_evaluation_matrix_rejects_mixed_shapes():
    items = [
        GroupAlgebraElement.from_permutation(identity(1)),
        GroupAlgebraElement.from_permutation(identity(2)),
    ]
    with pytest.raises(ValueError, match="mixed shapes"):
        evaluation_matrix(items, 2)


def test_report_passed_is_equality_of_expected_and_observed():
    good = VerificationReport("x", {}, 3, 3)
    bad = VerificationReport("x", {}, 3, 4)
    assert good.passed and not bad.passed
    assert set(good.to_json()) == {"claim", "params", "expected", "observed", "passed"}


def test_verify_itt_stable_cases():
    assert verify_itt(2, 2).observed == 2
    report = verify_itt(3, 3)
    assert report.params["rank"] == 6 and report.passed


def test_verify_itt_kernel_case():
    report = verify_itt(3, 2)
    assert report.params["rank"] == 5
    assert report.params["kernel_dim"] == 1
    assert report.params["generators_vanish"]
    assert report.passed


def test_verify_itt_observed_rank_is_monotone_in_dimension():
    for k in range(1, 5):
        ranks = [verify_itt(k, n).params["rank"] for n in range(1, 5)]
        assert ranks == sorted(ranks)


def test_verify_itt_size_guard():
    with pytest.raises(ValueError, match="size guard"):
        verify_itt(6, 2)


def test_kernel_ideal_dimension_known_values():
    assert kernel_ideal_dimension(3, 2) == 1  # the alternating sum alone
    assert kernel_ideal_dimension(3, 1) == 5  # all coefficient-sum-zero elements
    assert kernel_ideal_dimension(2, 2) == 0


def test_verify_diagram_bilinear_signature():
    report = verify_diagram(bilinear_vertices(), 2)
    assert report.expected == 6 and report.passed


def test_verify_diagram_minimal_and_degree_four():
    minimal = [VertexSpec("b", "black", 0, 1), VertexSpec("anchor", "anchor", 1, 0)]
    assert verify_diagram(minimal, 1).passed
    four = [
        VertexSpec("f1", "planar", 2, 2),
        VertexSpec("f2", "planar", 1, 1),
        VertexSpec("anchor", "anchor", 1, 1),
    ]
    report = verify_diagram(four, 2)
    assert report.expected == 24 and report.passed
    with pytest.raises(ValueError, match="size guard"):
        verify_diagram([VertexSpec("f1", "planar", 5, 5), VertexSpec("anchor", "anchor", 0, 0)], 2)


def test_verify_quotient_dimension_symmetric_binary_family():
    report = verify_quotient_dimension((), (0, 0, 2), (), 3)
    assert report.params["basis_size"] == 3
    assert report.observed == 3 and report.passed


def test_verify_quotient_dimension_below_edge_count_reports_only():
    report = verify_quotient_dimension((), (0, 0, 2), (), 2)
    assert report.claim == "quotient-rank-observed"
    assert report.passed  # informational, no claim checked


def test_verify_quotient_dimension_minimal():
    report = verify_quotient_dimension((), (0,), (), 1)
    assert report.params["basis_size"] == 1 and report.observed == 1 and report.passed


def test_verify_quotient_dimension_wedge_component():
    report = verify_quotient_dimension((0, 0), (2,), (), 3, allow_small_white=True)
    assert report.params["basis_size"] == 1
    assert report.passed


def test_verify_extended_stable_range():
    report = verify_extended_stable_range((2,), (0, 0), ())
    assert report.passed
    assert report.params["rank_low"] == report.params["rank_high"] == 3
    assert report.params["relations_vanish"]


def test_verify_extended_stable_range_not_applicable():
    report = verify_extended_stable_range((), (0,), ())
    assert report.passed
    assert report.params["applicable"] is False


def test_rank_oracles_agree_on_suite_matrices():
    # every matrix shape the checks above produce, both eliminations agree
    for k in range(1, 5):
        for n in range(1, 4):
            elements = [GroupAlgebraElement.from_permutation(p) for p in all_permutations(k)]
            matrix = evaluation_matrix(elements, n)
            assert rank(matrix) == rank_alt(matrix)
