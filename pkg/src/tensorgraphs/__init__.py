"""Exact computer algebra for GL(V)-invariant tensors presented as graphs.

The package realizes the dictionary between invariant linear maps on tensor
powers and directed contraction graphs: permutations and graphs both
evaluate to explicit tensors over exact rationals, graphs canonicalize under
vertex symmetries and signed orientations, and the classical independence
and dimension statements are verified by exact rank computation.
"""

from .permutations import (
    GroupAlgebraElement,
    Permutation,
    antisymmetrizer,
    compose,
    identity,
    nabla_generators,
    sign,
    symmetric_ideal_generators,
    transposition,
    white_relabelling_group,
)
from .tensors import (
    DenseTensor,
    HomSignature,
    apply_place_permutation,
    contract,
    kill_test,
    phi_flatten,
    phi_unflatten,
    tensor_from_entries,
    tensor_from_json,
    tensor_to_json,
)
from .graphs import (
    Labelling,
    TensorGraph,
    VertexSpec,
    enumerate_graphs,
    enumerate_labellings,
    export_dot,
    make_graph,
    parse_graph,
    serialize_graph,
    validate,
)
from .evaluate import (
    elementary_tensor,
    graph_delta_tensor,
    graph_to_permutation,
    permutation_to_graph,
    realize,
    state_sum,
)
from .quotient import (
    CanonicalGraph,
    GraphSum,
    antisymmetrized_state_sum,
    canonicalize,
    enumerate_basis,
    graph_relation,
)
from .verify import (
    RationalMatrix,
    VerificationReport,
    evaluation_matrix,
    rank,
    verify_diagram,
    verify_extended_stable_range,
    verify_itt,
    verify_quotient_dimension,
)

__version__ = "0.1.0"
