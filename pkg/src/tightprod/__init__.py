"""Tight products of regular multigraphs.

Construction and verification of tight products, the semi-coloring
calculus with a constructive cubic Vizing theorem, the class-1 classifier
gadget, word maps over permutation generators, and the random-product
spectral model.
"""

from .graph import (
    InternalCheckError,
    MultiGraph,
    Permutation,
    PermutationGraph,
    adjacency_matrix,
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    from_permutations,
    petersen_graph,
    prism_graph,
    standard_two_lift,
    structural_predicates,
)
from .factorization import (
    EdgeColoring,
    eulerian_orientation,
    exact_edge_chromatic,
    is_proper_edge_coloring,
    max_matching,
    perfect_matching,
    regular_bipartite_one_factorization,
    two_factorization,
)
from .semicoloring import (
    Gadget,
    SemiColor,
    SemiColoring,
    build_gadget,
    semi_color_family,
    semi_color_subcubic,
    validate_semi_coloring,
    vizing4_cubic,
)
from .products import (
    CoveringMap,
    NeighborlyFamily,
    TightProduct,
    assemble_product,
    bridge_matching_witness,
    brute_force_tight_product,
    classify_class1_via_gadget,
    family_from_product,
    neighborly_permutation,
    product_even_regular,
    product_odd_matching,
    product_via_semicoloring,
    swap_product,
    verify_covering,
)
from .words import (
    closed_path_count,
    count_imprimitive,
    estimate_p,
    evaluate_word,
    is_primitive,
    reduce_word,
    word_order,
)
from .experiments import (
    ExperimentConfig,
    RandomProductConfig,
    entropy_report,
    random_lift,
    random_permutation,
    random_tight_product,
    run_experiment,
    split_new_eigenvalues,
    spectrum_report,
    symmetric_eigenvalues,
)

__version__ = "0.1.0"
