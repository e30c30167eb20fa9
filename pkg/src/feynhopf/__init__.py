"""Hopf algebra of specified Feynman graphs and Birkhoff decomposition of
momentum-dependent characters, in exact rational arithmetic."""
from .graph import (
    CoveringSubgraph,
    GraphError,
    HalfEdgeGraph,
    HalfEdgeType,
    contract,
    covering_subgraphs,
    disjoint_union,
    is_1pi,
    is_locally_1pi,
    loop_number,
    residue,
    skeleton,
)
from .canonical import canonical_form, canonical_graph, find_isomorphism, is_isomorphic
from .theory import Theory, is_in_theory, is_superficially_divergent, load_theory, refinement_indices, vertex_signature
from .specified import SpecifiedGraph, SpecifiedSubgraph, specified_contract, specified_covering_subgraphs
from .hopf import (
    AlgebraElement,
    Monomial,
    TensorSum,
    antipode,
    coproduct_hopf,
    coproduct_tilde,
    counit,
    coproduct_unspecified,
    forget_specification,
    grading,
    hopf_project,
)
from .poly import Poly
from .momenta import BElement, MomentumSpace, PolyFn, bullet, momentum_space, pullback_contraction, pullback_inclusion
from .schemes import Laurent, P_ms, P_taylor

from .renorm import Birkhoff, Character, Convolution, identity_character, inverse_character, verify_character
from .toys import random_character, tabulated_character, toy_ms, toy_taylor

__version__ = "0.1.0"
