"""Exact computations with G-lattices: cohomology, extension orders,
flabby resolutions, the permutation order and norm one tori."""

from .cohomology import AbelianGroupStructure, h0, h1, h2, is_coflabby, is_flabby, sha2_omega_direct, tate_h0, tate_h_minus1
from .errors import InputError, NotEquivariantError, ResourceError
from .extensions import ExtensionClass, extension_order, klyachko_sequence, tensor_three_term, tensor_four_term
from .groups import FiniteGroup, GSet, Subgroup, coset_gset, direct_product, named_group, subgroups_up_to_conjugacy
from .lattices import (
    ExactSequenceOfLattices,
    GLattice,
    LatticeMap,
    augmentation_sequence,
    chevalley_module,
    direct_sum,
    dual,
    permutation_lattice,
    tensor,
    verify_exactness,
)
from .rationality import EtaleSpec, classify_norm_one, fixed_point_reduction, sha2_omega, verify_tensor_splitting, verify_product_torus
from .resolutions import coflabby_resolution, flabby_resolution, is_invertible, permutation_order, stably_permutation_witness

__all__ = [
    "AbelianGroupStructure",
    "augmentation_sequence",
    "chevalley_module",
    "classify_norm_one",
    "coflabby_resolution",
    "coset_gset",
    "direct_product",
    "direct_sum",
    "dual",
    "EtaleSpec",
    "ExactSequenceOfLattices",
    "extension_order",
    "ExtensionClass",
    "FiniteGroup",
    "fixed_point_reduction",
    "flabby_resolution",
    "GLattice",
    "GSet",
    "h0",
    "h1",
    "h2",
    "InputError",
    "is_coflabby",
    "is_flabby",
    "is_invertible",
    "klyachko_sequence",
    "LatticeMap",
    "named_group",
    "NotEquivariantError",
    "permutation_lattice",
    "permutation_order",
    "ResourceError",
    "sha2_omega",
    "sha2_omega_direct",
    "stably_permutation_witness",
    "Subgroup",
    "subgroups_up_to_conjugacy",
    "tate_h0",
    "tate_h_minus1",
    "tensor",
    "tensor_four_term",
    "tensor_three_term",
    "verify_exactness",
    "verify_product_torus",
    "verify_tensor_splitting",
]

__version__ = "0.1.0"
