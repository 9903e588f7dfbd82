"""Involutive A∞-algebras, their bimodules and involutive Hochschild invariants, over exact fields."""

from .ainfty import (AInftyMorphism, AInftyStructure, CheckResult, coderivation_mode_verdict, from_dga,
                     homology_algebra, involution_compat_check, is_quasi_iso, morphism_check,
                     stasheff_check_coderivation, stasheff_check_literal)
from .bimodule import (AInftyBimodule, BoxTensor, HomComplex, adjunction_check, are_homotopy_equivalent,
                       bimodule_check, boxtimes, diagonal_bimodule, hom_complex, hom_involution,
                       homotopy_check, induced_bimodule, tensor_functor_map)
from .document import AlgebraDocument, ParseError, emit_document, parse_document
from .field import QQ, FieldSpec
from .hochschild import (build_chain_complex, build_cochain_complex, certify_window, classical_oracle, cohh, hh,
                         small_model_compare)
from .linalg import ChainComplex, GradedMap, GradedSpace, StructuralError

__all__ = [
    "AInftyBimodule", "AInftyMorphism", "AInftyStructure", "AlgebraDocument", "BoxTensor", "ChainComplex",
    "CheckResult", "FieldSpec", "GradedMap", "GradedSpace", "HomComplex", "ParseError", "QQ", "StructuralError",
    "adjunction_check", "are_homotopy_equivalent", "bimodule_check", "boxtimes", "build_chain_complex",
    "build_cochain_complex", "certify_window", "classical_oracle", "coderivation_mode_verdict", "cohh",
    "diagonal_bimodule", "emit_document", "from_dga", "hh", "hom_complex", "hom_involution", "homology_algebra",
    "homotopy_check", "induced_bimodule", "involution_compat_check", "is_quasi_iso", "morphism_check",
    "parse_document", "small_model_compare", "stasheff_check_coderivation", "stasheff_check_literal",
    "tensor_functor_map",
]
