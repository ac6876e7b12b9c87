"""Letter-braiding invariants of words in finitely presented groups.

The package computes braided letter-counting invariants of group words
with coefficients in Z, Z/m, or Q, together with exact bases for the
functions of bounded "finite type" on a finitely presented group -- and
for the subspace of conjugation-invariant ones -- at any tensor-weight
truncation.  The same machinery exposes the degree-zero cohomology of
bar-type complexes built from small simplicial models.
"""

from .barcyc import (
    BarElement,
    CycElement,
    H0Basis,
    NotACocycleError,
    NotConnectedAlgebraError,
    bar_differential,
    bar_element_to_tensor,
    coinvariant_rank,
    connecting_map,
    cyc_differential,
    h0_bar,
    h0_cyc,
    include_in_A,
    iota,
    sigma,
    tau,
)
from .classfun import (
    DEFAULT_SEED,
    DescendSystem,
    NotSaturatedError,
    OracleReport,
    Presentation,
    TensorBasis,
    Verdict,
    basis_from_obj,
    basis_to_obj,
    class_function_basis,
    descend_conditions,
    evaluation_table,
    finite_type_basis,
    is_class_function_sampled,
    oracle_group_ring_quotient,
    pairing_tables_agree,
    parse_presentation,
    presentation_to_text,
    weight_graded_monomials,
)
from .dga import (
    BadSimplicialSetError,
    FiniteDGA,
    SimplicialSetModel,
    circle_model,
    cochain_algebra,
    model_from_obj,
    model_to_obj,
    point_model,
    torus_model,
    verify_dga,
    wedge_algebra,
    wedge_model,
)
from .rings import (
    IntMatrix,
    KernelBasis,
    Ring,
    ShapeError,
    in_column_span,
    kernel_basis,
    matrix_rank,
    row_canonical_form,
    smith_normal_form,
    solve,
)
from .tensors import (
    BraidingTensor,
    cycle,
    cycle_invariant_basis,
    eval_group_ring,
    eval_word,
    tensor_from_obj,
    tensor_to_obj,
)
from .words import (
    GenSet,
    GeneratorMismatchError,
    GroupRingElement,
    MonomialCombination,
    UnknownGeneratorError,
    Word,
    WordSyntaxError,
    conjugate,
    fox_expand,
    parse_word,
    random_reduced_word,
    word_minus_one,
    words_up_to,
)

__all__ = [
    "BadSimplicialSetError",
    "BarElement",
    "BraidingTensor",
    "CycElement",
    "DEFAULT_SEED",
    "DescendSystem",
    "FiniteDGA",
    "GenSet",
    "GeneratorMismatchError",
    "GroupRingElement",
    "H0Basis",
    "IntMatrix",
    "KernelBasis",
    "MonomialCombination",
    "NotACocycleError",
    "NotConnectedAlgebraError",
    "NotSaturatedError",
    "OracleReport",
    "Presentation",
    "Ring",
    "ShapeError",
    "SimplicialSetModel",
    "TensorBasis",
    "Verdict",
    "Word",
    "WordSyntaxError",
    "UnknownGeneratorError",
    "bar_differential",
    "bar_element_to_tensor",
    "basis_from_obj",
    "basis_to_obj",
    "circle_model",
    "class_function_basis",
    "cochain_algebra",
    "coinvariant_rank",
    "conjugate",
    "connecting_map",
    "cyc_differential",
    "cycle",
    "cycle_invariant_basis",
    "descend_conditions",
    "eval_group_ring",
    "eval_word",
    "evaluation_table",
    "finite_type_basis",
    "fox_expand",
    "h0_bar",
    "h0_cyc",
    "in_column_span",
    "include_in_A",
    "iota",
    "is_class_function_sampled",
    "kernel_basis",
    "matrix_rank",
    "model_from_obj",
    "model_to_obj",
    "oracle_group_ring_quotient",
    "pairing_tables_agree",
    "parse_presentation",
    "parse_word",
    "point_model",
    "presentation_to_text",
    "random_reduced_word",
    "row_canonical_form",
    "sigma",
    "smith_normal_form",
    "solve",
    "tau",
    "tensor_from_obj",
    "tensor_to_obj",
    "torus_model",
    "verify_dga",
    "wedge_algebra",
    "wedge_model",
    "weight_graded_monomials",
    "word_minus_one",
    "words_up_to",
]
