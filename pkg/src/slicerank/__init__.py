"""Exact slice rank computation over prime fields.

Dense tensors over GF(p), slice decompositions, dual-subspace rank
certificates, exhaustive exact rank search, certificate splitting across
direct sums, block-triangular rank inequalities, and an order-3 staircase
normalizer. All arithmetic is exact and every search is deterministic.
"""

from .errors import (
    EnumerationLimitError,
    FormatError,
    NonCanonicalBasisError,
    PreconditionError,
    SliceRankError,
    VerificationError,
)
from .linalg import (
    EchelonForm,
    FewZeroVector,
    FieldMatrix,
    PrimeField,
    Subspace,
    annihilator,
    complete_basis,
    count_subspaces,
    echelonize,
    enumerate_subspaces,
    few_zero_kernel_vector,
    gaussian_binomial,
    grassmannian,
    invert_matrix,
    kernel_basis,
    matrix_rank,
    solve_right,
)
from .tensor import (
    BlockStructure,
    SliceDecomposition,
    SliceTerm,
    SupportInfo,
    Tensor,
    block_component,
    contract_axis,
    diagonal_tensor,
    direct_sum,
    direct_sum_list,
    embed_block,
    evaluate_decomposition,
    flatten,
    is_block_upper_triangular,
    levi_civita,
    levi_civita_decomposition,
    outer_product_tensor,
    permute_axis,
    random_block_upper_triangular,
    random_tensor,
    support_and_antichain,
)
from .rank import (
    DEFAULT_ENUMERATION_LIMIT,
    CoverResult,
    DualCertificate,
    RankResult,
    certificate_from_decomposition,
    decomposition_from_certificate,
    enumeration_size,
    min_slice_cover,
    rank_via_cover,
    slice_rank_exact,
    verify_certificate,
)
from .splitting import (
    AxisSplit,
    OptionChoice,
    SplitTrace,
    check_additivity,
    check_triangular,
    direct_sum_certificate,
    direct_sum_decomposition,
    levi_civita_obstruction_demo,
    split_certificate,
    split_certificate_distinguished_axis,
)
from .normalize import (
    NormalizedDecomposition,
    axis_projection,
    axis_projection_complement,
    dual_family,
    rebase_terms,
    triangular_normalize,
)

__version__ = "0.1.0"
