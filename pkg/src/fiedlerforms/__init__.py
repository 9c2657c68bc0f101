"""Block-symmetric Fiedler-like linearizations of matrix polynomials and their four structured families."""

from .blockpencil import (
    BlockPencil,
    BlockPermutation,
    block_transpose,
    congruence,
    is_block_symmetric,
)
from .congruence import (
    CongruenceCertificate,
    brute_force_oracle,
    gfp_congruence,
    main_permutation,
)
from .families import (
    FamilyForm,
    as_condition,
    build_family,
    linearization_conditions,
    skeleton,
)
from .fiedler import GfprSpec, build_gfpr, gfp_T, simple_fpr
from .matpoly import MatrixPolynomial
from .tuples import csf, heads, index_type, satisfies_sip
from .verify import check_strong_linearization, frobenius_companion

__all__ = [
    "BlockPencil",
    "BlockPermutation",
    "CongruenceCertificate",
    "FamilyForm",
    "GfprSpec",
    "MatrixPolynomial",
    "as_condition",
    "block_transpose",
    "brute_force_oracle",
    "build_family",
    "build_gfpr",
    "check_strong_linearization",
    "congruence",
    "csf",
    "frobenius_companion",
    "gfp_T",
    "gfp_congruence",
    "heads",
    "index_type",
    "is_block_symmetric",
    "linearization_conditions",
    "main_permutation",
    "satisfies_sip",
    "simple_fpr",
    "skeleton",
]
