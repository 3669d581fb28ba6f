"""Jordan shapes of mutually annihilating nilpotent matrix pairs.

Decide which pairs of Jordan forms (sh A, sh B) admit nilpotent A, B with
AB = BA = 0, enumerate the full shape sets, construct explicit witnesses,
reduce concrete matrices to the corner normal form, and verify everything
against exhaustive or sampled brute force over exact fields.
"""

from .fields import GF, GF2, GF3, QQ, FieldSpec, parse_field
from .matrix import ExactMatrix, NotNilpotent, block_matrix, jordan_matrix, jordanize_nilpotent
from .partitions import (
    CoreSplit,
    Partition,
    canonical_sorted,
    conjugate,
    enumerate_partitions,
    format_partition,
    from_core,
    ord_parts,
    parse_partition,
    split_core,
)
from .structure import (
    BlockGrid,
    BudgetExceeded,
    FreeCoordinates,
    candidate_at,
    candidate_count,
    enumerate_candidates,
    free_coordinates,
    is_annihilating_form,
    is_commuting_form,
    matches_annihilating_pattern,
    matches_commuting_pattern,
    sample_candidate,
    sample_nilpotent_candidate,
)
from .reduction import (
    PreconditionViolated,
    ReducedPair,
    ReductionError,
    elementary_conjugation,
    is_reduced,
    reduce,
)
from .jordan import (
    ChainProfile,
    InternalInconsistency,
    assemble_power,
    chain_profile,
    power_blocks,
    rank_formula,
    shape_of_reduced,
)
from .census import (
    VerifyReport,
    exhaustive_shape_census,
    reference_shape_census,
    sampled_shape_census,
    verify_shapes,
)
from .characterize import (
    Certificate,
    ConstructionMismatch,
    DualCheckMismatch,
    Incompatible,
    WitnessPair,
    compatible,
    component_pairs,
    enumerate_shapes,
    enumerate_vnab,
    witness,
)

__version__ = "0.1.0"
