"""Trees on the Baire space, tree ideals, and exact-rational fusion certificates."""

from .errors import BudgetExhausted, ConstructionError, DomainError, InvariantViolation
from .families import (
    AdTree,
    DyadicPartition,
    ad_branch,
    ad_tree,
    ed_status,
    embed,
    finite_modify,
    make_partition,
    residue_embed,
    scale4,
)
from .fusion import (
    BoundCertificate,
    FusionState,
    base_certificate,
    complete_laver_decompose,
    fusion_init,
    fusion_limit,
    fusion_step,
    gdelta_construction,
    run_fusion,
    verify_bound,
    verify_conditions,
)
from .intervals import (
    IntervalUnion,
    RationalInterval,
    clopen,
    cover,
    measure,
    minkowski,
    normalize,
)
from .oracles import (
    Decision,
    PrefixSet,
    WitnessReport,
    avoid_subtree,
    bernstein_check,
    cone,
    cylinder,
    cylinder_set,
    measurability_witness,
    sigma_union_check,
)
from .trees import (
    FiniteTreeApprox,
    Kind,
    KindVerdict,
    LazyTree,
    binary_tree,
    classify,
    cylinder_tree,
    full_tree,
    prefix_tree,
    restrict,
    split_kind,
    stem,
    stem_trim,
    successors,
    truncate,
)

__version__ = "0.1.0"
