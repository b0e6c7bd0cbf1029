"""Dynamic shortest-paths toolkit for unweighted graphs.

Algebraic core: a dynamic truncated-polynomial matrix inverse whose
entry min-degrees encode hop distances, with witness-based path
reporting.  On top of it: exact and approximate fully dynamic APSP,
combinatorial and algebraic spanners, a dynamic Steiner tree, and
hard-instance generators with a replay harness.
"""

from .apsp import ApproxApsp, HittingSetApsp, StitchFailure
from .gadgets import (
    BfsProvider,
    GadgetScript,
    HarnessReport,
    OuMvInstance,
    ParamDomain,
    SpannerBfsProvider,
    gen_kcycle,
    gen_oumv_decremental,
    gen_oumv_fully,
    gen_oumv_incremental,
    harness_run,
    kcycle_exists,
)
from .graph import (
    AddTerminal,
    DeleteEdge,
    DistQuery,
    DynamicGraph,
    IllegalUpdate,
    InsertEdge,
    PathQuery,
    PhaseMark,
    RemoveTerminal,
    UpdateScript,
    all_pairs_dist,
    apply_update,
    bfs_dist,
    bfs_dist_bounded,
    parse_script,
    serialize_script,
    validate_path,
)
from .estree import DECREMENTAL, INCREMENTAL, EsTree, ModeViolation
from .inverse import DEFAULT_KAPPA, InverseState, NonUnitPivot, SubmatrixView
from .polymat import (
    DimMismatch,
    EncodedAdjacency,
    NotNilpotentConstant,
    PolyMatrix,
    encode,
    mat_add,
    mat_mul,
    series_inverse,
)
from .product import HookOrderViolation, ProductState
from .reporter import BEYOND, NoWitnessFound, PathReporter
from .ring import (
    DEFAULT_PRIME,
    FieldParams,
    NonUnit,
    ParamMismatch,
    TruncPoly,
    min_degree,
    poly_add,
    poly_inv,
    poly_mul,
    poly_neg,
    poly_scale,
    poly_sub,
)
from .spanner_alg import AlgSpannerState, alg_active, alg_init, alg_update
from .spanner_comb import (
    REBUILD,
    RebuildSpanner,
    SpannerState,
    sp_current,
    sp_init,
    sp_rebuild_update,
    sp_update,
)
from .steiner import (
    Disconnected,
    SteinerState,
    SteinerTree,
    TerminalStateError,
    steiner_add_terminal,
    steiner_edge_update,
    steiner_remove_terminal,
)

__version__ = "0.1.0"
