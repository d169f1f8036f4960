"""Structural averages, label repair, and uncertainty reports for ensembles
of labeled merge trees."""

from .center import CenterResult, StarSummary, ensemble_summary, one_center_matrix, one_center_tree
from .consistency import (
    ConsistencyReport,
    FiveNumber,
    VariationalSummary,
    consistency_report,
    edge_consistency,
    statistical_consistency,
    variational_consistency,
    vertex_consistency,
    weighted_cosine,
)
from .documents import parse_tree, serialize_tree
from .errors import (
    AgreementError,
    ConfigurationError,
    DocumentError,
    InputError,
    PivotError,
    TreeToolkitError,
)
from .geodesic import (
    GeodesicPath,
    center_embedding,
    geodesic_frames,
    linear_embedding_frames,
)
from .labeling import (
    AssignmentProblem,
    RelabelReport,
    complete_internal_labels,
    harmonize,
    relabel_disagreement,
    relabel_partial,
    select_pivot,
    solve_assignment,
)
from .matrices import (
    SymMatrix,
    induced_matrix,
    interleaving_distance,
    is_ultra,
    is_valid,
    merge_tree_of_matrix,
)
from .scalarfield import (
    CriticalRecord,
    ScalarGrid,
    extract_merge_tree,
    gaussian_mixture_grid,
    parse_grid,
)
from .trees import (
    INF,
    Ensemble,
    LabeledMergeTree,
    Labeling,
    MergeTree,
    Violation,
    blended_distance,
    euclidean_distance,
    lca,
    tree_distance,
    validate_merge_tree,
)

__version__ = "0.1.0"

__all__ = [
    "INF",
    "AgreementError",
    "AssignmentProblem",
    "CenterResult",
    "ConfigurationError",
    "ConsistencyReport",
    "CriticalRecord",
    "DocumentError",
    "Ensemble",
    "FiveNumber",
    "GeodesicPath",
    "InputError",
    "LabeledMergeTree",
    "Labeling",
    "MergeTree",
    "PivotError",
    "RelabelReport",
    "ScalarGrid",
    "StarSummary",
    "SymMatrix",
    "TreeToolkitError",
    "VariationalSummary",
    "Violation",
    "blended_distance",
    "center_embedding",
    "complete_internal_labels",
    "consistency_report",
    "edge_consistency",
    "ensemble_summary",
    "euclidean_distance",
    "extract_merge_tree",
    "gaussian_mixture_grid",
    "geodesic_frames",
    "harmonize",
    "induced_matrix",
    "interleaving_distance",
    "is_ultra",
    "is_valid",
    "lca",
    "linear_embedding_frames",
    "merge_tree_of_matrix",
    "one_center_matrix",
    "one_center_tree",
    "parse_grid",
    "parse_tree",
    "relabel_disagreement",
    "relabel_partial",
    "select_pivot",
    "serialize_tree",
    "solve_assignment",
    "statistical_consistency",
    "tree_distance",
    "validate_merge_tree",
    "variational_consistency",
    "vertex_consistency",
    "weighted_cosine",
]
