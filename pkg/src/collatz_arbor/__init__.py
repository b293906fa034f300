"""Forward/inverse Collatz toolkit.

Exact forward orbits, the one-to-many inverse branch map with its sibling
streams, bounded materialization of the resulting rooted tree, and
machine checks of the structural identities behind it, all on plain
arbitrary-precision integers.
"""

from .arbor import (
    CoverageReport,
    NodeInfo,
    TruncatedArborescence,
    TruncationConfig,
    build,
    classify_edge,
    coverage,
    export,
    path_to,
)
from .core import BaseSequences, OddInteger, base_sequences, decompose, w_term, z_term
from .errors import (
    CapacityError,
    CollatzArborError,
    DuplicateVertexError,
    InconsistencyError,
    LeafParentError,
    MissingVertexError,
    NonEdgeError,
)
from .forward import (
    TrajectoryRecord,
    TrajectorySummary,
    f_step,
    trajectory,
    trajectory_summary,
    valuation2,
)
from .inverse import (
    MultiplesSequence,
    SiblingSet,
    adjacent_initials,
    branch_forms,
    g_branch,
    initial_vertex,
    multiples_sequence,
    sibling_gap,
    siblings,
)
from .verify import CollisionProbe, VerificationReport, check_collision_parity, run_suite

__version__ = "0.1.0"

__all__ = [
    "BaseSequences",
    "CapacityError",
    "CollatzArborError",
    "CollisionProbe",
    "CoverageReport",
    "DuplicateVertexError",
    "InconsistencyError",
    "LeafParentError",
    "MissingVertexError",
    "MultiplesSequence",
    "NodeInfo",
    "NonEdgeError",
    "OddInteger",
    "SiblingSet",
    "TrajectoryRecord",
    "TrajectorySummary",
    "TruncatedArborescence",
    "TruncationConfig",
    "VerificationReport",
    "adjacent_initials",
    "base_sequences",
    "branch_forms",
    "build",
    "check_collision_parity",
    "classify_edge",
    "coverage",
    "decompose",
    "export",
    "f_step",
    "g_branch",
    "initial_vertex",
    "multiples_sequence",
    "path_to",
    "run_suite",
    "sibling_gap",
    "siblings",
    "trajectory",
    "trajectory_summary",
    "valuation2",
    "w_term",
    "z_term",
]
