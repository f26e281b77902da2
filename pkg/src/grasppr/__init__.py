"""GRASP with path relinking for linear ordering and max-cut instances."""

__version__ = "0.1.0"

from .bench_io import load_instance
from .construction import CARDINALITY, VALUE, RclConfig, construct
from .core import (
    PartitionSolution,
    PermutationSolution,
    ProblemInstance,
    RandomStream,
    Solution,
    delta,
    evaluate,
    symmetric_difference,
)
from .drivers import VARIANTS, RunConfig, RunReport, run
from .elite_set import AddResult, EliteSet
from .local_search import Move, SearchDepth, local_search
from .lop import LopInstance
from .maxcut import MaxCutInstance
from .path_relinking import (
    PathTrace,
    PrConfig,
    PrStep,
    exterior_relink,
    multi_parent_relink,
    relink,
)

__all__ = [
    "AddResult",
    "CARDINALITY",
    "EliteSet",
    "LopInstance",
    "MaxCutInstance",
    "Move",
    "PartitionSolution",
    "PathTrace",
    "PermutationSolution",
    "PrConfig",
    "PrStep",
    "ProblemInstance",
    "RandomStream",
    "RclConfig",
    "RunConfig",
    "RunReport",
    "SearchDepth",
    "Solution",
    "VALUE",
    "VARIANTS",
    "construct",
    "delta",
    "evaluate",
    "exterior_relink",
    "load_instance",
    "local_search",
    "multi_parent_relink",
    "relink",
    "run",
    "symmetric_difference",
]
