"""Service matchmaking by typed-parameter similarity and bipartite max-flow."""

from .descriptor import (
    DataType,
    DescriptorError,
    Diagnostic,
    Parameter,
    ServiceProfile,
    parse_profile,
    serialize_profile,
    validate_profile,
)
from .flownet import (
    AugmentingPath,
    Flow,
    FlowNetwork,
    Strategy,
    augment,
    find_augmenting_path,
    flow_violations,
    max_flow,
    min_cut_value,
    residual_capacity,
)
from .matcher import (
    BipartiteSpec,
    MatchReport,
    build_bipartite,
    directional_similarity,
    match_services,
    to_flow_network,
)
from .registry import DiscoveryResult, Registry, RegistryError, add_profile, discover, load_registry
from .simrules import DEFAULT_TABLE, SimilarityTable, TableError, load_table, param_similarity

__version__ = "0.1.0"
