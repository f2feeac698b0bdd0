"""Transaction graph model, clustering, tracing, and exports."""

from .cluster import Cluster, FormationRule, cluster_common_input, cluster_membership
from .dot import to_dot
from .model import (
    ConflictingTxId,
    ConservationViolation,
    FundingMismatch,
    GraphError,
    SeedNotFound,
    Transaction,
    TxGraph,
    TxInput,
    TxOutput,
    UtxoEntry,
)
from .timeline import TimelineEvent, timeline
from .trace import (
    AddressMatch,
    AttributionResult,
    ChangeCall,
    ChangeReason,
    Direction,
    Hop,
    HopRole,
    Label,
    LabelSet,
    Terminal,
    TraceMode,
    UnattributedReason,
    identify_change,
    trace,
)

__all__ = [
    "AddressMatch",
    "AttributionResult",
    "ChangeCall",
    "ChangeReason",
    "Cluster",
    "ConflictingTxId",
    "ConservationViolation",
    "Direction",
    "FormationRule",
    "FundingMismatch",
    "GraphError",
    "Hop",
    "HopRole",
    "Label",
    "LabelSet",
    "SeedNotFound",
    "Terminal",
    "TimelineEvent",
    "TraceMode",
    "Transaction",
    "TxGraph",
    "TxInput",
    "TxOutput",
    "UnattributedReason",
    "UtxoEntry",
    "cluster_common_input",
    "cluster_membership",
    "identify_change",
    "timeline",
    "to_dot",
    "trace",
]
