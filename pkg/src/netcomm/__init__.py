"""Global testing for a small planted community in degree-corrected block models."""

__version__ = "0.1.0"

from .exceptions import (  # noqa: E402
    BudgetExceeded,
    DegenerateInput,
    EdgeListError,
    InfeasibleAlternative,
    InvalidParameters,
    NetcommError,
    NoFeasiblePair,
    SelfLoop,
    SinkhornError,
)
from .graph import Graph, degrees, edge_count, from_edge_list, read_edge_list  # noqa: E402
