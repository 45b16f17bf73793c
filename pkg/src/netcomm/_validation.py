"""Input coercion helpers, in the spirit of ``sklearn.utils.check_array``."""

import numbers

import numpy as np
import scipy.sparse as sp

from .graph import Graph


def check_graph(X):
    """Coerce ``X`` to a :class:`Graph`.

    Accepts a Graph, a dense or sparse 0/1 adjacency, or a networkx-like
    object exposing ``number_of_nodes`` and ``edges``.
    """
    if isinstance(X, Graph):
        return X
    if sp.issparse(X) or isinstance(X, np.ndarray) or isinstance(X, list):
        return Graph.from_adjacency(X if sp.issparse(X) else np.asarray(X))
    if hasattr(X, "number_of_nodes") and hasattr(X, "edges"):
        nodes = list(X.nodes())
        index = {v: k for k, v in enumerate(nodes)}
        return Graph(len(nodes), ((index[u], index[v]) for u, v in X.edges()),
                     labels=[str(v) for v in nodes])
    raise TypeError(f"cannot interpret {type(X).__name__} as a graph")


def check_level(kappa, name="level"):
    if not isinstance(kappa, numbers.Real) or not 0.0 < float(kappa) < 1.0:
        raise ValueError(f"{name} must lie in (0, 1), got {kappa!r}")
    return float(kappa)


def check_positive_int(x, name, minimum=1):
    if isinstance(x, bool) or not isinstance(x, numbers.Integral) or x < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {x!r}")
    return int(x)


def check_seed(seed):
    if isinstance(seed, bool) or not isinstance(seed, numbers.Integral):
        raise TypeError(f"seed must be an integer, got {type(seed).__name__}")
    if not 0 <= seed < 2**64:
        raise ValueError("seed must fit in an unsigned 64-bit integer")
    return int(seed)
