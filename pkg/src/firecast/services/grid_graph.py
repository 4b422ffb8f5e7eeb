"""Grid-graphs over the (2r+1)x(2r+1) context window."""

from functools import lru_cache
from typing import List, Literal, Set, Tuple

import numpy as np

from firecast.models.sample import GridGraph
from firecast.utils.errors import FirecastValidationError
from firecast.utils.logging_config import get_logger

logger = get_logger(__name__)

TiePolicy = Literal["lexicographic", "shell"]


def normalize_adjacency(adjacency: np.ndarray, with_self_loops: bool = True) -> np.ndarray:
    """D̃^{-1/2} (A + I) D̃^{-1/2} for a symmetric 0/1 adjacency without self-loops.

    With ``with_self_loops=False`` the identity is not added (isolated
    vertices then keep a zero row).

    Raises:
        FirecastValidationError: Non-square, asymmetric or self-looped input.
    """
    a = np.asarray(adjacency, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise FirecastValidationError(f"adjacency must be square, got {a.shape}", field="adjacency")
    if not np.array_equal(a, a.T):
        raise FirecastValidationError("adjacency must be symmetric", field="adjacency")
    if np.any(np.diag(a) != 0):
        raise FirecastValidationError("adjacency must have a zero diagonal", field="adjacency")
    a_hat = a + np.eye(a.shape[0]) if with_self_loops else a
    degree = a_hat.sum(axis=1)
    inv_sqrt = np.zeros_like(degree)
    nonzero = degree > 0
    inv_sqrt[nonzero] = 1.0 / np.sqrt(degree[nonzero])
    return inv_sqrt[:, None] * a_hat * inv_sqrt[None, :]


def _neighbours(vertex: int, size: int, count: int, tie_policy: TiePolicy) -> List[int]:
    """The ``count`` nearest other vertices; vertex ids are row-major."""
    row, col = divmod(vertex, size)
    candidates = []
    for other in range(size * size):
        if other == vertex:
            continue
        r2, c2 = divmod(other, size)
        candidates.append(((r2 - row) ** 2 + (c2 - col) ** 2, r2, c2, other))
    # squared distance, then (row, col)
    candidates.sort()
    if count <= 0:
        return []
    chosen = candidates[:count]
    if tie_policy == "shell":
        cutoff = chosen[-1][0]
        chosen = [c for c in candidates if c[0] <= cutoff]
    return [c[3] for c in chosen]


@lru_cache(maxsize=64)
def build_grid_graph(r: int, k: int, tie_policy: TiePolicy = "lexicographic") -> GridGraph:
    """Grid-graph of (2r+1)² vertices with k-nearest-neighbour edges.

    ``k`` counts the vertex itself, which joins through the self-loop of
    Â = A + I, so each vertex links to its k - 1 nearest others by Euclidean
    distance on grid indices. Edges are undirected (union of both
    directions). Ties at equal distance go by (row, col) order, or with
    ``tie_policy="shell"`` every vertex tied with the last one is included.

    Raises:
        FirecastValidationError: r < 0 or k outside [1, (2r+1)²].
    """
    if r < 0:
        raise FirecastValidationError(f"radius must be >= 0, got {r}", field="r")
    size = 2 * r + 1
    n = size * size
    if not 1 <= k <= n:
        raise FirecastValidationError(f"k must be in [1, {n}] for r={r}, got {k}", field="k")
    if tie_policy not in ("lexicographic", "shell"):
        raise FirecastValidationError(f"unknown tie policy '{tie_policy}'", field="tie_policy")

    edges: Set[Tuple[int, int]] = set()
    for vertex in range(n):
        for other in _neighbours(vertex, size, k - 1, tie_policy):
            edges.add((min(vertex, other), max(vertex, other)))

    adjacency = np.zeros((n, n))
    for i, j in edges:
        adjacency[i, j] = adjacency[j, i] = 1.0
    a_hat_norm = normalize_adjacency(adjacency)
    a_hat_norm.flags.writeable = False
    logger.debug(f"Built grid graph r={r}, k={k}, policy={tie_policy}: {n} vertices, {len(edges)} edges")
    return GridGraph(
        radius=r,
        k=k,
        n=n,
        edges=sorted(edges),
        a_hat_norm=a_hat_norm,
        center_index=n // 2,
    )


def edge_adjacency(graph: GridGraph) -> np.ndarray:
    """Dense 0/1 adjacency (no self-loops) of a grid-graph."""
    adjacency = np.zeros((graph.n, graph.n), dtype=np.int64)
    for i, j in graph.edges:
        adjacency[i, j] = adjacency[j, i] = 1
    return adjacency
