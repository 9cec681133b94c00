"""Graph metrics on snapshots of the live overlay.

Clustering, average path length and diameter use the undirected projection
(links carry traffic both ways). Robustness sweeps cover both weakly and
strongly connected components.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import TYPE_CHECKING, Literal

import numpy as np
from scipy import sparse, stats
from scipy.sparse.csgraph import connected_components, shortest_path

from .errors import ConfigError
from .protocols import NodeId

if TYPE_CHECKING:
    from .overlay import OverlayNetwork
    from .rng import RngStream


@dataclass(frozen=True)
class GraphSnapshot:
    """Directed adjacency over alive nodes; ``ids[i]`` is the node of row ``i``."""

    cycle: int
    ids: np.ndarray
    adjacency: sparse.csr_matrix

    @classmethod
    def from_edges(
        cls, ids: list[NodeId], edges: list[tuple[NodeId, NodeId]], cycle: int = 0
    ) -> GraphSnapshot:
        ids = sorted(set(ids))
        index = {node: i for i, node in enumerate(ids)}
        pairs = {(index[u], index[v]) for u, v in edges if u != v and u in index and v in index}
        rows = [u for u, _ in pairs]
        cols = [v for _, v in pairs]
        adjacency = sparse.csr_matrix(
            (np.ones(len(pairs), dtype=np.int32), (rows, cols)), shape=(len(ids), len(ids))
        )
        return cls(cycle=cycle, ids=np.asarray(ids, dtype=np.int64), adjacency=adjacency)

    @property
    def node_count(self) -> int:
        return len(self.ids)

    @property
    def edge_count(self) -> int:
        return int(self.adjacency.nnz)

    @property
    def in_degrees(self) -> np.ndarray:
        return np.asarray(self.adjacency.sum(axis=0)).ravel().astype(np.int64)

    @property
    def out_degrees(self) -> np.ndarray:
        return np.asarray(self.adjacency.sum(axis=1)).ravel().astype(np.int64)

    def undirected(self) -> sparse.csr_matrix:
        sym = (self.adjacency + self.adjacency.T).astype(np.float64).tocsr()
        sym.data[:] = 1.0
        return sym

    def edges(self) -> list[tuple[NodeId, NodeId]]:
        coo = self.adjacency.tocoo()
        return sorted((int(self.ids[u]), int(self.ids[v])) for u, v in zip(coo.row, coo.col))


def take_snapshot(net: OverlayNetwork) -> GraphSnapshot:
    """Live overlay: alive nodes, edges to dead ids dropped."""
    edges = [
        (node, peer)
        for node in net.alive_ids()
        for peer in net.nodes[node].out_neighbors()
        if peer in net.alive
    ]
    return GraphSnapshot.from_edges(net.alive_ids(), edges, cycle=net.cycle)


def _histogram(degrees: np.ndarray) -> dict[int, int]:
    return dict(sorted(Counter(int(d) for d in degrees).items()))


def degree_distributions(snap: GraphSnapshot) -> tuple[dict[int, int], dict[int, int]]:
    """In- and out-degree histograms (degree -> node count)."""
    return _histogram(snap.in_degrees), _histogram(snap.out_degrees)


def reference_degree_pmf(
    kind: Literal["random", "powerlaw"],
    *,
    n: int | None = None,
    p: float | None = None,
    exponent: float | None = None,
    k_min: int = 1,
    k_max: int | None = None,
) -> dict[int, float]:
    """Reference degree distributions to lay over empirical histograms.

    ``random``: binomial over ``k = 0..n-1`` with edge probability ``p``.
    ``powerlaw``: ``C * k**-exponent`` normalised over ``[k_min, k_max]``.
    """
    if kind == "random":
        if n is None or n < 1 or p is None or not 0.0 <= p <= 1.0:
            raise ConfigError("binomial pmf needs n >= 1 and p in [0, 1]")
        k = np.arange(n)
        return dict(zip(k.tolist(), stats.binom.pmf(k, n - 1, p).tolist()))
    if kind == "powerlaw":
        if exponent is None or exponent <= 1.0:
            raise ConfigError("power-law pmf needs exponent > 1")
        if k_max is None or not 1 <= k_min <= k_max:
            raise ConfigError("power-law pmf needs 1 <= k_min <= k_max")
        k = np.arange(k_min, k_max + 1, dtype=float)
        weights = k**-exponent
        return dict(zip(k.astype(int).tolist(), (weights / weights.sum()).tolist()))
    raise ConfigError(f"unknown reference distribution {kind!r}")


def clustering_coefficient(snap: GraphSnapshot) -> tuple[dict[NodeId, float], float]:
    """Per-node ``C_i = 2 e_i / (k_i (k_i - 1))`` (0 when ``k_i < 2``) and their mean."""
    if snap.node_count == 0:
        return {}, 0.0
    und = snap.undirected()
    degree = np.asarray(und.sum(axis=1)).ravel().astype(float)
    triangles = np.asarray((und @ und).multiply(und).sum(axis=1)).ravel() / 2.0
    possible = degree * (degree - 1.0)
    local = np.divide(2.0 * triangles, possible, out=np.zeros_like(possible), where=possible > 0)
    per_node = {int(node): float(value) for node, value in zip(snap.ids, local)}
    return per_node, float(local.mean())


def _largest_component(labels: np.ndarray) -> tuple[int, int]:
    """(label, size) of the largest component; ties go to the smallest label."""
    counts = np.bincount(labels)
    label = int(np.argmax(counts))
    return label, int(counts[label])


@dataclass(frozen=True)
class PathMetrics:
    average_path_length: float
    diameter: int
    component_size: int
    degenerate: bool


def path_metrics(snap: GraphSnapshot) -> PathMetrics:
    """All-pairs BFS on the undirected projection of the largest weak component."""
    if snap.node_count < 2:
        return PathMetrics(0.0, 0, snap.node_count, True)
    und = snap.undirected()
    _, labels = connected_components(und, directed=False)
    label, size = _largest_component(labels)
    if size < 2:
        return PathMetrics(0.0, 0, size, True)
    members = np.flatnonzero(labels == label)
    component = und[members][:, members]
    dist = shortest_path(component, method="D", directed=False, unweighted=True)
    total = int(dist.sum())
    return PathMetrics(
        average_path_length=total / (size * (size - 1)),
        diameter=int(dist.max()),
        component_size=size,
        degenerate=False,
    )


def largest_component_size(adjacency: sparse.csr_matrix, component: Literal["weak", "strong"]) -> int:
    if adjacency.shape[0] == 0:
        return 0
    _, labels = connected_components(adjacency, directed=True, connection=component)
    return _largest_component(labels)[1]


def removal_order(
    snap: GraphSnapshot, order: Literal["random", "targeted"], rng: RngStream | None = None
) -> list[int]:
    """Row indices in removal order.

    Targeted: descending in-degree of the initial snapshot, ties by ascending id.
    """
    if order == "targeted":
        return np.lexsort((snap.ids, -snap.in_degrees)).tolist()
    if order == "random":
        if rng is None:
            raise ConfigError("random removal order needs a random stream")
        return rng.permutation(list(range(snap.node_count)))
    raise ConfigError(f"unknown removal order {order!r}")


def robustness_sweep(
    snap: GraphSnapshot,
    order: Literal["random", "targeted"],
    component: Literal["weak", "strong"],
    rng: RngStream | None = None,
) -> list[tuple[int, int]]:
    """Remove nodes one at a time; ``(removed, nodes outside the largest component)``."""
    if component not in ("weak", "strong"):
        raise ConfigError(f"unknown component kind {component!r}")
    sequence = removal_order(snap, order, rng)
    keep = np.ones(snap.node_count, dtype=bool)
    series = []
    for removed in range(snap.node_count + 1):
        if removed:
            keep[sequence[removed - 1]] = False
        remaining = int(keep.sum())
        sub = snap.adjacency[keep][:, keep]
        series.append((removed, remaining - largest_component_size(sub, component)))
    return series


@dataclass(frozen=True)
class MetricsSnapshot:
    cycle: int
    in_degree_histogram: dict[int, int]
    out_degree_histogram: dict[int, int]
    clustering: float
    average_path_length: float
    diameter: int
    largest_weak_component: int
    largest_strong_component: int
    alive: int
    edges: int
    max_in_degree: int
    hub_count: int
    degenerate: bool

    def scalar_rows(self) -> list[tuple[str, float]]:
        """(metric, value) pairs for the long-format time series."""
        return [
            ("alive", float(self.alive)),
            ("average_path_length", self.average_path_length),
            ("clustering", self.clustering),
            ("degenerate", float(self.degenerate)),
            ("diameter", float(self.diameter)),
            ("edges", float(self.edges)),
            ("hub_count", float(self.hub_count)),
            ("largest_strong_component", float(self.largest_strong_component)),
            ("largest_weak_component", float(self.largest_weak_component)),
            ("max_in_degree", float(self.max_in_degree)),
        ]


def compute_metrics(snap: GraphSnapshot) -> MetricsSnapshot:
    in_hist, out_hist = degree_distributions(snap)
    _, clustering = clustering_coefficient(snap)
    paths = path_metrics(snap)
    in_degrees = snap.in_degrees
    return MetricsSnapshot(
        cycle=snap.cycle,
        in_degree_histogram=in_hist,
        out_degree_histogram=out_hist,
        clustering=clustering,
        average_path_length=paths.average_path_length,
        diameter=paths.diameter,
        largest_weak_component=largest_component_size(snap.adjacency, "weak"),
        largest_strong_component=largest_component_size(snap.adjacency, "strong"),
        alive=snap.node_count,
        edges=snap.edge_count,
        max_in_degree=int(in_degrees.max()) if snap.node_count else 0,
        hub_count=int((in_degrees == snap.node_count - 1).sum()) if snap.node_count > 1 else 0,
        degenerate=paths.degenerate,
    )


def log_binned_counts(histogram: dict[int, int], base: float = 2.0) -> list[tuple[int, int, int]]:
    """``(low, high, count)`` per logarithmic degree bin ``[base**i, base**(i+1))``; degree 0 excluded."""
    top = max((d for d, n in histogram.items() if d > 0 and n > 0), default=0)
    bins = []
    low = 1
    while low <= top:
        high = max(low + 1, int(np.ceil(low * base)))
        count = sum(n for d, n in histogram.items() if low <= d < high)
        bins.append((low, high, count))
        low = high
    return bins
