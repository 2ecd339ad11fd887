"""Country-level co-authorship network and its structural metrics.

Nodes are country labels; two countries are linked with weight equal to the
number of distinct papers they co-authored. Countries appearing only on
single-country papers stay in the graph as isolates. Shortest paths are
hop-based (weights ignored).
"""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

from .chronology import YearRange
from .corpus import Corpus
from .errors import PajekFormatError

CLUSTERING_LOCAL_AVERAGE = "average_local"
CLUSTERING_TRANSITIVITY = "transitivity"


@dataclass
class CountryGraph:
    """Weighted undirected graph over country labels.

    Edge keys are sorted pairs; the node set always contains every edge
    endpoint. The time window is provenance and excluded from equality.
    """

    nodes: frozenset[str]
    weights: dict[tuple[str, str], int]
    window: YearRange | None = field(default=None, compare=False)

    def __post_init__(self):
        normalized: dict[tuple[str, str], int] = {}
        for (a, b), weight in self.weights.items():
            if a == b:
                raise ValueError(f"self-loop on {a!r}")
            if weight < 1:
                raise ValueError(f"edge weight must be >= 1, got {weight}")
            key = (a, b) if a < b else (b, a)
            normalized[key] = normalized.get(key, 0) + weight
        self.weights = normalized
        endpoints = {n for pair in normalized for n in pair}
        self.nodes = frozenset(self.nodes) | endpoints

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)

    @property
    def n_edges(self) -> int:
        return len(self.weights)

    def adjacency(self) -> dict[str, set[str]]:
        adj: dict[str, set[str]] = {node: set() for node in self.nodes}
        for a, b in self.weights:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def degree(self, node: str) -> int:
        return sum(1 for pair in self.weights if node in pair)


@dataclass(frozen=True)
class NetworkMetrics:
    """Structural summary of a country graph.

    avg_path and diameter are None when the giant component has fewer than
    two nodes; clustering_defined is False when no node has degree >= 2
    (clustering is then reported as 0).
    """

    n_nodes: int
    n_edges: int
    mean_degree: float
    degree_distribution: dict[int, int]
    clustering: float
    clustering_defined: bool
    components: tuple[tuple[str, ...], ...]
    giant_fraction: float
    avg_path: float | None
    diameter: int | None
    isolates: int

    def to_dict(self) -> dict:
        return {
            "n_nodes": self.n_nodes,
            "n_edges": self.n_edges,
            "mean_degree": self.mean_degree,
            "degree_distribution": {str(d): c for d, c in sorted(self.degree_distribution.items())},
            "clustering": self.clustering,
            "clustering_defined": self.clustering_defined,
            "components": [list(c) for c in self.components],
            "giant_fraction": self.giant_fraction,
            "avg_path": self.avg_path,
            "diameter": self.diameter,
            "isolates": self.isolates,
        }


def build_network(corpus: Corpus, window: YearRange | None = None) -> CountryGraph:
    """Accumulate co-authorship links from records inside the window.

    Each record contributes +1 weight to every unordered pair of its
    distinct countries; a single-country record only adds the node.
    """
    nodes: set[str] = set()
    weights: dict[tuple[str, str], int] = {}
    for record in corpus:
        if window is not None and record.year not in window:
            continue
        countries = sorted(set(record.countries))
        nodes.update(countries)
        for pair in combinations(countries, 2):
            weights[pair] = weights.get(pair, 0) + 1
    return CountryGraph(nodes=frozenset(nodes), weights=weights, window=window)


def _components(graph: CountryGraph) -> list[tuple[str, ...]]:
    adj = graph.adjacency()
    seen: set[str] = set()
    components: list[tuple[str, ...]] = []
    for start in sorted(graph.nodes):
        if start in seen:
            continue
        queue = deque([start])
        seen.add(start)
        members = [start]
        while queue:
            node = queue.popleft()
            for neighbor in adj[node]:
                if neighbor not in seen:
                    seen.add(neighbor)
                    members.append(neighbor)
                    queue.append(neighbor)
        components.append(tuple(sorted(members)))
    # Largest first; ties go to the component with the smallest member.
    components.sort(key=lambda c: (-len(c), c[0]))
    return components


def _bfs_distances(adj: dict[str, set[str]], source: str) -> dict[str, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        node = queue.popleft()
        for neighbor in adj[node]:
            if neighbor not in dist:
                dist[neighbor] = dist[node] + 1
                queue.append(neighbor)
    return dist


def _neighbor_links(adj: dict[str, set[str]], node: str) -> int:
    neighbors = sorted(adj[node])
    links = 0
    for i, a in enumerate(neighbors):
        for b in neighbors[i + 1:]:
            if b in adj[a]:
                links += 1
    return links


def _local_clustering(adj: dict[str, set[str]], node: str) -> float:
    degree = len(adj[node])
    return 2.0 * _neighbor_links(adj, node) / (degree * (degree - 1))


def network_metrics(graph: CountryGraph, *,
                    clustering: str = CLUSTERING_LOCAL_AVERAGE,
                    include_isolates_in_mean_degree: bool = True) -> NetworkMetrics:
    """Compute degree, clustering, component, and distance metrics.

    The default clustering is the mean local coefficient over nodes of
    degree >= 2 (1 on complete graphs, 0 on trees); the transitivity
    variant (global triangle ratio) is available behind the flag. Average
    path length and diameter cover unordered pairs inside the giant
    component only.
    """
    adj = graph.adjacency()
    degrees = {node: len(adj[node]) for node in graph.nodes}
    n = graph.n_nodes

    degree_distribution: dict[int, int] = {}
    for degree in degrees.values():
        degree_distribution[degree] = degree_distribution.get(degree, 0) + 1
    isolates = degree_distribution.get(0, 0)

    if include_isolates_in_mean_degree:
        degree_pool = list(degrees.values())
    else:
        degree_pool = [d for d in degrees.values() if d > 0]
    mean_degree = sum(degree_pool) / len(degree_pool) if degree_pool else 0.0

    eligible = sorted(node for node, degree in degrees.items() if degree >= 2)
    if clustering == CLUSTERING_LOCAL_AVERAGE:
        if eligible:
            coefficient = math.fsum(_local_clustering(adj, v) for v in eligible) / len(eligible)
            clustering_value, clustering_defined = coefficient, True
        else:
            clustering_value, clustering_defined = 0.0, False
    elif clustering == CLUSTERING_TRANSITIVITY:
        # Sum of per-node neighbor links counts each triangle three times,
        # matching the 3*triangles numerator of the global ratio.
        closed = sum(_neighbor_links(adj, v) for v in eligible)
        triads = sum(d * (d - 1) // 2 for d in degrees.values())
        if triads:
            clustering_value, clustering_defined = closed / triads, True
        else:
            clustering_value, clustering_defined = 0.0, False
    else:
        raise ValueError(f"unknown clustering variant: {clustering}")

    components = tuple(_components(graph))
    giant = components[0] if components else ()
    giant_fraction = len(giant) / n if n else 0.0

    avg_path: float | None = None
    diameter: int | None = None
    if len(giant) >= 2:
        giant_set = set(giant)
        total = 0
        longest = 0
        for source in giant:
            for target, distance in _bfs_distances(adj, source).items():
                if target in giant_set and target != source:
                    total += distance
                    if distance > longest:
                        longest = distance
        pairs = len(giant) * (len(giant) - 1) // 2
        avg_path = (total // 2) / pairs
        diameter = longest

    return NetworkMetrics(
        n_nodes=n,
        n_edges=graph.n_edges,
        mean_degree=mean_degree,
        degree_distribution=degree_distribution,
        clustering=clustering_value,
        clustering_defined=clustering_defined,
        components=components,
        giant_fraction=giant_fraction,
        avg_path=avg_path,
        diameter=diameter,
        isolates=isolates,
    )


def windowed_metrics(corpus: Corpus, window_len: int, step: int,
                     **metric_kwargs) -> list[tuple[YearRange, NetworkMetrics]]:
    """Build and measure the network over sliding windows of the corpus span."""
    if window_len < 1:
        raise ValueError("window_len must be >= 1")
    if step < 1:
        raise ValueError("step must be >= 1")
    span = corpus.year_span()
    if span is None:
        return []
    results = []
    for start in range(span[0], span[1] + 1, step):
        window = YearRange(start, start + window_len - 1)
        graph = build_network(corpus, window)
        results.append((window, network_metrics(graph, **metric_kwargs)))
    return results


def _quote(label: str) -> str:
    return '"' + label.replace('"', '""') + '"'


def export_pajek(graph: CountryGraph, weighted: bool = True) -> str:
    """Render the graph as a Pajek .net file.

    Vertices are numbered 1..n in lexicographic label order; edge lines are
    ``i j w`` with i < j (weights dropped when ``weighted`` is off). The
    output is a fixed point of export -> parse -> export.
    """
    labels = sorted(graph.nodes)
    index = {label: i + 1 for i, label in enumerate(labels)}
    lines = [f"*Vertices {len(labels)}"]
    lines.extend(f"{index[label]} {_quote(label)}" for label in labels)
    lines.append("*Edges")
    edges = sorted((index[a], index[b], w) for (a, b), w in graph.weights.items())
    for i, j, weight in edges:
        lines.append(f"{i} {j} {weight}" if weighted else f"{i} {j}")
    return "\n".join(lines) + "\n"


_VERTEX_RE = re.compile(r'^(\d+)\s+"((?:[^"]|"")*)"\s*$')


def parse_pajek(text: str) -> CountryGraph:
    """Parse a Pajek .net file produced by :func:`export_pajek`."""
    lines = text.splitlines()
    if not lines or not lines[0].lower().startswith("*vertices"):
        raise PajekFormatError("missing *Vertices header")
    try:
        n_vertices = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise PajekFormatError("malformed *Vertices header") from None

    labels: dict[int, str] = {}
    pos = 1
    while pos < len(lines) and not lines[pos].startswith("*"):
        match = _VERTEX_RE.match(lines[pos])
        if not match:
            raise PajekFormatError(f"malformed vertex line: {lines[pos]!r}")
        labels[int(match.group(1))] = match.group(2).replace('""', '"')
        pos += 1
    if len(labels) != n_vertices:
        raise PajekFormatError(
            f"expected {n_vertices} vertices, found {len(labels)}")

    if pos >= len(lines) or lines[pos].lower() not in ("*edges", "*arcs"):
        raise PajekFormatError("missing *Edges section")
    pos += 1

    weights: dict[tuple[str, str], int] = {}
    for line in lines[pos:]:
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise PajekFormatError(f"malformed edge line: {line!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
            weight = int(parts[2]) if len(parts) == 3 else 1
        except ValueError:
            raise PajekFormatError(f"malformed edge line: {line!r}") from None
        if i not in labels or j not in labels:
            raise PajekFormatError(f"edge references unknown vertex: {line!r}")
        a, b = labels[i], labels[j]
        key = (a, b) if a < b else (b, a)
        weights[key] = weights.get(key, 0) + weight
    return CountryGraph(nodes=frozenset(labels.values()), weights=weights)
