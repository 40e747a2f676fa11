"""Graph input and exact all-pairs shortest-walk closure.

Distances are exact rationals; unreachable pairs carry INF (the distinguished
infinity marker from orientw.rational), never a large finite sentinel.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .errors import GraphError
from .rational import INF, ZERO, as_fraction, is_finite


@dataclass(frozen=True)
class Graph:
    """Weighted graph given as an edge list.

    directed: when False every edge is usable in both directions.
    n: number of vertices, ids 0..n-1.
    edges: (u, v, w) triples with exact nonnegative rational weights.
    Parallel edges and self loops are tolerated; the closure collapses them.
    """

    directed: bool
    n: int
    edges: tuple

    @staticmethod
    def build(directed: bool, n: int, edges: Iterable) -> "Graph":
        norm = []
        for (u, v, w) in edges:
            norm.append((u, v, as_fraction(w)))
        return Graph(directed, n, tuple(norm))


@dataclass(frozen=True)
class Metric:
    """Immutable n x n table of exact shortest-walk distances.

    d[u][v] is a Fraction for reachable pairs and INF otherwise.  The table
    satisfies the triangle inequality by construction; symmetric inputs give
    a symmetric table.
    """

    directed: bool
    n: int
    d: tuple

    def dist(self, u: int, v: int):
        return self.d[u][v]

    def transposed(self) -> "Metric":
        n = self.n
        table = tuple(tuple(self.d[v][u] for v in range(n)) for u in range(n))
        return Metric(self.directed, n, table)

    def scaled(self, c: Fraction) -> "Metric":
        rows = []
        for row in self.d:
            rows.append(tuple(x * c if is_finite(x) else INF for x in row))
        return Metric(self.directed, self.n, tuple(rows))


def _check_graph(g: Graph) -> None:
    if g.n < 1:
        raise GraphError("graph needs at least one vertex, got n=%d" % g.n)
    for (u, v, w) in g.edges:
        if not (0 <= u < g.n) or not (0 <= v < g.n):
            raise GraphError("edge (%r, %r) uses a vertex id outside 0..%d" % (u, v, g.n - 1))
        if w < 0:
            raise GraphError("edge (%r, %r) has negative weight %s" % (u, v, w))


def metric_closure(g: Graph) -> Metric:
    """All-pairs shortest-walk distances of g, as an exact Metric.

    Raises GraphError on malformed input.  Cubic in n, which is fine at the
    instance sizes this package targets.
    """
    _check_graph(g)
    n = g.n
    d = [[INF] * n for _ in range(n)]
    for i in range(n):
        d[i][i] = ZERO
    for (u, v, w) in g.edges:
        if w < d[u][v]:
            d[u][v] = w
        if not g.directed and w < d[v][u]:
            d[v][u] = w
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if not is_finite(dik):
                continue
            row = d[i]
            for j in range(n):
                dkj = dk[j]
                if is_finite(dkj) and dik + dkj < row[j]:
                    row[j] = dik + dkj
    return Metric(g.directed, n, tuple(tuple(row) for row in d))


def validate_graph(g: Graph, source: Optional[int] = None) -> list:
    """Diagnostics for a graph: returns a list of human-readable strings.

    Reports negative weights, out-of-range vertex ids, and (when source is
    given) vertices unreachable from it.  An empty list means no findings.
    """
    findings = []
    if g.n < 1:
        findings.append("graph has no vertices")
        return findings
    ok_edges = []
    for (u, v, w) in g.edges:
        bad = False
        if not (0 <= u < g.n) or not (0 <= v < g.n):
            findings.append("edge (%r, %r) uses a vertex id outside 0..%d" % (u, v, g.n - 1))
            bad = True
        if w < 0:
            findings.append("edge (%r, %r) has negative weight %s" % (u, v, w))
            bad = True
        if not bad:
            ok_edges.append((u, v, w))
    if source is not None:
        if not (0 <= source < g.n):
            findings.append("source vertex %r outside 0..%d" % (source, g.n - 1))
        else:
            seen = {source}
            stack = [source]
            adj = {i: [] for i in range(g.n)}
            for (u, v, _w) in ok_edges:
                adj[u].append(v)
                if not g.directed:
                    adj[v].append(u)
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            for v in range(g.n):
                if v not in seen:
                    findings.append("vertex %d unreachable from %d" % (v, source))
    return findings


def complete_graph_of(metric: Metric) -> Graph:
    """Edge list over all finite off-diagonal entries; closure-idempotent."""
    edges = []
    for u in range(metric.n):
        for v in range(metric.n):
            if u != v and is_finite(metric.d[u][v]):
                edges.append((u, v, metric.d[u][v]))
    return Graph(True if metric.directed else False, metric.n, tuple(edges))
