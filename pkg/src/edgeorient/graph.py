"""Core graph and orientation types.

An :class:`UndirectedGraph` is an immutable simple graph in CSR form with
global edge identifiers.  An :class:`Orientation` assigns one direction bit
per edge and keeps a per-vertex out-degree tally; the solvers mutate it
through :func:`flip_path` and direct bit flips.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass


class UndirectedGraph:
    """Immutable simple undirected graph with dense 0..n-1 vertex ids.

    Adjacency is stored flat: the incidences of vertex ``v`` occupy positions
    ``xadj[v]:xadj[v+1]`` of ``adj_vertex`` (the neighbor) and ``adj_edge``
    (the global edge id).  Every edge id appears exactly twice, once per
    endpoint, and ``edge_u[e] < edge_v[e]`` always holds.
    """

    __slots__ = (
        "n", "m", "xadj", "adj_vertex", "adj_edge", "edge_u", "edge_v",
        "self_loops_dropped", "duplicates_dropped",
    )

    def __init__(self, n, edges, self_loops_dropped=0, duplicates_dropped=0):
        from itertools import accumulate, chain

        self.n = n
        m = self.m = len(edges)
        if m:
            eu_t, ev_t = zip(*edges)
        else:
            eu_t = ev_t = ()
        self.edge_u = array("i", eu_t)
        self.edge_v = array("i", ev_t)
        deg = [0] * n
        for u in eu_t:
            deg[u] += 1
        for v in ev_t:
            deg[v] += 1
        xadj = array("i", chain((0,), accumulate(deg)))
        pos = xadj.tolist()
        adj_vertex = array("i", bytes(8 * m))
        adj_edge = array("i", bytes(8 * m))
        e = 0
        for u, v in edges:
            p = pos[u]
            adj_vertex[p] = v
            adj_edge[p] = e
            pos[u] = p + 1
            p = pos[v]
            adj_vertex[p] = u
            adj_edge[p] = e
            pos[v] = p + 1
            e += 1
        self.xadj = xadj
        self.adj_vertex = adj_vertex
        self.adj_edge = adj_edge
        self.self_loops_dropped = self_loops_dropped
        self.duplicates_dropped = duplicates_dropped

    def degree(self, v):
        return self.xadj[v + 1] - self.xadj[v]

    def neighbors(self, v):
        """Yield (neighbor, edge id) pairs of v in input order."""
        xadj = self.xadj
        av = self.adj_vertex
        ae = self.adj_edge
        for i in range(xadj[v], xadj[v + 1]):
            yield av[i], ae[i]

    def endpoints(self, e):
        return self.edge_u[e], self.edge_v[e]

    def density(self):
        """Edge-to-vertex ratio m/n of the whole graph (0 for n == 0)."""
        return self.m / self.n if self.n else 0.0

    def __repr__(self):
        return f"UndirectedGraph(n={self.n}, m={self.m})"


def build_graph(edge_pairs, n=None):
    """Build a simple graph from raw (u, v) pairs.

    Self-loops are dropped and duplicate pairs (in either order) collapse to
    a single edge; the counts of dropped items are recorded on the returned
    graph.  Edge ids follow first occurrence order.  ``n`` may be given to
    keep trailing isolated vertices; it must cover every index used.
    """
    seen = set()
    mark = seen.add
    edges = []
    keep = edges.append
    loops = 0
    dups = 0
    max_idx = -1
    for u, v in edge_pairs:
        if u < 0 or v < 0:
            raise ValueError(f"negative vertex index in edge ({u}, {v})")
        if u > v:
            u, v = v, u
        if v > max_idx:
            max_idx = v
        if u == v:
            loops += 1
            continue
        key = (u << 32) | v
        if key in seen:
            dups += 1
            continue
        mark(key)
        keep((u, v))
    if n is None:
        n = max_idx + 1
    elif n < max_idx + 1:
        raise ValueError(f"n={n} too small for vertex index {max_idx}")
    return UndirectedGraph(n, edges, loops, dups)


@dataclass
class Orientation:
    """Mutable orientation state: one bit per edge plus out-degree tally.

    ``direction[e] == 0`` orients edge ``e`` from its lower endpoint to its
    higher one; ``1`` is the reverse.  ``out_degree`` must always equal the
    recount implied by the bits.
    """

    direction: bytearray
    out_degree: list

    def points_out_of(self, g, v, neighbor, e):
        # Endpoints are {v, neighbor}; the bit is 1 exactly when the edge
        # leaves the higher endpoint.
        return self.direction[e] == (v > neighbor)

    def head(self, g, e):
        """Vertex the edge currently points at."""
        return self.edge_target(g.edge_u[e], g.edge_v[e], self.direction[e])

    @staticmethod
    def edge_target(u, v, bit):
        return u if bit else v

    def copy(self):
        return Orientation(bytearray(self.direction), list(self.out_degree))

    def out_neighbors(self, g, v):
        """Yield (head, edge id) for every edge currently leaving v."""
        xadj = g.xadj
        av = g.adj_vertex
        ae = g.adj_edge
        direction = self.direction
        for i in range(xadj[v], xadj[v + 1]):
            u = av[i]
            e = ae[i]
            if direction[e] == (v > u):
                yield u, e


@dataclass(frozen=True)
class Path:
    """A simple directed path: vertices v0..vk and the k edges joining them."""

    vertices: tuple
    edges: tuple

    def __post_init__(self):
        if len(self.vertices) != len(self.edges) + 1 or not self.vertices:
            raise ValueError("path needs k+1 vertices for k edges")

    @property
    def source(self):
        return self.vertices[0]

    @property
    def target(self):
        return self.vertices[-1]

    def __len__(self):
        return len(self.edges)


def flip_path(o: Orientation, p: Path) -> None:
    """Reverse every edge along p; the source loses one out-edge, the
    target gains one, interior vertices are untouched.

    Rejects a sequence whose consecutive edges are not all oriented forward
    under the current orientation.
    """
    verts = p.vertices
    direction = o.direction
    for i, e in enumerate(p.edges):
        if direction[e] != (verts[i] > verts[i + 1]):
            raise ValueError(
                f"edge {e} is not oriented {verts[i]}->{verts[i + 1]}"
            )
    for e in p.edges:
        direction[e] ^= 1
    if p.edges:
        deg = o.out_degree
        deg[verts[0]] -= 1
        deg[verts[-1]] += 1


def max_out_degree(o: Orientation) -> int:
    """Largest out-degree under o; 0 when there are no vertices or edges."""
    return max(o.out_degree, default=0)


def orientation_from_arcs(g: UndirectedGraph, arcs) -> Orientation:
    """Build an orientation from explicit (tail, head) pairs, one per edge."""
    direction = bytearray(g.m)
    assigned = bytearray(g.m)
    index = {}
    for e in range(g.m):
        index[g.edge_u[e] * g.n + g.edge_v[e]] = e
    deg = [0] * g.n
    for tail, head in arcs:
        u, v = (tail, head) if tail < head else (head, tail)
        e = index.get(u * g.n + v)
        if e is None:
            raise ValueError(f"no edge between {tail} and {head}")
        if assigned[e]:
            raise ValueError(f"edge {e} assigned twice")
        assigned[e] = 1
        direction[e] = 1 if tail > head else 0
        deg[tail] += 1
    if any(b == 0 for b in assigned):
        raise ValueError("not every edge was assigned a direction")
    return Orientation(direction, deg)
