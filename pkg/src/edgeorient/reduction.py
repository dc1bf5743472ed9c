"""Linear-time peeling lower bound and the safe data reduction built on it.

Peeling min-degree vertices yields the densest peel prefix, whose ceiling is
a certified lower bound t on the optimum.  Every vertex of current degree
<= t can then be removed with its edges oriented outward: those forced
out-degrees never exceed the optimum, so solving the residual and merging
stays exact.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from fractions import Fraction

from .graph import Orientation, UndirectedGraph


@dataclass
class ReductionOutcome:
    """Result of the degree-peeling reduction.

    ``removed`` lists (vertex, edge ids oriented out of it) in removal
    order.  ``residual`` is the surviving subgraph; ``vertex_map`` maps its
    dense ids back to the original graph and ``edge_map`` does the same for
    edge ids.  ``peel_prefix`` is the densest prefix of the peel (original
    vertex ids) with its induced edge count: a standalone density witness
    that the optimum is at least ``lower_bound``.
    """

    original: UndirectedGraph
    lower_bound: int
    removed: list
    residual: UndirectedGraph
    vertex_map: list
    edge_map: list
    peel_prefix: tuple = ((), 0)

    @property
    def is_pass_through(self):
        return not self.removed and self.residual.m == self.original.m


def charikar_peel(g: UndirectedGraph, stats=None):
    """Repeatedly delete a minimum-degree vertex (lowest id on ties) and
    track the densest remaining prefix.

    Returns (rho_best, peel_order) where rho_best is the exact best
    edges/vertices ratio as a Fraction over all prefixes including the full
    graph, and peel_order lists vertices in removal order.  Runs in
    O((m + n) log n) with a lazy heap; the number of queue operations
    (n + one per surviving-neighbor decrement) is at most 2m + n and is
    written to ``stats`` when a dict is passed.
    """
    n = g.n
    if n == 0:
        if stats is not None:
            stats["queue_ops"] = 0
        return Fraction(0), []
    deg = [g.xadj[v + 1] - g.xadj[v] for v in range(n)]
    heap = [(deg[v], v) for v in range(n)]
    heapq.heapify(heap)
    ops = n
    alive = bytearray(b"\x01" * n)
    xadj = g.xadj
    adj_v = g.adj_vertex
    edges_left = g.m
    verts_left = n
    best_num, best_den = (g.m, n) if n else (0, 1)
    best_removed = 0
    order = []
    while heap:
        d, v = heapq.heappop(heap)
        if not alive[v] or d != deg[v]:
            continue
        alive[v] = 0
        order.append(v)
        for i in range(xadj[v], xadj[v + 1]):
            u = adj_v[i]
            if alive[u]:
                deg[u] -= 1
                edges_left -= 1
                heapq.heappush(heap, (deg[u], u))
                ops += 1
        verts_left -= 1
        if verts_left and edges_left * best_den > best_num * verts_left:
            best_num = edges_left
            best_den = verts_left
            best_removed = len(order)
    if stats is not None:
        stats["queue_ops"] = ops
        stats["best_removed"] = best_removed
    rho = Fraction(best_num, best_den) if best_den else Fraction(0)
    return rho, order


def reduce(g: UndirectedGraph) -> ReductionOutcome:
    """Peel to get t = ceil(rho_best), then iteratively strip every vertex of
    current degree <= t, orienting its remaining edges outward."""
    stats = {}
    rho_best, order = charikar_peel(g, stats)
    t = math.ceil(rho_best)
    prefix_set = order[stats.get("best_removed", 0):] if order else []
    prefix_edges = _induced_edge_count(g, prefix_set)

    n = g.n
    deg = [g.xadj[v + 1] - g.xadj[v] for v in range(n)]
    alive = bytearray(b"\x01" * n)
    edge_alive = bytearray(b"\x01" * g.m)
    xadj = g.xadj
    adj_v = g.adj_vertex
    adj_e = g.adj_edge
    removed = []
    queue = [v for v in range(n) if deg[v] <= t]
    in_queue = bytearray(n)
    for v in queue:
        in_queue[v] = 1
    head = 0
    while head < len(queue):
        v = queue[head]
        head += 1
        alive[v] = 0
        forced = []
        for i in range(xadj[v], xadj[v + 1]):
            e = adj_e[i]
            if not edge_alive[e]:
                continue
            edge_alive[e] = 0
            forced.append(e)
            u = adj_v[i]
            deg[u] -= 1
            if deg[u] <= t and alive[u] and not in_queue[u]:
                in_queue[u] = 1
                queue.append(u)
        removed.append((v, forced))

    vertex_map = [v for v in range(n) if alive[v]]
    back = {v: i for i, v in enumerate(vertex_map)}
    edge_map = []
    res_edges = []
    for e in range(g.m):
        if edge_alive[e]:
            edge_map.append(e)
            res_edges.append((back[g.edge_u[e]], back[g.edge_v[e]]))
    residual = UndirectedGraph(len(vertex_map), res_edges)
    return ReductionOutcome(
        original=g,
        lower_bound=t,
        removed=removed,
        residual=residual,
        vertex_map=vertex_map,
        edge_map=edge_map,
        peel_prefix=(tuple(prefix_set), prefix_edges),
    )


def _pass_through(g: UndirectedGraph) -> ReductionOutcome:
    return ReductionOutcome(
        original=g,
        lower_bound=0,
        removed=[],
        residual=g,
        vertex_map=list(range(g.n)),
        edge_map=list(range(g.m)),
    )


def maybe_reduce(g: UndirectedGraph, cfg) -> ReductionOutcome:
    """Run the reduction only when the graph is dense enough (m/n above the
    configured threshold); otherwise return a pass-through outcome."""
    if g.n and g.m / g.n > cfg.density_threshold:
        return reduce(g)
    return _pass_through(g)


def merge_orientation(outcome: ReductionOutcome, residual_o: Orientation) -> Orientation:
    """Combine the residual solve with the forced outward orientations into
    a full orientation of the original graph."""
    g = outcome.original
    if outcome.is_pass_through and outcome.residual is g:
        return residual_o
    direction = bytearray(g.m)
    # vertex_map is increasing, so endpoint order is preserved and residual
    # direction bits transfer unchanged.
    edge_map = outcome.edge_map
    res_dir = residual_o.direction
    for re_, oe in enumerate(edge_map):
        direction[oe] = res_dir[re_]
    eu = g.edge_u
    for v, forced in outcome.removed:
        for e in forced:
            direction[e] = 0 if v == eu[e] else 1
    deg = [0] * g.n
    ev = g.edge_v
    for e in range(g.m):
        deg[ev[e] if direction[e] else eu[e]] += 1
    return Orientation(direction, deg)


def _induced_edge_count(g: UndirectedGraph, vertices) -> int:
    if not vertices:
        return 0
    mark = bytearray(g.n)
    for v in vertices:
        mark[v] = 1
    count = 0
    eu = g.edge_u
    ev = g.edge_v
    for e in range(g.m):
        if mark[eu[e]] and mark[ev[e]]:
            count += 1
    return count
