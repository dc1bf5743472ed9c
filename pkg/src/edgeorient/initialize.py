"""Starting orientations: deterministic id-order init plus a one-pass
local improvement that resolves out-degree gaps of two or more between
edge endpoints."""

from __future__ import annotations

from .graph import Orientation, UndirectedGraph


def initial_orientation(g: UndirectedGraph) -> Orientation:
    """Orient every edge from its higher-id endpoint to its lower-id one, so
    out_degree(v) = number of neighbors with smaller id."""
    deg = [0] * g.n
    ev = g.edge_v
    for e in range(g.m):
        deg[ev[e]] += 1
    return Orientation(bytearray(b"\x01" * g.m), deg)


def fast_improve(g: UndirectedGraph, o: Orientation, on_flip=None) -> int:
    """One pass over vertices in id order, flipping any incident edge whose
    endpoints' out-degrees differ by two or more in the profitable direction.

    For each vertex v, its out-edges v->u are flipped when d(u) < d(v)-1,
    then its in-edges u->v are flipped when d(u)-1 > d(v).  Degrees update
    live after each flip, so the max out-degree never increases and every
    flip strictly decreases the sum of squared out-degrees.  Returns the
    number of flips; ``on_flip(edge, src, dst)`` is invoked after each one.
    """
    xadj = g.xadj
    adj_v = g.adj_vertex
    adj_e = g.adj_edge
    direction = o.direction
    deg = o.out_degree
    flips = 0
    for v in range(g.n):
        start = xadj[v]
        end = xadj[v + 1]
        dv = deg[v]
        for i in range(start, end):
            u = adj_v[i]
            e = adj_e[i]
            if direction[e] == (v > u) and deg[u] < dv - 1:
                direction[e] ^= 1
                deg[u] += 1
                dv -= 1
                flips += 1
                if on_flip is not None:
                    deg[v] = dv
                    on_flip(e, v, u)
        deg[v] = dv
        for i in range(start, end):
            u = adj_v[i]
            e = adj_e[i]
            if direction[e] == (u > v) and deg[u] - 1 > dv:
                direction[e] ^= 1
                deg[u] -= 1
                dv += 1
                flips += 1
                if on_flip is not None:
                    deg[v] = dv
                    on_flip(e, u, v)
        deg[v] = dv
    return flips
