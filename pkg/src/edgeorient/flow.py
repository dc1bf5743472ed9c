"""Flow-based exact solvers.

The test-network scheme binary-searches the optimum: given an orientation
and a trial bound d', excess vertices are fed from the source, deficient
ones drain to the sink, and each oriented edge contributes a unit arc along
its direction.  The test succeeds exactly when the max flow saturates every
source arc, and flipping the saturated unit arcs realizes the bound.
A bipartite formulation (one node per edge choosing between its endpoints
under vertex capacity d) serves as an independent small-scale oracle.
"""

from __future__ import annotations

from time import perf_counter

from .graph import Orientation, UndirectedGraph, max_out_degree
from .initialize import fast_improve, initial_orientation
from .search import SolveTimeout


class FlowNetwork:
    """Directed network with paired arcs: arc a and a^1 are reverses of one
    another, so residual bookkeeping is flow[a] against cap[a] plus the
    negative flow on a^1."""

    def __init__(self, num_nodes, source, sink):
        self.num_nodes = num_nodes
        self.source = source
        self.sink = sink
        self.arc_to = []
        self.cap = []
        self.flow = []
        self.out_arcs = [[] for _ in range(num_nodes)]

    def add_arc(self, u, v, capacity):
        """Add u->v with the given capacity (plus its zero-capacity
        reverse); returns the forward arc id."""
        a = len(self.arc_to)
        self.arc_to.append(v)
        self.cap.append(capacity)
        self.flow.append(0)
        self.arc_to.append(u)
        self.cap.append(0)
        self.flow.append(0)
        self.out_arcs[u].append(a)
        self.out_arcs[v].append(a + 1)
        return a

    def residual(self, a):
        return self.cap[a] - self.flow[a]

    def arc_count(self):
        return len(self.arc_to)


def max_flow(net: FlowNetwork, deadline=None) -> int:
    """Integral maximum s-t flow via blocking flows on BFS level graphs.
    Flow assignments stay recorded on the arcs."""
    s = net.source
    t = net.sink
    n = net.num_nodes
    arc_to = net.arc_to
    cap = net.cap
    flow = net.flow
    out_arcs = net.out_arcs
    total = 0
    while True:
        if deadline is not None and perf_counter() > deadline:
            raise SolveTimeout
        level = [-1] * n
        level[s] = 0
        queue = [s]
        head = 0
        while head < len(queue):
            x = queue[head]
            head += 1
            lx = level[x] + 1
            for a in out_arcs[x]:
                if cap[a] > flow[a]:
                    y = arc_to[a]
                    if level[y] < 0:
                        level[y] = lx
                        queue.append(y)
        if level[t] < 0:
            return total
        it = [0] * n
        while True:
            # walk one augmenting path in the level graph
            path = []
            v = s
            while v != t:
                arcs = out_arcs[v]
                i = it[v]
                limit = len(arcs)
                while i < limit:
                    a = arcs[i]
                    if cap[a] > flow[a] and level[arc_to[a]] == level[v] + 1:
                        break
                    i += 1
                it[v] = i
                if i < limit:
                    path.append(a)
                    v = arc_to[a]
                else:
                    if v == s:
                        path = None
                        break
                    level[v] = -1
                    a = path.pop()
                    v = arc_to[a ^ 1]
                    it[v] += 1
            if path is None:
                break
            bottleneck = min(cap[a] - flow[a] for a in path)
            for a in path:
                flow[a] += bottleneck
                flow[a ^ 1] -= bottleneck
            total += bottleneck


def kowalik_test(g: UndirectedGraph, o: Orientation, d_prime: int,
                 deadline=None):
    """Feasibility test: can path flips bring every out-degree to at most
    d_prime?

    On success the orientation is updated in place (every edge whose unit
    arc is saturated gets flipped) and its max out-degree is <= d_prime; on
    failure it is left untouched.  Returns (feasible, orientation).
    """
    n = g.n
    s = n
    t = n + 1
    net = FlowNetwork(n + 2, s, t)
    deg = o.out_degree
    demand = 0
    for v in range(n):
        dv = deg[v]
        if dv > d_prime:
            net.add_arc(s, v, dv - d_prime)
            demand += dv - d_prime
        elif dv < d_prime:
            net.add_arc(v, t, d_prime - dv)
    if demand == 0:
        return True, o
    direction = o.direction
    eu = g.edge_u
    ev = g.edge_v
    edge_arcs = []
    for e in range(g.m):
        if direction[e]:
            edge_arcs.append(net.add_arc(ev[e], eu[e], 1))
        else:
            edge_arcs.append(net.add_arc(eu[e], ev[e], 1))
    value = max_flow(net, deadline)
    if value < demand:
        return False, o
    net_flow = net.flow
    for e in range(g.m):
        if net_flow[edge_arcs[e]] == 1:
            bit = direction[e]
            tail, head = (ev[e], eu[e]) if bit else (eu[e], ev[e])
            direction[e] = bit ^ 1
            deg[tail] -= 1
            deg[head] += 1
    return True, o


def kowalik_solve(g: UndirectedGraph, deadline=None):
    """Exact solve by binary search over the feasibility test, starting from
    the id-order orientation after one local-improvement pass.  Returns
    (orientation, optimum)."""
    o = initial_orientation(g)
    fast_improve(g, o)
    if g.m == 0:
        return o, 0
    hi = max_out_degree(o)
    lo = -(-g.m // g.n)
    while lo < hi:
        mid = (lo + hi) // 2
        feasible, o = kowalik_test(g, o, mid, deadline)
        if feasible:
            hi = mid
        else:
            lo = mid + 1
    return o, hi


def bipartite_oracle(g: UndirectedGraph, d: int, deadline=None) -> bool:
    """Independent feasibility check on the edge/vertex bipartite network:
    the source feeds every edge node (capacity 1), each edge node may route
    to either endpoint's vertex node, and vertex nodes drain to the sink
    with capacity d.  Feasible iff the max flow equals m.  Intended for
    small graphs."""
    m = g.m
    n = g.n
    if m == 0:
        return True
    s = 0
    t = m + n + 1
    net = FlowNetwork(m + n + 2, s, t)
    for e in range(m):
        net.add_arc(s, 1 + e, 1)
        net.add_arc(1 + e, 1 + m + g.edge_u[e], 1)
        net.add_arc(1 + e, 1 + m + g.edge_v[e], 1)
    if d > 0:
        for v in range(n):
            net.add_arc(1 + m + v, t, d)
    return max_flow(net, deadline) == m


def bipartite_dstar(g: UndirectedGraph) -> int:
    """Smallest feasible vertex capacity, by linear scan: an oracle for the
    optimum that shares nothing with the path engines."""
    d = 0
    while not bipartite_oracle(g, d):
        d += 1
    return d
