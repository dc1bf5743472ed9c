"""Independent validation: orientation well-formedness checks, a subset
enumeration oracle for small graphs, and density certificates that prove a
claimed optimum without trusting solver state."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Orientation, UndirectedGraph, max_out_degree

BRUTE_FORCE_LIMIT = 20


class ValidationError(Exception):
    """An orientation is structurally inconsistent with its graph."""


class CertificateError(Exception):
    """The reachable set does not support the claimed optimum; the
    orientation still admits an improving path from a peak vertex."""


@dataclass(frozen=True)
class Certificate:
    """Vertex set R whose induced density exceeds k-1, proving that every
    orientation has some vertex of out-degree at least k."""

    vertices: tuple
    edge_count: int
    k: int

    @property
    def density_numerator(self):
        return self.edge_count

    @property
    def density_denominator(self):
        return len(self.vertices)


def validate(g: UndirectedGraph, o: Orientation) -> None:
    """Check structural consistency; raises ValidationError at the first
    violation (with the offending edge or vertex id), returns None when
    everything matches."""
    if len(o.direction) != g.m:
        raise ValidationError(
            f"direction has {len(o.direction)} bits for {g.m} edges"
        )
    if len(o.out_degree) != g.n:
        raise ValidationError(
            f"out_degree has {len(o.out_degree)} entries for {g.n} vertices"
        )
    for e in range(g.m):
        if o.direction[e] not in (0, 1):
            raise ValidationError(f"edge {e}: direction {o.direction[e]}")
    recount = [0] * g.n
    eu = g.edge_u
    ev = g.edge_v
    direction = o.direction
    for e in range(g.m):
        recount[ev[e] if direction[e] else eu[e]] += 1
    for v in range(g.n):
        if recount[v] != o.out_degree[v]:
            raise ValidationError(
                f"vertex {v}: tally {o.out_degree[v]} != recount {recount[v]}"
            )
    if sum(recount) != g.m:
        raise ValidationError("out-degrees do not sum to m")


def brute_force_dstar(g: UndirectedGraph) -> int:
    """Exact optimum by subset enumeration: the maximum over all nonempty
    vertex subsets S of ceil(e(S) / |S|).  Rejects graphs with more than
    20 vertices."""
    n = g.n
    if n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"n={n} exceeds enumeration limit {BRUTE_FORCE_LIMIT}")
    if n == 0 or g.m == 0:
        return 0
    adj = [0] * n
    for e in range(g.m):
        u = g.edge_u[e]
        v = g.edge_v[e]
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    size = 1 << n
    induced = [0] * size
    best = 0
    for mask in range(1, size):
        low = mask & -mask
        v = low.bit_length() - 1
        rest = mask ^ low
        e = induced[rest] + (adj[v] & rest).bit_count()
        induced[mask] = e
        s = mask.bit_count()
        d = -(-e // s)
        if d > best:
            best = d
    return best


def extract_certificate(g: UndirectedGraph, o: Orientation):
    """Density certificate from the set reachable from the peak vertices.

    Requires an orientation with no improving path from any peak (the state
    every exact engine terminates in).  Then every vertex reachable along
    oriented edges from the peak set has out-degree >= k-1, all its
    out-edges stay inside the set, and the induced density exceeds k-1.
    The reachability and edge count are recomputed from scratch here.

    Returns None for k = 0 (nothing to certify); raises CertificateError
    when the reachable set violates the bound, which means the orientation
    was not actually improvement-free.
    """
    k = max_out_degree(o)
    if k == 0:
        return None
    deg = o.out_degree
    direction = o.direction
    xadj = g.xadj
    adj_v = g.adj_vertex
    adj_e = g.adj_edge
    n = g.n
    mark = bytearray(n)
    stack = [v for v in range(n) if deg[v] == k]
    for v in stack:
        mark[v] = 1
    while stack:
        v = stack.pop()
        if deg[v] < k - 1:
            raise CertificateError(
                f"vertex {v} (out-degree {deg[v]}) is reachable from a peak; "
                f"an improving path exists for k={k}"
            )
        for i in range(xadj[v], xadj[v + 1]):
            u = adj_v[i]
            if not mark[u] and direction[adj_e[i]] == (v > u):
                mark[u] = 1
                stack.append(u)
    vertices = tuple(v for v in range(n) if mark[v])
    e_count = 0
    eu = g.edge_u
    ev = g.edge_v
    for e in range(g.m):
        if mark[eu[e]] and mark[ev[e]]:
            e_count += 1
    if e_count <= (k - 1) * len(vertices):
        raise CertificateError(
            f"reachable set density {e_count}/{len(vertices)} does not "
            f"exceed {k - 1}"
        )
    return Certificate(vertices=vertices, edge_count=e_count, k=k)


def certificate_or_refine(g: UndirectedGraph, o: Orientation):
    """Certificate for an arbitrary claimed-optimal orientation.

    Flow-based solves can terminate with improving paths still present, in
    which case the reachability extraction mis-fires; this helper then runs
    the exact DFS engine on a copy to the improvement-free fixpoint and
    certifies that.  Returns (certificate, refined_max_out_degree); a
    refined max below the claimed one exposes a suboptimal claim.
    """
    k = max_out_degree(o)
    if k == 0:
        return None, 0
    try:
        return extract_certificate(g, o), k
    except CertificateError:
        from .search import exhaustive_dfs

        refined = o.copy()
        k2 = exhaustive_dfs(g, refined)
        return extract_certificate(g, refined), k2
