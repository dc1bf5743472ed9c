"""Improving-path engines.

All engines lower the maximum out-degree of an orientation by finding a
directed path from a peak vertex to a vertex whose out-degree is at least
two smaller, then reversing the whole path.  They differ in how searches
are scheduled and how much traversal state is shared:

* :func:`exhaustive_dfs` - repeated passes over the peak set with the
  optimized DFS (early degree check, peak vertices never traversed as
  interior vertices, visited stamps shared across one pass).
* :func:`batched_bfs` - one multi-source BFS per round seeded with every
  peak vertex.
* :func:`naive_dfs` - plain DFS with none of the optimizations, kept as a
  baseline.
* :func:`eager_path_search` - heuristic phase improving outer degree
  layers before the peak layer; must be followed by an exact finisher.
* :func:`solve_rpo` - the full pipeline: conditional reduction, id-order
  init, one local-improvement pass, eager search, then a BFS or DFS
  finisher chosen by the resulting max out-degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from time import perf_counter

from .graph import Orientation, Path, flip_path, max_out_degree
from .initialize import fast_improve, initial_orientation
from .reduction import maybe_reduce, merge_orientation
from .verify import Certificate, extract_certificate


class SolveTimeout(Exception):
    """A solve exceeded its cooperative deadline."""


@dataclass
class SolverConfig:
    """Tuned solver parameters.

    ``eager_layers=None`` selects the dynamic layer count
    round(sqrt(max_d - rho)); an integer fixes it.  The reduction runs only
    when m/n exceeds ``density_threshold``, and the finisher is the batched
    BFS when the post-eager max out-degree exceeds ``finisher_threshold``,
    the optimized DFS otherwise.
    """

    density_threshold: float = 10.0
    eager_layers: int | None = None
    eager_size: int = 100
    finisher_threshold: int = 10
    algorithm: str = "rpo"

    def __post_init__(self):
        if self.density_threshold < 0:
            raise ValueError("density_threshold must be >= 0")
        if self.eager_layers is not None and self.eager_layers < 0:
            raise ValueError("eager_layers must be >= 0 or None for dynamic")
        if self.eager_size < 1:
            raise ValueError("eager_size must be >= 1")
        if self.finisher_threshold < 0:
            raise ValueError("finisher_threshold must be >= 0")

    def as_dict(self):
        return {
            "density_threshold": self.density_threshold,
            "eager_layers": (
                "dynamic" if self.eager_layers is None else self.eager_layers
            ),
            "eager_size": self.eager_size,
            "finisher_threshold": self.finisher_threshold,
            "algorithm": self.algorithm,
        }


@dataclass
class Counters:
    paths_flipped: int = 0
    vertices_visited: int = 0
    fastimprove_flips: int = 0


@dataclass
class SolveReport:
    """Summary of one solve, serializable via graphio.write_report."""

    instance: str
    n: int
    m: int
    dstar: int
    algorithm: str
    config: dict
    timings_ms: dict
    counters: dict
    certificate: dict


class SearchState:
    """Reusable traversal state.

    ``visited`` holds per-vertex epoch stamps: a vertex counts as visited
    exactly when its stamp equals the current epoch, so bumping the epoch
    clears every mark in O(1).  The DFS keeps its current chain on explicit
    stacks (the stack is the path); the BFS records parent links for path
    reconstruction.
    """

    __slots__ = ("visited", "epoch", "parent_vertex", "parent_edge",
                 "vertices_visited")

    def __init__(self, n):
        self.visited = [0] * n
        self.epoch = 0
        self.parent_vertex = [-1] * n
        self.parent_edge = [-1] * n
        self.vertices_visited = 0

    def new_epoch(self):
        self.epoch += 1
        return self.epoch


class LayerBuckets:
    """Vertices grouped by out-degree, snapshotted in one scan.

    Buckets are not rebucketed under later flips; consumers must re-check a
    vertex's degree before trusting an entry.
    """

    def __init__(self, o: Orientation, lo=0, hi=None):
        deg = o.out_degree
        if hi is None:
            hi = max(deg, default=0)
        self.lo = lo
        self.hi = hi
        self.buckets = [[] for _ in range(max(hi - lo + 1, 0))]
        buckets = self.buckets
        for v, dv in enumerate(deg):
            if lo <= dv <= hi:
                buckets[dv - lo].append(v)

    def bucket(self, d):
        if self.lo <= d <= self.hi:
            return self.buckets[d - self.lo]
        return []

    def peak(self):
        return self.bucket(self.hi)


def _expired(deadline):
    return deadline is not None and perf_counter() > deadline


def find_improving_path(g, o, source, target_bound, state, skip_degree):
    """Optimized DFS for one improving path.

    Walks edges in their oriented direction starting at ``source``.  At each
    vertex every out-neighbor's degree is checked before any descent, and a
    neighbor at or below ``target_bound`` ends the search immediately.
    Vertices whose out-degree equals ``skip_degree`` are never entered as
    interior vertices (each needs its own path, so routing through them is
    wasted work).  Visited stamps belong to the caller's current epoch and
    persist afterwards, excluding already-exhausted regions from subsequent
    searches in the same epoch.

    Returns a simple :class:`Path` from ``source`` to a vertex with
    out-degree <= ``target_bound``, or None when the search exhausts.
    """
    deg = o.out_degree
    direction = o.direction
    xadj = g.xadj
    adj_v = g.adj_vertex
    adj_e = g.adj_edge
    visited = state.visited
    epoch = state.epoch
    visited[source] = epoch

    path_v = [source]
    path_e = []
    scan = []
    v = source
    entering = True
    visits = 0
    while True:
        if entering:
            visits += 1
            end = xadj[v + 1]
            hit = -1
            for i in range(xadj[v], end):
                u = adj_v[i]
                e = adj_e[i]
                if direction[e] == (v > u) and deg[u] <= target_bound:
                    hit = i
                    break
            if hit >= 0:
                path_v.append(adj_v[hit])
                path_e.append(adj_e[hit])
                state.vertices_visited += visits
                return Path(tuple(path_v), tuple(path_e))
            scan.append(xadj[v])
            entering = False
        pos = scan[-1]
        end = xadj[v + 1]
        moved = False
        while pos < end:
            u = adj_v[pos]
            e = adj_e[pos]
            pos += 1
            if (
                direction[e] == (v > u)
                and visited[u] != epoch
                and deg[u] != skip_degree
            ):
                scan[-1] = pos
                visited[u] = epoch
                path_v.append(u)
                path_e.append(e)
                v = u
                entering = True
                moved = True
                break
        if moved:
            continue
        scan.pop()
        path_v.pop()
        if not path_v:
            state.vertices_visited += visits
            return None
        path_e.pop()
        v = path_v[-1]


def exhaustive_dfs(g, o, state=None, counters=None, deadline=None) -> int:
    """Exact engine: repeat passes over the current peak set, searching and
    flipping one improving path per peak vertex, until a pass flips nothing.
    Visited stamps reset once per pass, not per search.  Returns the final
    (optimal) max out-degree."""
    if state is None:
        state = SearchState(g.n)
    deg = o.out_degree
    n = g.n
    while True:
        k = max(deg, default=0)
        if k <= 1:
            return k
        peaks = [v for v in range(n) if deg[v] == k]
        bound = k - 2
        state.new_epoch()
        flipped = False
        for v in peaks:
            if _expired(deadline):
                raise SolveTimeout
            if deg[v] != k:
                continue
            p = find_improving_path(g, o, v, bound, state, k)
            if p is not None:
                flip_path(o, p)
                if counters is not None:
                    counters.paths_flipped += 1
                flipped = True
        if not flipped:
            return k


def naive_dfs(g, o, state=None, counters=None, deadline=None) -> int:
    """Baseline engine: same pass structure as :func:`exhaustive_dfs` but
    with a plain DFS - fresh visited state for every single search, no early
    degree check, no peak skipping."""
    if state is None:
        state = SearchState(g.n)
    deg = o.out_degree
    n = g.n
    while True:
        k = max(deg, default=0)
        if k <= 1:
            return k
        peaks = [v for v in range(n) if deg[v] == k]
        bound = k - 2
        flipped = False
        for v in peaks:
            if _expired(deadline):
                raise SolveTimeout
            if deg[v] != k:
                continue
            state.new_epoch()
            p = _find_path_plain(g, o, v, bound, state)
            if p is not None:
                flip_path(o, p)
                if counters is not None:
                    counters.paths_flipped += 1
                flipped = True
        if not flipped:
            return k


def _find_path_plain(g, o, source, target_bound, state):
    """Unoptimized DFS: the target condition is tested on entering a vertex
    and every out-neighbor is descended into."""
    deg = o.out_degree
    direction = o.direction
    xadj = g.xadj
    adj_v = g.adj_vertex
    adj_e = g.adj_edge
    visited = state.visited
    epoch = state.epoch
    visited[source] = epoch

    path_v = [source]
    path_e = []
    scan = [xadj[source]]
    v = source
    visits = 1
    while True:
        pos = scan[-1]
        end = xadj[v + 1]
        moved = False
        while pos < end:
            u = adj_v[pos]
            e = adj_e[pos]
            pos += 1
            if direction[e] == (v > u) and visited[u] != epoch:
                scan[-1] = pos
                path_v.append(u)
                path_e.append(e)
                visits += 1
                if deg[u] <= target_bound:
                    state.vertices_visited += visits
                    return Path(tuple(path_v), tuple(path_e))
                visited[u] = epoch
                scan.append(xadj[u])
                v = u
                moved = True
                break
        if moved:
            continue
        scan.pop()
        path_v.pop()
        if not path_v:
            state.vertices_visited += visits
            return None
        path_e.pop()
        v = path_v[-1]


def batched_bfs(g, o, state=None, counters=None, deadline=None) -> int:
    """Exact engine: rounds of one multi-source BFS seeded with every peak
    vertex.  Found paths are flipped mid-round and their vertices' stamps
    stay consumed; parent chains crossing a flipped edge are detected at
    reconstruction and abandoned.  A round that flips nothing proves
    optimality; the level drops when every peak has been improved."""
    if state is None:
        state = SearchState(g.n)
    deg = o.out_degree
    direction = o.direction
    xadj = g.xadj
    adj_v = g.adj_vertex
    adj_e = g.adj_edge
    visited = state.visited
    parent_v = state.parent_vertex
    parent_e = state.parent_edge
    n = g.n
    while True:
        k = max(deg, default=0)
        if k <= 1:
            return k
        peaks = [v for v in range(n) if deg[v] == k]
        bound = k - 2
        while True:
            epoch = state.new_epoch()
            queue = []
            for v in peaks:
                if deg[v] == k:
                    visited[v] = epoch
                    parent_v[v] = -1
                    queue.append(v)
            if not queue:
                break
            flips = 0
            head = 0
            while head < len(queue):
                if not head % 4096 and _expired(deadline):
                    raise SolveTimeout
                x = queue[head]
                head += 1
                for i in range(xadj[x], xadj[x + 1]):
                    u = adj_v[i]
                    e = adj_e[i]
                    if direction[e] != (x > u):
                        continue
                    if visited[u] == epoch:
                        continue
                    if deg[u] <= bound:
                        p = _bfs_chain(o, parent_v, parent_e, x, u, e, k)
                        if p is not None:
                            flip_path(o, p)
                            flips += 1
                            if counters is not None:
                                counters.paths_flipped += 1
                            # consumed but not expanded: any chain through a
                            # flipped region would be stale anyway
                            visited[u] = epoch
                        continue
                    visited[u] = epoch
                    parent_v[u] = x
                    parent_e[u] = e
                    queue.append(u)
            state.vertices_visited += head
            if flips == 0:
                return k
            peaks = [v for v in peaks if deg[v] == k]
            if not peaks:
                break


def _bfs_chain(o, parent_v, parent_e, x, target, last_edge, k):
    """Rebuild root->...->x->target from parent links; None if any tree arc
    was reversed by an earlier flip this round or the root was already
    improved."""
    rv = [target]
    re_ = [last_edge]
    cur = x
    while cur >= 0:
        rv.append(cur)
        p = parent_v[cur]
        if p < 0:
            break
        re_.append(parent_e[cur])
        cur = p
    rv.reverse()
    re_.reverse()
    if o.out_degree[rv[0]] != k:
        return None
    direction = o.direction
    for i, e in enumerate(re_):
        if direction[e] != (rv[i] > rv[i + 1]):
            return None
    return Path(tuple(rv), tuple(re_))


def eager_layer_count(max_d: int, rho, cfg: SolverConfig) -> int:
    """Number of degree layers the eager phase processes below the peak.

    Fixed mode returns the configured value unchanged; dynamic mode returns
    round-half-up of sqrt(max_d - rho), clamped to [1, max_d]."""
    if cfg.eager_layers is not None:
        return cfg.eager_layers
    if max_d <= 0:
        return 0
    i = math.floor(math.sqrt(max(max_d - float(rho), 0.0)) + 0.5)
    return max(1, min(i, max_d))


def eager_path_search(g, o, cfg, state=None, counters=None, deadline=None):
    """Heuristic accelerator: improve the outer degree layers before the
    peaks, in ascending layer order, with one shared visited epoch per
    layer.

    Layer d-i+k (population below ``cfg.eager_size``) re-searches a vertex
    immediately after each success, up to k flips, so small layers are not
    recollected.  The phase can leave a non-optimal orientation and must be
    followed by an exact finisher.
    """
    if g.m == 0:
        return
    deg = o.out_degree
    d = max(deg)
    if d <= 1:
        return
    if state is None:
        state = SearchState(g.n)
    rho = g.m / g.n
    i = eager_layer_count(d, rho, cfg)
    lo = max(d - i, 0)
    buckets = LayerBuckets(o, lo, d)
    for layer_d in range(lo, d + 1):
        members = buckets.bucket(layer_d)
        if layer_d < 2 or not members:
            # target bound below zero cannot be met
            continue
        offset = layer_d - (d - i)
        budget = offset if len(members) < cfg.eager_size else 1
        if budget == 0:
            continue
        state.new_epoch()
        for v in members:
            if _expired(deadline):
                raise SolveTimeout
            if deg[v] != layer_d:
                continue
            successes = 0
            while successes < budget:
                bound = deg[v] - 2
                if bound < 0:
                    break
                p = find_improving_path(g, o, v, bound, state, layer_d)
                if p is None:
                    break
                flip_path(o, p)
                successes += 1
                if counters is not None:
                    counters.paths_flipped += 1


def solve_rpo(g, cfg=None, instance="", deadline=None):
    """Full pipeline solve; returns (orientation, report).

    Stages: conditional density reduction, id-order initial orientation,
    one local-improvement pass, eager path search, then an exact finisher
    (batched BFS above ``finisher_threshold``, optimized DFS otherwise),
    and finally the forced orientations are merged back.  The reported
    optimum carries a density certificate: the finisher's reachable set
    when the residual solve is the binding side, the densest peel prefix
    when the reduction's lower bound is.
    """
    if cfg is None:
        cfg = SolverConfig()
    counters = Counters()
    t0 = perf_counter()
    outcome = maybe_reduce(g, cfg)
    t1 = perf_counter()
    res = outcome.residual
    o = initial_orientation(res)
    counters.fastimprove_flips = fast_improve(res, o)
    if _expired(deadline):
        raise SolveTimeout
    t2 = perf_counter()
    state = SearchState(res.n)
    eager_path_search(res, o, cfg, state, counters, deadline)
    t3 = perf_counter()
    if max_out_degree(o) > cfg.finisher_threshold:
        k_res = batched_bfs(res, o, state, counters, deadline)
    else:
        k_res = exhaustive_dfs(res, o, state, counters, deadline)
    t4 = perf_counter()
    merged = merge_orientation(outcome, o)
    dstar = max_out_degree(merged)
    counters.vertices_visited = state.vertices_visited

    cert = None
    if dstar > 0:
        if k_res == dstar and res.m > 0:
            res_cert = extract_certificate(res, o)
            vm = outcome.vertex_map
            cert = Certificate(
                vertices=tuple(vm[v] for v in res_cert.vertices),
                edge_count=res_cert.edge_count,
                k=dstar,
            )
        else:
            verts, e_count = outcome.peel_prefix
            if e_count <= (dstar - 1) * len(verts):
                raise AssertionError(
                    "peel prefix fails the density bound; reduction bug"
                )
            cert = Certificate(vertices=tuple(verts), edge_count=e_count,
                               k=dstar)

    report = SolveReport(
        instance=instance,
        n=g.n,
        m=g.m,
        dstar=dstar,
        algorithm="rpo",
        config=cfg.as_dict(),
        timings_ms={
            "reduce": (t1 - t0) * 1000.0,
            "init": (t2 - t1) * 1000.0,
            "eps": (t3 - t2) * 1000.0,
            "finish": (t4 - t3) * 1000.0,
        },
        counters={
            "paths_flipped": counters.paths_flipped,
            "vertices_visited": counters.vertices_visited,
        },
        certificate=_certificate_dict(cert),
    )
    return merged, report


def _certificate_dict(cert):
    if cert is None:
        return {
            "present": False,
            "density_numerator": None,
            "density_denominator": None,
        }
    return {
        "present": True,
        "density_numerator": cert.edge_count,
        "density_denominator": len(cert.vertices),
    }
