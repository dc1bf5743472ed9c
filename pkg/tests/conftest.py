import random

import pytest

from edgeorient import build_graph


def triangle():
    return build_graph([(0, 1), (1, 2), (0, 2)])


def complete(n):
    return build_graph([(u, v) for u in range(n) for v in range(u + 1, n)])


def star(leaves):
    return build_graph([(0, i) for i in range(1, leaves + 1)])


def bowtie():
    # two triangles sharing vertex 4
    return build_graph([(0, 1), (0, 4), (1, 4), (2, 3), (2, 4), (3, 4)])


def cycle(n):
    return build_graph([(i, (i + 1) % n) for i in range(n)])


def random_graph(rng, n, p):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)
             if rng.random() < p]
    return build_graph(pairs, n=n)


def grid_graph(rows, cols):
    pairs = []
    ext = pairs.extend
    for i in range(rows):
        base = i * cols
        row = range(base, base + cols)
        ext(zip(row, range(base + 1, base + cols)))
        if i + 1 < rows:
            ext(zip(row, range(base + cols, base + 2 * cols)))
    return build_graph(pairs, n=rows * cols)


def triangulated_grid(k, seed=7):
    """Random planar triangulation: a k x k grid with one randomly chosen
    diagonal per cell.  Density just below 3, like Delaunay meshes."""
    rng = random.Random(seed)
    pairs = []
    ext = pairs.extend
    ap = pairs.append
    for i in range(k):
        base = i * k
        row = range(base, base + k)
        ext(zip(row, range(base + 1, base + k)))
        if i + 1 < k:
            ext(zip(row, range(base + k, base + 2 * k)))
            for j in range(k - 1):
                v = base + j
                if rng.random() < 0.5:
                    ap((v, v + k + 1))
                else:
                    ap((v + 1, v + k))
    return build_graph(pairs, n=k * k)


@pytest.fixture(scope="session")
def atlas_connected():
    """All 996 connected graphs on 1..7 vertices, one per isomorphism
    class, as edgeorient graphs."""
    nx = pytest.importorskip("networkx")
    out = []
    for axg in nx.graph_atlas_g():
        n = axg.number_of_nodes()
        if n == 0 or not nx.is_connected(axg):
            continue
        out.append(build_graph(list(axg.edges()), n=n))
    assert len(out) == 996
    return out
