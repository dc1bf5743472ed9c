"""Parsers for benchmark graph formats and serializers for solver output.

Supported inputs: plain edge lists (SNAP style), METIS adjacency files and
Matrix Market coordinate files.  Output is an oriented edge list plus a
line-delimited JSON report stream that the bench/profile tools consume.
"""

from __future__ import annotations

import json
from dataclasses import asdict

from .graph import Orientation, UndirectedGraph, build_graph


class ParseError(ValueError):
    """Malformed input; carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _lines(stream):
    if isinstance(stream, str):
        stream = stream.splitlines()
    for lineno, raw in enumerate(stream, start=1):
        yield lineno, raw


def parse_edge_list(stream, one_indexed=False):
    """Parse whitespace-separated vertex pairs, one edge per line.

    Lines starting with '#' or '%' and blank lines are skipped.  Tokens past
    the first two (e.g. weights) are ignored.  With ``one_indexed`` the ids
    are shifted down by one.
    """
    pairs = []
    shift = 1 if one_indexed else 0
    for lineno, raw in _lines(stream):
        line = raw.strip()
        if not line or line[0] in "#%":
            continue
        tokens = line.split()
        if len(tokens) < 2:
            raise ParseError("expected a vertex pair", lineno)
        try:
            u = int(tokens[0])
            v = int(tokens[1])
        except ValueError:
            raise ParseError(f"non-integer token in {tokens[:2]}", lineno) from None
        u -= shift
        v -= shift
        if u < 0 or v < 0:
            raise ParseError(f"vertex index out of range: {line!r}", lineno)
        pairs.append((u, v))
    return build_graph(pairs)


def parse_matrix_market(stream, one_indexed=True):
    """Parse a Matrix Market coordinate file as an undirected graph.

    The size line is skipped and each data line ``i j [w]`` is treated as an
    edge pair; the header's symmetry flag needs no special handling because
    duplicates collapse anyway.
    """
    pairs = []
    shift = 1 if one_indexed else 0
    saw_size = False
    for lineno, raw in _lines(stream):
        line = raw.strip()
        if not line or line[0] in "#%":
            continue
        tokens = line.split()
        if not saw_size:
            saw_size = True
            continue
        if len(tokens) < 2:
            raise ParseError("expected a coordinate pair", lineno)
        try:
            u = int(tokens[0]) - shift
            v = int(tokens[1]) - shift
        except ValueError:
            raise ParseError(f"non-integer token in {tokens[:2]}", lineno) from None
        if u < 0 or v < 0:
            raise ParseError(f"vertex index out of range: {line!r}", lineno)
        pairs.append((u, v))
    return build_graph(pairs)


def parse_metis(stream):
    """Parse an unweighted METIS adjacency file.

    The header is ``n m [fmt]``; line i+1 lists the 1-indexed neighbors of
    vertex i.  Each undirected edge may appear in both endpoint lines and is
    collapsed; the collapsed count must match the header's m.
    """
    header = None
    n = m = 0
    fmt_ok = True
    vertex = 0
    pairs = []
    for lineno, raw in _lines(stream):
        line = raw.strip()
        if not line and header is not None:
            # blank adjacency line: vertex with no neighbors
            if vertex < n:
                vertex += 1
                continue
            continue
        if not line or line[0] == "%":
            continue
        tokens = line.split()
        if header is None:
            if len(tokens) not in (2, 3):
                raise ParseError("header must be 'n m [fmt]'", lineno)
            try:
                n = int(tokens[0])
                m = int(tokens[1])
            except ValueError:
                raise ParseError("non-integer header field", lineno) from None
            if len(tokens) == 3 and int(tokens[2]) != 0:
                raise ParseError(
                    f"weighted format code {tokens[2]} not supported", lineno
                )
            header = (n, m)
            continue
        if vertex >= n:
            raise ParseError(f"more than {n} adjacency lines", lineno)
        for tok in tokens:
            try:
                nbr = int(tok)
            except ValueError:
                raise ParseError(f"non-integer neighbor {tok!r}", lineno) from None
            if nbr < 1 or nbr > n:
                raise ParseError(f"neighbor {nbr} out of range 1..{n}", lineno)
            pairs.append((vertex, nbr - 1))
        vertex += 1
    if header is None:
        raise ParseError("missing METIS header")
    g = build_graph(pairs, n=n)
    if g.m != m:
        raise ParseError(
            f"header claims {m} edges but adjacency lines yield {g.m}"
        )
    return g


def write_orientation(o: Orientation, g: UndirectedGraph, one_indexed=False):
    """Serialize an orientation as m lines 'u v', meaning u -> v, in edge-id
    order."""
    shift = 1 if one_indexed else 0
    direction = o.direction
    eu = g.edge_u
    ev = g.edge_v
    out = []
    for e in range(g.m):
        if direction[e]:
            out.append(f"{ev[e] + shift} {eu[e] + shift}\n")
        else:
            out.append(f"{eu[e] + shift} {ev[e] + shift}\n")
    return "".join(out)


def write_report(report) -> str:
    """Serialize one solve report as a single JSON line.

    Key layout is fixed: instance, n, m, dstar, algorithm, config, timings_ms
    (reduce/init/eps/finish), counters (paths_flipped/vertices_visited) and
    certificate (present plus density numerator/denominator).
    """
    if not isinstance(report, dict):
        report = asdict(report)
    cert = report.get("certificate") or {}
    obj = {
        "instance": report["instance"],
        "n": report["n"],
        "m": report["m"],
        "dstar": report["dstar"],
        "algorithm": report["algorithm"],
        "config": report["config"],
        "timings_ms": {
            k: report["timings_ms"].get(k, 0.0)
            for k in ("reduce", "init", "eps", "finish")
        },
        "counters": {
            "paths_flipped": report["counters"]["paths_flipped"],
            "vertices_visited": report["counters"]["vertices_visited"],
        },
        "certificate": {
            "present": bool(cert.get("present")),
            "density_numerator": cert.get("density_numerator"),
            "density_denominator": cert.get("density_denominator"),
        },
    }
    return json.dumps(obj) + "\n"
