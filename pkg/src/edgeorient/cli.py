"""Command-line frontend: solve instances, verify results, run benchmark
sweeps and turn bench reports into performance-profile data (CSV plus an
optional rendered figure).

Exit codes: 0 success, 1 input/parse error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path as FilePath
from time import perf_counter

from .graph import max_out_degree
from .graphio import (
    ParseError,
    parse_edge_list,
    parse_matrix_market,
    parse_metis,
    write_orientation,
    write_report,
)
from .initialize import fast_improve, initial_orientation
from .flow import kowalik_solve
from .search import (
    Counters,
    SearchState,
    SolveReport,
    SolveTimeout,
    SolverConfig,
    batched_bfs,
    exhaustive_dfs,
    naive_dfs,
    solve_rpo,
)
from .verify import (
    ValidationError,
    certificate_or_refine,
    extract_certificate,
    validate,
)

ALGORITHMS = ("rpo", "dfs", "bfs", "kowalik", "naive")

_FORMAT_BY_EXT = {
    ".txt": "edgelist",
    ".el": "edgelist",
    ".edges": "edgelist",
    ".graph": "metis",
    ".mtx": "mtx",
}


def detect_format(path, override=None):
    if override:
        return override
    ext = FilePath(path).suffix.lower()
    fmt = _FORMAT_BY_EXT.get(ext)
    if fmt is None:
        raise ParseError(
            f"cannot infer format from extension {ext!r}; use --format"
        )
    return fmt


def load_graph(path, fmt=None, one_indexed=False):
    fmt = detect_format(path, fmt)
    with open(path, "r", encoding="utf-8", errors="replace") as fh:
        if fmt == "edgelist":
            return parse_edge_list(fh, one_indexed=one_indexed)
        if fmt == "metis":
            return parse_metis(fh)
        if fmt == "mtx":
            return parse_matrix_market(fh)
    raise ParseError(f"unknown format {fmt!r}")


def run_algorithm(g, algorithm, cfg=None, instance="", deadline=None):
    """Run one engine end to end; returns (orientation, SolveReport)."""
    if cfg is None:
        cfg = SolverConfig(algorithm=algorithm)
    if algorithm == "rpo":
        o, report = solve_rpo(g, cfg, instance=instance, deadline=deadline)
        return o, report

    timings = {"reduce": 0.0, "init": 0.0, "eps": 0.0, "finish": 0.0}
    counters = Counters()
    cert = None
    if algorithm == "kowalik":
        t0 = perf_counter()
        o, dstar = kowalik_solve(g, deadline=deadline)
        timings["finish"] = (perf_counter() - t0) * 1000.0
    else:
        t0 = perf_counter()
        o = initial_orientation(g)
        counters.fastimprove_flips = fast_improve(g, o)
        if deadline is not None and perf_counter() > deadline:
            raise SolveTimeout
        t1 = perf_counter()
        state = SearchState(g.n)
        engine = {"dfs": exhaustive_dfs, "bfs": batched_bfs,
                  "naive": naive_dfs}[algorithm]
        dstar = engine(g, o, state, counters, deadline)
        t2 = perf_counter()
        timings["init"] = (t1 - t0) * 1000.0
        timings["finish"] = (t2 - t1) * 1000.0
        counters.vertices_visited = state.vertices_visited
        if dstar > 0:
            cert = extract_certificate(g, o)
    report = SolveReport(
        instance=instance,
        n=g.n,
        m=g.m,
        dstar=dstar,
        algorithm=algorithm,
        config=cfg.as_dict(),
        timings_ms=timings,
        counters={
            "paths_flipped": counters.paths_flipped,
            "vertices_visited": counters.vertices_visited,
        },
        certificate={
            "present": cert is not None,
            "density_numerator": cert.edge_count if cert else None,
            "density_denominator": len(cert.vertices) if cert else None,
        },
    )
    return o, report


def _config_from_args(args, algorithm):
    eager_layers = None
    if args.eager_layers != "dynamic":
        eager_layers = int(args.eager_layers)
    return SolverConfig(
        density_threshold=args.density_threshold,
        eager_layers=eager_layers,
        eager_size=args.eager_size,
        finisher_threshold=args.finisher_threshold,
        algorithm=algorithm,
    )


def _add_config_flags(parser):
    parser.add_argument("--density-threshold", type=float, default=10.0,
                        help="run the reduction only above this m/n")
    parser.add_argument("--eager-layers", default="dynamic",
                        help="'dynamic' or a fixed layer count")
    parser.add_argument("--eager-size", type=int, default=100,
                        help="layer population below which vertices are "
                             "re-searched eagerly")
    parser.add_argument("--finisher-threshold", type=int, default=10,
                        help="max out-degree above which the finisher is "
                             "the batched BFS instead of the DFS")


def cmd_solve(args) -> int:
    try:
        g = load_graph(args.input, args.format, args.one_indexed)
    except (OSError, ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        cfg = _config_from_args(args, args.algorithm)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    name = args.instance_name or FilePath(args.input).name
    o, report = run_algorithm(g, args.algorithm, cfg, instance=name)

    if args.check:
        try:
            validate(g, o)
        except ValidationError as exc:
            print(f"verification failed: {exc}", file=sys.stderr)
            return 2
        if report.dstar != max_out_degree(o):
            print("verification failed: reported optimum does not match "
                  "the orientation", file=sys.stderr)
            return 2
        if report.dstar > 0:
            cert, refined = certificate_or_refine(g, o)
            if refined < report.dstar:
                print(
                    f"verification failed: orientation improvable to "
                    f"{refined} < {report.dstar}", file=sys.stderr)
                return 2
            report.certificate = {
                "present": True,
                "density_numerator": cert.edge_count,
                "density_denominator": len(cert.vertices),
            }

    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(write_orientation(o, g, one_indexed=args.one_indexed))
    if args.report:
        with open(args.report, "a", encoding="utf-8") as fh:
            fh.write(write_report(report))
    total = sum(report.timings_ms.values())
    print(f"{name}: dstar={report.dstar} n={g.n} m={g.m} "
          f"algorithm={args.algorithm} time_ms={total:.1f}")
    return 0


def _bench_instance(task):
    """Bench one instance (all algorithms x repeats); returns report lines.

    Module-level and argument-picklable so --jobs can run instances in
    separate processes; each solve stays single-threaded.  Solve timing
    excludes graph loading.
    """
    name = FilePath(task["path"]).name
    try:
        g = load_graph(task["path"], task["format"], task["one_indexed"])
    except (OSError, ParseError, ValueError) as exc:
        return [{"type": "error", "instance": task["path"],
                 "message": str(exc)}]
    lines = []
    for algorithm in task["algorithms"]:
        cfg = SolverConfig(algorithm=algorithm, **task["cfg"])
        times = []
        dstars = []
        timeouts = 0
        for repeat in range(task["repeats"]):
            deadline = None
            if task["timeout"] is not None:
                deadline = perf_counter() + task["timeout"]
            start = perf_counter()
            try:
                _, rep = run_algorithm(g, algorithm, cfg, instance=name,
                                       deadline=deadline)
            except SolveTimeout:
                timeouts += 1
                lines.append({
                    "type": "run", "instance": name, "algorithm": algorithm,
                    "repeat": repeat, "time_ms": None, "dstar": None,
                    "timeout": True,
                })
                continue
            elapsed = (perf_counter() - start) * 1000.0
            times.append(elapsed)
            dstars.append(rep.dstar)
            lines.append({
                "type": "run", "instance": name, "algorithm": algorithm,
                "repeat": repeat, "time_ms": elapsed, "dstar": rep.dstar,
                "timeout": False,
            })
        lines.append({
            "type": "summary", "instance": name, "algorithm": algorithm,
            "repeats": task["repeats"], "completed": len(times),
            "mean_time_ms": (sum(times) / len(times)) if times else None,
            "dstar": dstars[0] if dstars else None,
            "incomplete": timeouts > 0,
        })
        if dstars and any(d != dstars[0] for d in dstars):
            lines.append({"type": "warning", "instance": name,
                          "message": f"{algorithm}: dstar varied across "
                                     f"repeats: {dstars}"})
    return lines


def cmd_bench(args) -> int:
    try:
        with open(args.instances, "r", encoding="utf-8") as fh:
            paths = [ln.strip() for ln in fh
                     if ln.strip() and not ln.strip().startswith("#")]
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    algorithms = [a.strip() for a in args.algorithms.split(",") if a.strip()]
    for a in algorithms:
        if a not in ALGORITHMS:
            print(f"error: unknown algorithm {a!r}", file=sys.stderr)
            return 1
    report_dir = FilePath(args.report_dir)
    report_dir.mkdir(parents=True, exist_ok=True)
    out_path = report_dir / "bench.jsonl"

    tasks = [{
        "path": path,
        "format": args.format,
        "one_indexed": args.one_indexed,
        "algorithms": algorithms,
        "repeats": args.repeats,
        "timeout": args.timeout,
        "cfg": {
            "density_threshold": args.density_threshold,
            "eager_layers": (None if args.eager_layers == "dynamic"
                             else int(args.eager_layers)),
            "eager_size": args.eager_size,
            "finisher_threshold": args.finisher_threshold,
        },
    } for path in paths]

    if args.jobs > 1 and len(tasks) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            per_instance = list(pool.map(_bench_instance, tasks))
    else:
        per_instance = [_bench_instance(t) for t in tasks]

    failed = False
    lines = []
    for chunk in per_instance:
        for obj in chunk:
            if obj["type"] == "error":
                print(f"error: {obj['instance']}: {obj['message']}",
                      file=sys.stderr)
                failed = True
            elif obj["type"] == "warning":
                print(f"warning: {obj['instance']}: {obj['message']}",
                      file=sys.stderr)
            else:
                lines.append(obj)
    with open(out_path, "a", encoding="utf-8") as fh:
        for obj in lines:
            fh.write(json.dumps(obj) + "\n")
    print(f"wrote {len(lines)} report lines to {out_path}")
    return 1 if failed else 0


def _load_summaries(files):
    """mean time (or None) per (instance, algorithm) from bench reports."""
    means = {}
    algorithms = []
    for path in files:
        with open(path, "r", encoding="utf-8") as fh:
            for raw in fh:
                raw = raw.strip()
                if not raw:
                    continue
                obj = json.loads(raw)
                if obj.get("type") != "summary":
                    continue
                key = (obj["instance"], obj["algorithm"])
                if obj["algorithm"] not in algorithms:
                    algorithms.append(obj["algorithm"])
                if obj.get("incomplete") or obj.get("mean_time_ms") is None:
                    means[key] = None
                else:
                    means[key] = float(obj["mean_time_ms"])
    return means, algorithms


PROFILE_POINTS = 64
PROFILE_RATIO_CAP = 1.0e4


def compute_profile(means, algorithms):
    """Performance-profile table.

    For each tau in a geometric grid, an algorithm's fraction is the share
    of instances whose mean time is within tau times the per-instance best;
    unsolved pairs never qualify.  Returns (taus, {algorithm: fractions}).
    """
    instances = sorted({inst for inst, _ in means})
    per_alg = {a: sorted(inst for inst, alg in means if alg == a)
               for a in algorithms}
    reference = per_alg[algorithms[0]]
    for a in algorithms[1:]:
        if per_alg[a] != reference:
            missing = sorted(set(reference) ^ set(per_alg[a]))
            raise ValueError(
                f"instance sets differ between {algorithms[0]!r} and {a!r}: "
                f"{missing}"
            )
    best = {}
    for inst in instances:
        solved = [means[(inst, a)] for a in algorithms
                  if means[(inst, a)] is not None]
        best[inst] = min(solved) if solved else None
    max_ratio = 1.0
    for (inst, _a), t in means.items():
        if t is not None and best[inst]:
            max_ratio = max(max_ratio, t / best[inst])
    max_ratio = min(max_ratio, PROFILE_RATIO_CAP)
    if max_ratio <= 1.0:
        taus = [1.0]
    else:
        taus = [max_ratio ** (j / (PROFILE_POINTS - 1))
                for j in range(PROFILE_POINTS)]
    fractions = {}
    count = len(instances)
    for a in algorithms:
        rows = []
        for tau in taus:
            hit = 0
            for inst in instances:
                t = means[(inst, a)]
                if t is None or best[inst] is None:
                    continue
                if t <= tau * best[inst]:
                    hit += 1
            rows.append(hit / count if count else 0.0)
        fractions[a] = rows
    return taus, fractions


def render_profile(taus, fractions, path):
    """Render the profile curves to an image file (Agg backend)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for algorithm, rows in fractions.items():
        ax.step(taus, rows, where="post", label=algorithm)
    if taus[-1] > taus[0]:
        ax.set_xscale("log")
    ax.set_xlabel("tau")
    ax.set_ylabel("fraction of instances within tau x best")
    ax.set_ylim(0.0, 1.05)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def cmd_profile(args) -> int:
    try:
        means, algorithms = _load_summaries(args.reports)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (json.JSONDecodeError, KeyError) as exc:
        print(f"error: malformed report line: {exc}", file=sys.stderr)
        return 1
    if not means:
        print("error: no summary lines found", file=sys.stderr)
        return 1
    try:
        taus, fractions = compute_profile(means, algorithms)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    out = ["tau," + ",".join(algorithms)]
    for j, tau in enumerate(taus):
        row = [str(tau)] + [str(fractions[a][j]) for a in algorithms]
        out.append(",".join(row))
    csv_text = "\n".join(out) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    if args.plot:
        render_profile(taus, fractions, args.plot)
        print(f"wrote profile figure to {args.plot}", file=sys.stderr)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="edgeorient",
        description="Exact minimum max-out-degree edge orientation solver",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one instance")
    p_solve.add_argument("input", help="graph file")
    p_solve.add_argument("--format", choices=("edgelist", "metis", "mtx"),
                         help="override extension-based format detection")
    p_solve.add_argument("--one-indexed", action="store_true",
                         help="edge-list ids start at 1 (also applies to "
                              "--out)")
    p_solve.add_argument("--algorithm", choices=ALGORITHMS, default="rpo")
    _add_config_flags(p_solve)
    p_solve.add_argument("--check", action="store_true",
                         help="validate the orientation and certify the "
                              "optimum; nonzero exit on violation")
    p_solve.add_argument("--out", help="write the orientation here")
    p_solve.add_argument("--report", help="append a JSON report line here")
    p_solve.add_argument("--instance-name",
                         help="name recorded in the report (default: file "
                              "name)")
    p_solve.set_defaults(func=cmd_solve)

    p_bench = sub.add_parser("bench", help="run a benchmark sweep")
    p_bench.add_argument("instances", help="file listing one graph path per "
                                           "line")
    p_bench.add_argument("--algorithms", default="rpo,kowalik",
                         help="comma-separated algorithm list")
    p_bench.add_argument("--repeats", type=int, default=5)
    p_bench.add_argument("--timeout", type=float, default=None,
                         help="per-run timeout in seconds")
    p_bench.add_argument("--report-dir", default="bench-reports")
    p_bench.add_argument("--jobs", type=int, default=1,
                         help="run this many instances concurrently "
                              "(solves stay single-threaded)")
    p_bench.add_argument("--format", choices=("edgelist", "metis", "mtx"))
    p_bench.add_argument("--one-indexed", action="store_true")
    _add_config_flags(p_bench)
    p_bench.set_defaults(func=cmd_bench)

    p_prof = sub.add_parser("profile",
                            help="performance profile from bench reports")
    p_prof.add_argument("reports", nargs="+", help="bench.jsonl files")
    p_prof.add_argument("--out", help="write CSV here instead of stdout")
    p_prof.add_argument("--plot",
                        help="also render the profile curves to this image "
                             "file")
    p_prof.set_defaults(func=cmd_profile)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
