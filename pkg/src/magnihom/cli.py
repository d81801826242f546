"""magnihom command line.

Every command reads one JSON document and prints a JSON report (or a table
with ``--format table``).  Output is deterministic: rows are sorted and no
timestamps are written.  Exit status is 0 on success, 1 when an oracle or
check disagrees, and 2 on bad input.
"""
from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import jsonio
from .chains import MagnitudeComplex, length_spectrum, spectrum_upto
from .graph import (
    GraphError, NonBranchingViolation, check_non_branching, check_unique_between_geodesics,
    enumerate_geodesics, nonbranching_rank, nu_f, pi0_geodesics,
)
from .metric import FiniteMetricSpace, as_rational, random_metric, validate_metric
from .oracles import convergence_rows, oracle_a_rows, oracle_b_rows
from .simplicial import build_A, build_B, h0_B, reduced_homology_A
from .spectral import convergence_check

TORSION_LIMIT = 8


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("MAGNIHOM_THREADS", "1")))
    except ValueError:
        return 1


def _fan_out(fn, jobs: list) -> list:
    """Run ``fn`` over jobs, in a process pool when MAGNIHOM_THREADS > 1."""
    n = min(_workers(), len(jobs))
    if n <= 1:
        return [fn(*j) for j in jobs]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(_star, [(fn, j) for j in jobs]))


def _star(item):
    fn, args = item
    return fn(*args)


# -- input ------------------------------------------------------------------

def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_space(args) -> FiniteMetricSpace:
    if args.input is None:
        if args.seed is None:
            raise jsonio.ParseError("give an input file or --seed")
        return random_metric(args.points, args.seed)
    return jsonio.load_metric(_read(args.input))


def _pairs(args, m: FiniteMetricSpace) -> list[tuple[int, int]]:
    if args.pair:
        try:
            return [(m.index(args.pair[0]), m.index(args.pair[1]))]
        except ValueError:
            raise jsonio.ParseError(f"unknown point in --pair {args.pair}") from None
    return [(a, b) for a in m.points for b in m.points]


def _lengths(args, m, n, a, b) -> list[Fraction]:
    if args.length:
        return [as_rational(x) for x in args.length]
    return length_spectrum(m, n, a, b)


# -- output -----------------------------------------------------------------

def _torsion_text(t) -> str:
    t = list(t)
    if len(t) > TORSION_LIMIT:
        return ",".join(map(str, t[:TORSION_LIMIT])) + ",..."
    return ",".join(map(str, t))


def _cell(v) -> str:
    if isinstance(v, dict) and "rank" in v:
        text = f"Z^{v['rank']}"
        if v.get("torsion"):
            text += f"+T[{_torsion_text(v['torsion'])}]"
        return text
    if isinstance(v, list):
        return _torsion_text(v)
    return str(v)


def _table(rows: list[dict]) -> str:
    if not rows:
        return "(no rows)\n"
    cols = list(rows[0])
    cells = [[_cell(r.get(c, "")) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip()]
    lines += ["  ".join(x.ljust(w) for x, w in zip(row, widths)).rstrip() for row in cells]
    return "\n".join(lines) + "\n"


def _emit(args, payload, rows=None) -> None:
    if args.format == "table" and rows is not None:
        sys.stdout.write(_table(rows))
    else:
        sys.stdout.write(jsonio.dumps(payload))


# -- commands ---------------------------------------------------------------

def cmd_validate(args) -> int:
    obj = jsonio.loads(_read(args.input))
    if not isinstance(obj, dict) or "dist" not in obj:
        raise jsonio.ParseError('metric document needs a "dist" matrix')
    dist = [[jsonio._rational(v, f"dist[{i}][{j}]") for j, v in enumerate(r)]
            for i, r in enumerate(obj["dist"])]
    report = validate_metric(dist)
    out = {"ok": report.ok}
    if not report.ok:
        out["axiom"] = report.violation.axiom
        out["indices"] = list(report.violation.indices)
    _emit(args, out, [out])
    return 0 if report.ok else 1


def cmd_spectrum(args) -> int:
    m = _load_space(args)
    rows = []
    for a, b in _pairs(args, m):
        for n in args.n:
            rows.append({"a": m.labels[a], "b": m.labels[b], "n": n,
                         "lengths": [str(x) for x in length_spectrum(m, n, a, b)]})
    _emit(args, rows, rows)
    return 0


def _homology_job(m, n, ell, a, b) -> dict:
    return MagnitudeComplex(m, ell, a, b).report(n)


def cmd_homology(args) -> int:
    m = _load_space(args)
    jobs = []
    for a, b in _pairs(args, m):
        for n in args.n:
            for ell in _lengths(args, m, n, a, b):
                jobs.append((m, n, ell, a, b))
    rows = _fan_out(_homology_job, jobs)
    _emit(args, rows, rows)
    return 0


def cmd_complex_a(args) -> int:
    m = _load_space(args)
    out = []
    for a, b in _pairs(args, m):
        if a == b:
            continue
        cx = build_A(m, a, b, max_dim=args.max_n - 1)
        doc = cx.to_json(m.labels)
        doc["reduced_homology"] = [
            {"degree": k, "rank": h.rank, "torsion": list(h.torsion)}
            for k in range(-1, args.max_n - 1) for h in [reduced_homology_A(cx, k)]
        ]
        out.append(doc)
    _emit(args, out, [{"a": d["a"], "b": d["b"], "vertices": len(d["vertices"]),
                       "simplices": len(d["simplices"])} for d in out])
    return 0


def cmd_complex_b(args) -> int:
    m = _load_space(args)
    out = []
    for a, b in _pairs(args, m):
        lengths = _lengths(args, m, 2, a, b)
        for ell in lengths:
            if ell <= m.d(a, b):
                continue
            cx = build_B(m, ell, a, b)
            doc = cx.to_json(m.labels)
            doc["h0_rank"] = h0_B(cx).rank
            out.append(doc)
    _emit(args, out, [{"a": d["a"], "b": d["b"], "length": d["length"], "h0_rank": d["h0_rank"]}
                      for d in out])
    return 0


def cmd_spectral(args) -> int:
    m = _load_space(args)
    out, rows = [], []
    for a, b in _pairs(args, m):
        lengths = [as_rational(x) for x in args.length] if args.length else spectrum_upto(m, args.max_n, a, b)
        for ell in lengths:
            report = convergence_check(m, ell, a, b, args.max_n)
            pages, inf = report.pages, report.e_infinity
            docs = [p.to_json(m.labels) for p in pages] + [inf.to_json(m.labels)]
            out.append({"a": m.labels[a], "b": m.labels[b], "length": str(ell),
                        "pages": docs, "converges": report.ok})
            for doc in docs:
                for e in doc["entries"]:
                    rows.append({"a": m.labels[a], "b": m.labels[b], "length": str(ell),
                                 "page": doc["page"], "p": e["p"], "q": e["q"],
                                 "rank": e["rank"], "torsion": e["torsion"]})
    _emit(args, out, rows)
    return 0 if all(o["converges"] for o in out) else 1


def cmd_oracles(args) -> int:
    m = _load_space(args)
    pairs = _pairs(args, m)
    jobs = [(m, [p], args.max_n) for p in pairs]
    rows = []
    for chunk in _fan_out(_oracle_job, jobs):
        rows.extend(chunk)
    ok = all(r["match"] for r in rows)
    flat = [{"oracle": r["oracle"], "a": r["a"], "b": r["b"], "n": r["n"], "length": r["length"],
             "direct": r["direct"], "model": {"rank": r["model"]["rank"],
                                              "torsion": r["model"].get("torsion", [])},
             "match": r["match"]} for r in rows]
    _emit(args, {"ok": ok, "rows": rows}, flat)
    return 0 if ok else 1


def _oracle_job(m, pairs, max_n) -> list[dict]:
    return (oracle_a_rows(m, pairs, degrees=tuple(range(2, max(max_n, 2) + 1)))
            + oracle_b_rows(m, pairs) + convergence_rows(m, pairs, max_n))


# -- graph commands ---------------------------------------------------------

def _point(g, text):
    return jsonio.point_from_text(g, text)


def _geodesic_row(g, path) -> dict:
    return {"length": str(path.length),
            "trace": [g.name(p) for p, _ in path.trace(g)]}


def cmd_graph(args) -> int:
    g = jsonio.load_graph(_read(args.input))
    sub = args.graph_command
    if sub == "distance":
        p, q = _point(g, args.p), _point(g, args.q)
        out = {"p": g.name(p), "q": g.name(q), "distance": str(g.distance(p, q))}
        _emit(args, out, [out])
        return 0
    if sub == "geodesics":
        a, b = _point(g, args.a), _point(g, args.b)
        paths = enumerate_geodesics(g, a, b)
        rows = [_geodesic_row(g, p) for p in paths]
        _emit(args, {"count": len(paths), "geodesics": [p.to_json(g) for p in paths]}, rows)
        return 0
    if sub == "pi0":
        a, b = _point(g, args.a), _point(g, args.b)
        cls = pi0_geodesics(g, a, b)
        out = {"geodesics": len(cls.geodesics), "classes": cls.classes,
               "h2_rank": len(cls) - 1 if a != b else 0}
        _emit(args, out, [{"geodesics": out["geodesics"], "classes": len(cls),
                           "h2_rank": out["h2_rank"]}])
        return 0
    if sub == "nu-f":
        a, b = _point(g, args.a), _point(g, args.b)
        paths = enumerate_geodesics(g, a, b)
        through = [_point(g, x) for x in (args.through or [])]
        chosen = [p for p in paths if all(_on_path(g, p, x) for x in through)]
        if not chosen:
            raise GraphError("no geodesic passes through the requested points")
        f = chosen[0]
        gamma = jsonio.load_chains(g, _read(args.chains))
        out = {"f": _geodesic_row(g, f)["trace"], "nu_f": nu_f(g, f, gamma)}
        _emit(args, out, [{"f": "-".join(out["f"]), "nu_f": out["nu_f"]}])
        return 0
    if sub == "nonbranching":
        if args.pairs == "all-vertices":
            verts = [g.vertex(i) for i in range(len(g.labels))]
            pairs = [(p, q) for p in verts for q in verts if p < q]
        else:
            pts = [_point(g, x) for x in args.pairs.split(",")]
            pairs = list(zip(pts[::2], pts[1::2]))
        report = check_non_branching(g, pairs)
        out = {"ok": report.ok}
        if report.witness:
            (p, q), f, h, t = report.witness
            out["witness"] = {"pair": [g.name(p), g.name(q)], "f": _geodesic_row(g, f)["trace"],
                              "g": _geodesic_row(g, h)["trace"], "t": str(t)}
        if args.probes:
            a, b = _point(g, args.a), _point(g, args.b)
            probes = [_point(g, x) for x in args.probes.split(",")]
            uniq = check_unique_between_geodesics(g, a, b, probes)
            out["unique_between"] = uniq.ok
            if uniq.witness:
                x, y, count = uniq.witness
                out["unique_witness"] = {"x": g.name(x), "y": g.name(y), "geodesics": count}
        _emit(args, out, [{k: v for k, v in out.items() if not isinstance(v, dict)}])
        return 0 if report.ok and out.get("unique_between", True) else 1
    if sub == "gamma-rank":
        anchors = [_point(g, x) for x in args.anchors.split(",")]
        start = _point(g, args.start) if args.start else None
        end = _point(g, args.end) if args.end else None
        rank = nonbranching_rank(g, as_rational(args.length), args.q, anchors, start, end)
        out = {"length": args.length, "q": args.q, "anchors": [g.name(p) for p in anchors],
               "rank": rank, "scope": "finite anchor set"}
        _emit(args, out, [{"length": args.length, "q": args.q, "rank": rank}])
        return 0
    raise GraphError(f"unknown graph command {sub}")


def _on_path(g, path, x) -> bool:
    return x in {p for p, _ in path.trace(g)} or (
        not x.is_vertex and any(s.edge == x.index and min(s.t0, s.t1) <= x.t <= max(s.t0, s.t1)
                                for s in path.segments))


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="magnihom", description="Magnitude homology of finite metric spaces and metric graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def space_cmd(name, help_text, *, n=True, max_n=None):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("input", nargs="?", help="metric-space JSON document ('-' for stdin)")
        p.add_argument("--pair", nargs=2, metavar=("A", "B"), help="endpoint labels")
        p.add_argument("--all-pairs", action="store_true", help="every ordered pair (default)")
        p.add_argument("--length", action="append", help="length as p/q; repeatable; default: spectrum")
        if n:
            p.add_argument("--n", type=int, action="append", required=True, help="degree; repeatable")
        if max_n is not None:
            p.add_argument("--max-n", type=int, default=max_n)
        p.add_argument("--seed", type=int, help="use a random space with this seed instead of a file")
        p.add_argument("--points", type=int, default=5, help="size of the random space")
        p.add_argument("--format", choices=("json", "table"), default="json")
        return p

    v = sub.add_parser("validate", help="check the metric axioms")
    v.add_argument("input")
    v.add_argument("--format", choices=("json", "table"), default="json")
    space_cmd("spectrum", "lengths of proper chains per degree")
    space_cmd("homology", "H^l_n(a, b) with torsion")
    space_cmd("complex-a", "A(a, b) and its reduced homology", n=False, max_n=4)
    space_cmd("complex-b", "B^l(a, b) and H_0", n=False)
    space_cmd("spectral", "pages of the smoothness spectral sequence", n=False, max_n=3)
    space_cmd("oracles", "direct homology against the A, B and spectral models", n=False, max_n=3)

    g = sub.add_parser("graph", help="metric-graph computations")
    g.add_argument("input", help="metric-graph JSON document")
    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("json", "table"), default="json")
    gs = g.add_subparsers(dest="graph_command", required=True)

    def graph_cmd(name):
        return gs.add_parser(name, parents=[fmt])

    d = graph_cmd("distance")
    d.add_argument("p")
    d.add_argument("q")
    for name in ("geodesics", "pi0"):
        x = graph_cmd(name)
        x.add_argument("a")
        x.add_argument("b")
    nf = graph_cmd("nu-f")
    nf.add_argument("a")
    nf.add_argument("b")
    nf.add_argument("--chains", required=True, help="chain file: list of {coefficient, points}")
    nf.add_argument("--through", action="append", help="point the reference geodesic passes through")
    nb = graph_cmd("nonbranching")
    nb.add_argument("--pairs", default="all-vertices", help="'all-vertices' or p1,q1,p2,q2,...")
    nb.add_argument("--probes", help="comma-separated points for the uniqueness check")
    nb.add_argument("--a")
    nb.add_argument("--b")
    gr = graph_cmd("gamma-rank")
    gr.add_argument("--length", required=True)
    gr.add_argument("--q", type=int, required=True)
    gr.add_argument("--anchors", required=True, help="comma-separated points")
    gr.add_argument("--start")
    gr.add_argument("--end")
    return parser


COMMANDS = {
    "validate": cmd_validate,
    "spectrum": cmd_spectrum,
    "homology": cmd_homology,
    "complex-a": cmd_complex_a,
    "complex-b": cmd_complex_b,
    "spectral": cmd_spectral,
    "oracles": cmd_oracles,
    "graph": cmd_graph,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "all_pairs", False):
        args.pair = None
    try:
        return COMMANDS[args.command](args)
    except jsonio.ParseError as exc:
        print(f"magnihom: parse error: {exc}", file=sys.stderr)
        return 2
    except jsonio.MetricAxiomError as exc:
        print(f"magnihom: {exc}", file=sys.stderr)
        return 2
    except (GraphError, NonBranchingViolation, ValueError, OSError) as exc:
        print(f"magnihom: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
