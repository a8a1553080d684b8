"""Command-line front end.

Exit codes: 0 when every check passes, 1 on a mathematical mismatch, 2 on
a usage error.  JSON output uses sorted keys and canonical face order, so
it does not depend on ``--jobs``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from functools import partial
from pathlib import Path

from ._parallel import JOBS_ENV, default_jobs, pmap
from .alpha import alpha_of_face, classify_case, positivity_report, verify_tables
from .cones import oracle_report
from .ehrhart import format_polynomial, mcmullen_check
from .errors import TeslerAlphaError
from .ratlinalg import format_rational, parse_rational
from .tesler import (
    FaceSupport,
    HookSumVector,
    UTMatrix,
    VertexGraph,
    deformation_ratios,
    dimension,
    enumerate_faces,
    enumerate_vertices,
    hook_sum_vector,
)

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2

# largest n for which the oracle and the Ehrhart polynomial are run
ORACLE_MAX_N = 4
EHRHART_MAX_N = 4


class UsageError(Exception):
    pass


def notice(msg: str) -> None:
    print(f"note: {msg}", file=sys.stderr)


# ---------------------------------------------------------------------------
# config


def parse_hook_sums(text: str | None, n: int | None) -> tuple[int, HookSumVector]:
    """Resolve ``--n`` and ``--a``; leading zeros are dropped with a notice."""
    if text is None:
        if n is None:
            raise UsageError("--n is required")
        if n < 2:
            raise UsageError(f"--n must be at least 2, got {n}")
        return n, HookSumVector.ones(n)
    try:
        values = [parse_rational(x.strip()) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"cannot parse --a {text!r}: {e}") from None
    if n is not None and len(values) != n:
        raise UsageError(f"--a has {len(values)} entries but --n is {n}")
    a = hook_sum_vector(values)
    if a.leading_zeros:
        if a.leading_zeros == len(values):
            raise UsageError("--a is identically zero")
        trimmed = a.trimmed()
        notice(f"dropping {a.leading_zeros} leading zero(s): Tes_{a.n}(a) is isomorphic to Tes_{trimmed.n}"
               f"({','.join(str(x) for x in trimmed)})")
        a = trimmed
    if a.n < 2:
        raise UsageError("after trimming, the hook-sum vector has fewer than 2 entries")
    return a.n, a


def need_positive(a: HookSumVector) -> None:
    if not a.strictly_positive:
        raise UsageError(f"this command needs a strictly positive hook-sum vector, got "
                         f"{','.join(format_rational(x) for x in a)}")


def resolve_jobs(jobs: int | None) -> int:
    if jobs is None:
        try:
            return default_jobs()
        except ValueError as e:
            raise UsageError(str(e)) from None
    if jobs < 1:
        raise UsageError("--jobs must be positive")
    return jobs


# ---------------------------------------------------------------------------
# output


def render(payload: dict, fmt: str, text_lines, csv_rows) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerows(csv_rows())
        return buf.getvalue()
    return "\n".join(text_lines()) + "\n"


def emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def support_str(S: FaceSupport) -> str:
    return " ".join(f"{i}{j}" for i, j in S) or "-"


# ---------------------------------------------------------------------------
# commands


def cmd_faces(args) -> int:
    n, a = parse_hook_sums(args.a, args.n)
    d = dimension(n)
    if args.codim is None:
        raise UsageError("faces needs --codim")
    if not 0 <= args.codim <= d:
        raise UsageError(f"--codim must lie in [0, {d}] for n={n}")
    faces = enumerate_faces(n, args.codim)
    payload = {"n": n, "codim": args.codim, "dim": d - args.codim, "count": len(faces),
               "faces": [S.to_json() for S in faces]}
    text = lambda: [f"n={n} codim={args.codim}: {len(faces)} faces"] + [support_str(S) for S in faces]  # noqa: E731
    rows = lambda: [["index", "support"]] + [[i, support_str(S)] for i, S in enumerate(faces)]  # noqa: E731
    emit(render(payload, args.format, text, rows), args.out)
    return EXIT_OK


def _label(n: int, S: FaceSupport) -> str:
    if S.codim <= 1:
        return "constant"
    return classify_case(n, S).label


def cmd_alpha(args) -> int:
    n, a = parse_hook_sums(args.a, args.n)
    need_positive(a)
    if args.codim is None:
        raise UsageError("alpha needs --codim")
    if not 0 <= args.codim <= min(3, dimension(n)):
        raise UsageError(f"--codim must lie in [0, {min(3, dimension(n))}] for n={n}")
    faces = enumerate_faces(n, args.codim)
    values = pmap(partial(alpha_of_face, n), faces, resolve_jobs(args.jobs))
    entries = [(S, _label(n, S), v.value) for S, v in zip(faces, values)]
    lo = min(v for _, _, v in entries)
    if args.min:
        entries = [e for e in entries if e[2] == lo]
    payload = {
        "n": n, "codim": args.codim, "min": format_rational(lo), "count": len(entries),
        "faces": [{"support": S.to_json(), "case": lab, "alpha": format_rational(v)} for S, lab, v in entries],
    }

    def text():
        head = [f"min alpha {lo}"] if args.min else []
        return head + [f"{support_str(S)}\t{lab}\t{v}" for S, lab, v in entries]

    rows = lambda: [["support", "case", "alpha"]] + [[support_str(S), lab, format_rational(v)] for S, lab, v in entries]  # noqa: E731
    emit(render(payload, args.format, text, rows), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    n, a = parse_hook_sums(args.a, args.n)
    if n < 3:
        raise UsageError("verify needs n >= 3: codimension-2 cases only exist from n = 3 on")
    need_positive(a)
    if a != HookSumVector.ones(n):
        notice("cone data depends only on the normal fan, so tables are checked on PTes_n(1)")
    jobs = resolve_jobs(args.jobs)
    tables = verify_tables(n, jobs)
    pos = positivity_report(n, jobs)
    oracle = None
    if args.oracle:
        if n <= ORACLE_MAX_N:
            oracle = oracle_report(n, jobs=jobs)
        else:
            notice(f"oracle comparison is limited to n <= {ORACLE_MAX_N}; skipped")
    ok = tables.ok and pos.ok and (oracle is None or oracle.ok)
    payload = {
        "n": n,
        "status": "PASS" if ok else "FAIL",
        "tables": tables.to_json(),
        "positivity": pos.to_json(),
        "oracle": oracle.to_json() if oracle else None,
    }

    def text():
        lines = [f"verify n={n}: {'PASS' if ok else 'FAIL'}",
                 f"faces: codim2 {tables.face_counts[2]}, codim3 {tables.face_counts[3]}",
                 f"unimodularity: {tables.unimodularity}"]
        for c in tables.cases():
            flag = "ok" if c.mdp_match and c.alpha_match else "MISMATCH"
            lines.append(f"  codim {c.codim} {c.label:10s} {c.count:5d} faces  alpha {c.alpha_value}  {flag}")
        lines.append(f"min alpha: codim2 {pos.min_alpha[2]} (expected {pos.expected_min_codim2}), "
                     f"codim3 {pos.min_alpha[3]}")
        if oracle:
            lines.append(f"oracle: {oracle.runs} runs over {oracle.faces} faces, "
                         f"{'PASS' if oracle.ok else 'FAIL'}")
        return lines

    def rows():
        out = [["codim", "case", "count", "mdp_match", "alpha_match", "alpha"]]
        out += [[c.codim, c.label, c.count, c.mdp_match, c.alpha_match, format_rational(c.alpha_value)]
                for c in tables.cases()]
        return out

    emit(render(payload, args.format, text, rows), args.out)
    if not ok:
        if tables.failures:
            print(tables.failures[0].diff(), file=sys.stderr)
        elif oracle and oracle.failures:
            print(oracle.failures[0], file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_ehrhart(args) -> int:
    n, a = parse_hook_sums(args.a, args.n)
    if n > EHRHART_MAX_N:
        raise UsageError(f"Ehrhart polynomials are computed only for n <= {EHRHART_MAX_N}")
    need_positive(a)
    if not a.integral:
        raise UsageError("lattice-point counting needs an integral hook-sum vector")
    report = mcmullen_check(n, a, resolve_jobs(args.jobs))
    payload = report.to_json()

    def text():
        E = report.poly
        lines = [f"E(t) = {format_polynomial(E.coefficients)}",
                 "counts: " + ", ".join(f"E({t})={c}" for t, c in sorted(E.sample_counts.items()))]
        for c in report.checks:
            lines.append(f"e_{c.i} = {c.ehrhart}  mcmullen over {c.faces} faces = {c.mcmullen}  "
                         f"{'ok' if c.match else 'MISMATCH'}")
        lines.append(f"McMullen {'PASS' if report.ok else 'FAIL'}")
        return lines

    def rows():
        out = [["i", "codim", "faces", "ehrhart", "mcmullen", "match"]]
        out += [[c.i, c.codim, c.faces, format_rational(c.ehrhart), format_rational(c.mcmullen), c.match]
                for c in report.checks]
        return out

    emit(render(payload, args.format, text, rows), args.out)
    return EXIT_OK if report.ok else EXIT_MISMATCH


def cmd_vertices(args) -> int:
    n, a = parse_hook_sums(args.a, args.n)
    need_positive(a)
    G = enumerate_vertices(n, a)
    payload = G.to_json()
    proj = G.projected()

    def text():
        lines = [f"Tes_{n}({','.join(str(x) for x in a)}): {len(G.vertices)} vertices, "
                 f"{len(G.edges)} edges"]
        for i, (S, v) in enumerate(zip(G.supports, G.vertices)):
            lines.append(f"{i}\t{support_str(S)}\t" + " ".join(str(x) for x in v.vector()))
        return lines

    def rows():
        out = [["index", "support", "tesler", "projected"]]
        for i, (S, v, p) in enumerate(zip(G.supports, G.vertices, proj)):
            out.append([i, support_str(S), " ".join(format_rational(x) for x in v.vector()),
                        " ".join(format_rational(x) for x in p.vector())])
        return out

    emit(render(payload, args.format, text, rows), args.out)
    return EXIT_OK


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{path} is not valid JSON: {e}") from None


def _points(data) -> list:
    """Vertex list from a graph file, ``{"vertices": [...]}``, or a bare list."""
    items = data["vertices"] if isinstance(data, dict) else data
    pts = []
    for v in items:
        if isinstance(v, dict):
            pts.append(UTMatrix.from_json(v).vector())
        else:
            pts.append(tuple(parse_rational(x) for x in v))
    return pts


def cmd_deformation_check(args) -> int:
    if args.p:
        try:
            P = VertexGraph.from_json(_load_json(args.p))
        except (KeyError, TypeError, ValueError) as e:
            raise UsageError(f"{args.p} is not a vertex-graph file: {e}") from None
        if not P.edges:
            raise UsageError(f"{args.p} has no edges")
    else:
        n, a = parse_hook_sums(args.a, args.n)
        need_positive(a)
        P = enumerate_vertices(n, a)
    if not args.q or not args.map:
        raise UsageError("deformation-check needs --q and --map")
    Q = _points(_load_json(args.q))
    raw_map = _load_json(args.map)
    if isinstance(raw_map, dict) and "map" in raw_map:
        raw_map = raw_map["map"]
    ratios = deformation_ratios(P, Q, raw_map)
    ok = ratios is not None
    payload = {
        "status": "PASS" if ok else "FAIL",
        "vertices": len(P.vertices),
        "edges": len(P.edges),
        "ratios": None if not ok else [[u, v, format_rational(r)] for (u, v), r in sorted(ratios.items())],
    }

    def text():
        if not ok:
            return ["deformation FAIL"]
        distinct = sorted(set(ratios.values()))
        return [f"deformation PASS: {len(ratios)} edges, ratios {', '.join(str(r) for r in distinct)}"]

    rows = lambda: [["u", "v", "ratio"]] + ([[u, v, format_rational(r)] for (u, v), r in sorted(ratios.items())] if ok else [])  # noqa: E731
    emit(render(payload, args.format, text, rows), args.out)
    return EXIT_OK if ok else EXIT_MISMATCH


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="matrix size")
    common.add_argument("--a", help="comma-separated hook sums (default all ones)")
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--jobs", type=int, help=f"worker processes (default ${JOBS_ENV} or 1)")

    parser = argparse.ArgumentParser(
        prog="tesler-alpha",
        description="Exact alpha values, cone data and Ehrhart checks for Tesler polytopes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("faces", parents=[common], help="list face supports of a given codimension")
    p.add_argument("--codim", type=int)
    p.set_defaults(func=cmd_faces)

    p = sub.add_parser("alpha", parents=[common], help="alpha values of faces of codimension <= 3")
    p.add_argument("--codim", type=int)
    p.add_argument("--min", action="store_true", help="only the faces attaining the minimum")
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("verify", parents=[common], help="check cone matrices and alpha values against the tables")
    p.add_argument("--oracle", action="store_true", help=f"also run the edge-direction oracle (n <= {ORACLE_MAX_N})")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("ehrhart", parents=[common], help="Ehrhart polynomial and McMullen cross-check")
    p.set_defaults(func=cmd_ehrhart)

    p = sub.add_parser("vertices", parents=[common], help="vertices and edges of Tes_n(a)")
    p.set_defaults(func=cmd_vertices)

    p = sub.add_parser("deformation-check", parents=[common], help="test a vertex map for edge parallelism")
    p.add_argument("--p", help="vertex-graph JSON of the base polytope (default: Tes_n(a))")
    p.add_argument("--q", help="JSON list of target vertices")
    p.add_argument("--map", help="JSON list or object sending P-vertex indices to Q-vertex indices")
    p.set_defaults(func=cmd_deformation_check)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (TeslerAlphaError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
