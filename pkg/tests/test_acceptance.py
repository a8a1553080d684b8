"""Acceptance criteria, each reported as one PASS/FAIL line.

All comparisons are exact rational equality; runtime limits are measured
with wall-clock time on the spot.
"""

import time
from fractions import Fraction
from itertools import combinations, product

from tesler_alpha.alpha import alpha_of_face, check_face, expected_min_codim2, positivity_report
from tesler_alpha.cones import certify_total_unimodularity, fcone_mdp, ncone_mdp, oracle_report
from tesler_alpha.ehrhart import count_points, ehrhart_poly, mcmullen_check
from tesler_alpha.ratlinalg import RatMatrix
from tesler_alpha.tesler import FaceSupport, enumerate_faces, enumerate_vertices, verify_deformation

F = Fraction


def report(capsys, number, title, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title}"
    if detail:
        line += f" [{detail}]"
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


def subset_filter_faces(n, k):
    facets = [(i, j) for i in range(1, n + 1) for j in range(i, n + 1) if (i, j) != (n, n)]
    return [
        S for S in combinations(facets, k)
        if all(any((i, j) not in S for j in range(i, n + 1)) for i in range(1, n))
    ]


def naive_count(n, a, t):
    """Count integer upper-triangular matrices in a box, filtered by hook sums."""
    pos = [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]
    idx = {p: k for k, p in enumerate(pos)}
    hits = 0
    for x in product(range(t * sum(a) + 1), repeat=len(pos)):
        ok = True
        for k in range(1, n + 1):
            row = sum(x[idx[(k, j)]] for j in range(k, n + 1))
            col = sum(x[idx[(i, k)]] for i in range(1, k))
            if row - col != t * a[k - 1]:
                ok = False
                break
        hits += ok
    return hits


def _table_checks(k):
    checks, counts = {}, {}
    for n in range(3, 7):
        cs = [check_face(n, S) for S in enumerate_faces(n, k)]
        checks[n] = cs
        counts[n] = {}
        for c in cs:
            counts[n][c.tag.label] = counts[n].get(c.tag.label, 0) + 1
    return checks, counts


def test_criterion_1_codim2_tables(capsys):
    t0 = time.perf_counter()
    checks, counts = _table_checks(2)
    elapsed = time.perf_counter() - t0
    bad = [c for cs in checks.values() for c in cs if not c.ok]
    ok = not bad and elapsed < 10
    detail = "; ".join(f"n={n} " + ", ".join(f"{lab}:{m}" for lab, m in sorted(counts[n].items())) for n in counts)
    report(capsys, 1, "codim-2 MDPs and alpha match the tables for n=3..6",
           ok, f"{detail}; {elapsed:.2f}s" + (f"; first failure {bad[0].diff()}" if bad else ""))


def test_criterion_2_codim3_tables(capsys):
    t0 = time.perf_counter()
    checks, counts = _table_checks(3)
    elapsed = time.perf_counter() - t0
    bad = [c for cs in checks.values() for c in cs if not c.ok]
    absent_n3 = {"(1)(iv)", "(1)(v)", "(1)(vi)", "(3)"}.isdisjoint(counts[3])
    present_n4 = {"(1)(iv)", "(1)(v)", "(1)(vi)", "(3)"} <= set(counts[4])
    ok = not bad and absent_n3 and present_n4 and elapsed < 60
    report(capsys, 2, "codim-3 MDPs and alpha match the tables for n=3..6",
           ok, f"n=3 cases {sorted(counts[3])}; absent-at-n=3 {absent_n3}; {elapsed:.2f}s"
           + (f"; first failure {bad[0].diff()}" if bad else ""))


def test_criterion_3_inverse_identity(capsys):
    failures, total = [], 0
    for n in range(2, 7):
        for k in range(0, 4):
            if k > n * (n - 1) // 2:
                continue
            for S in enumerate_faces(n, k):
                total += 1
                C = ncone_mdp(n, S).entries
                M = fcone_mdp(n, S).entries
                if C @ M != RatMatrix.identity(k):
                    failures.append((n, S))
    report(capsys, 3, "C*M = I for every face of codim <= 3, n <= 6", not failures,
           f"{total} faces, {len(failures)} failures")


def test_criterion_4_oracle(capsys):
    t0 = time.perf_counter()
    reports = [oracle_report(n) for n in (3, 4)]
    elapsed = time.perf_counter() - t0
    ok = all(r.ok for r in reports) and elapsed < 120
    detail = ", ".join(f"n={r.n}: {r.faces} faces, {r.runs} base-vertex runs" for r in reports)
    first = next((r.failures[0] for r in reports if r.failures), "")
    report(capsys, 4, "edge-direction oracle equals the inverted MDP at every base vertex",
           ok, f"{detail}; {elapsed:.2f}s" + (f"; {first}" if first else ""))


def test_criterion_5_unimodularity(capsys):
    t0 = time.perf_counter()
    # bypass the cache so the timing covers the actual work
    results = {n: certify_total_unimodularity.__wrapped__(n) for n in range(2, 6)}
    elapsed = time.perf_counter() - t0
    n5 = len(enumerate_vertices(5).vertices)
    ok = all(results.values()) and n5 == 120 and elapsed < 60
    report(capsys, 5, "all vertex cones of PTes_n(1) unimodular for n=2..5", ok,
           f"{results}; n=5 vertices {n5}; {elapsed:.2f}s")


def test_criterion_6_mcmullen(capsys):
    E3 = ehrhart_poly(3)
    brute = naive_count(3, (1, 1, 1), 1)
    r3 = mcmullen_check(3)
    vertex_sum = sum((alpha_of_face(3, S).value for S in enumerate_faces(3, 3)), F(0))
    t0 = time.perf_counter()
    r4 = mcmullen_check(4)
    elapsed = time.perf_counter() - t0
    ok = (
        E3(1) == 7 == brute == count_points(3, None, 1)
        and E3.coefficients[0] == 1
        and r3.ok and [c.i for c in r3.checks] == [3, 2, 1, 0]
        and vertex_sum == 1
        and r4.ok and [c.i for c in r4.checks] == [6, 5, 4, 3]
        and elapsed < 600
    )
    detail = (f"n=3 E={E3}, E(1)={E3(1)} brute={brute}, vertex alpha sum={vertex_sum}; "
              f"n=4 " + ", ".join(f"e{c.i}={c.ehrhart}/{c.mcmullen}" for c in r4.checks) + f"; {elapsed:.2f}s")
    report(capsys, 6, "Ehrhart coefficients equal McMullen weighted sums", ok, detail)


def test_criterion_7_positivity(capsys):
    mins = {}
    ok = True
    for n in range(3, 7):
        r = positivity_report(n)
        mins[n] = (r.min_alpha[2], r.min_alpha[3])
        ok &= r.min_alpha[2] == expected_min_codim2(n) > 0
        ok &= r.min_alpha[3] > 0
        if n >= 4:
            ok &= r.min_alpha[3] == F(1, 24)
    detail = ", ".join(f"n={n}: {a}, {b}" for n, (a, b) in mins.items())
    report(capsys, 7, "minimum codim-2 and codim-3 alpha values are positive as predicted", ok, detail)


def test_criterion_8_face_counts(capsys):
    f3 = [len(subset_filter_faces(3, k)) for k in (1, 2, 3)]
    f4 = [len(subset_filter_faces(4, k)) for k in (1, 2, 3, 6)]
    ok = f3 == [5, 9, 6] and f4 == [9, 35, 76, 24]
    euler = f3[2] - f3[1] + f3[0]
    ok &= euler == 2
    # the library enumeration agrees with the filter
    for n in (3, 4):
        for k in range(0, n * (n - 1) // 2 + 1):
            ok &= [S.positions for S in enumerate_faces(n, k)] == sorted(subset_filter_faces(n, k))
    # geometric consistency: incidences computed from vertex sets
    consistency = True
    for n in (3, 4):
        G = enumerate_vertices(n)
        facet_verts = {p: set(G.vertices_of_face(FaceSupport(n, (p,)))) for (p,) in subset_filter_faces(n, 1)}
        d = n * (n - 1) // 2
        for k in range(2, d + 1):
            for S in enumerate_faces(n, k):
                verts = set(G.vertices_of_face(S))
                containing = [p for p, vs in facet_verts.items() if verts <= vs]
                consistency &= bool(verts) and len(containing) == k
        # each edge has two vertices, each vertex lies on d edges
        consistency &= all(len(G.vertices_of_face(E)) == 2 for E in enumerate_faces(n, d - 1))
        consistency &= all(G.degree(i) == d for i in range(len(G.vertices)))
    ok &= consistency
    report(capsys, 8, "face counts and incidences for n=3 and n=4", ok,
           f"n=3 (facets, edges, vertices)={tuple(f3)} Euler={euler}; n=4 {f4}; consistent={consistency}")


def test_criterion_9_deformations(capsys):
    G = enumerate_vertices(3)
    ident = list(range(6))
    identity_ok = verify_deformation(G, G.vertices, ident)
    dilation_ok = verify_deformation(G, [v * 2 for v in G.vertices], ident)
    constant_ok = verify_deformation(G, [G.vertices[3]], [0] * 6)
    violation_rejected = not verify_deformation(G, G.vertices, [1, 0, 2, 3, 4, 5])
    ok = identity_ok and dilation_ok and constant_ok and violation_rejected
    report(capsys, 9, "deformation verifier on the n=3 vertex graph", ok,
           f"identity={identity_ok} dilation={dilation_ok} constant={constant_ok} "
           f"violation rejected={violation_rejected}")
