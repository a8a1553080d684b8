from fractions import Fraction
from itertools import product
from math import gcd

import pytest

from tesler_alpha.alpha import alpha_of_face
from tesler_alpha.ehrhart import (
    _interpolate_counts,
    count_points,
    ehrhart_poly,
    face_nvol,
    format_polynomial,
    mcmullen_check,
    mcmullen_coefficient,
    mcmullen_terms,
)
from tesler_alpha.errors import InterpolationMismatchError, UnsupportedCodimError
from tesler_alpha.tesler import (
    FaceSupport,
    UTMatrix,
    dimension,
    enumerate_faces,
    enumerate_vertices,
    in_projected_tesler,
    positions,
)

F = Fraction


def brute_count(n, a, t, zeros=()):
    """Every integer upper-triangular matrix with entries in [0, t*sum(a)], filtered by hook sums."""
    bound = t * sum(a)
    pos = positions(n)
    idx = {p: k for k, p in enumerate(pos)}
    forced = [idx[p] for p in zeros]
    rows = [[idx[(k, j)] for j in range(k, n + 1)] for k in range(1, n + 1)]
    cols = [[idx[(i, k)] for i in range(1, k)] for k in range(1, n + 1)]
    target = [t * x for x in a]
    hits = 0
    for x in product(range(bound + 1), repeat=len(pos)):
        if any(x[f] for f in forced):
            continue
        if all(sum(x[r] for r in rows[k]) - sum(x[c] for c in cols[k]) == target[k] for k in range(n)):
            hits += 1
    return hits


def projected_count(n, a, t):
    """Lattice points of t*PTes_n(a), by its inequalities, on a box around it."""
    bound = t * sum(a)
    m = n - 1
    pos = positions(m)
    ta = [t * x for x in a]
    return sum(
        1 for vals in product(range(bound + 1), repeat=len(pos))
        if in_projected_tesler(UTMatrix(m, dict(zip(pos, vals))), ta)
    )


@pytest.mark.parametrize("a", [(1, 1), (2, 1), (1, 1, 1), (1, 0, 2), (2, 1, 1)])
@pytest.mark.parametrize("t", [0, 1, 2, 3])
def test_count_matches_brute_force(a, t):
    assert count_points(len(a), a, t) == brute_count(len(a), a, t)


@pytest.mark.parametrize("t", [0, 1, 2])
def test_face_count_matches_brute_force(t):
    for k in (1, 2):
        for S in enumerate_faces(3, k):
            assert count_points(3, None, t, S.positions) == brute_count(3, (1, 1, 1), t, S.positions)


@pytest.mark.parametrize("a", [(1, 1, 1), (1, 2, 1)])
@pytest.mark.parametrize("t", [1, 2])
def test_projected_count_agrees(a, t):
    assert count_points(3, a, t) == projected_count(3, a, t)


def test_simple_counts():
    assert [count_points(2, None, t) for t in range(6)] == [1, 2, 3, 4, 5, 6]
    assert count_points(3, None, 1) == 7
    assert all(count_points(n, None, 0) == 1 for n in (2, 3, 4, 5))


def test_count_rejects_bad_input():
    with pytest.raises(ValueError):
        count_points(3, (1, F(1, 2), 1), 1)
    with pytest.raises(ValueError):
        count_points(3, None, -1)


def test_ehrhart_small():
    assert ehrhart_poly(2).coefficients == [1, 1]
    E = ehrhart_poly(3)
    assert E.degree == 3
    assert E.coefficients == [1, F(17, 6), F(5, 2), F(2, 3)]
    assert E(1) == 7
    assert format_polynomial(E.coefficients) == "(2/3)*t^3 + (5/2)*t^2 + (17/6)*t + 1"


@pytest.mark.parametrize("n", [2, 3, 4])
def test_ehrhart_coefficients_positive(n):
    E = ehrhart_poly(n)
    assert E.degree == dimension(n)
    assert E.coefficients[0] == 1
    assert all(c > 0 for c in E.coefficients)


def test_leading_zeros_trimmed():
    assert ehrhart_poly(3, (0, 1, 1)).coefficients == [1, 1]
    assert ehrhart_poly(4, (0, 1, 1, 1)).coefficients == ehrhart_poly(3).coefficients


def test_interpolation_mismatch_detected():
    with pytest.raises(InterpolationMismatchError):
        _interpolate_counts(lambda t: 2 ** t, 1)


def test_vertex_nvol():
    assert face_nvol(3, enumerate_faces(3, 3)[0]).nvol == 1


def test_edge_nvol_is_lattice_length():
    for a in ((1, 1, 1), (1, 2, 3)):
        G = enumerate_vertices(3, a)
        for u, v in G.edges:
            E = FaceSupport(3, tuple(set(G.supports[u].positions) & set(G.supports[v].positions)))
            diff = [x - y for x, y in zip(G.vertices[u].vector(), G.vertices[v].vector())]
            length = 0
            for x in diff:
                length = gcd(length, int(x))
            assert face_nvol(3, E, a).nvol == length


def test_full_polytope_nvol_n2():
    fv = face_nvol(2, FaceSupport(2, ()))
    assert fv.nvol == 1 and fv.simplex_units == 1


def test_simplex_units():
    fv = face_nvol(3, FaceSupport(3, ()))
    assert fv.nvol == F(2, 3)
    assert fv.simplex_units == 4


def test_vertex_alphas_sum_to_one_n3():
    total = sum(alpha_of_face(3, S).value for S in enumerate_faces(3, 3))
    assert total == 1


def test_facet_term_is_half_facet_volumes():
    facets = mcmullen_terms(3, 2)
    assert all(al == F(1, 2) for _, al, _ in facets)
    assert mcmullen_coefficient(3, 2) == F(1, 2) * sum(nv for _, _, nv in facets)


@pytest.mark.parametrize("n", [2, 3])
def test_mcmullen_small(n):
    r = mcmullen_check(n)
    assert r.ok
    assert [c.i for c in r.checks] == list(range(dimension(n), -1, -1))


def test_mcmullen_other_hook_sums():
    # alpha only sees the normal fan, so other positive a must work as well
    assert mcmullen_check(3, (1, 2, 3)).ok
    assert mcmullen_check(3, (2, 1, 1)).ok


def test_mcmullen_unsupported_codim():
    with pytest.raises(UnsupportedCodimError):
        mcmullen_coefficient(4, 2)


def test_json_shape():
    data = mcmullen_check(2).to_json()
    assert data["coefficients"] == ["1/1", "1/1"]
    assert data["status"] == "PASS"
    assert data["sample_counts"]["1"] == 2
