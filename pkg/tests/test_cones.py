from fractions import Fraction

import pytest

from tesler_alpha.cones import (
    certify_total_unimodularity,
    check_vertex_unimodularity,
    face_vertex_indices,
    fcone_mdp,
    fcone_mdp_oracle,
    ncone_mdp,
    oracle_generators,
    oracle_report,
    primitive,
    vertex_edge_matrix,
)
from tesler_alpha.ratlinalg import RatMatrix, dot
from tesler_alpha.tesler import FaceSupport, enumerate_faces, facet_normal

F = Fraction


def test_two_diagonal_facets_n3():
    S = FaceSupport(3, ((1, 1), (2, 2)))
    assert ncone_mdp(3, S).entries == RatMatrix.from_rows([[2, -1], [-1, 2]])
    assert fcone_mdp(3, S).entries == RatMatrix.from_rows([[F(2, 3), F(1, 3)], [F(1, 3), F(2, 3)]])


def test_explicit_order():
    C = ncone_mdp(4, [(1, 2), (1, 1)])
    assert C.order == ((1, 2), (1, 1))
    # s_1 has +1 on (1,1) of U(3); e_{1,2}->-e_{1,1}
    assert C.entries == RatMatrix.from_rows([[1, -1], [-1, 3]])
    with pytest.raises(ValueError):
        ncone_mdp(4, [(1, 1), (1, 1)])


def test_off_diagonal_only_is_orthonormal():
    S = FaceSupport(4, ((1, 2), (2, 4), (1, 4)))
    assert ncone_mdp(4, S).entries == RatMatrix.identity(3)
    assert fcone_mdp(4, S).entries == RatMatrix.identity(3)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_inverse_pair_all_faces(n):
    for k in (1, 2, 3):
        for S in enumerate_faces(n, k):
            C = ncone_mdp(n, S).entries
            M = fcone_mdp(n, S).entries
            assert C @ M == RatMatrix.identity(k)
            assert M.is_symmetric() and M.is_positive_definite()


def test_primitive():
    assert primitive([F(1, 2), F(-3, 4), 0]) == (2, -3, 0)
    assert primitive([0, 6, -4]) == (0, 3, -2)
    with pytest.raises(ValueError):
        primitive([0, 0])


def test_oracle_side_conditions_n3():
    S = FaceSupport(3, ((1, 1), (1, 2)))
    for v in face_vertex_indices(3, S):
        run = oracle_generators(3, S, v)
        normals = [facet_normal(3, p).vector() for p in S]
        for i, u in enumerate(run.generators):
            for j, nv in enumerate(normals):
                assert dot(nv, u) == (-1 if i == j else 0)
        assert run.mdp.entries == fcone_mdp(3, S).entries


def test_oracle_agrees_everywhere_n3():
    r = oracle_report(3)
    assert r.ok, r.failures[:1]
    assert r.faces == 5 + 9 + 6
    assert r.runs == 42


def test_oracle_facet_has_inverse_norm():
    # one generator, normal of squared norm n-1
    assert fcone_mdp_oracle(4, [(2, 2)]).entries == RatMatrix.from_rows([[F(1, 3)]])


@pytest.mark.parametrize("n", [2, 3, 4])
def test_unimodular(n):
    assert certify_total_unimodularity(n)


def test_vertex_edge_matrix_is_square():
    E = vertex_edge_matrix(4, 0)
    assert E.rows == E.cols == 6
    assert check_vertex_unimodularity(4, 0)
