"""Normal-cone and pointed-feasible-cone Gram matrices of faces of PTes_n(a).

For a totally unimodular, full-dimensional polytope the Gram matrix of the
primitive facet normals at a face and the Gram matrix of the primitive
generators of its pointed feasible cone are inverse to each other, so the
latter never has to be built from explicit generators.  The edge-direction
construction is kept here as an independent oracle for exactly that claim.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, partial
from math import gcd
from typing import Literal, Sequence

from ._parallel import pmap
from .errors import NoVertexFoundError, OracleConditionError
from .ratlinalg import RatMatrix, det, dot, gram, mat_invert, solve
from .tesler import (
    FaceSupport,
    HookSumVector,
    Position,
    VertexGraph,
    dimension,
    enumerate_faces,
    enumerate_vertices,
    facet_normal,
)

ConeKind = Literal["normal-cone", "feasible-cone"]


@dataclass(frozen=True)
class MDP:
    """Matrix of dot products of a cone's generators, in a fixed order."""

    k: int
    entries: RatMatrix
    kind: ConeKind
    order: tuple[Position, ...] = ()

    def __getitem__(self, ij):
        return self.entries[ij]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "k": self.k,
            "order": [list(p) for p in self.order],
            "matrix": self.entries.to_json(),
        }


def _ordered(n: int, S) -> tuple[Position, ...]:
    """Generator order: the support's canonical order, or an explicit sequence."""
    if isinstance(S, FaceSupport):
        return S.positions
    order = tuple(tuple(p) for p in S)
    if len(set(order)) != len(order):
        raise ValueError(f"repeated position in {order}")
    FaceSupport(n, order)  # validates the positions
    return order


def ncone_mdp(n: int, S: FaceSupport | Sequence[Position]) -> MDP:
    """Gram matrix of the primitive outer normals of the facets in ``S``."""
    order = _ordered(n, S)
    normals = [facet_normal(n, p).vector() for p in order]
    return MDP(len(order), gram(normals), "normal-cone", order)


def fcone_mdp(n: int, S: FaceSupport | Sequence[Position]) -> MDP:
    """Gram matrix of the pointed-feasible-cone generators, by inversion."""
    C = ncone_mdp(n, S)
    return MDP(C.k, mat_invert(C.entries), "feasible-cone", C.order)


# ---------------------------------------------------------------------------
# edge-direction oracle


def primitive(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Positive multiple of ``v`` that is an integer vector with coprime entries."""
    v = [Fraction(x) for x in v]
    if not any(v):
        raise ValueError("the zero vector has no primitive multiple")
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints)


@lru_cache(maxsize=None)
def _unit_graph(n: int) -> tuple[VertexGraph, tuple[tuple[Fraction, ...], ...]]:
    G = enumerate_vertices(n, HookSumVector.ones(n))
    return G, tuple(v.vector() for v in G.projected())


def _edge_directions(n: int, vi: int) -> dict[int, tuple[int, ...]]:
    G, pts = _unit_graph(n)
    v = pts[vi]
    return {w: primitive([b - a for a, b in zip(v, pts[w])]) for w in G.neighbors(vi)}


def _project_out(vec: Sequence[Fraction], basis: list[Sequence[int]]) -> list[Fraction]:
    """Orthogonal projection of ``vec`` onto the complement of ``span(basis)``.

    Normal equations ``(B^T B) c = B^T vec``; ``basis`` must be independent.
    """
    if not basis:
        return [Fraction(x) for x in vec]
    coeffs = solve(gram(basis), [dot(b, vec) for b in basis])
    out = [Fraction(x) for x in vec]
    for c, b in zip(coeffs, basis):
        out = [x - c * y for x, y in zip(out, b)]
    return out


@dataclass(frozen=True)
class OracleRun:
    mdp: MDP
    base_vertex: int
    generators: tuple[tuple[Fraction, ...], ...]
    edge_directions: tuple[tuple[int, ...], ...]


def oracle_generators(n: int, S: FaceSupport | Sequence[Position], base_vertex: int | None = None) -> OracleRun:
    """Pointed-feasible-cone generators of the face ``S`` of ``PTes_n(1)``.

    From a vertex ``v`` of the face, each facet ``F_i`` of ``S`` has exactly
    one edge at ``v`` leaving it; its primitive direction, projected off the
    linear span of the face, is the generator ``u_i``.  The span of the face
    is spanned by the remaining edges at ``v``, which stay inside the face.

    Pairings ``<n_i, u_i> = -1`` and ``<n_j, u_i> = 0`` are checked exactly.
    """
    order = _ordered(n, S)
    face = FaceSupport(n, order)
    G, _ = _unit_graph(n)
    candidates = G.vertices_of_face(face)
    if not candidates:
        raise NoVertexFoundError(f"face {face} of PTes_{n}(1) has no vertex")
    if base_vertex is None:
        base_vertex = candidates[0]  # supports are sorted, so this is the lexicographically least
    elif base_vertex not in candidates:
        raise NoVertexFoundError(f"vertex {base_vertex} does not lie on face {face}")

    dirs = _edge_directions(n, base_vertex)
    leaving, staying = [], []
    for p in order:
        off = [w for w in G.neighbors(base_vertex) if p not in G.supports[w]]
        if len(off) != 1:
            raise NoVertexFoundError(f"expected one edge leaving facet {p} at vertex {base_vertex}, found {len(off)}")
        leaving.append(dirs[off[0]])
    for w in G.neighbors(base_vertex):
        if face.issubset(G.supports[w]):
            staying.append(dirs[w])
    if len(staying) != face.dim:
        raise NoVertexFoundError(f"face {face} should have {face.dim} edges at its vertex, found {len(staying)}")

    us = [tuple(_project_out(d, staying)) for d in leaving]
    normals = [facet_normal(n, p).vector() for p in order]
    for i, u in enumerate(us):
        for j, nj in enumerate(normals):
            want = -1 if i == j else 0
            got = dot(nj, u)
            if got != want:
                raise OracleConditionError(
                    f"<n_{order[j]}, u_{order[i]}> = {got}, expected {want} (face {face}, vertex {base_vertex})"
                )
    mdp = MDP(len(order), gram(us), "feasible-cone", order)
    return OracleRun(mdp, base_vertex, tuple(us), tuple(leaving))


def fcone_mdp_oracle(n: int, S: FaceSupport | Sequence[Position], base_vertex: int | None = None) -> MDP:
    return oracle_generators(n, S, base_vertex).mdp


def face_vertex_indices(n: int, S: FaceSupport) -> list[int]:
    G, _ = _unit_graph(n)
    return G.vertices_of_face(S)


# ---------------------------------------------------------------------------
# unimodularity


def vertex_edge_matrix(n: int, vi: int) -> RatMatrix:
    """Rows are the primitive edge directions at vertex ``vi`` of ``PTes_n(1)``."""
    dirs = _edge_directions(n, vi)
    return RatMatrix.from_rows([dirs[w] for w in sorted(dirs)])


def check_vertex_unimodularity(n: int, vi: int) -> bool:
    """True iff the feasible cone at vertex ``vi`` is unimodular (det = ±1)."""
    E = vertex_edge_matrix(n, vi)
    return E.is_square and abs(det(E)) == 1


@lru_cache(maxsize=None)
def certify_total_unimodularity(n: int) -> bool:
    """Check every vertex cone of ``PTes_n(1)``; memoised per ``n``."""
    G, _ = _unit_graph(n)
    return all(check_vertex_unimodularity(n, i) for i in range(len(G.vertices)))


@dataclass
class OracleReport:
    n: int
    runs: int
    faces: int
    failures: list[str]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "status": "PASS" if self.ok else "FAIL",
            "faces": self.faces,
            "runs": self.runs,
            "failures": self.failures,
        }


def _oracle_face(n: int, S: FaceSupport) -> tuple[int, list[str]]:
    want = fcone_mdp(n, S).entries
    failures = []
    vs = face_vertex_indices(n, S)
    for v in vs:
        try:
            got = fcone_mdp_oracle(n, S, v).entries
        except (OracleConditionError, NoVertexFoundError) as e:
            failures.append(f"face {S} vertex {v}: {e}")
            continue
        if got != want:
            failures.append(f"face {S} vertex {v}: oracle MDP\n{got}\ndiffers from inverted MDP\n{want}")
    return len(vs), failures


def oracle_report(n: int, max_codim: int = 3, jobs: int | None = None) -> OracleReport:
    """Compare the edge-direction oracle with inversion on every face and every base vertex."""
    faces = [S for k in range(1, min(max_codim, dimension(n)) + 1) for S in enumerate_faces(n, k)]
    results = pmap(partial(_oracle_face, n), faces, jobs)
    return OracleReport(n, sum(r for r, _ in results), len(faces), [f for _, fs in results for f in fs])
