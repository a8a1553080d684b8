"""Tesler polytopes, their diagonal-erasing projection, and the face lattice.

Positions are 1-indexed pairs ``(i, j)`` with ``1 <= i <= j <= n``.  A point
of ``Tes_n(a)`` is an upper-triangular ``n x n`` matrix with non-negative
entries whose hook-sum vector is ``a``; erasing its diagonal gives the
corresponding point of the projected polytope ``PTes_n(a)`` inside the
``(n-1) x (n-1)`` upper-triangular matrices, where it is full-dimensional.

Faces are named by the set of facet positions whose entries vanish on them
(:class:`FaceSupport`).  A set of positions names a face exactly when it
does not zero out an entire row.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    DimensionMismatchError,
    InfeasibleVertexError,
    InvalidFacetError,
    NonPositiveFirstEntryError,
    NonPositiveHookSumError,
)
from .ratlinalg import RatMatrix, as_rational, format_rational, parse_rational, solve

Position = tuple[int, int]


def positions(n: int) -> list[Position]:
    """All upper-triangular positions of an ``n x n`` matrix, lexicographic."""
    return [(i, j) for i in range(1, n + 1) for j in range(i, n + 1)]


def dimension(n: int) -> int:
    """Dimension of ``Tes_n(a)`` when ``a_1 > 0``."""
    return comb(n, 2)


# ---------------------------------------------------------------------------
# hook sums


@dataclass(frozen=True)
class HookSumVector:
    values: tuple[Fraction, ...]

    def __post_init__(self):
        vals = tuple(as_rational(x) for x in self.values)
        if not vals:
            raise ValueError("hook-sum vector must have at least one entry")
        if any(x < 0 for x in vals):
            raise ValueError(f"hook sums must be non-negative, got {[str(x) for x in vals]}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def ones(cls, n: int) -> HookSumVector:
        return cls((1,) * n)

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def strictly_positive(self) -> bool:
        return all(x > 0 for x in self.values)

    @property
    def integral(self) -> bool:
        return all(x.denominator == 1 for x in self.values)

    @property
    def leading_zeros(self) -> int:
        p = 0
        while p < self.n and self.values[p] == 0:
            p += 1
        return p

    def trimmed(self) -> HookSumVector:
        """Drop leading zeros.

        ``Tes_n(0,..,0,b)`` is isomorphic to ``Tes_{n-p}(b)`` when ``p``
        leading entries vanish; the first ``p`` rows of every point are zero.
        """
        p = self.leading_zeros
        if p == self.n:
            raise NonPositiveFirstEntryError("hook-sum vector is identically zero")
        return HookSumVector(self.values[p:])

    def scaled(self, t) -> HookSumVector:
        return HookSumVector(tuple(t * x for x in self.values))

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return self.n

    def __getitem__(self, k):
        return self.values[k]


def hook_sum_vector(a, n: int | None = None) -> HookSumVector:
    if a is None:
        if n is None:
            raise ValueError("need either a hook-sum vector or n")
        return HookSumVector.ones(n)
    hs = a if isinstance(a, HookSumVector) else HookSumVector(tuple(a))
    if n is not None and hs.n != n:
        raise DimensionMismatchError(f"hook-sum vector has length {hs.n}, expected {n}")
    return hs


def require_positive(a, n: int | None = None) -> HookSumVector:
    """Return ``a`` as a strictly positive hook-sum vector or raise.

    Leading zeros are not trimmed here; callers that accept them trim first.
    """
    hs = hook_sum_vector(a, n)
    if not hs.strictly_positive:
        raise NonPositiveHookSumError(
            "face-lattice operations need a strictly positive hook sum; "
            f"got {[str(x) for x in hs]}"
        )
    return hs


# ---------------------------------------------------------------------------
# upper-triangular matrices


class UTMatrix:
    """Upper-triangular matrix of rationals, indexed by 1-based positions."""

    __slots__ = ("n", "_entries")

    def __init__(self, n: int, entries: Mapping[Position, object] | None = None):
        if n < 0:
            raise ValueError("size must be non-negative")
        self.n = n
        vals = {p: Fraction(0) for p in positions(n)}
        for p, x in (entries or {}).items():
            p = tuple(p)
            if p not in vals:
                raise KeyError(f"{p} is not an upper-triangular position of a {n}x{n} matrix")
            vals[p] = as_rational(x)
        self._entries = vals

    @classmethod
    def from_vector(cls, n: int, vector: Sequence) -> UTMatrix:
        pos = positions(n)
        if len(vector) != len(pos):
            raise DimensionMismatchError(f"need {len(pos)} coordinates for n={n}, got {len(vector)}")
        return cls(n, dict(zip(pos, vector)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> UTMatrix:
        """Build from the upper triangle given row by row (row i has n-i+1 entries)."""
        n = len(rows)
        entries = {}
        for i, row in enumerate(rows, start=1):
            if len(row) != n - i + 1:
                raise ValueError(f"row {i} must have {n - i + 1} entries")
            for j, x in enumerate(row, start=i):
                entries[(i, j)] = x
        return cls(n, entries)

    @classmethod
    def basis(cls, n: int, pos: Position) -> UTMatrix:
        """The matrix ``e_{i,j}`` with a single 1 at ``pos``."""
        return cls(n, {pos: 1})

    def __getitem__(self, pos: Position) -> Fraction:
        return self._entries[tuple(pos)]

    def items(self):
        return self._entries.items()

    def vector(self) -> tuple[Fraction, ...]:
        return tuple(self._entries[p] for p in positions(self.n))

    def _combine(self, other: UTMatrix, sign: int) -> UTMatrix:
        if other.n != self.n:
            raise DimensionMismatchError(f"sizes {self.n} and {other.n} differ")
        return UTMatrix(self.n, {p: x + sign * other[p] for p, x in self.items()})

    def __add__(self, other: UTMatrix) -> UTMatrix:
        return self._combine(other, 1)

    def __sub__(self, other: UTMatrix) -> UTMatrix:
        return self._combine(other, -1)

    def __neg__(self) -> UTMatrix:
        return UTMatrix(self.n, {p: -x for p, x in self.items()})

    def __mul__(self, c) -> UTMatrix:
        c = as_rational(c)
        return UTMatrix(self.n, {p: c * x for p, x in self.items()})

    __rmul__ = __mul__

    def dot(self, other: UTMatrix) -> Fraction:
        if other.n != self.n:
            raise DimensionMismatchError(f"sizes {self.n} and {other.n} differ")
        return sum((x * other[p] for p, x in self.items()), Fraction(0))

    def __eq__(self, other):
        if not isinstance(other, UTMatrix):
            return NotImplemented
        return self.n == other.n and self._entries == other._entries

    def __hash__(self):
        return hash((self.n, self.vector()))

    def __repr__(self):
        return f"UTMatrix({self.n}, {{{', '.join(f'{p}: {x}' for p, x in self.items() if x)}}})"

    def __str__(self):
        cells = [[str(self[i, j]) if j >= i else "" for j in range(1, self.n + 1)] for i in range(1, self.n + 1)]
        w = max((len(c) for r in cells for c in r), default=1)
        return "\n".join(" ".join(c.rjust(w) for c in r) for r in cells)

    def to_json(self) -> dict[str, str]:
        return {f"{i},{j}": format_rational(x) for (i, j), x in self.items()}

    @classmethod
    def from_json(cls, data: Mapping[str, object]) -> UTMatrix:
        entries = {}
        for key, val in data.items():
            i, j = (int(s) for s in key.split(","))
            entries[(i, j)] = parse_rational(val)
        n = max((j for _, j in entries), default=0)
        if len(entries) != comb(n + 1, 2):
            raise ValueError(f"expected {comb(n + 1, 2)} entries for n={n}, got {len(entries)}")
        return cls(n, entries)


def hook_sum(M: UTMatrix) -> list[Fraction]:
    """``eta_k(M)``: row-k sum minus the above-diagonal part of column k."""
    n = M.n
    return [
        sum((M[k, j] for j in range(k, n + 1)), Fraction(0)) - sum((M[i, k] for i in range(1, k)), Fraction(0))
        for k in range(1, n + 1)
    ]


def interior_point(a) -> UTMatrix:
    """A point of ``Tes_n(a)`` with every entry positive.

    Row k is constant ``c_k`` across its ``n-k+1`` entries, with
    ``c_k = (c_1 + ... + c_{k-1} + a_k) / (n - k + 1)``.
    """
    a = hook_sum_vector(a)
    if a[0] <= 0:
        raise NonPositiveFirstEntryError(f"a_1 must be positive, got {a[0]}")
    n = a.n
    entries = {}
    prefix = Fraction(0)
    for k in range(1, n + 1):
        c = (prefix + a[k - 1]) / (n - k + 1)
        for j in range(k, n + 1):
            entries[(k, j)] = c
        prefix += c
    return UTMatrix(n, entries)


def psi_diag(M: UTMatrix) -> UTMatrix:
    """Erase the diagonal: output ``(i, j)`` is input ``(i, j+1)``."""
    if M.n < 2:
        raise ValueError("psi_diag needs n >= 2")
    m = M.n - 1
    return UTMatrix(m, {(i, j): M[i, j + 1] for i, j in positions(m)})


def lift_psi_diag(Y: UTMatrix, a) -> UTMatrix:
    """The unique matrix with hook sums ``a`` whose off-diagonal part is ``Y``."""
    n = Y.n + 1
    a = hook_sum_vector(a, n)
    entries = {(i, j + 1): y for (i, j), y in Y.items()}
    for k in range(1, n + 1):
        row_rest = sum((entries[k, j] for j in range(k + 1, n + 1)), Fraction(0))
        col_above = sum((entries[i, k] for i in range(1, k)), Fraction(0))
        entries[(k, k)] = a[k - 1] - row_rest + col_above
    return UTMatrix(n, entries)


def in_tesler(M: UTMatrix, a) -> bool:
    return all(x >= 0 for _, x in M.items()) and hook_sum(M) == list(hook_sum_vector(a, M.n))


# ---------------------------------------------------------------------------
# facets and their normals in the projected coordinates


def facet_positions(n: int) -> list[Position]:
    """Positions whose vanishing defines a facet: everything except ``(n, n)``."""
    if n < 2:
        raise ValueError("facets exist only for n >= 2")
    return [p for p in positions(n) if p != (n, n)]


def _check_facet(n: int, pos: Position) -> Position:
    pos = tuple(pos)
    i, j = pos
    if not (1 <= i <= j <= n) or pos == (n, n):
        raise InvalidFacetError(f"{pos} is not a facet position for n={n}")
    return pos


def shifted_hook_sum_matrix(m: int, k: int) -> UTMatrix:
    """``s_k``: +1 along row k, -1 on column k-1 strictly above row k."""
    entries: dict[Position, int] = {(k, j): 1 for j in range(k, m + 1)}
    for i in range(1, k):
        entries[(i, k - 1)] = -1
    return UTMatrix(m, entries)


def facet_normal(n: int, pos: Position) -> UTMatrix:
    """Primitive outer normal of the facet ``F_{i,j}`` of ``PTes_n(a)``."""
    i, j = _check_facet(n, pos)
    if i == j:
        return shifted_hook_sum_matrix(n - 1, i)
    return -UTMatrix.basis(n - 1, (i, j - 1))


def facet_offset(n: int, pos: Position, a) -> Fraction:
    """Right-hand side of the facet inequality ``<normal, Y> <= offset``."""
    i, j = _check_facet(n, pos)
    a = hook_sum_vector(a, n)
    return a[i - 1] if i == j else Fraction(0)


def in_projected_tesler(Y: UTMatrix, a) -> bool:
    """Membership in ``PTes_n(a)`` via its facet inequalities.

    Only valid for strictly positive ``a``; used to cross-check the lift.
    """
    n = Y.n + 1
    return all(facet_normal(n, p).dot(Y) <= facet_offset(n, p, a) for p in facet_positions(n))


# ---------------------------------------------------------------------------
# faces


@dataclass(frozen=True, order=True)
class FaceSupport:
    n: int
    positions: tuple[Position, ...] = field(default=())

    def __post_init__(self):
        pos = tuple(sorted({tuple(p) for p in self.positions}))
        for p in pos:
            _check_facet(self.n, p)
        object.__setattr__(self, "positions", pos)

    @property
    def codim(self) -> int:
        return len(self.positions)

    @property
    def dim(self) -> int:
        return dimension(self.n) - self.codim

    def is_valid(self) -> bool:
        return is_valid_face_support(self.n, self.positions)

    def __contains__(self, pos) -> bool:
        return tuple(pos) in self.positions

    def __iter__(self) -> Iterator[Position]:
        return iter(self.positions)

    def __len__(self) -> int:
        return len(self.positions)

    def issubset(self, other: FaceSupport) -> bool:
        return set(self.positions) <= set(other.positions)

    def to_json(self) -> list[list[int]]:
        return [list(p) for p in self.positions]

    @classmethod
    def from_json(cls, n: int, data: Iterable[Sequence[int]]) -> FaceSupport:
        return cls(n, tuple(tuple(p) for p in data))

    def __str__(self) -> str:
        return "{" + ", ".join(f"({i},{j})" for i, j in self.positions) + "}"


def is_valid_face_support(n: int, S: Iterable[Position]) -> bool:
    """True iff no row ``i`` has all of ``(i,i), ..., (i,n)`` in ``S``."""
    S = {tuple(p) for p in S}
    for p in S:
        _check_facet(n, p)
    counts: dict[int, int] = {}
    for i, _ in S:
        counts[i] = counts.get(i, 0) + 1
    return all(c < n - i + 1 for i, c in counts.items())


def _free_sets(n: int, m: int, row: int = 1) -> Iterator[tuple[Position, ...]]:
    """Sets of ``m`` facet positions meeting every row ``row..n-1``."""
    if row == n:
        if m == 0:
            yield ()
        return
    rows_left = n - row
    cells = [(row, j) for j in range(row, n + 1)]
    for size in range(1, min(len(cells), m - (rows_left - 1)) + 1):
        for chosen in combinations(cells, size):
            for rest in _free_sets(n, m - size, row + 1):
                yield chosen + rest


def enumerate_faces(n: int, k: int) -> list[FaceSupport]:
    """All codimension-``k`` faces of ``PTes_n(a)`` for any positive ``a``.

    Small ``k`` iterates the supports themselves; large ``k`` iterates their
    complements, which must leave at least one free facet position in each of
    the rows ``1..n-1`` (row ``n`` always keeps ``(n, n)``).
    """
    d = dimension(n)
    if not 0 <= k <= d:
        raise ValueError(f"codimension must lie in [0, {d}] for n={n}, got {k}")
    if n < 2:
        return [FaceSupport(n, ())]
    facets = facet_positions(n)
    m = len(facets) - k
    if k <= m:
        found = (S for S in combinations(facets, k) if is_valid_face_support(n, S))
    else:
        found = (tuple(p for p in facets if p not in set(C)) for C in _free_sets(n, m))
    return sorted(FaceSupport(n, S) for S in found)


def faces_containing(support: FaceSupport) -> list[FaceSupport]:
    """Faces one dimension up that contain the given face (drop one facet)."""
    return [FaceSupport(support.n, tuple(q for q in support if q != p)) for p in support]


# ---------------------------------------------------------------------------
# vertices and the edge graph


@dataclass
class VertexGraph:
    n: int
    a: HookSumVector
    supports: list[FaceSupport]
    vertices: list[UTMatrix]
    edges: list[tuple[int, int]]
    _adj: dict[int, list[int]] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        adj: dict[int, list[int]] = {i: [] for i in range(len(self.vertices))}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self._adj = {i: sorted(vs) for i, vs in adj.items()}

    def neighbors(self, i: int) -> list[int]:
        return self._adj[i]

    def degree(self, i: int) -> int:
        return len(self._adj[i])

    def index_of(self, support: FaceSupport) -> int:
        return self.supports.index(support)

    def vertices_of_face(self, S: FaceSupport) -> list[int]:
        return [i for i, T in enumerate(self.supports) if S.issubset(T)]

    def projected(self) -> list[UTMatrix]:
        return [psi_diag(v) for v in self.vertices]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "a": [format_rational(x) for x in self.a],
            "vertices": [v.to_json() for v in self.vertices],
            "supports": [S.to_json() for S in self.supports],
            "edges": [list(e) for e in self.edges],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> VertexGraph:
        n = int(data["n"])
        vertices = [UTMatrix.from_json(v) for v in data["vertices"]]
        if "a" in data:
            a = hook_sum_vector([parse_rational(x) for x in data["a"]], n)
        else:
            a = hook_sum_vector(hook_sum(vertices[0]), n)
        supports = [FaceSupport.from_json(n, S) for S in data.get("supports", [])]
        edges = [tuple(e) for e in data.get("edges", [])]
        return cls(n, a, supports, vertices, edges)


def solve_vertex(n: int, a, support: FaceSupport) -> UTMatrix:
    """Solve the hook-sum equations with the support's entries fixed at zero."""
    a = hook_sum_vector(a, n)
    free = [p for p in positions(n) if p not in support]
    rows = []
    for k in range(1, n + 1):
        rows.append([1 if (i == k) else (-1 if (j == k and i < k) else 0) for i, j in free])
    x = solve(RatMatrix.from_rows(rows), list(a))
    M = UTMatrix(n, dict(zip(free, x)))
    if any(v < 0 for v in x):
        raise InfeasibleVertexError(f"support {support} gives a point outside Tes_{n}(a)")
    return M


def enumerate_vertices(n: int, a=None) -> VertexGraph:
    """Vertices of ``Tes_n(a)`` with the edge graph of the polytope.

    Two vertices are adjacent when their supports share ``d-1`` positions,
    i.e. both lie on the edge named by the shared support.
    """
    a = require_positive(a if a is not None else HookSumVector.ones(n), n)
    d = dimension(n)
    supports = enumerate_faces(n, d)
    vertices = [solve_vertex(n, a, S) for S in supports]
    index = {S: i for i, S in enumerate(supports)}
    edges = set()
    for E in enumerate_faces(n, d - 1) if d >= 1 else []:
        ends = [index[S] for S in _vertex_supersets(E)]
        if len(ends) != 2:
            raise InfeasibleVertexError(f"edge {E} has {len(ends)} vertices")
        edges.add(tuple(sorted(ends)))
    return VertexGraph(n, a, supports, vertices, sorted(edges))


def _vertex_supersets(E: FaceSupport) -> list[FaceSupport]:
    n = E.n
    return [
        FaceSupport(n, E.positions + (q,))
        for q in facet_positions(n)
        if q not in E and is_valid_face_support(n, E.positions + (q,))
    ]


# ---------------------------------------------------------------------------
# deformations


def _as_vector(p) -> tuple[Fraction, ...]:
    if isinstance(p, UTMatrix):
        return p.vector()
    return tuple(as_rational(x) for x in p)


def edge_ratio(dp: Sequence[Fraction], dq: Sequence[Fraction]) -> Fraction | None:
    """The ``r >= 0`` with ``dq = r * dp``, or None if there is none."""
    if len(dp) != len(dq):
        raise DimensionMismatchError(f"vectors of length {len(dp)} and {len(dq)}")
    k = next((i for i, x in enumerate(dp) if x != 0), None)
    if k is None:
        return Fraction(0) if all(x == 0 for x in dq) else None
    r = Fraction(dq[k]) / dp[k]
    if r < 0 or any(y != r * x for x, y in zip(dp, dq)):
        return None
    return r


def deformation_ratios(P: VertexGraph, Q_vertices: Sequence, phi) -> dict[tuple[int, int], Fraction] | None:
    """Per-edge scaling factors of the vertex map, or None if ``phi`` fails.

    ``phi`` is a sequence or mapping from P-vertex index to Q-vertex index.
    """
    Pv = [_as_vector(v) for v in P.vertices]
    Qv = [_as_vector(v) for v in Q_vertices]
    dims = {len(v) for v in Pv} | {len(v) for v in Qv}
    if len(dims) > 1:
        raise DimensionMismatchError(f"P and Q points live in spaces of dimensions {sorted(dims)}")
    phi_map = dict(phi) if isinstance(phi, Mapping) else dict(enumerate(phi))
    phi_map = {int(k): int(v) for k, v in phi_map.items()}
    if set(phi_map) != set(range(len(Pv))):
        raise DimensionMismatchError("phi must assign an image to every vertex of P")
    if any(not 0 <= v < len(Qv) for v in phi_map.values()):
        raise DimensionMismatchError("phi maps outside the vertex list of Q")
    if set(phi_map.values()) != set(range(len(Qv))):
        return None
    ratios = {}
    for u, v in P.edges:
        dp = [x - y for x, y in zip(Pv[u], Pv[v])]
        dq = [x - y for x, y in zip(Qv[phi_map[u]], Qv[phi_map[v]])]
        r = edge_ratio(dp, dq)
        if r is None:
            return None
        ratios[(u, v)] = r
    return ratios


def verify_deformation(P: VertexGraph, Q_vertices: Sequence, phi) -> bool:
    """True iff ``phi`` exhibits ``conv(Q_vertices)`` as a deformation of P."""
    return deformation_ratios(P, Q_vertices, phi) is not None
