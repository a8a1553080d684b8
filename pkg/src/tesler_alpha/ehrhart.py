"""Lattice-point counts, Ehrhart polynomials, face volumes and McMullen sums.

Counting runs in the Tesler coordinates, where each hook-sum equation only
couples a row to the entries above it in the same column: row ``k`` must
sum to ``t*a_k`` plus whatever the earlier rows put into column ``k``.  The
diagonal-erasing projection is a lattice bijection on the hook-sum affine
space, so the counts are those of the projected polytope as well.

``nvol`` of a face is its relative lattice volume, i.e. the leading
coefficient of the face's own Ehrhart polynomial.  With that convention the
McMullen sum over ``i``-dimensional faces of ``alpha * nvol`` is exactly the
``t^i`` coefficient.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from math import factorial
from typing import Iterator

from ._parallel import pmap
from .alpha import alpha_of_face
from .errors import InterpolationMismatchError, UnsupportedCodimError
from .ratlinalg import format_rational, lagrange_interpolate, poly_eval, trim_coefficients
from .tesler import FaceSupport, HookSumVector, dimension, enumerate_faces, hook_sum_vector, require_positive

# Extra sample points beyond degree + 1, used to catch counting or degree errors.
VERIFY_POINTS = 2


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Weak compositions of ``total`` into ``parts`` non-negative parts."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _integral_hook_sum(a, n: int) -> list[int]:
    hs = hook_sum_vector(a, n)
    if not hs.integral:
        raise ValueError(f"lattice-point counting needs an integral hook sum, got {[str(x) for x in hs]}")
    return [int(x) for x in hs]


def count_points(n: int, a=None, t: int = 1, zeros=()) -> int:
    """Number of lattice points of ``t * Tes_n(a)``, optionally on a face.

    ``zeros`` lists facet positions forced to vanish (a face support).  Row
    by row, the state is the vector of contributions already made to the
    columns not yet processed.
    """
    if t < 0:
        raise ValueError("dilation factor must be non-negative")
    av = _integral_hook_sum(a if a is not None else HookSumVector.ones(n), n)
    zero = {tuple(p) for p in zeros}
    # state: contributions to columns k..n, indexed from column k
    states: dict[tuple[int, ...], int] = {(0,) * n: 1}
    for k in range(1, n):
        cols = [j for j in range(k + 1, n + 1) if (k, j) not in zero]
        slot = {j: idx for idx, j in enumerate(range(k + 1, n + 1))}
        diag_free = (k, k) not in zero
        nxt: dict[tuple[int, ...], int] = defaultdict(int)
        for state, ways in states.items():
            s = t * av[k - 1] + state[0]
            rest = list(state[1:])
            totals = range(s + 1) if diag_free else (s,)
            for m in totals:
                for comp in _compositions(m, len(cols)):
                    new = rest[:]
                    for j, x in zip(cols, comp):
                        new[slot[j]] += x
                    nxt[tuple(new)] += ways
        states = nxt
    # the last row is x_{n,n} = t*a_n + (column n contributions) >= 0
    return sum(states.values())


@dataclass
class EhrhartPoly:
    degree: int
    coefficients: list[Fraction]
    sample_counts: dict[int, int] = field(default_factory=dict)

    def __call__(self, t) -> Fraction:
        return poly_eval(self.coefficients, t)

    def coefficient(self, i: int) -> Fraction:
        return self.coefficients[i] if 0 <= i < len(self.coefficients) else Fraction(0)

    @property
    def leading(self) -> Fraction:
        return self.coefficients[self.degree]

    def __str__(self) -> str:
        return format_polynomial(self.coefficients)

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "coefficients": [format_rational(c) for c in self.coefficients],
            "sample_counts": {str(t): c for t, c in sorted(self.sample_counts.items())},
        }


def format_polynomial(coefficients, var: str = "t") -> str:
    terms = []
    for i in range(len(coefficients) - 1, -1, -1):
        c = Fraction(coefficients[i])
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if mag == 1 else (f"{mag}*{mono}" if mag.denominator == 1 else f"({mag})*{mono}")
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def _interpolate_counts(counter, degree: int) -> EhrhartPoly:
    samples = {t: counter(t) for t in range(degree + 1 + VERIFY_POINTS)}
    coeffs = trim_coefficients(lagrange_interpolate([(t, samples[t]) for t in range(degree + 1)]))
    coeffs += [Fraction(0)] * (degree + 1 - len(coeffs))
    for t in range(degree + 1, degree + 1 + VERIFY_POINTS):
        if poly_eval(coeffs, t) != samples[t]:
            raise InterpolationMismatchError(
                f"degree-{degree} interpolant predicts {poly_eval(coeffs, t)} points at t={t}, counted {samples[t]}"
            )
    return EhrhartPoly(degree, coeffs, samples)


def ehrhart_poly(n: int, a=None) -> EhrhartPoly:
    """Ehrhart polynomial of ``Tes_n(a)`` (equivalently of ``PTes_n(a)``).

    Leading zeros of ``a`` are trimmed; the remaining first entry must be
    positive, which makes the dimension ``C(n', 2)``.
    """
    hs = hook_sum_vector(a if a is not None else HookSumVector.ones(n), n).trimmed()
    m = hs.n
    return _interpolate_counts(lambda t: count_points(m, hs, t), dimension(m))


def face_ehrhart_poly(n: int, S: FaceSupport, a=None) -> EhrhartPoly:
    a = require_positive(a if a is not None else HookSumVector.ones(n), n)
    return _interpolate_counts(lambda t: count_points(n, a, t, S.positions), S.dim)


@dataclass(frozen=True)
class FaceVolume:
    support: FaceSupport
    dim: int
    nvol: Fraction

    @property
    def simplex_units(self) -> Fraction:
        """Volume measured in unimodular simplices, ``dim! * nvol``."""
        return factorial(self.dim) * self.nvol

    def to_json(self) -> dict:
        return {
            "support": self.support.to_json(),
            "dim": self.dim,
            "nvol": format_rational(self.nvol),
            "simplex_units": format_rational(self.simplex_units),
        }


def face_nvol(n: int, S: FaceSupport, a=None) -> FaceVolume:
    """Relative lattice volume of a face: leading coefficient of its Ehrhart polynomial."""
    if S.dim == 0:
        return FaceVolume(S, 0, Fraction(1))
    E = face_ehrhart_poly(n, S, a)
    return FaceVolume(S, S.dim, E.leading)


def _weighted_term(n: int, a, S: FaceSupport) -> tuple[Fraction, Fraction]:
    return alpha_of_face(n, S).value, face_nvol(n, S, a).nvol


def mcmullen_terms(n: int, i: int, a=None, jobs: int | None = None) -> list[tuple[FaceSupport, Fraction, Fraction]]:
    """``(face, alpha, nvol)`` for every ``i``-dimensional face."""
    d = dimension(n)
    codim = d - i
    if not 0 <= i <= d:
        raise ValueError(f"face dimension must lie in [0, {d}], got {i}")
    if codim > 3:
        raise UnsupportedCodimError(f"alpha values are only available up to codimension 3 (asked for {codim})")
    a = require_positive(a if a is not None else HookSumVector.ones(n), n)
    faces = enumerate_faces(n, codim)
    terms = pmap(partial(_weighted_term, n, a), faces, jobs)
    return [(S, al, nv) for S, (al, nv) in zip(faces, terms)]


def mcmullen_coefficient(n: int, i: int, a=None, jobs: int | None = None) -> Fraction:
    """Sum of ``alpha(F) * nvol(F)`` over the ``i``-dimensional faces."""
    return sum((al * nv for _, al, nv in mcmullen_terms(n, i, a, jobs)), Fraction(0))


@dataclass
class CoefficientCheck:
    i: int
    codim: int
    faces: int
    ehrhart: Fraction
    mcmullen: Fraction

    @property
    def match(self) -> bool:
        return self.ehrhart == self.mcmullen

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "codim": self.codim,
            "faces": self.faces,
            "ehrhart": format_rational(self.ehrhart),
            "mcmullen": format_rational(self.mcmullen),
            "match": self.match,
        }


@dataclass
class McMullenReport:
    n: int
    a: HookSumVector
    poly: EhrhartPoly
    checks: list[CoefficientCheck]

    @property
    def ok(self) -> bool:
        return all(c.match for c in self.checks)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "a": [format_rational(x) for x in self.a],
            "degree": self.poly.degree,
            "coefficients": [format_rational(c) for c in self.poly.coefficients],
            "sample_counts": {str(t): c for t, c in sorted(self.poly.sample_counts.items())},
            "mcmullen": [c.to_json() for c in self.checks],
            "status": "PASS" if self.ok else "FAIL",
        }


def mcmullen_check(n: int, a=None, jobs: int | None = None) -> McMullenReport:
    """Compare each Ehrhart coefficient ``e_i`` with ``d - i <= 3`` to its McMullen sum."""
    a = require_positive(a if a is not None else HookSumVector.ones(n), n)
    E = ehrhart_poly(n, a)
    d = E.degree
    checks = []
    for i in range(d, max(d - 3, 0) - 1, -1):
        terms = mcmullen_terms(n, i, a, jobs)
        total = sum((al * nv for _, al, nv in terms), Fraction(0))
        checks.append(CoefficientCheck(i, d - i, len(terms), E.coefficient(i), total))
    return McMullenReport(n, a, E, checks)
