"""Berline-Vergne alpha values for faces of codimension at most 3.

For a face whose pointed feasible cone is unimodular with respect to the
projected lattice, with primitive generators ``u_i`` and Gram matrix ``M``:

* codim 0: 1
* codim 1: 1/2
* codim 2: 1/4 + 1/12 * sum over the pair of m_12/m_11 + m_12/m_22
* codim 3: 1/8 + 1/24 * sum over the three pairs of m_ij/m_ii + m_ij/m_jj

On ``PTes_n(1)`` every face with only off-diagonal facets has an orthonormal
normal cone, so its value is ``1/2^k``.  Faces touching a diagonal facet
``(l, l)`` fall into a finite list of cases according to how the other
facet positions meet the ``l``-th hook; each case has a closed form in ``n``
and closed-form Gram matrices, reproduced here for table verification.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from itertools import combinations
from typing import Callable, Literal

from ._parallel import pmap
from .cones import MDP, certify_total_unimodularity, fcone_mdp, ncone_mdp
from .errors import CaseUnavailableError, UnsupportedCodimError, ZeroDiagonalError
from .ratlinalg import RatMatrix
from .tesler import FaceSupport, Position, enumerate_faces

Method = Literal["constant", "mdp-formula", "closed-form-case", "hypercube-fast-path"]

# Largest n for which vertex cones are certified unimodular by enumeration.
CERTIFY_MAX_N = 6


@dataclass(frozen=True)
class AlphaValue:
    value: Fraction
    codim: int
    method: Method

    def __post_init__(self):
        if self.codim == 0 and self.value != 1:
            raise ValueError("codimension-0 faces have alpha = 1")
        if self.codim == 1 and self.value != Fraction(1, 2):
            raise ValueError("codimension-1 faces have alpha = 1/2")


@dataclass(frozen=True, order=True)
class CaseTag:
    codim: int
    label: str

    def __str__(self):
        return self.label


HYPERCUBE = "hypercube"
CODIM2_LABELS = ("(1)(i)", "(1)(ii)", "(1)(iii)", "(2)")
CODIM3_LABELS = (
    "(1)(i)", "(1)(ii)", "(1)(iii)", "(1)(iv)", "(1)(v)", "(1)(vi)",
    "(2)(i)", "(2)(ii)", "(2)(iii)", "(2)(iv)", "(3)",
)


# ---------------------------------------------------------------------------
# formulas


def _matrix(M: MDP | RatMatrix) -> RatMatrix:
    return M.entries if isinstance(M, MDP) else M


def _ratio_sum(M: RatMatrix) -> Fraction:
    total = Fraction(0)
    for i, j in combinations(range(M.rows), 2):
        if M[i, i] == 0 or M[j, j] == 0:
            raise ZeroDiagonalError("Gram matrix of a pointed cone has a zero diagonal entry")
        total += M[i, j] / M[i, i] + M[i, j] / M[j, j]
    return total


def alpha_codim01(codim: int) -> AlphaValue:
    if codim == 0:
        return AlphaValue(Fraction(1), 0, "constant")
    if codim == 1:
        return AlphaValue(Fraction(1, 2), 1, "constant")
    raise UnsupportedCodimError(f"codimension {codim} is not 0 or 1")


def alpha_codim2(M: MDP | RatMatrix) -> AlphaValue:
    M = _matrix(M)
    if M.rows != 2 or not M.is_square:
        raise ValueError("codimension-2 formula needs a 2x2 Gram matrix")
    return AlphaValue(Fraction(1, 4) + _ratio_sum(M) / 12, 2, "mdp-formula")


def alpha_codim3(M: MDP | RatMatrix) -> AlphaValue:
    M = _matrix(M)
    if M.rows != 3 or not M.is_square:
        raise ValueError("codimension-3 formula needs a 3x3 Gram matrix")
    return AlphaValue(Fraction(1, 8) + _ratio_sum(M) / 24, 3, "mdp-formula")


def alpha_hypercube(k: int) -> AlphaValue:
    """Faces cut out by coordinate facets only: the cone is an orthant."""
    if k < 0:
        raise ValueError("codimension must be non-negative")
    return AlphaValue(Fraction(1, 2 ** k), k, "constant" if k <= 1 else "hypercube-fast-path")


def alpha_from_mdp(M: MDP | RatMatrix) -> AlphaValue:
    M = _matrix(M)
    if M.rows <= 1:
        return alpha_codim01(M.rows)
    if M.rows == 2:
        return alpha_codim2(M)
    if M.rows == 3:
        return alpha_codim3(M)
    raise UnsupportedCodimError(f"no alpha formula for codimension {M.rows}")


# ---------------------------------------------------------------------------
# case analysis on PTes_n(1)


def hook_incidence(l: int, pos: Position) -> str | None:
    """'row' / 'col' / None for an off-diagonal position against the l-th hook."""
    i, j = pos
    if i == l:
        return "row"
    if j == l:
        return "col"
    return None


def _analyze(n: int, S: FaceSupport) -> tuple[CaseTag, tuple[Position, ...]]:
    """Case label and the generator order used by the reference tables."""
    k = S.codim
    if k not in (2, 3):
        raise UnsupportedCodimError(f"cases are defined for codimension 2 and 3, got {k}")
    diags = [p for p in S if p[0] == p[1]]
    offs = [p for p in S if p[0] != p[1]]
    if not diags:
        return CaseTag(k, HYPERCUBE), S.positions

    if k == 2:
        if len(diags) == 2:
            return CaseTag(2, "(2)"), tuple(diags)
        (l, _), q = diags[0], offs[0]
        label = {"row": "(1)(i)", "col": "(1)(ii)", None: "(1)(iii)"}[hook_incidence(l, q)]
        return CaseTag(2, label), (diags[0], q)

    if len(diags) == 3:
        return CaseTag(3, "(3)"), tuple(diags)

    if len(diags) == 1:
        d = diags[0]
        l = d[0]
        inc = {q: hook_incidence(l, q) for q in offs}
        rank = {"row": 0, "col": 1, None: 2}
        q1, q2 = sorted(offs, key=lambda q: (rank[inc[q]], q))
        label = {
            (None, None): "(1)(i)",
            ("row", None): "(1)(ii)",
            ("col", None): "(1)(iii)",
            ("row", "row"): "(1)(iv)",
            ("row", "col"): "(1)(v)",
            ("col", "col"): "(1)(vi)",
        }[(inc[q1], inc[q2])]
        return CaseTag(3, label), (d, q1, q2)

    # two diagonal facets and one off-diagonal position
    (dl, dm), q = diags, offs[0]
    il, im = hook_incidence(dl[0], q), hook_incidence(dm[0], q)
    if il is None and im is None:
        return CaseTag(3, "(2)(i)"), (dl, dm, q)
    if il is None or im is None:
        # the hooked diagonal goes second
        hooked, other = (dl, dm) if im is None else (dm, dl)
        inc = il if im is None else im
        return CaseTag(3, "(2)(ii)" if inc == "row" else "(2)(iii)"), (other, hooked, q)
    # on the row of one hook and the column of the other; row-hook first
    first, second = (dl, dm) if il == "row" else (dm, dl)
    return CaseTag(3, "(2)(iv)"), (first, second, q)


def classify_case(n: int, S: FaceSupport) -> CaseTag:
    return _analyze(n, S)[0]


def table_order(n: int, S: FaceSupport) -> tuple[Position, ...]:
    """Facet order under which the MDPs take their tabulated form."""
    return _analyze(n, S)[1]


F = Fraction


def _closed_forms() -> dict[tuple[int, str], tuple[Callable[[Fraction], Fraction], int]]:
    """Closed-form alpha as a rational function of n, and the least n where the case occurs."""
    return {
        (2, "(1)(i)"): (lambda n: F(1, 4) + F(1, 12) * n / (n - 1), 3),
        (2, "(1)(ii)"): (lambda n: F(1, 4) - F(1, 12) * n / (n - 1), 3),
        (2, "(1)(iii)"): (lambda n: F(1, 4), 3),
        (2, "(2)"): (lambda n: F(1, 4) + 1 / (6 * (n - 1)), 3),
        (2, HYPERCUBE): (lambda n: F(1, 4), 3),
        (3, "(1)(i)"): (lambda n: F(1, 8), 3),
        (3, "(1)(ii)"): (lambda n: F(1, 8) + n / (24 * (n - 1)), 3),
        (3, "(1)(iii)"): (lambda n: F(1, 8) - n / (24 * (n - 1)), 3),
        (3, "(1)(iv)"): (lambda n: F(1, 8) + n / (12 * (n - 2)), 4),
        (3, "(1)(v)"): (lambda n: F(1, 8) - 1 / (12 * (n - 2)), 4),
        (3, "(1)(vi)"): (lambda n: F(1, 24), 4),
        (3, "(2)(i)"): (lambda n: F(1, 8) + 1 / (12 * (n - 1)), 3),
        (3, "(2)(ii)"): (lambda n: F(1, 8) + (n * n + n - 3) / (24 * (n * n - 3 * n + 2)), 3),
        (3, "(2)(iii)"): (lambda n: F(1, 8) - (n * n - 3 * n + 3) / (24 * (n * n - 3 * n + 2)), 3),
        (3, "(2)(iv)"): (lambda n: F(1, 8), 3),
        (3, "(3)"): (lambda n: F(1, 8) + 1 / (4 * (n - 2)), 4),
        (3, HYPERCUBE): (lambda n: F(1, 8), 3),
    }


CLOSED_FORMS = _closed_forms()


def case_min_n(tag: CaseTag) -> int:
    try:
        return CLOSED_FORMS[(tag.codim, tag.label)][1]
    except KeyError:
        raise ValueError(f"unknown case {tag.codim}:{tag.label}") from None


def closed_form_alpha(n: int, tag: CaseTag) -> AlphaValue:
    try:
        fn, min_n = CLOSED_FORMS[(tag.codim, tag.label)]
    except KeyError:
        raise ValueError(f"unknown case {tag.codim}:{tag.label}") from None
    if n < min_n:
        raise CaseUnavailableError(f"case {tag.label} (codim {tag.codim}) does not occur for n={n}")
    return AlphaValue(fn(F(n)), tag.codim, "closed-form-case")


def _ncone_rows(n: Fraction) -> dict[tuple[int, str], Callable[[], list[list]]]:
    N = n - 1
    return {
        (2, "(1)(i)"): lambda: [[N, -1], [-1, 1]],
        (2, "(1)(ii)"): lambda: [[N, 1], [1, 1]],
        (2, "(1)(iii)"): lambda: [[N, 0], [0, 1]],
        (2, "(2)"): lambda: [[N, -1], [-1, N]],
        (3, "(1)(i)"): lambda: [[N, 0, 0], [0, 1, 0], [0, 0, 1]],
        (3, "(1)(ii)"): lambda: [[N, -1, 0], [-1, 1, 0], [0, 0, 1]],
        (3, "(1)(iii)"): lambda: [[N, 1, 0], [1, 1, 0], [0, 0, 1]],
        (3, "(1)(iv)"): lambda: [[N, -1, -1], [-1, 1, 0], [-1, 0, 1]],
        (3, "(1)(v)"): lambda: [[N, -1, 1], [-1, 1, 0], [1, 0, 1]],
        (3, "(1)(vi)"): lambda: [[N, 1, 1], [1, 1, 0], [1, 0, 1]],
        (3, "(2)(i)"): lambda: [[N, -1, 0], [-1, N, 0], [0, 0, 1]],
        (3, "(2)(ii)"): lambda: [[N, -1, 0], [-1, N, -1], [0, -1, 1]],
        (3, "(2)(iii)"): lambda: [[N, -1, 0], [-1, N, 1], [0, 1, 1]],
        (3, "(2)(iv)"): lambda: [[N, -1, -1], [-1, N, 1], [-1, 1, 1]],
        (3, "(3)"): lambda: [[N, -1, -1], [-1, N, -1], [-1, -1, N]],
    }


def _fcone_rows(n: Fraction) -> dict[tuple[int, str], Callable[[], list[list]]]:
    # entries are evaluated lazily: several denominators vanish at n = 3
    a = lambda: 1 / (n - 2)              # noqa: E731  one diagonal hook, codim 2
    b = lambda: 1 / (n * (n - 2))        # noqa: E731  two diagonal hooks
    c = lambda: 1 / (n - 3)              # noqa: E731  (1)(iv)-(vi)
    D = lambda: 1 / (n * n - 3 * n + 1)  # noqa: E731  (2)(ii), (2)(iii)
    e = lambda: 1 / (n * (n - 3))        # noqa: E731  three diagonal hooks
    return {
        (2, "(1)(i)"): lambda: [[a(), a()], [a(), (n - 1) * a()]],
        (2, "(1)(ii)"): lambda: [[a(), -a()], [-a(), (n - 1) * a()]],
        (2, "(1)(iii)"): lambda: [[1 / (n - 1), 0], [0, 1]],
        (2, "(2)"): lambda: [[(n - 1) * b(), b()], [b(), (n - 1) * b()]],
        (3, "(1)(i)"): lambda: [[1 / (n - 1), 0, 0], [0, 1, 0], [0, 0, 1]],
        (3, "(1)(ii)"): lambda: [[a(), a(), 0], [a(), (n - 1) * a(), 0], [0, 0, 1]],
        (3, "(1)(iii)"): lambda: [[a(), -a(), 0], [-a(), (n - 1) * a(), 0], [0, 0, 1]],
        (3, "(1)(iv)"): lambda: [[c(), c(), c()], [c(), (n - 2) * c(), c()], [c(), c(), (n - 2) * c()]],
        (3, "(1)(v)"): lambda: [[c(), c(), -c()], [c(), (n - 2) * c(), -c()], [-c(), -c(), (n - 2) * c()]],
        (3, "(1)(vi)"): lambda: [[c(), -c(), -c()], [-c(), (n - 2) * c(), c()], [-c(), c(), (n - 2) * c()]],
        (3, "(2)(i)"): lambda: [[(n - 1) * b(), b(), 0], [b(), (n - 1) * b(), 0], [0, 0, 1]],
        (3, "(2)(ii)"): lambda: [
            [(n - 2) * D(), D(), D()],
            [D(), (n - 1) * D(), (n - 1) * D()],
            [D(), (n - 1) * D(), (n * n - 2 * n) * D()],
        ],
        (3, "(2)(iii)"): lambda: [
            [(n - 2) * D(), D(), -D()],
            [D(), (n - 1) * D(), -(n - 1) * D()],
            [-D(), -(n - 1) * D(), (n * n - 2 * n) * D()],
        ],
        (3, "(2)(iv)"): lambda: [[a(), 0, a()], [0, a(), -a()], [a(), -a(), n * a()]],
        (3, "(3)"): lambda: [[(n - 2) * e(), e(), e()], [e(), (n - 2) * e(), e()], [e(), e(), (n - 2) * e()]],
    }


def _table_matrix(table, n: int, tag: CaseTag) -> RatMatrix:
    if tag.label == HYPERCUBE:
        return RatMatrix.identity(tag.codim)
    if n < case_min_n(tag):
        raise CaseUnavailableError(f"case {tag.label} (codim {tag.codim}) does not occur for n={n}")
    return RatMatrix.from_rows(table(F(n))[(tag.codim, tag.label)]())


def reference_ncone_mdp(n: int, tag: CaseTag) -> RatMatrix:
    """Tabulated normal-cone Gram matrix of a case, instantiated at ``n``."""
    return _table_matrix(_ncone_rows, n, tag)


def reference_fcone_mdp(n: int, tag: CaseTag) -> RatMatrix:
    """Tabulated feasible-cone Gram matrix of a case, instantiated at ``n``."""
    return _table_matrix(_fcone_rows, n, tag)


# ---------------------------------------------------------------------------
# pipeline


def alpha_of_face(n: int, S: FaceSupport) -> AlphaValue:
    """Alpha value of the face ``S`` of ``PTes_n(a)``, any positive ``a``.

    The normal fan does not depend on ``a``, so neither does the value.
    """
    k = S.codim
    if k <= 1:
        return alpha_codim01(k)
    if k > 3:
        raise UnsupportedCodimError(f"no alpha formula for codimension {k}")
    if all(i != j for i, j in S):
        return alpha_hypercube(k)
    M = fcone_mdp(n, S)
    return alpha_codim2(M) if k == 2 else alpha_codim3(M)


def unimodularity_status(n: int) -> str:
    """'certified' after checking every vertex cone, 'skipped' beyond the desk-scale limit."""
    if n > CERTIFY_MAX_N:
        return "skipped"
    if not certify_total_unimodularity(n):
        return "failed"
    return "certified"


@dataclass(frozen=True)
class FaceCheck:
    support: FaceSupport
    tag: CaseTag
    order: tuple[Position, ...]
    alpha: Fraction
    closed_form: Fraction
    ncone_match: bool
    fcone_match: bool
    inverse_ok: bool
    computed_ncone: RatMatrix
    computed_fcone: RatMatrix
    expected_ncone: RatMatrix
    expected_fcone: RatMatrix

    @property
    def alpha_match(self) -> bool:
        return self.alpha == self.closed_form

    @property
    def ok(self) -> bool:
        return self.ncone_match and self.fcone_match and self.inverse_ok and self.alpha_match

    def diff(self) -> str:
        lines = [f"face {self.support} case {self.tag.codim}:{self.tag.label} order {self.order}"]
        if not self.ncone_match:
            lines += ["normal-cone MDP computed:", str(self.computed_ncone), "expected:", str(self.expected_ncone)]
        if not self.fcone_match:
            lines += ["feasible-cone MDP computed:", str(self.computed_fcone), "expected:", str(self.expected_fcone)]
        if not self.inverse_ok:
            lines.append("C * M is not the identity")
        if not self.alpha_match:
            lines.append(f"alpha from MDP {self.alpha} != closed form {self.closed_form}")
        return "\n".join(lines)


def check_face(n: int, S: FaceSupport) -> FaceCheck:
    tag, order = _analyze(n, S)
    C = ncone_mdp(n, order)
    M = fcone_mdp(n, order)
    expected_C = reference_ncone_mdp(n, tag)
    expected_M = reference_fcone_mdp(n, tag)
    alpha = alpha_from_mdp(M).value
    return FaceCheck(
        support=S,
        tag=tag,
        order=order,
        alpha=alpha,
        closed_form=closed_form_alpha(n, tag).value,
        ncone_match=C.entries == expected_C,
        fcone_match=M.entries == expected_M,
        inverse_ok=(C.entries @ M.entries) == RatMatrix.identity(S.codim),
        computed_ncone=C.entries,
        computed_fcone=M.entries,
        expected_ncone=expected_C,
        expected_fcone=expected_M,
    )


@dataclass
class CaseSummary:
    codim: int
    label: str
    count: int
    mdp_match: bool
    alpha_match: bool
    alpha_value: Fraction

    def to_json(self) -> dict:
        return {
            "codim": self.codim,
            "label": self.label,
            "count": self.count,
            "mdp_match": self.mdp_match,
            "alpha_match": self.alpha_match,
            "alpha_value": f"{self.alpha_value.numerator}/{self.alpha_value.denominator}",
        }


@dataclass
class TableReport:
    n: int
    checks: list[FaceCheck]
    unimodularity: str
    face_counts: dict[int, int] = field(default_factory=dict)

    @property
    def failures(self) -> list[FaceCheck]:
        return [c for c in self.checks if not c.ok]

    @property
    def ok(self) -> bool:
        return not self.failures and self.unimodularity != "failed"

    def cases(self) -> list[CaseSummary]:
        groups: dict[CaseTag, list[FaceCheck]] = {}
        for c in self.checks:
            groups.setdefault(c.tag, []).append(c)
        out = []
        for tag in sorted(groups, key=_tag_sort_key):
            cs = groups[tag]
            out.append(CaseSummary(
                codim=tag.codim,
                label=tag.label,
                count=len(cs),
                mdp_match=all(c.ncone_match and c.fcone_match and c.inverse_ok for c in cs),
                alpha_match=all(c.alpha_match for c in cs),
                alpha_value=cs[0].closed_form,
            ))
        return out

    def case_counts(self) -> Counter:
        return Counter((c.tag.codim, c.tag.label) for c in self.checks)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "status": "PASS" if self.ok else "FAIL",
            "unimodularity": self.unimodularity,
            "face_counts": {str(k): v for k, v in sorted(self.face_counts.items())},
            "cases": [c.to_json() for c in self.cases()],
            "failures": len(self.failures),
        }


def _tag_sort_key(tag: CaseTag):
    labels = CODIM2_LABELS if tag.codim == 2 else CODIM3_LABELS
    idx = labels.index(tag.label) if tag.label in labels else len(labels)
    return (tag.codim, idx)


def verify_tables(n: int, jobs: int | None = None, certify: bool = True) -> TableReport:
    """Check every codimension-2 and -3 face of ``PTes_n(1)`` against the tables.

    For each face: computed normal-cone MDP equals the tabulated one; its
    inverse equals the tabulated feasible-cone MDP; ``C @ M = I``; and the
    alpha formula applied to ``M`` equals the case's closed form.
    """
    if n < 3:
        raise ValueError("codimension-2 and -3 tables need n >= 3")
    faces = {k: enumerate_faces(n, k) for k in (2, 3)}
    checks = pmap(partial(check_face, n), faces[2] + faces[3], jobs)
    status = unimodularity_status(n) if certify else "skipped"
    return TableReport(n, checks, status, {k: len(v) for k, v in faces.items()})


@dataclass
class PositivityReport:
    n: int
    min_alpha: dict[int, Fraction]
    extremal_faces: dict[int, list[FaceSupport]]
    expected_min_codim2: Fraction
    unimodularity: str

    @property
    def ok(self) -> bool:
        return (
            self.min_alpha[2] == self.expected_min_codim2
            and all(v > 0 for v in self.min_alpha.values())
            and self.unimodularity != "failed"
        )

    def to_json(self) -> dict:
        fmt = lambda x: f"{x.numerator}/{x.denominator}"  # noqa: E731
        return {
            "n": self.n,
            "status": "PASS" if self.ok else "FAIL",
            "unimodularity": self.unimodularity,
            "expected_min_codim2": fmt(self.expected_min_codim2),
            "min_alpha": {str(k): fmt(v) for k, v in sorted(self.min_alpha.items())},
            "extremal_faces": {str(k): [S.to_json() for S in v] for k, v in sorted(self.extremal_faces.items())},
        }


def expected_min_codim2(n: int) -> Fraction:
    return F(1, 4) - F(n, 12 * (n - 1))


def face_alphas(n: int, k: int, jobs: int | None = None) -> list[tuple[FaceSupport, AlphaValue]]:
    faces = enumerate_faces(n, k)
    return list(zip(faces, pmap(partial(alpha_of_face, n), faces, jobs)))


def positivity_report(n: int, jobs: int | None = None, certify: bool = True) -> PositivityReport:
    if n < 3:
        raise ValueError("positivity report needs n >= 3")
    mins: dict[int, Fraction] = {}
    extremal: dict[int, list[FaceSupport]] = {}
    for k in (2, 3):
        vals = face_alphas(n, k, jobs)
        m = min(a.value for _, a in vals)
        mins[k] = m
        extremal[k] = [S for S, a in vals if a.value == m]
    status = unimodularity_status(n) if certify else "skipped"
    return PositivityReport(n, mins, extremal, expected_min_codim2(n), status)
