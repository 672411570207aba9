"""Hermitian varieties, quadrics and their incidence with lines and planes."""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass

import numpy as np

from .errors import BudgetError, GeometryError
from .field import FieldSpec
from .forms import Form, evaluate_on, evaluation_table, hermitian_form, monomial_basis
from .projective import Hyperplane, Line, ProjectiveSpace, ProjPoint, projective_space


def hermitian_count(n: int, t: int) -> int:
    """[t^(n+1) - (-1)^(n+1)] [t^n - (-1)^n] / (t^2 - 1)."""
    num = (t ** (n + 1) - (-1) ** (n + 1)) * (t**n - (-1) ** n)
    assert num % (t * t - 1) == 0
    return num // (t * t - 1)


@dataclass(frozen=True, eq=False)
class PointSet:
    """Membership mask over the canonical point enumeration."""

    space: ProjectiveSpace
    mask: np.ndarray

    @functools.cached_property
    def indices(self) -> np.ndarray:
        return np.nonzero(self.mask)[0]

    def __len__(self) -> int:
        return int(np.count_nonzero(self.mask))

    def __contains__(self, index) -> bool:
        return bool(self.mask[int(index)])

    @property
    def cardinality(self) -> int:
        return len(self)

    def intersect(self, other: PointSet) -> PointSet:
        return PointSet(self.space, self.mask & other.mask)

    def count_in(self, indices) -> int:
        return int(np.count_nonzero(self.mask[np.asarray(indices)]))


@dataclass(frozen=True, eq=False)
class HermitianVariety:
    n: int
    field: FieldSpec
    space: ProjectiveSpace
    points: PointSet

    @property
    def t(self) -> int:
        return self.field.t

    @property
    def form(self) -> Form:
        return hermitian_form(self.n, self.field)

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, point) -> bool:
        return self.index(point) in self.points

    def index(self, point) -> int:
        if isinstance(point, (int, np.integer)):
            return int(point)
        coords = point.coords if isinstance(point, ProjPoint) else point
        return self.space.index_of(coords)

    @functools.cached_property
    def hyperplane_sections(self) -> np.ndarray:
        """#(X ∩ H) for every hyperplane index."""
        return self.space.hyperplane_incidence[:, self.points.mask].sum(axis=1)

    @functools.cached_property
    def tangent_mask(self) -> np.ndarray:
        """Tangency flag for every hyperplane index."""
        conj = self.field.conj(self.space.points)
        return self.points.mask[self.space.index_many(conj)]


@functools.lru_cache(maxsize=16)
def hermitian_points(n: int, field: FieldSpec) -> HermitianVariety:
    """The variety x0^(t+1) + ... + xn^(t+1) = 0 by direct evaluation."""
    space = projective_space(n, field)
    acc = np.zeros(len(space), dtype=np.int64)
    for i in range(n + 1):
        acc = field.add(acc, field.norm(space.points[:, i]))
    mask = acc == 0
    mask.setflags(write=False)
    return HermitianVariety(n, field, space, PointSet(space, mask))


def tangent_hyperplane(point, X: HermitianVariety) -> Hyperplane:
    """sum_i conj(a_i) x_i at a point a of X."""
    idx = X.index(point)
    if idx not in X.points:
        raise ValueError("point is not on the Hermitian variety")
    coords = X.space.points[idx]
    # conj fixes 0 and 1, so the conjugate of a canonical vector is canonical
    return Hyperplane(tuple(int(c) for c in X.field.conj(coords)))


def is_tangent(H: Hyperplane, X: HermitianVariety) -> bool:
    """True iff H is the tangent hyperplane at some point of X, namely at
    the point with coordinates conj(H)."""
    canon = X.space.canonicalize(H.coeffs)
    pole = tuple(int(c) for c in X.field.conj(np.array(canon.coords)))
    return X.space.index_of(pole) in X.points


class LineClass(str, enum.Enum):
    CONTAINED = "contained"
    SECANT = "secant"
    TANGENT = "tangent"


def line_class_of_size(size: int, t: int) -> LineClass:
    if size == t * t + 1:
        return LineClass.CONTAINED
    if size == t + 1:
        return LineClass.SECANT
    if size == 1:
        return LineClass.TANGENT
    raise GeometryError(f"a line meets the Hermitian surface in {size} points")


def classify_line(line: Line, X: HermitianVariety) -> LineClass:
    return line_class_of_size(X.points.count_in(line.points), X.t)


def line_census_formulas(t: int) -> dict[str, int]:
    return {
        "contained": (t**3 + 1) * (t + 1),
        "tangent": t * (t**3 + 1) * (t**4 - 1) // (t + 1),
        "secant": t**4 * (t**3 + 1) * (t**2 + 1) // (t + 1),
    }


def line_census(X: HermitianVariety) -> dict:
    """Brute-force classification of every line of PG(3, q) against X."""
    if X.n != 3:
        raise ValueError("the line census is defined for the Hermitian surface (n = 3)")
    sizes = X.points.mask[X.space.line_array].sum(axis=1)
    t = X.t
    counts = {c.value: 0 for c in (LineClass.CONTAINED, LineClass.TANGENT, LineClass.SECANT)}
    values, freq = np.unique(sizes, return_counts=True)
    for s, k in zip(values, freq):
        counts[line_class_of_size(int(s), t).value] += int(k)
    total = len(sizes)
    formulas = line_census_formulas(t)
    return {
        **counts,
        "total": total,
        "formulas": formulas,
        "match": all(counts[k] == formulas[k] for k in formulas) and sum(counts.values()) == total,
    }


# -- quadrics in PG(3, q) ---------------------------------------------------------

class QuadricClass(str, enum.Enum):
    DISTINCT_PLANE_PAIR = "distinct_plane_pair"
    REPEATED_PLANE = "repeated_plane"
    CONE = "cone"
    HYPERBOLIC = "hyperbolic"
    ELLIPTIC = "elliptic"
    # two planes conjugate over F_{q^2}; the rational points form a line
    CONJUGATE_PLANE_PAIR = "conjugate_plane_pair"

    @property
    def rank(self) -> int:
        return {
            "repeated_plane": 1,
            "distinct_plane_pair": 2,
            "conjugate_plane_pair": 2,
            "cone": 3,
            "hyperbolic": 4,
            "elliptic": 4,
        }[self.value]

    @property
    def degenerate(self) -> bool:
        return self.rank < 4


def _quadric_sizes(q: int) -> dict[int, list[QuadricClass]]:
    return {
        q + 1: [QuadricClass.CONJUGATE_PLANE_PAIR],
        q * q + 1: [QuadricClass.ELLIPTIC],
        (q + 1) ** 2: [QuadricClass.HYPERBOLIC],
        q * q + q + 1: [QuadricClass.CONE, QuadricClass.REPEATED_PLANE],
        2 * q * q + q + 1: [QuadricClass.DISTINCT_PLANE_PAIR],
    }


class QuadricClassifier:
    """Batch classification of quadric zero sets in PG(3, q) by point count,
    plane test and line containment."""

    def __init__(self, space: ProjectiveSpace):
        if space.n != 3:
            raise ValueError("quadric classification is implemented for PG(3, q)")
        self.space = space
        q = space.field.q
        self.q = q
        self.planes = space.hyperplane_incidence.astype(np.int32)
        self.lines = space.line_array
        self.codes = {
            q + 1: 0,
            q * q + 1: 1,
            (q + 1) ** 2: 2,
            q * q + q + 1: 3,
            2 * q * q + q + 1: 4,
        }
        self.order = [
            QuadricClass.CONJUGATE_PLANE_PAIR,
            QuadricClass.ELLIPTIC,
            QuadricClass.HYPERBOLIC,
            QuadricClass.CONE,
            QuadricClass.REPEATED_PLANE,
            QuadricClass.DISTINCT_PLANE_PAIR,
        ]

    def classify_masks(self, masks: np.ndarray) -> np.ndarray:
        """Class codes (indices into ``self.order``) for zero masks [row, point]."""
        counts = masks.sum(axis=1)
        out = np.full(len(masks), -1, dtype=np.int64)
        for size, code in self.codes.items():
            out[counts == size] = code if code < 4 else 5
        if (out < 0).any():
            bad = int(counts[np.nonzero(out < 0)[0][0]])
            raise GeometryError(f"a quadric of PG(3,{self.q}) has {bad} points")
        plane_sized = np.nonzero(out == 3)[0]
        if len(plane_sized):
            hit = masks[plane_sized].astype(np.int32) @ self.planes.T
            is_plane = (hit == self.q * self.q + self.q + 1).any(axis=1)
            out[plane_sized[is_plane]] = 4
        quadric4 = np.nonzero((out == 1) | (out == 2))[0]
        if len(quadric4):
            has_line = masks[quadric4][:, self.lines].all(axis=2).any(axis=1)
            ell = out[quadric4] == 1
            if has_line[ell].any():
                raise GeometryError("a (q^2+1)-point quadric contains a line")
            if not has_line[~ell].all():
                raise GeometryError("a (q+1)^2-point quadric contains no line")
        return out

    def classify(self, mask: np.ndarray) -> QuadricClass:
        return self.order[int(self.classify_masks(mask[None, :])[0])]


@functools.lru_cache(maxsize=8)
def quadric_classifier(space: ProjectiveSpace) -> QuadricClassifier:
    return QuadricClassifier(space)


def classify_quadric(Q: Form, field: FieldSpec) -> QuadricClass:
    if Q.degree != 2 or Q.n != 3:
        raise ValueError("expected a quadratic form in 4 variables")
    if Q.is_zero():
        raise ValueError("the zero form defines no quadric")
    space = projective_space(3, field)
    mask = evaluate_on(Q, space) == 0
    return quadric_classifier(space).classify(mask)


class QuadricKernel:
    """Per-class counts of all quadrics and the elliptic-section statistics."""

    def __init__(self, scanner, x_mask=None, space=None):
        self.scanner = scanner
        self.x_mask = x_mask
        self.classifier = quadric_classifier(space)
        self.class_counts = np.zeros(6, dtype=np.int64)
        self.elliptic_sections = np.zeros(scanner.length + 1, dtype=np.int64)
        self.worst: tuple[int, ...] | None = None
        self.worst_size = -1

    def process(self, prefix, rows, mask):
        codes = self.classifier.classify_masks(mask)
        self.class_counts += np.bincount(codes, minlength=6)
        ell = np.nonzero(codes == 1)[0]
        if len(ell):
            sizes = mask[ell][:, self.x_mask].sum(axis=1)
            self.elliptic_sections += np.bincount(sizes, minlength=len(self.elliptic_sections))
            top = int(sizes.max())
            if top > self.worst_size:
                self.worst_size = top
                self.worst = self.scanner.coeffs(prefix, int(rows[ell[int(sizes.argmax())]]))

    def partial(self):
        return self.class_counts, self.elliptic_sections, self.worst_size, self.worst

    @staticmethod
    def merge(partials):
        counts = sum(p[0] for p in partials)
        sections = sum(p[1] for p in partials)
        best, witness = -1, None
        for p in partials:
            if p[2] > best:
                best, witness = p[2], p[3]
        return counts, sections, best, witness


def quadric_census(X: HermitianVariety, workers: int = 1) -> dict:
    """Classify all (q^10 - 1)/(q - 1) quadrics of PG(3, q) and audit the
    elliptic ones against X."""
    from .engine import scan
    from .forms import Form, format_form

    if X.n != 3:
        raise ValueError("quadric census is defined for n = 3")
    f = X.field
    n_quadrics = (f.q**10 - 1) // (f.q - 1)
    if n_quadrics * len(X.space) > 10**10:
        raise BudgetError(f"{n_quadrics} quadrics over {len(X.space)} points is beyond the census budget")
    basis = monomial_basis(3, 2)
    table = evaluation_table(basis, X.space.points, f)
    counts, sections, best, witness = scan(
        QuadricKernel, table, f, workers=workers,
        block_elements=1 << 20, x_mask=X.points.mask, space=X.space,
    )
    classifier = quadric_classifier(X.space)
    t = X.t
    by_class = {c.value: int(counts[i]) for i, c in enumerate(classifier.order)}
    hist = {int(s): int(c) for s, c in enumerate(sections) if c}
    return {
        "q": f.q,
        "total": int(counts.sum()),
        "classes": by_class,
        "elliptic_audit": {
            "count": by_class["elliptic"],
            "max_section": best,
            "witness": format_form(Form(basis, witness), f) if witness else None,
            "section_histogram": hist,
            "line_bound": 2 * (t**3 + 1),
            "divisibility_bound": 2 * t**3 + 1,
            "within_line_bound": best <= 2 * (t**3 + 1),
            "within_divisibility_bound": best <= 2 * t**3 + 1,
        },
    }


def elliptic_intersection_audit(X: HermitianVariety, workers: int = 1) -> dict:
    return quadric_census(X, workers)["elliptic_audit"]
