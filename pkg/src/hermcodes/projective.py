"""Points, lines and hyperplanes of P^n(F_q).

A point is stored in canonical form: its first nonzero coordinate is 1.
The position of that coordinate is its W-index.  Points are enumerated by
W-index, then lexicographically on the remaining coordinates, and a
point's identity everywhere else in the package is its position in that
enumeration.  Hyperplanes use the same canonical form on their
coefficient vectors, so hyperplane ``k`` of P^n is point ``k`` of the
dual space.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

import numpy as np

from .errors import BudgetError
from .field import FieldSpec
from .linalg import nullspace

DEFAULT_MAX_POINTS = 5_000_000


def num_points(n: int, q: int) -> int:
    """pi_n = q^n + ... + q + 1 (and pi_{-1} = 0)."""
    return sum(q**k for k in range(n + 1)) if n >= 0 else 0


@dataclass(frozen=True)
class ProjPoint:
    coords: tuple[int, ...]

    @property
    def w_index(self) -> int:
        return next(i for i, c in enumerate(self.coords) if c)


@dataclass(frozen=True)
class Hyperplane:
    """Zero set of sum_i coeffs[i] * x_i, coefficients canonical."""

    coeffs: tuple[int, ...]

    def contains(self, point: ProjPoint, field: FieldSpec) -> bool:
        acc = 0
        for h, x in zip(self.coeffs, point.coords):
            acc = int(field.add(acc, field.mul(h, x)))
        return acc == 0


@dataclass(frozen=True)
class Line:
    """A line as the sorted indices of its q+1 points.  The defining pair is
    the two smallest indices."""

    points: tuple[int, ...]

    @property
    def defining_pair(self) -> tuple[int, int]:
        return self.points[0], self.points[1]


def canonicalize_array(raw, field: FieldSpec) -> np.ndarray:
    """Row-wise canonicalisation of nonzero coordinate vectors."""
    raw = np.atleast_2d(np.asarray(raw, dtype=np.int64))
    nonzero = raw != 0
    if not nonzero.any(axis=1).all():
        raise ValueError("the zero vector is not a projective point")
    lead = nonzero.argmax(axis=1)
    scale = field.inv[raw[np.arange(len(raw)), lead]]
    return field.mul(raw, scale[:, None])


def canonicalize(raw, field: FieldSpec) -> ProjPoint:
    return ProjPoint(tuple(int(c) for c in canonicalize_array(raw, field)[0]))


class ProjectiveSpace:
    """The canonical point enumeration of P^n(F_q)."""

    def __init__(self, n: int, field: FieldSpec, max_points: int = DEFAULT_MAX_POINTS):
        if n < 1:
            raise ValueError("projective dimension must be at least 1")
        size = num_points(n, field.q)
        if size > max_points:
            raise BudgetError(f"P^{n}(F_{field.q}) has {size} points, budget is {max_points}")
        self.n = n
        self.field = field
        q = field.q
        blocks = []
        w = []
        for i in range(n + 1):
            tail = n - i
            block = np.zeros((q**tail, n + 1), dtype=np.int64)
            block[:, i] = 1
            if tail:
                grid = np.indices((q,) * tail).reshape(tail, -1).T
                block[:, i + 1:] = grid
            blocks.append(block)
            w.append(np.full(q**tail, i, dtype=np.int64))
        self.points = np.concatenate(blocks)
        self.w_index = np.concatenate(w)
        self.points.setflags(write=False)
        self.w_index.setflags(write=False)
        self._offsets = np.array([num_points(n, q) - num_points(n - i, q) for i in range(n + 1)])
        self._place = q ** np.arange(n, -1, -1, dtype=np.int64)

    def __len__(self) -> int:
        return len(self.points)

    def __eq__(self, other):
        return isinstance(other, ProjectiveSpace) and (self.n, self.field) == (other.n, other.field)

    def __hash__(self):
        return hash((self.n, self.field))

    def point(self, i: int) -> ProjPoint:
        return ProjPoint(tuple(int(c) for c in self.points[i]))

    def index_many(self, canon) -> np.ndarray:
        """Indices of already-canonical coordinate rows."""
        canon = np.atleast_2d(np.asarray(canon, dtype=np.int64))
        lead = (canon != 0).argmax(axis=1)
        cols = np.arange(self.n + 1)
        tail = np.where(cols[None, :] > lead[:, None], canon, 0)
        return self._offsets[lead] + tail @ self._place

    def index_of(self, coords) -> int:
        c = canonicalize_array(coords, self.field)
        return int(self.index_many(c)[0])

    def canonicalize(self, raw) -> ProjPoint:
        return canonicalize(raw, self.field)

    def hyperplane(self, i: int) -> Hyperplane:
        return Hyperplane(self.point(i).coords)

    def incidence(self, coeffs) -> np.ndarray:
        """Boolean matrix [hyperplane, point] for the given coefficient rows."""
        coeffs = np.atleast_2d(np.asarray(coeffs, dtype=np.int64))
        f = self.field
        acc = np.zeros((len(coeffs), len(self.points)), dtype=np.int64)
        for i in range(self.n + 1):
            acc = f.add(acc, f.mul(coeffs[:, i, None], self.points[None, :, i]))
        return acc == 0

    @functools.cached_property
    def hyperplane_incidence(self) -> np.ndarray:
        """[hyperplane index, point index] incidence for every hyperplane."""
        if len(self.points) ** 2 > 10**8:
            raise BudgetError("full hyperplane incidence matrix too large")
        inc = self.incidence(self.points)
        inc.setflags(write=False)
        return inc

    def hyperplanes_containing(self, point_rows) -> list[Hyperplane]:
        """All hyperplanes through the span of the given points."""
        basis = nullspace(np.atleast_2d(point_rows), self.field)
        return [Hyperplane(tuple(int(c) for c in row)) for row in _span_points(basis, self.field)]

    def span_indices(self, i: int, j: int) -> tuple[int, ...]:
        """Sorted point indices of the line through points i != j."""
        if i == j:
            raise ValueError("a line needs two distinct points")
        f = self.field
        a, b = self.points[i], self.points[j]
        lam = np.arange(f.q)
        rows = f.add(a[None, :], f.mul(lam[:, None], b[None, :]))
        rows = np.vstack([rows, b[None, :]])
        idx = self.index_many(canonicalize_array(rows, f))
        return tuple(sorted(int(k) for k in idx))

    @functools.cached_property
    def line_array(self) -> np.ndarray:
        """All lines as rows of sorted point indices, rows sorted lexicographically."""
        q = self.field.q
        n = self.n
        count = num_points(n, q) * num_points(n - 1, q) // (q + 1)
        if count * (q + 1) > 5 * 10**7:
            raise BudgetError(f"{count} lines exceed the line budget")
        f = self.field
        chunks = []
        for i, j in itertools.combinations(range(n + 1), 2):
            free1 = [k for k in range(i + 1, n + 1) if k != j]
            free2 = list(range(j + 1, n + 1))
            nfree = len(free1) + len(free2)
            grid = np.indices((q,) * nfree).reshape(nfree, -1).T if nfree else np.zeros((1, 0), dtype=np.int64)
            m = len(grid)
            r1 = np.zeros((m, n + 1), dtype=np.int64)
            r2 = np.zeros((m, n + 1), dtype=np.int64)
            r1[:, i] = 1
            r2[:, j] = 1
            r1[:, free1] = grid[:, :len(free1)]
            r2[:, free2] = grid[:, len(free1):]
            lam = np.arange(q)
            # r1 + lam*r2 stays canonical (leading 1 at i); r2 is canonical
            pts = f.add(r1[:, None, :], f.mul(lam[None, :, None], r2[:, None, :]))
            pts = np.concatenate([pts, r2[:, None, :]], axis=1)
            idx = self.index_many(pts.reshape(-1, n + 1)).reshape(m, q + 1)
            chunks.append(idx)
        lines = np.sort(np.concatenate(chunks), axis=1)
        order = np.lexsort(lines.T[::-1])
        lines = lines[order]
        if len(lines) != count:  # pragma: no cover
            raise AssertionError("line enumeration miscounted")
        lines.setflags(write=False)
        return lines

    def lines(self) -> list[Line]:
        return [Line(tuple(int(k) for k in row)) for row in self.line_array]


def _span_points(basis: np.ndarray, field: FieldSpec) -> np.ndarray:
    """Canonical representatives of all points of the projective span of the
    basis rows, in enumeration order of the coefficient space."""
    k = len(basis)
    if k == 0:
        return np.zeros((0, basis.shape[1]), dtype=np.int64)
    if k == 1:
        return canonicalize_array(basis, field)
    combos = ProjectiveSpace(k - 1, field).points
    acc = np.zeros((len(combos), basis.shape[1]), dtype=np.int64)
    for r in range(k):
        acc = field.add(acc, field.mul(combos[:, r, None], basis[None, r, :]))
    return canonicalize_array(acc, field)


@functools.lru_cache(maxsize=32)
def projective_space(n: int, field: FieldSpec) -> ProjectiveSpace:
    return ProjectiveSpace(n, field)


def enumerate_points(n: int, field: FieldSpec) -> list[ProjPoint]:
    space = projective_space(n, field)
    return [space.point(i) for i in range(len(space))]


def enumerate_lines(n: int, field: FieldSpec) -> list[Line]:
    return projective_space(n, field).lines()


def hyperplanes_through_line(line: Line, space: ProjectiveSpace) -> list[Hyperplane]:
    i, j = line.defining_pair
    return space.hyperplanes_containing(space.points[[i, j]])
