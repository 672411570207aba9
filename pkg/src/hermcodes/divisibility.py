"""Divisibility exponents for C_h(X) and the reduction of Hermitian data to
polynomial systems over the subfield F_t.

Under x_j = y_j + alpha*z_j with y_j, z_j in F_t, the Hermitian form
becomes a quadratic form over F_t in 2(n+1) variables, and a form f over
F_q splits as f0 + alpha*f1 with f0, f1 of degree h over F_t.  Ax-Katz
applied to {phi, f0, f1} bounds the t-adic valuation of the affine count
N.  Since every projective point of X ∩ Z(f) over F_q accounts for q-1
nonzero affine solutions, N = 1 + (q-1) * #(X ∩ Z(f)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import BudgetError
from .field import FieldSpec, hermitian_quadratic_coeffs
from .forms import Form, evaluate_on

AFFINE_BUDGET = 2_000_000

Poly = dict  # exponent tuple -> coefficient index


@dataclass(frozen=True)
class LambdaCase:
    n: int
    h: int
    r: int
    s: int
    value: int
    case: str

    def divisor(self, t: int) -> int:
        return t**self.value


def lambda_for(n: int, h: int) -> LambdaCase:
    """Exponent lambda with t^lambda dividing every weight of C_h(X), X in P^n."""
    if h < 1:
        raise ValueError("h must be positive")
    if h > n:
        raise ValueError(f"h={h} > n={n} is outside the range h <= n")
    s, r = divmod(n, h)
    if h == 1:
        # phi has the largest degree in the system: ceil((2n+2-4)/2)
        return LambdaCase(n, h, r, s, n - 1, "h=1")
    if h == 2:
        return LambdaCase(n, h, r, s, n - 2, "h=2")
    if r == 0:
        return LambdaCase(n, h, r, s, 2 * s - 2, "r=0")
    if h == 2 * r:
        return LambdaCase(n, h, r, s, 2 * s - 1, "h=2r")
    return LambdaCase(n, h, r, s, 2 * s + (2 * r) // h - 1, "h!=2r")


def lambda_ceil_oracle(n: int, h: int) -> int:
    """Least non-negative integer >= 2(n-h)/h."""
    return max(0, -((-2 * (n - h)) // h))


def ax_katz_lambda(var_count: int, degrees) -> int:
    """Least non-negative integer >= (var_count - sum d) / max d."""
    degrees = list(degrees)
    if not degrees or min(degrees) < 1:
        raise ValueError("degrees must be a nonempty list of positive integers")
    num = var_count - sum(degrees)
    return max(0, -((-num) // max(degrees)))


# -- subfield systems ---------------------------------------------------------

def _pmul(a: Poly, b: Poly, field: FieldSpec) -> Poly:
    out: Poly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = int(field.add(out.get(e, 0), field.mul(ca, cb)))
    return {e: c for e, c in out.items() if c}


def _padd(a: Poly, b: Poly, field: FieldSpec) -> Poly:
    out = dict(a)
    for e, c in b.items():
        out[e] = int(field.add(out.get(e, 0), c))
    return {e: c for e, c in out.items() if c}


def degree(poly: Poly) -> int:
    return max((sum(e) for e in poly), default=0)


def is_homogeneous(poly: Poly) -> bool:
    return len({sum(e) for e in poly}) <= 1


@dataclass
class SubfieldSystem:
    """{phi~} together with (f0~, f1~) for each input form, over F_t in
    variables (y0, z0, ..., yn, zn)."""

    n: int
    field: FieldSpec
    phi: Poly
    forms: list[Form] = dc_field(default_factory=list)
    parts: list[tuple[Poly, Poly]] = dc_field(default_factory=list)

    @property
    def var_count(self) -> int:
        return 2 * (self.n + 1)

    def polynomials(self) -> list[Poly]:
        out = [self.phi]
        for f0, f1 in self.parts:
            out.extend(p for p in (f0, f1) if p)
        return out

    def degrees(self) -> list[int]:
        return [degree(p) for p in self.polynomials()]


def hermitian_quadric(n: int, field: FieldSpec) -> Poly:
    """sum_j y_j^2 + c2 y_j z_j + c3 z_j^2."""
    c1, c2, c3 = hermitian_quadratic_coeffs(field)
    nv = 2 * (n + 1)
    phi: Poly = {}
    for j in range(n + 1):
        for (dy, dz), c in (((2, 0), c1), ((1, 1), c2), ((0, 2), c3)):
            if c:
                e = [0] * nv
                e[2 * j], e[2 * j + 1] = dy, dz
                phi[tuple(e)] = int(c)
    return phi


def split_form(f: Form, field: FieldSpec) -> tuple[Poly, Poly]:
    """(f0, f1) over F_t with f(y + alpha z) = f0(y, z) + alpha f1(y, z)."""
    n = f.n
    nv = 2 * (n + 1)
    linear = []
    for j in range(n + 1):
        ey = [0] * nv
        ez = [0] * nv
        ey[2 * j] = 1
        ez[2 * j + 1] = 1
        linear.append({tuple(ey): 1, tuple(ez): field.alpha})
    full: Poly = {}
    for exps, c in f.terms():
        term = {(0,) * nv: c}
        for j, e in enumerate(exps):
            for _ in range(e):
                term = _pmul(term, linear[j], field)
        full = _padd(full, term, field)
    f0: Poly = {}
    f1: Poly = {}
    for e, c in full.items():
        y, z = (int(v) for v in field.decompose(c))
        if y:
            f0[e] = y
        if z:
            f1[e] = z
    return f0, f1


def to_subfield_system(forms, field: FieldSpec, n: int | None = None) -> SubfieldSystem:
    forms = list(forms)
    if n is None:
        if not forms:
            raise ValueError("n is required when no forms are given")
        n = forms[0].n
    parts = [split_form(f, field) for f in forms]
    for f, (f0, f1) in zip(forms, parts):
        for p in (f0, f1):
            if p and not (is_homogeneous(p) and degree(p) == f.degree):
                raise AssertionError("split produced a non-homogeneous part")
    return SubfieldSystem(n, field, hermitian_quadric(n, field), forms, parts)


def _affine_points(nv: int, t: int) -> np.ndarray:
    if t**nv > AFFINE_BUDGET:
        raise BudgetError(f"F_{t}^{nv} has {t**nv} points (budget {AFFINE_BUDGET})")
    return np.indices((t,) * nv).reshape(nv, -1).T


def evaluate_poly(poly: Poly, points: np.ndarray, field: FieldSpec) -> np.ndarray:
    acc = np.zeros(len(points), dtype=np.int64)
    for e, c in poly.items():
        val = np.full(len(points), c, dtype=np.int64)
        for i, ei in enumerate(e):
            if ei:
                val = field.mul(val, field.power(points[:, i], ei))
        acc = field.add(acc, val)
    return acc


def _recompose_points(points: np.ndarray, field: FieldSpec) -> np.ndarray:
    return field.recompose(points[:, 0::2], points[:, 1::2])


def round_trip_ok(system: SubfieldSystem) -> bool:
    """phi~ and f0~ + alpha f1~ agree with phi and f at every affine point."""
    from .forms import combine, evaluation_table, hermitian_form

    f = system.field
    pts = _affine_points(system.var_count, f.t)
    xs = _recompose_points(pts, f)
    herm = hermitian_form(system.n, f)
    checks = [(herm, system.phi, {})] + [(g, p0, p1) for g, (p0, p1) in zip(system.forms, system.parts)]
    for g, p0, p1 in checks:
        direct = combine(g.coeffs, evaluation_table(g.basis, xs, f), f)
        split = f.add(evaluate_poly(p0, pts, f), f.mul(f.alpha, evaluate_poly(p1, pts, f)))
        if not np.array_equal(direct, split):
            return False
    return True


def affine_count(system: SubfieldSystem) -> int:
    """Common zeros in F_t^(2(n+1)) of phi~ and every f_i~."""
    f = system.field
    pts = _affine_points(system.var_count, f.t)
    alive = evaluate_poly(system.phi, pts, f) == 0
    pts = pts[alive]
    for f0, f1 in system.parts:
        for p in (f0, f1):
            if p and len(pts):
                pts = pts[evaluate_poly(p, pts, f) == 0]
    return len(pts)


def affine_verify(system: SubfieldSystem, lam: int | None = None) -> dict:
    """Brute-force affine count N and its divisibility and projective checks.

    ``matchesProjective`` tests N - 1 = (q-1) * #(X ∩ Z(f_1) ∩ ...), the
    projective count being taken independently over F_q.  ``countOverT``
    is (N-1)/(t-1), the point count of the system in P^(2n+1)(F_t), which
    exceeds the F_q count by the factor t+1.
    """
    from .varieties import hermitian_points

    f = system.field
    t, q = f.t, f.q
    if lam is None:
        lam = ax_katz_lambda(system.var_count, system.degrees())
    N = affine_count(system)
    X = hermitian_points(system.n, f)
    mask = X.points.mask.copy()
    for g in system.forms:
        mask &= evaluate_on(g, X.space) == 0
    projective = int(mask.sum())
    return {
        "N": N,
        "lambda": lam,
        "divisor": t**lam,
        "divisible": N % t**lam == 0,
        "N_minus_1_mod_t_minus_1": (N - 1) % (t - 1) if t > 2 else 0,
        "countOverT": (N - 1) // (t - 1),
        "projectiveCount": projective,
        "matchesProjective": N - 1 == (q - 1) * projective,
        "roundTrip": round_trip_ok(system),
    }


def weight_violations(counts, t: int, lam: int) -> list[int]:
    d = t**lam
    return [w for w in sorted(counts) if w % d]


def observed_gcd(weights) -> int:
    g = 0
    for w in weights:
        g = math.gcd(g, int(w))
    return g
