"""Homogeneous forms of degree h over F_q.

A form is a dense coefficient vector over the degree-h monomials, ordered
graded-lexicographically (x0^h first).  Forms normalised modulo scalars
have first nonzero coefficient 1, and streams of them come out in
lexicographic order of the coefficient indices.
"""

from __future__ import annotations

import functools
import itertools
import math
import re
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass

import numpy as np

from .field import FieldSpec
from .projective import Hyperplane, ProjectiveSpace, ProjPoint, num_points


@dataclass(frozen=True)
class MonomialBasis:
    n: int
    h: int
    exponents: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.exponents)

    @functools.cached_property
    def position(self) -> dict[tuple[int, ...], int]:
        return {e: k for k, e in enumerate(self.exponents)}


@functools.lru_cache(maxsize=None)
def monomial_basis(n: int, h: int) -> MonomialBasis:
    """All exponent vectors of length n+1 summing to h, in descending lex order."""
    if h < 0 or n < 0:
        raise ValueError("degree and dimension must be non-negative")

    def rec(k: int, rest: int):
        if k == n:
            yield (rest,)
            return
        for e in range(rest, -1, -1):
            for tail in rec(k + 1, rest - e):
                yield (e,) + tail

    exps = tuple(rec(0, h))
    assert len(exps) == math.comb(n + h, h)
    return MonomialBasis(n, h, exps)


@dataclass(frozen=True)
class Form:
    basis: MonomialBasis
    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return self.basis.h

    @property
    def n(self) -> int:
        return self.basis.n

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def terms(self) -> list[tuple[tuple[int, ...], int]]:
        return [(e, c) for e, c in zip(self.basis.exponents, self.coeffs) if c]

    def to_json(self) -> list:
        return [[list(e), c] for e, c in self.terms()]

    def normalized(self, field: FieldSpec) -> Form:
        lead = next((c for c in self.coeffs if c), 0)
        if lead in (0, 1):
            return self
        inv = field.inv[lead]
        return Form(self.basis, tuple(int(v) for v in field.mul(np.array(self.coeffs), inv)))


def form_from_json(data, n: int, h: int) -> Form:
    basis = monomial_basis(n, h)
    coeffs = [0] * len(basis)
    for exps, c in data:
        coeffs[basis.position[tuple(exps)]] = int(c)
    return Form(basis, tuple(coeffs))


def form_from_terms(terms: dict, n: int, h: int) -> Form:
    basis = monomial_basis(n, h)
    coeffs = [0] * len(basis)
    for e, c in terms.items():
        coeffs[basis.position[tuple(e)]] = int(c)
    return Form(basis, tuple(coeffs))


def hermitian_form(n: int, field: FieldSpec) -> Form:
    """x0^(t+1) + ... + xn^(t+1)."""
    h = field.t + 1
    return form_from_terms({tuple(h if i == j else 0 for j in range(n + 1)): 1 for i in range(n + 1)}, n, h)


# -- evaluation -------------------------------------------------------------

def _power_table(field: FieldSpec, max_e: int) -> np.ndarray:
    x = np.arange(field.q)
    return np.stack([field.power(x, e) for e in range(max_e + 1)])


def evaluation_table(basis: MonomialBasis, coords: np.ndarray, field: FieldSpec) -> np.ndarray:
    """[monomial, point] values at the given canonical coordinate rows."""
    coords = np.asarray(coords, dtype=np.int64)
    powers = _power_table(field, basis.h)
    table = np.ones((len(basis), len(coords)), dtype=np.int64)
    for k, e in enumerate(basis.exponents):
        row = np.ones(len(coords), dtype=np.int64)
        for i, ei in enumerate(e):
            if ei:
                row = field.mul(row, powers[ei][coords[:, i]])
        table[k] = row
    return table


def combine(coeffs, table: np.ndarray, field: FieldSpec) -> np.ndarray:
    """Codeword(s) sum_k coeffs[..., k] * table[k] for one or many coefficient rows."""
    coeffs = np.asarray(coeffs, dtype=np.int64)
    single = coeffs.ndim == 1
    coeffs = np.atleast_2d(coeffs)
    acc = np.zeros((len(coeffs), table.shape[1]), dtype=np.int64)
    for k in range(table.shape[0]):
        col = coeffs[:, k]
        if col.any():
            acc = field.add(acc, field.mul(col[:, None], table[k][None, :]))
    return acc[0] if single else acc


def evaluate(f: Form, point: ProjPoint | Sequence[int], field: FieldSpec) -> int:
    """f(P) at the canonical representative of P (leading coordinate 1), which
    is f(x)/x_i^h for any representative x lying in W_i."""
    coords = point.coords if isinstance(point, ProjPoint) else tuple(point)
    table = evaluation_table(f.basis, np.array([coords]), field)
    return int(combine(f.coeffs, table, field)[0])


def evaluate_raw(f: Form, raw: Sequence[int], field: FieldSpec) -> int:
    """Plain polynomial evaluation at a coordinate vector (no normalisation)."""
    table = evaluation_table(f.basis, np.array([list(raw)]), field)
    return int(combine(f.coeffs, table, field)[0])


def evaluate_on(f: Form, space: ProjectiveSpace, indices=None) -> np.ndarray:
    coords = space.points if indices is None else space.points[np.asarray(indices)]
    return combine(f.coeffs, evaluation_table(f.basis, coords, space.field), space.field)


def zero_count(f: Form, space: ProjectiveSpace, indices=None) -> int:
    return int((evaluate_on(f, space, indices) == 0).sum())


# -- enumeration --------------------------------------------------------------

def num_forms_mod_scalar(n: int, h: int, q: int) -> int:
    return (q ** math.comb(n + h, h) - 1) // (q - 1)


def normalized_vectors(dim: int, q: int) -> Iterator[tuple[int, ...]]:
    """Nonzero vectors with first nonzero entry 1, lexicographic order."""
    for lead in range(dim - 1, -1, -1):
        for tail in itertools.product(range(q), repeat=dim - 1 - lead):
            yield (0,) * lead + (1,) + tail


def enumerate_forms_mod_scalar(n: int, h: int, field: FieldSpec) -> Iterator[Form]:
    basis = monomial_basis(n, h)
    for coeffs in normalized_vectors(len(basis), field.q):
        yield Form(basis, coeffs)


# -- structured constructors --------------------------------------------------

def _poly_mul(a: dict, b: dict, field: FieldSpec) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = int(field.add(out.get(e, 0), field.mul(ca, cb)))
    return {e: c for e, c in out.items() if c}


def product_of_linear_forms(linears: Iterable, field: FieldSpec) -> Form:
    """Expand a product of linear forms (coefficient vectors or Hyperplanes)."""
    linears = [tuple(l.coeffs) if isinstance(l, Hyperplane) else tuple(l) for l in linears]
    if not linears:
        raise ValueError("need at least one linear factor")
    n = len(linears[0]) - 1
    prod: dict = {(0,) * (n + 1): 1}
    for l in linears:
        if not any(l):
            raise ValueError("linear factor is zero")
        lin = {tuple(int(i == j) for j in range(n + 1)): int(c) for i, c in enumerate(l) if c}
        prod = _poly_mul(prod, lin, field)
    return form_from_terms(prod, n, len(linears))


def pencil(subspace_rows, space: ProjectiveSpace) -> list[Hyperplane]:
    """The hyperplanes through a codimension-2 subspace given by spanning points."""
    planes = space.hyperplanes_containing(subspace_rows)
    if len(planes) != space.field.q + 1:
        raise ValueError("subspace is not of codimension 2")
    return planes


def pencil_products(subspace_rows, h: int, space: ProjectiveSpace) -> Iterator[Form]:
    """Products of h distinct hyperplanes through a common codim-2 subspace."""
    planes = pencil(subspace_rows, space)
    if h > len(planes):
        raise ValueError(f"only {len(planes)} hyperplanes in the pencil, h={h}")
    for combo in itertools.combinations(planes, h):
        yield product_of_linear_forms(combo, space.field)


def tss_bound(n: int, h: int, q: int) -> int:
    """h*q^(n-1) + pi_(n-2)."""
    return h * q ** (n - 1) + num_points(n - 2, q)


# -- text format ----------------------------------------------------------------

_TERM_SPLIT = re.compile(r"\s*\+\s*")


def _coefficient_token(tok: str, field: FieldSpec) -> int:
    if tok.isdigit():
        return field.from_int(int(tok))
    if tok == "a":
        return field.alpha
    m = re.fullmatch(r"a\^(\d+)", tok)
    if m:
        return int(field.power(field.alpha, int(m.group(1))))
    m = re.fullmatch(r"#(\d+)", tok)
    if m and int(m.group(1)) < field.q:
        return int(m.group(1))
    raise ValueError(f"cannot parse coefficient {tok!r}")


def parse_form(text: str, n: int, field: FieldSpec, h: int | None = None) -> Form:
    """Parse e.g. ``"x0*x1 + a*x2^2"``.

    Coefficients are integers (prime-field multiples of 1), ``a`` or
    ``a^k`` for powers of alpha, or ``#i`` for the element with index i.
    Factors in a term are joined by ``*``; repeated monomials add up.
    """
    terms: dict = {}
    degree = h
    text = text.strip()
    if not text:
        raise ValueError("empty form")
    for term in _TERM_SPLIT.split(text):
        if not term:
            raise ValueError(f"malformed form {text!r}")
        coeff = 1
        exps = [0] * (n + 1)
        for factor in term.split("*"):
            factor = factor.strip()
            m = re.fullmatch(r"x(\d+)(?:\^(\d+))?", factor)
            if m:
                i = int(m.group(1))
                if i > n:
                    raise ValueError(f"variable x{i} out of range for n={n}")
                exps[i] += int(m.group(2) or 1)
            else:
                coeff = int(field.mul(coeff, _coefficient_token(factor, field)))
        d = sum(exps)
        if degree is None:
            degree = d
        elif d != degree:
            raise ValueError(f"form is not homogeneous of degree {degree}: {term!r}")
        key = tuple(exps)
        terms[key] = int(field.add(terms.get(key, 0), coeff))
    return form_from_terms({e: c for e, c in terms.items() if c}, n, degree)


def _format_coefficient(c: int, field: FieldSpec) -> str:
    if c < field.p:
        return str(c)
    if c == field.alpha:
        return "a"
    for k in range(2, field.q):
        if int(field.power(field.alpha, k)) == c:
            return f"a^{k}"
        if int(field.power(field.alpha, k)) == 1:
            break
    return f"#{c}"


def format_form(f: Form, field: FieldSpec) -> str:
    parts = []
    for e, c in f.terms():
        mono = "*".join(f"x{i}" if ei == 1 else f"x{i}^{ei}" for i, ei in enumerate(e) if ei)
        coef = _format_coefficient(c, field)
        if not mono:
            parts.append(coef)
        elif coef == "1":
            parts.append(mono)
        else:
            parts.append(f"{coef}*{mono}")
    return " + ".join(parts) if parts else "0"
