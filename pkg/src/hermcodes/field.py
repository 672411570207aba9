"""Table-driven arithmetic in F_q = F_{t^2}, t = p^a.

Elements are dense integer indices.  F_t is built as F_p[x]/(m1) and F_q
as F_t[y]/(m2) with m2 of degree 2; an element u + v*y (u, v in F_t) has
index u + t*v.  Consequently the subfield F_t is exactly the indices
``0 .. t-1``, index 0 is zero, index 1 is one, and the distinguished
non-subfield element ``alpha = y`` has index ``t``.

Moduli are the lexicographically smallest monic irreducibles of the
required degree, so every table here is reproducible.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetError

DEFAULT_MAX_Q = 1 << 16
# dense q x q add/mul tables are built only up to this order
DENSE_TABLE_LIMIT = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over F_p, coefficient lists low -> high --------------------

def _poly_divmod_p(num: list[int], den: list[int], p: int) -> list[int]:
    """Remainder of num / den over F_p (den monic)."""
    num = list(num)
    dd = len(den) - 1
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i] % p
        if c:
            for j in range(dd + 1):
                num[i - dd + j] = (num[i - dd + j] - c * den[j]) % p
    rem = num[:dd]
    return [c % p for c in rem]


def _monic_polys(p: int, deg: int):
    """Monic degree-`deg` polynomials over F_p in lexicographic order of
    (c_{deg-1}, ..., c_0)."""
    for lower in itertools.product(range(p), repeat=deg):
        yield list(reversed(lower)) + [1]


def _is_irreducible_p(poly: list[int], p: int) -> bool:
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for g in _monic_polys(p, d):
            if not any(_poly_divmod_p(poly, g, p)):
                return False
    return True


def smallest_irreducible(p: int, deg: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree `deg` over F_p,
    as coefficients low -> high (leading 1 included)."""
    for poly in _monic_polys(p, deg):
        if deg == 1 or _is_irreducible_p(poly, p):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """The field F_q with its subfield F_t and the element alpha."""

    p: int
    a: int
    t: int
    q: int
    sub_modulus: tuple[int, ...]
    ext_modulus: tuple[int, int]  # (c, b) for y^2 + b*y + c over F_t
    # flat tables, all indexed by element index
    neg: np.ndarray = field(repr=False)
    inv: np.ndarray = field(repr=False)
    exp: np.ndarray = field(repr=False)
    log: np.ndarray = field(repr=False)
    conj_table: np.ndarray = field(repr=False)
    norm_table: np.ndarray = field(repr=False)
    digits: np.ndarray = field(repr=False)
    primitive: int = 0

    @property
    def alpha(self) -> int:
        return self.t

    @property
    def dtype(self):
        return np.uint8 if self.q <= 256 else np.uint16

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.a) == (other.p, other.a)

    def __hash__(self):
        return hash((self.p, self.a))

    def __reduce__(self):
        return make_field, (self.p, self.a)

    # -- dense tables -------------------------------------------------------

    @functools.cached_property
    def add_table(self) -> np.ndarray:
        if self.q > DENSE_TABLE_LIMIT:
            raise BudgetError(f"dense add table not built for q={self.q}")
        idx = np.arange(self.q)
        return self.add(idx[:, None], idx[None, :]).astype(self.dtype)

    @functools.cached_property
    def mul_table(self) -> np.ndarray:
        if self.q > DENSE_TABLE_LIMIT:
            raise BudgetError(f"dense mul table not built for q={self.q}")
        idx = np.arange(self.q)
        return self.mul(idx[:, None], idx[None, :]).astype(self.dtype)

    # -- vectorised arithmetic on index arrays -------------------------------

    def add(self, x, y):
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        if self.p == 2:
            return x ^ y
        dx = self.digits[x]
        dy = self.digits[y]
        weights = self.p ** np.arange(2 * self.a, dtype=np.int64)
        return ((dx + dy) % self.p) @ weights

    def sub(self, x, y):
        return self.add(x, self.neg[np.asarray(y)])

    def mul(self, x, y):
        x = np.asarray(x, dtype=np.int64)
        y = np.asarray(y, dtype=np.int64)
        prod = self.exp[(self.log[x] + self.log[y]) % (self.q - 1)]
        return np.where((x == 0) | (y == 0), 0, prod)

    def power(self, x, e: int):
        x = np.asarray(x, dtype=np.int64)
        if e == 0:
            return np.ones_like(x)
        val = self.exp[(self.log[x] * e) % (self.q - 1)]
        return np.where(x == 0, 0, val)

    def conj(self, x):
        """x -> x^t."""
        return self.conj_table[np.asarray(x)]

    def norm(self, x):
        """x -> x^(t+1), which lands in F_t."""
        return self.norm_table[np.asarray(x)]

    def in_subfield(self, x) -> np.ndarray | bool:
        return np.asarray(x) < self.t

    def decompose(self, x):
        """x = y + alpha*z with y, z in F_t; returns (y, z)."""
        x = np.asarray(x)
        return x % self.t, x // self.t

    def recompose(self, y, z):
        return np.asarray(y) + self.t * np.asarray(z)

    def from_int(self, k: int) -> int:
        """The prime-field element k * 1."""
        return int(k) % self.p

    def element(self, index: int) -> FieldElement:
        return FieldElement(self, int(index))

    def elements(self):
        return [FieldElement(self, i) for i in range(self.q)]

    def info(self) -> dict:
        c1, c2, c3 = hermitian_quadratic_coeffs(self)
        return {
            "p": self.p,
            "a": self.a,
            "t": self.t,
            "q": self.q,
            "subfield_modulus": list(self.sub_modulus),
            "extension_modulus": [self.ext_modulus[0], self.ext_modulus[1], 1],
            "alpha": self.alpha,
            "primitive": self.primitive,
            "quadratic_coeffs": [c1, c2, c3],
        }


@dataclass(frozen=True)
class FieldElement:
    """Scalar wrapper around an element index; convenient, not fast."""

    spec: FieldSpec
    index: int

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise ValueError("elements of different fields")
            return other.index
        if isinstance(other, (int, np.integer)):
            return self.spec.from_int(int(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElement(self.spec, int(self.spec.add(self.index, o)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return FieldElement(self.spec, int(self.spec.sub(self.index, o)))

    def __rsub__(self, other):
        return FieldElement(self.spec, self._coerce(other)) - self

    def __neg__(self):
        return FieldElement(self.spec, int(self.spec.neg[self.index]))

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElement(self.spec, int(self.spec.mul(self.index, o)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o == 0:
            raise ZeroDivisionError("division by zero in finite field")
        return FieldElement(self.spec, int(self.spec.mul(self.index, self.spec.inv[o])))

    def __pow__(self, e: int):
        if e < 0:
            return (self ** -e).inverse()
        return FieldElement(self.spec, int(self.spec.power(self.index, e)))

    def inverse(self):
        if self.index == 0:
            raise ZeroDivisionError("zero has no inverse")
        return FieldElement(self.spec, int(self.spec.inv[self.index]))

    def conj(self):
        return FieldElement(self.spec, int(self.spec.conj_table[self.index]))

    def __bool__(self):
        return self.index != 0

    def __int__(self):
        return self.index

    def __repr__(self):
        return f"F{self.spec.q}({self.index})"


def _subfield_tables(p: int, a: int, modulus: tuple[int, ...]):
    """Add/mul tables of F_t as integer-indexed arrays (base-p digits)."""
    t = p**a
    digits = np.array([[(i // p**k) % p for k in range(a)] for i in range(t)], dtype=np.int64)
    weights = p ** np.arange(a, dtype=np.int64)
    add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
    mul = np.zeros((t, t), dtype=np.int64)
    for i in range(t):
        for j in range(i, t):
            prod = [0] * (2 * a - 1)
            for u in range(a):
                if digits[i, u]:
                    for v in range(a):
                        prod[u + v] += int(digits[i, u] * digits[j, v])
            rem = _poly_divmod_p(prod, list(modulus), p) if a > 1 else [prod[0] % p]
            rem = rem + [0] * (a - len(rem))
            val = sum(int(c) * p**k for k, c in enumerate(rem))
            mul[i, j] = mul[j, i] = val
    return add, mul


@functools.lru_cache(maxsize=None)
def make_field(p: int, a: int = 1, max_q: int = DEFAULT_MAX_Q) -> FieldSpec:
    """Construct F_q, q = p^(2a), together with its subfield F_t."""
    if not is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if a < 1:
        raise ValueError(f"a={a} must be a positive integer")
    t = p**a
    q = t * t
    if q > max_q:
        raise BudgetError(f"q={q} exceeds the field budget {max_q}")

    sub_mod = smallest_irreducible(p, a) if a > 1 else (0, 1)
    tadd, tmul = _subfield_tables(p, a, sub_mod)

    # lexicographically smallest (b, c) with y^2 + b*y + c irreducible over F_t
    ext = None
    for b in range(t):
        for c in range(t):
            roots = [r for r in range(t) if tadd[tadd[tmul[r, r], tmul[b, r]], c] == 0]
            if not roots:
                ext = (c, b)
                break
        if ext:
            break
    c0, b0 = ext
    tneg = np.array([int(np.nonzero(tadd[x] == 0)[0][0]) for x in range(t)])

    def mul_scalar(x: int, y: int) -> int:
        u1, v1 = x % t, x // t
        u2, v2 = y % t, y // t
        vv = tmul[v1, v2]
        # y^2 = -b*y - c
        lo = tadd[tmul[u1, u2], tneg[tmul[c0, vv]]]
        hi = tadd[tadd[tmul[u1, v2], tmul[u2, v1]], tneg[tmul[b0, vv]]]
        return int(lo + t * hi)

    def pow_scalar(x: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = mul_scalar(r, x)
            x = mul_scalar(x, x)
            e >>= 1
        return r

    factors = _prime_factors(q - 1)
    g = next(
        g for g in range(2 if q > 2 else 1, q)
        if all(pow_scalar(g, (q - 1) // r) != 1 for r in factors)
    )
    exp = np.zeros(q - 1, dtype=np.int64)
    log = np.zeros(q, dtype=np.int64)
    x = 1
    for k in range(q - 1):
        exp[k] = x
        log[x] = k
        x = mul_scalar(x, g)
    if x != 1 or len(set(exp.tolist())) != q - 1:
        raise AssertionError("failed to build the multiplicative group")  # pragma: no cover

    digits = np.array([[(i // p**k) % p for k in range(2 * a)] for i in range(q)], dtype=np.int64)
    weights = p ** np.arange(2 * a, dtype=np.int64)
    neg = ((-digits) % p) @ weights
    inv = np.zeros(q, dtype=np.int64)
    inv[1:] = exp[(-log[1:]) % (q - 1)]
    nz = np.arange(q) != 0
    conj = np.where(nz, exp[(log * t) % (q - 1)], 0)
    norm = np.where(nz, exp[(log * (t + 1)) % (q - 1)], 0)
    for arr in (neg, inv, exp, log, conj, norm, digits):
        arr.setflags(write=False)

    return FieldSpec(
        p=p, a=a, t=t, q=q,
        sub_modulus=tuple(sub_mod),
        ext_modulus=(int(c0), int(b0)),
        neg=neg, inv=inv, exp=exp, log=log,
        conj_table=conj, norm_table=norm, digits=digits,
        primitive=int(g),
    )


def conj(spec: FieldSpec, x):
    return spec.conj(x)


def decompose(spec: FieldSpec, x):
    return spec.decompose(x)


def hermitian_quadratic_coeffs(spec: FieldSpec) -> tuple[int, int, int]:
    """(1, alpha + conj(alpha), alpha * conj(alpha)): the binary quadratic form
    over F_t that equals the norm under x = y + alpha*z."""
    al = spec.alpha
    alc = int(spec.conj(al))
    c2 = int(spec.add(al, alc))
    c3 = int(spec.mul(al, alc))
    if c2 >= spec.t or c3 >= spec.t:
        raise AssertionError("trace/norm of alpha fell outside the subfield")
    return 1, c2, c3
