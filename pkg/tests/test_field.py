from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hermcodes.errors import BudgetError
from hermcodes.field import (
    conj,
    decompose,
    hermitian_quadratic_coeffs,
    is_prime,
    make_field,
    smallest_irreducible,
)

FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (3, 2), (2, 3)]


@st.composite
def field_and_elems(draw, k=3):
    p, a = draw(st.sampled_from(FIELDS))
    F = make_field(p, a)
    return F, [draw(st.integers(0, F.q - 1)) for _ in range(k)]


def test_is_prime():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


def test_smallest_irreducible():
    # low-to-high coefficients: x^2 + x + 1 over F_2, x^2 + 1 over F_3
    assert smallest_irreducible(2, 2) == (1, 1, 1)
    assert smallest_irreducible(3, 2) == (1, 0, 1)


def test_f4_alpha(F4):
    al = F4.alpha
    assert F4.add(F4.add(F4.mul(al, al), al), 1) == 0
    assert F4.add(al, F4.conj(al)) == 1
    assert F4.mul(al, F4.conj(al)) == 1
    assert F4.conj(al) == F4.mul(al, al)
    assert F4.conj(F4.mul(al, al)) == al


def test_f9_subfield(F9):
    assert F9.q == 9 and F9.t == 3
    assert int(F9.in_subfield(np.arange(9)).sum()) == 3


def test_f16_conjugation():
    F = make_field(2, 2)
    assert (F.t, F.q) == (4, 16)
    x = np.arange(16)
    assert np.array_equal(F.conj(x), F.power(x, 4))


def test_conj_basics(F4):
    assert conj(F4, 0) == 0
    for x in range(F4.t):
        assert conj(F4, x) == x


def test_decompose(F4):
    assert tuple(int(v) for v in decompose(F4, 0)) == (0, 0)
    assert tuple(int(v) for v in decompose(F4, F4.alpha)) == (0, 1)
    for x in range(F4.t):
        assert tuple(int(v) for v in decompose(F4, x)) == (x, 0)


def test_quadratic_coeffs_f4(F4):
    assert hermitian_quadratic_coeffs(F4) == (1, 1, 1)
    # x^(t+1) = y^2 + yz + z^2 for all 16 (y, z)
    for y in range(2):
        for z in range(2):
            x = int(F4.recompose(y, z))
            expect = (y * y + y * z + z * z) % 2
            assert F4.norm(x) == expect


@pytest.mark.parametrize("p,a", FIELDS)
def test_quadratic_coeffs_in_subfield(p, a):
    F = make_field(p, a)
    c = hermitian_quadratic_coeffs(F)
    assert all(0 <= v < F.t for v in c)
    # norm(y + alpha z) = c1 y^2 + c2 yz + c3 z^2 over the whole field
    ys, zs = np.divmod(np.arange(F.q), F.t)[::-1]
    lhs = F.norm(F.recompose(ys, zs))
    rhs = F.add(F.add(F.mul(c[0], F.mul(ys, ys)), F.mul(c[1], F.mul(ys, zs))), F.mul(c[2], F.mul(zs, zs)))
    assert np.array_equal(lhs, rhs)


@settings(max_examples=200, deadline=None)
@given(field_and_elems())
def test_field_axioms(data):
    F, (x, y, z) = data
    assert F.add(x, F.add(y, z)) == F.add(F.add(x, y), z)
    assert F.mul(x, F.mul(y, z)) == F.mul(F.mul(x, y), z)
    assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))
    assert F.add(x, F.neg[x]) == 0
    assert F.sub(F.add(x, y), y) == x
    if x:
        assert F.mul(x, F.inv[x]) == 1


@settings(max_examples=200, deadline=None)
@given(field_and_elems(2))
def test_frobenius(data):
    F, (x, y) = data
    assert F.conj(F.conj(x)) == x
    assert F.conj(F.mul(x, y)) == F.mul(F.conj(x), F.conj(y))
    assert F.conj(F.add(x, y)) == F.add(F.conj(x), F.conj(y))
    assert F.in_subfield(F.norm(x))
    assert F.conj(x) == F.power(x, F.t)


@settings(max_examples=100, deadline=None)
@given(field_and_elems(1))
def test_decompose_round_trip(data):
    F, (x,) = data
    y, z = F.decompose(x)
    assert F.in_subfield(y) and F.in_subfield(z)
    assert F.recompose(y, z) == x
    assert F.add(y, F.mul(F.alpha, z)) == x


@pytest.mark.parametrize("p,a", [(2, 1), (3, 1), (2, 2)])
def test_dense_tables_agree(p, a):
    F = make_field(p, a)
    idx = np.arange(F.q)
    assert np.array_equal(F.add_table, F.add(idx[:, None], idx[None, :]))
    assert np.array_equal(F.mul_table, F.mul(idx[:, None], idx[None, :]))


def test_subfield_closed():
    F = make_field(3, 2)
    sub = np.arange(F.t)
    assert F.in_subfield(F.add(sub[:, None], sub[None, :])).all()
    assert F.in_subfield(F.mul(sub[:, None], sub[None, :])).all()


def test_primitive_generates(F9):
    assert len(set(F9.exp.tolist())) == 8


def test_element_wrapper(F4):
    a = F4.element(F4.alpha)
    one = F4.element(1)
    assert a * a + a + 1 == F4.element(0)
    assert a * a.inverse() == one
    assert a.conj() == a**2
    assert (a / a) == one
    assert -a == a


def test_errors():
    with pytest.raises(ValueError):
        make_field(4)
    with pytest.raises(ValueError):
        make_field(2, 0)
    with pytest.raises(BudgetError):
        make_field(2, 9)


def test_pickle_round_trip(F9):
    import pickle

    assert pickle.loads(pickle.dumps(F9)) == F9


def test_info(F4):
    info = F4.info()
    assert info["q"] == 4 and info["t"] == 2 and info["alpha"] == 2
