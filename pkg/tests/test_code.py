from __future__ import annotations

import json
import math
from collections import Counter
from pathlib import Path

import numpy as np
import pytest

from hermcodes.code import (
    DEFAULT_WITNESS_CAP,
    build_code,
    exhaustive_cost,
    full_spectrum,
    hyperplane_pair_weights,
    min_weight_search,
    sample_coefficients,
    sampled_spectrum,
    weight_of,
)
from hermcodes.engine import FormScanner, SpectrumKernel, scan
from hermcodes.errors import BudgetError
from hermcodes.field import make_field
from hermcodes.forms import enumerate_forms_mod_scalar, hermitian_form, parse_form
from hermcodes.varieties import hermitian_points

GOLDEN = Path(__file__).parent / "golden"


def naive_spectrum(code):
    """Loop over scalar classes one form at a time."""
    F = code.field
    hist = Counter()
    firsts = {}
    for f in enumerate_forms_mod_scalar(code.variety.n, code.h, F):
        w = weight_of(code, f)
        hist[w] += 1
        firsts.setdefault(w, []).append(f)
    return hist, firsts


@pytest.mark.parametrize("n,h,p,length,dim", [
    (3, 2, 2, 45, 10),
    (4, 2, 2, 165, 15),
    (2, 1, 2, 9, 3),
    (3, 3, 3, 280, 20),
])
def test_parameters(n, h, p, length, dim):
    code = build_code(hermitian_points(n, make_field(p)), h)
    assert code.length == length
    assert code.basis_size == math.comb(n + h, h)
    assert code.dimension == dim


def test_kernel_when_h_exceeds_t(X2):
    code = build_code(X2, 3)
    assert code.dimension < 20
    phi = hermitian_form(3, X2.field)
    assert not phi.is_zero()
    assert weight_of(code, phi) == 0


def test_weight_examples(X2, F4):
    code = build_code(X2, 2)
    assert weight_of(code, parse_form("x0*x1", 3, F4)) == 30
    # (x0 + x1)(x0 + x2): two tangent planes meeting in a secant line
    assert weight_of(code, parse_form("x0^2 + x0*x2 + x0*x1 + x1*x2", 3, F4)) == 22


@pytest.mark.parametrize("n,h,p", [(2, 2, 2), (2, 1, 3), (3, 1, 2), (1, 3, 2), (2, 2, 3)])
def test_exhaustive_matches_naive(n, h, p):
    code = build_code(hermitian_points(n, make_field(p)), h)
    hist, firsts = naive_spectrum(code)
    spec = full_spectrum(code, witnesses=3, cap=4)
    q = code.field.q
    share = q ** (code.basis_size - code.dimension)
    want = {w: c * (q - 1) // share for w, c in hist.items() if w}
    assert spec.counts == want
    # witnesses are the lexicographically first forms of each weight
    for w, forms in spec.witnesses.items():
        assert forms == firsts[w][:4]
    assert sorted(spec.witnesses) == spec.smallest(3)


@pytest.mark.parametrize("block", [1 << 10, 1 << 13, 1 << 16])
def test_block_size_does_not_matter(X2, block):
    code = build_code(X2, 2)
    ref = scan(SpectrumKernel, code.table, code.field, k=5, cap=8)
    got = scan(SpectrumKernel, code.table, code.field, block_elements=block, k=5, cap=8)
    assert np.array_equal(ref[0], got[0])
    assert ref[1] == got[1]


def test_scanner_chunks_cover_all_forms(X2):
    code = build_code(X2, 2)
    sc = FormScanner(code.table, code.field, block_elements=1 << 10)
    total = sum(len(sc.zero_mask(p)[0]) for p in sc.chunks())
    assert total == (4**10 - 1) // 3


def test_t2_spectrum_golden(X2):
    spec = full_spectrum(build_code(X2, 2), witnesses=5)
    got = json.dumps(spec.to_json(X2.field), sort_keys=True, indent=2) + "\n"
    assert got == (GOLDEN / "spectrum_n3_h2_t2.json").read_text()
    assert spec.total() == 4**10 - 1
    assert spec.smallest(5) == [22, 24, 26, 28, 30]
    assert spec.gcd() == 2


def test_witness_weights(X2):
    code = build_code(X2, 2)
    spec = full_spectrum(code, witnesses=5)
    for w, forms in spec.witnesses.items():
        assert 0 < len(forms) <= DEFAULT_WITNESS_CAP
        assert all(weight_of(code, f) == w for f in forms)


def test_parallel_identical(X2):
    code = build_code(X2, 2)
    a = full_spectrum(code, workers=1)
    b = full_spectrum(code, workers=3)
    assert a.to_json(X2.field) == b.to_json(X2.field)


def test_budget_error():
    code = build_code(hermitian_points(3, make_field(3)), 3)
    assert exhaustive_cost(code) > 10**20
    with pytest.raises(BudgetError, match="sampled"):
        full_spectrum(code)


def test_sampled_deterministic(X3):
    code = build_code(X3, 2)
    a = sampled_spectrum(code, 3000, seed=5)
    b = sampled_spectrum(code, 3000, seed=5)
    c = sampled_spectrum(code, 3000, seed=6)
    assert a.to_json(X3.field) == b.to_json(X3.field)
    assert a.counts != c.counts
    assert a.total() == 3000 and a.mode == "sampled"
    assert all(w % 3 == 0 for w in a.counts)


def test_sample_coefficients_nonzero():
    rows = sample_coefficients(3, 2, 500, seed=1)
    assert rows.shape == (500, 3) and rows.any(axis=1).all()


def test_sampled_support_within_exhaustive(X2):
    code = build_code(X2, 2)
    full = full_spectrum(code)
    samp = sampled_spectrum(code, 5000, seed=0)
    assert set(samp.counts) <= set(full.counts)


def test_plane_pairs(X2):
    code = build_code(X2, 2)
    pairs = hyperplane_pair_weights(code)
    assert sum(len(v) for v in pairs.values()) == math.comb(85, 2)
    assert sorted(pairs) == [22, 24, 26, 28, 30]
    w, forms = min_weight_search(code, "plane-pairs")
    assert w == 22 and all(weight_of(code, f) == 22 for f in forms)
    w2, _ = min_weight_search(code, "exhaustive")
    assert w2 == 22
    with pytest.raises(ValueError):
        min_weight_search(code, "bogus")


def test_plane_pair_minimum_t3(X3):
    w, _ = min_weight_search(build_code(X3, 2), "plane-pairs")
    t = 3
    # two tangent planes (t^3 + t^2 + 1 points each) sharing a secant line
    assert w == len(X3) - (2 * (t**3 + t**2 + 1) - (t + 1)) == 210
