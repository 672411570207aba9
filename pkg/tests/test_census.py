from __future__ import annotations

import csv
import math
from pathlib import Path

import pytest

from hermcodes.census import (
    Cell,
    conjecture_check,
    hyperplane_pair_census,
    pencil_union_census,
    plane_pair_census,
    predicted_shape,
    tangency_label,
    tss_check,
    union_census,
    verify_weight_claims,
    weight_claims,
)
from hermcodes.code import build_code, full_spectrum
from hermcodes.errors import GeometryError
from hermcodes.forms import parse_form
from hermcodes.varieties import hermitian_points

GOLDEN = Path(__file__).parent / "golden"


def test_plane_pair_cells_t2(X2):
    census = plane_pair_census(2)
    assert census.total_unions() == math.comb(85, 2) == census.identity_checked
    with open(GOLDEN / "plane_pairs_t2.csv") as fh:
        want = [{k: (v if k in ("pattern", "line_class") else int(v)) for k, v in row.items()}
                for row in csv.DictReader(fh)]
    assert census.cell_rows() == want
    assert census.weights() == [22, 24, 26, 28, 30]


def test_plane_pair_weights_t3():
    census = plane_pair_census(3)
    assert census.weights() == [210, 216, 219, 225, 228]
    assert all(w % 3 == 0 for w in census.weights())
    assert census.total_unions() == math.comb(820, 2)


def test_weight_claim_numbers():
    c = weight_claims(2)
    assert (c["w4"]["weight"], c["w5"]["weight"]) == (28, 30)
    assert (c["w4"]["closed_form"], c["w4"]["proof_product"]) == (900, 1620)
    assert (c["w5"]["closed_form"], c["w5"]["proof_product"]) == (7200, 7200)


def test_weight_claims_t2(X2):
    spec = full_spectrum(build_code(X2, 2))
    r = verify_weight_claims(2, spectrum=spec)
    assert r["mismatch"]
    w4, w5 = r["w4"], r["w5"]
    assert w4["census_codewords"] == 1620 and w4["proof_product_matches_census"]
    assert not w4["closed_form_matches_census"]
    assert w5["census_codewords"] == 720 and not w5["proof_product_matches_census"]
    # only the non-tangent pairs of the q + 1 planes through a secant line count
    assert w5["pairs_per_line_observed"] == math.comb(2 * 2 - 2, 2) == 1
    assert w4["spectrum_weight"] == 28 and w5["spectrum_weight"] == 30
    assert w4["weight_matches"] and w5["weight_matches"]


def test_weight_claims_t3():
    r = verify_weight_claims(3)
    w4, w5 = r["w4"], r["w5"]
    assert w4["census_codewords"] == w4["proof_product"] == 483840
    assert w4["closed_form"] == 172800
    assert w5["census_codewords"] == 680400
    assert w5["closed_form"] == w5["proof_product"] == 2041200
    assert w5["pairs_per_line_observed"] == math.comb(9 - 3, 2)


def test_min_weight_cells_match_spectrum(X2):
    census = plane_pair_census(2)
    spec = full_spectrum(build_code(X2, 2))
    for w in census.weights()[:3]:
        assert census.codewords_at(w) <= spec.counts[w]
    assert census.codewords_at(22) == spec.counts[22]
    assert census.codewords_at(28) < spec.counts[28]


def test_pencil_unions(X2):
    census = pencil_union_census(X2, 3)
    assert census.total_unions() == 357 * math.comb(5, 3)
    for (pattern, section), cell in census.cells.items():
        assert len(pattern) == 3 and section in (1, 3, 5)
    with pytest.raises(ValueError):
        union_census(X2, 6)


def test_union_census_h2_is_pairs(X2):
    assert union_census(X2, 2).cell_rows() == hyperplane_pair_census(X2).cell_rows()


def test_tangency_label():
    assert tangency_label(1, 3) == "TNN"


def test_cell_homogeneity():
    c = Cell("TT", 3)
    c.add(2, 22, (0, 1))
    c.add(3, 22, (0, 2))
    assert c.pairs == 5
    with pytest.raises(GeometryError):
        c.add(1, 24, (0, 3))


def test_predicted_shape():
    assert predicted_shape(3, 2, 2) == ("TT", 3)
    assert predicted_shape(4, 2, 2) == ("NN", 9)
    assert predicted_shape(3, 3, 3) == ("TTT", 4)


def test_tss_check(F4):
    space = hermitian_points(3, F4).space
    assert tss_check(parse_form("x0*x1", 3, F4), space)
    with pytest.raises(ValueError):
        tss_check(parse_form("x0^5", 3, F4), space)


def test_conjecture_exhaustive_t2():
    r = conjecture_check(3, 2, 2, "exhaustive")
    assert r.confirmed
    assert r.first_weights == r.union_weights == [22, 24, 26, 28, 30]
    assert r.part2["min_weight_codewords"] == 2160
    assert r.to_json()["confirmed"] is True


def test_conjecture_structured_t3():
    r = conjecture_check(3, 2, 3, "structured")
    assert len(r.union_weights) == 5
    assert all(w % 3 == 0 for w in r.union_weights)
    assert r.part2["holds"] and r.part1["holds"] is None


def test_conjecture_structured_n4():
    r = conjecture_check(4, 2, 2, "structured", samples=2000, seed=1)
    assert r.union_weights == [84, 88, 92, 96, 100]
    assert r.part2["holds"] and r.part1["sampled_below_min_union"] == []
    assert r.divisor == 4


def test_conjecture_bad_mode():
    with pytest.raises(ValueError):
        conjecture_check(3, 2, 2, "guess")


def test_conjecture_needs_h2():
    with pytest.raises(ValueError):
        conjecture_check(2, 1, 2, "exhaustive")


def test_conjecture_other_field_args():
    r = conjecture_check(3, 2, 2, "structured", p=2, a=1)
    assert r.union_weights == [22, 24, 26, 28, 30]
