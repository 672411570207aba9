"""Plane-pair census, fourth/fifth weight verification, TSS checks and the
first-2h+1-weights conjecture harness."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .code import WeightSpectrum, build_code, full_spectrum, sampled_spectrum
from .divisibility import lambda_for
from .errors import GeometryError
from .field import FieldSpec, make_field
from .forms import Form, tss_bound, zero_count
from .projective import ProjectiveSpace
from .varieties import HermitianVariety, hermitian_count, hermitian_points, line_class_of_size, line_census_formulas

PATTERNS = {0: "NN", 1: "TN", 2: "TT"}


def tangency_label(n_tangent: int, h: int) -> str:
    """'T' * (#tangent) + 'N' * (#non-tangent)."""
    return "T" * n_tangent + "N" * (h - n_tangent)


@dataclass
class Cell:
    pattern: str
    section: int  # #(X ∩ H1 ∩ ... ∩ Hh)
    pairs: int = 0
    weight: int | None = None
    example: tuple[int, ...] | None = None

    def add(self, count: int, weight: int, example):
        if self.weight is None:
            self.weight = weight
            self.example = example
        elif self.weight != weight:
            raise GeometryError(f"cell {self.pattern}/{self.section} is not weight-homogeneous")
        self.pairs += count


@dataclass
class UnionCensus:
    """Unions of h distinct hyperplanes, grouped by tangency pattern and the
    size of the Hermitian section of their common codim-2 space."""

    X: HermitianVariety
    h: int
    cells: dict[tuple[str, int], Cell] = dc_field(default_factory=dict)
    identity_checked: int = 0

    @property
    def q(self) -> int:
        return self.X.field.q

    def weights(self) -> list[int]:
        return sorted({c.weight for c in self.cells.values()})

    def codewords_at(self, w: int) -> int:
        return sum(c.pairs for c in self.cells.values() if c.weight == w) * (self.q - 1)

    def total_unions(self) -> int:
        return sum(c.pairs for c in self.cells.values())

    def cell_rows(self) -> list[dict]:
        rows = []
        for (pattern, section), c in sorted(self.cells.items(), key=lambda kv: (kv[1].weight, kv[0])):
            row = {
                "pattern": pattern,
                "section": section,
                "unions": c.pairs,
                "weight": c.weight,
                "codewords": c.pairs * (self.q - 1),
            }
            if self.X.n == 3:
                row["line_class"] = line_class_of_size(section, self.X.t).value
            rows.append(row)
        return rows


def hyperplane_pair_census(X: HermitianVariety) -> UnionCensus:
    """Every unordered pair of distinct hyperplanes of P^n(F_q)."""
    inc = X.space.hyperplane_incidence[:, X.points.mask]
    sizes = inc.sum(axis=1)
    tang = X.tangent_mask.astype(np.int64)
    census = UnionCensus(X, 2)
    n_planes = len(inc)
    total = len(X)
    for i in range(n_planes - 1):
        others = inc[i + 1:]
        inter = (inc[i][None, :] & others).sum(axis=1)
        union = (inc[i][None, :] | others).sum(axis=1)
        if not np.array_equal(union, sizes[i] + sizes[i + 1:] - inter):  # pragma: no cover
            raise GeometryError("inclusion-exclusion failed on a plane pair")
        census.identity_checked += len(union)
        nt = tang[i] + tang[i + 1:]
        key = nt * (total + 1) + inter
        for k, cnt in zip(*np.unique(key, return_counts=True)):
            j = int(np.nonzero(key == k)[0][0])
            cell_key = (PATTERNS[int(k) // (total + 1)], int(k) % (total + 1))
            cell = census.cells.setdefault(cell_key, Cell(*cell_key))
            cell.add(int(cnt), int(total - union[j]), (i, i + 1 + j))
    return census


def plane_pair_census(t: int, p: int | None = None, a: int | None = None) -> UnionCensus:
    """Pair census on the Hermitian surface over F_{t^2}."""
    field = _field_for_t(t) if p is None else make_field(p, a)
    return hyperplane_pair_census(hermitian_points(3, field))


def pencil_union_census(X: HermitianVariety, h: int) -> UnionCensus:
    """Unions of h distinct planes through a common line of PG(3, q)."""
    if X.n != 3:
        raise ValueError("pencil unions are enumerated through lines of PG(3, q) only")
    space = X.space
    q = X.field.q
    if h > q + 1:
        raise ValueError(f"a pencil has only q+1={q + 1} planes, h={h}")
    inc_all = space.hyperplane_incidence
    inc = inc_all[:, X.points.mask]
    sizes = inc.sum(axis=1)
    tang = X.tangent_mask
    lines = space.line_array
    census = UnionCensus(X, h)
    total = len(X)
    for line in lines:
        planes = np.nonzero(inc_all[:, line[0]] & inc_all[:, line[1]])[0]
        lx = int(X.points.mask[line].sum())
        combos = np.array(list(itertools.combinations(planes, h)))
        union = sizes[combos].sum(axis=1) - (h - 1) * lx
        nt = tang[combos].sum(axis=1)
        for k in np.unique(nt):
            sel = np.nonzero(nt == k)[0]
            ws = total - union[sel]
            for w in np.unique(ws):
                hit = sel[ws == w]
                key = (tangency_label(int(k), h), lx)
                cell = census.cells.setdefault(key, Cell(*key))
                cell.add(len(hit), int(w), tuple(int(c) for c in combos[hit[0]]))
    return census


def union_census(X: HermitianVariety, h: int) -> UnionCensus:
    # any two distinct hyperplanes already meet in a codim-2 space
    if h == 2:
        return hyperplane_pair_census(X)
    return pencil_union_census(X, h)


def _field_for_t(t: int) -> FieldSpec:
    for p in range(2, t + 1):
        a = round(math.log(t, p))
        if p**a == t and all(p % d for d in range(2, p)):
            return make_field(p, a)
    raise ValueError(f"t={t} is not a prime power")


# -- fourth and fifth weights ---------------------------------------------------

def weight_claims(t: int) -> dict:
    q = t * t
    eqs = line_census_formulas(t)
    return {
        "w4": {
            "weight": t**5 - t**3 + t**2,
            "closed_form": (t - 1) * t**3 * (t**4 - 1) ** 2 // 2,
            "proof_product": (t * t - 1) * eqs["tangent"] * (q * (q - 1) // 2),
            "line_class": "tangent",
            "pairs_per_line_claimed": q * (q - 1) // 2,
        },
        "w5": {
            "weight": t**5 - t**3 + t**2 + t,
            "closed_form": (t - 1) * (t**3 + 1) * (t**2 + 1) ** 2 * t**6 // 2,
            "proof_product": (t * t - 1) * eqs["secant"] * (q * (q + 1) // 2),
            "line_class": "secant",
            "pairs_per_line_claimed": q * (q + 1) // 2,
        },
    }


def verify_weight_claims(t: int, census: UnionCensus | None = None,
                         spectrum: WeightSpectrum | None = None) -> dict:
    """Compare the fourth/fifth weight claims with the pair census (and the
    exhaustive spectrum when given).  Enumerated values are authoritative."""
    if census is None:
        census = plane_pair_census(t)
    claims = weight_claims(t)
    X = census.X
    lines = X.space.line_array
    line_sizes = X.points.mask[lines].sum(axis=1)
    out: dict = {"t": t, "mismatch": False}
    spec_weights = spectrum.weights() if spectrum else None
    for rank, key in ((4, "w4"), (5, "w5")):
        c = claims[key]
        section = 1 if c["line_class"] == "tangent" else t + 1
        cell = census.cells.get(("NN", section))
        n_lines = int((line_sizes == section).sum())
        row = {
            "formula_weight": c["weight"],
            "cell_weight": cell.weight if cell else None,
            "closed_form": c["closed_form"],
            "proof_product": c["proof_product"],
            "census_codewords": census.codewords_at(c["weight"]),
            "cell_codewords": cell.pairs * (census.q - 1) if cell else 0,
            "pairs_per_line_claimed": c["pairs_per_line_claimed"],
            "pairs_per_line_observed": (cell.pairs / n_lines) if cell else 0,
        }
        row["closed_form_matches_census"] = row["closed_form"] == row["census_codewords"]
        row["proof_product_matches_census"] = row["proof_product"] == row["census_codewords"]
        row["weight_matches"] = row["cell_weight"] == c["weight"]
        if spectrum is not None:
            row["spectrum_weight"] = spec_weights[rank - 1] if len(spec_weights) >= rank else None
            row["spectrum_codewords"] = spectrum.counts.get(c["weight"], 0)
            row["weight_matches"] = row["weight_matches"] and row["spectrum_weight"] == c["weight"]
        if not (row["closed_form_matches_census"] and row["proof_product_matches_census"] and row["weight_matches"]):
            out["mismatch"] = True
        out[key] = row
    return out


def tss_check(f: Form, space: ProjectiveSpace) -> bool:
    """#Z(f) <= h q^(n-1) + pi_(n-2) over P^n(F_q) (requires h <= q)."""
    if f.degree > space.field.q:
        raise ValueError("the bound needs h <= q")
    return zero_count(f, space) <= tss_bound(space.n, f.degree, space.field.q)


# -- conjecture harness -----------------------------------------------------------

@dataclass
class ConjectureReport:
    n: int
    h: int
    t: int
    mode: str
    first_weights: list[int]
    union_weights: list[int]
    part1: dict
    part2: dict
    part3: dict
    divisor: int
    notes: list[str] = dc_field(default_factory=list)

    @property
    def confirmed(self) -> bool:
        return all(p.get("holds") is True for p in (self.part1, self.part2, self.part3))

    def to_json(self) -> dict:
        return {
            "n": self.n, "h": self.h, "t": self.t, "mode": self.mode,
            "first_weights": self.first_weights,
            "union_weights": self.union_weights,
            "divisor": self.divisor,
            "part1": self.part1, "part2": self.part2, "part3": self.part3,
            "confirmed": self.confirmed,
            "notes": self.notes,
        }


def predicted_shape(n: int, h: int, t: int) -> tuple[str, int]:
    """Tangency label and codim-2 Hermitian section size for w_1 codewords."""
    label = "T" * h if n % 2 else "N" * h
    return label, hermitian_count(n - 2, t)


def _union_of_witness(f: Form, space: ProjectiveSpace, X: HermitianVariety):
    """Hyperplanes whose union is Z(f), or None if Z(f) is no such union."""
    from .forms import evaluate_on

    zmask = evaluate_on(f, space) == 0
    inc = space.hyperplane_incidence
    inside = np.nonzero((inc & ~zmask[None, :]).sum(axis=1) == 0)[0]
    if len(inside) != f.degree:
        return None
    if not np.array_equal(inc[inside].any(axis=0), zmask):
        return None
    return inside


def conjecture_check(n: int, h: int, t: int, mode: str = "exhaustive", workers: int = 1,
                     samples: int = 0, seed: int = 0, cap: int = 32,
                     p: int | None = None, a: int | None = None) -> ConjectureReport:
    if h < 2:
        raise ValueError("the conjecture concerns unions of h >= 2 hyperplanes")
    field = _field_for_t(t) if p is None else make_field(p, a)
    X = hermitian_points(n, field)
    code = build_code(X, h)
    k = 2 * h + 1
    census = union_census(X, h)
    uw = census.weights()
    lam = lambda_for(n, h).value if h <= n else 0
    divisor = t**lam
    shape = predicted_shape(n, h, t)
    notes = ["part 1 is read for C_h (the statement names C_2)", "P^{N-2} read as P^{n-2}"]
    mins = min(uw)
    min_cells = {key: c for key, c in census.cells.items() if c.weight == mins}
    shape_ok = all(key == shape for key in min_cells)

    if mode == "exhaustive":
        spectrum = full_spectrum(code, workers=workers, witnesses=k, cap=cap)
        first = spectrum.smallest(k)
        achieved = {w: w in uw for w in first}
        part1 = {"achieved": {str(w): v for w, v in achieved.items()}, "holds": all(achieved.values())}
        w1 = first[0]
        union_at_w1 = census.codewords_at(w1)
        predicted = census.cells.get(shape)
        predicted_cw = predicted.pairs * (field.q - 1) if predicted and predicted.weight == w1 else 0
        witness_shapes = []
        for f in spectrum.witnesses.get(w1, []):
            planes = _union_of_witness(f, X.space, X)
            if planes is None:
                witness_shapes.append(None)
                continue
            nt = int(X.tangent_mask[planes].sum())
            common = np.logical_and.reduce(X.space.hyperplane_incidence[planes], axis=0)
            witness_shapes.append((tangency_label(nt, h), int((common & X.points.mask).sum())))
        part2 = {
            "min_weight": w1,
            "predicted_shape": list(shape),
            "min_weight_codewords": spectrum.counts[w1],
            "predicted_shape_codewords": predicted_cw,
            "witnesses_checked": len(witness_shapes),
            "witnesses_match": all(s == shape for s in witness_shapes),
            "holds": spectrum.counts[w1] == predicted_cw == union_at_w1
                     and all(s == shape for s in witness_shapes),
        }
        part3 = {
            "max_union_weight": max(uw),
            "w_2h+1": first[-1],
            "holds": len(first) == k and max(uw) <= first[-1],
        }
        return ConjectureReport(n, h, t, mode, first, uw, part1, part2, part3, divisor, notes)

    if mode != "structured":
        raise ValueError(f"unknown mode {mode!r}")
    first = uw[:k]
    sampled = sampled_spectrum(code, samples, seed) if samples else None
    part1 = {
        "union_weight_count": len(uw),
        "divisible": all(w % divisor == 0 for w in uw),
        "holds": None,
    }
    part2 = {
        "min_union_weight": mins,
        "predicted_shape": list(shape),
        "min_union_shapes": [list(key) for key in sorted(min_cells)],
        "holds": shape_ok if sampled is None else None,
    }
    part3 = {
        "distinct_union_weights": len(uw),
        "at_most_2h+1": len(uw) <= k,
        "holds": None,
    }
    if sampled is not None:
        sw = sampled.weights()
        part1["sampled_below_min_union"] = [w for w in sw if w < mins]
        part1["union_weights_seen_in_sample"] = [w for w in uw if w in sampled.counts]
        part2["holds"] = shape_ok and not part1["sampled_below_min_union"]
        part2["samples"] = samples
        part2["seed"] = seed
    notes.append("structured mode: evidence from hyperplane unions only; parts 1 and 3 need the full spectrum")
    return ConjectureReport(n, h, t, mode, first, uw, part1, part2, part3, divisor, notes)
