"""The functional code C_h(X): forms of degree h evaluated on the points of X."""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .engine import SpectrumKernel, scan
from .errors import BudgetError
from .field import FieldSpec
from .forms import (
    Form,
    MonomialBasis,
    combine,
    evaluation_table,
    format_form,
    monomial_basis,
    num_forms_mod_scalar,
    product_of_linear_forms,
)
from .linalg import rank as matrix_rank
from .varieties import HermitianVariety

# scalar classes x code length
EXHAUSTIVE_BUDGET = 2 * 10**11
DEFAULT_WITNESS_CAP = 32


@dataclass(frozen=True, eq=False)
class FunctionalCode:
    variety: HermitianVariety
    h: int
    basis: MonomialBasis
    table: np.ndarray  # [monomial, position]; positions follow X's point order

    @property
    def field(self) -> FieldSpec:
        return self.variety.field

    @property
    def length(self) -> int:
        return self.table.shape[1]

    @property
    def basis_size(self) -> int:
        return len(self.basis)

    @functools.cached_property
    def dimension(self) -> int:
        return matrix_rank(self.table, self.field)

    def codeword(self, f: Form) -> np.ndarray:
        return combine(f.coeffs, self.table, self.field)


def build_code(X: HermitianVariety, h: int) -> FunctionalCode:
    if h < 1:
        raise ValueError("degree h must be at least 1")
    basis = monomial_basis(X.n, h)
    if len(basis) * len(X) > 10**8:
        raise BudgetError("evaluation table too large")
    table = evaluation_table(basis, X.space.points[X.points.indices], X.field)
    table.setflags(write=False)
    return FunctionalCode(X, h, basis, table)


def rank(code: FunctionalCode) -> int:
    return code.dimension


def weight_of(code: FunctionalCode, f: Form) -> int:
    """#X - #(X ∩ Z(f))."""
    return int(np.count_nonzero(code.codeword(f)))


@dataclass
class WeightSpectrum:
    length: int
    dimension: int
    counts: dict[int, int]
    mode: str
    sample_size: int | None = None
    seed: int | None = None
    witnesses: dict[int, list[Form]] = dc_field(default_factory=dict)

    def weights(self) -> list[int]:
        return sorted(self.counts)

    def smallest(self, k: int) -> list[int]:
        return self.weights()[:k]

    def total(self) -> int:
        return sum(self.counts.values())

    def gcd(self) -> int:
        return functools.reduce(math.gcd, self.counts, 0)

    def to_json(self, field: FieldSpec) -> dict:
        out = {
            "length": self.length,
            "dimension": self.dimension,
            "mode": self.mode,
            "spectrum": [[w, self.counts[w]] for w in self.weights()],
            "witnesses": {str(w): [format_form(f, field) for f in fs] for w, fs in sorted(self.witnesses.items())},
        }
        if self.mode == "sampled":
            out["samples"] = self.sample_size
            out["seed"] = self.seed
        return out


def exhaustive_cost(code: FunctionalCode) -> int:
    return num_forms_mod_scalar(code.variety.n, code.h, code.field.q) * code.length


def full_spectrum(code: FunctionalCode, workers: int = 1, witnesses: int = 5,
                  cap: int = DEFAULT_WITNESS_CAP, budget: int = EXHAUSTIVE_BUDGET) -> WeightSpectrum:
    """Exhaustive weight distribution of the nonzero codewords.

    One form per scalar class is evaluated; counts are scaled by q-1 and,
    when the evaluation map has a kernel, divided by the q^dim(ker) forms
    that share each codeword.
    """
    cost = exhaustive_cost(code)
    if cost > budget:
        raise BudgetError(
            f"exhaustive spectrum needs ~{cost:.3g} evaluations (budget {budget:.3g}); use sampled mode"
        )
    q = code.field.q
    hist, wit = scan(SpectrumKernel, code.table, code.field, workers=workers, k=witnesses, cap=cap)
    kernel_dim = code.basis_size - code.dimension
    share = q**kernel_dim
    counts = {}
    for w in np.nonzero(hist)[0]:
        if w == 0:
            continue
        c = int(hist[w]) * (q - 1)
        if c % share:
            raise AssertionError("codeword multiplicity inconsistent with the kernel dimension")
        counts[int(w)] = c // share
    forms = {w: [Form(code.basis, c) for c in cs] for w, cs in wit.items()}
    return WeightSpectrum(code.length, code.dimension, counts, "exhaustive", witnesses=forms)


def sample_coefficients(dim: int, q: int, samples: int, seed: int) -> np.ndarray:
    """Seeded counter-based stream of nonzero coefficient vectors."""
    rng = np.random.Generator(np.random.Philox(seed))
    out = np.empty((0, dim), dtype=np.int64)
    while len(out) < samples:
        draw = rng.integers(0, q, size=(samples - len(out), dim))
        out = np.vstack([out, draw[draw.any(axis=1)]])
    return out


def sampled_spectrum(code: FunctionalCode, samples: int, seed: int, witnesses: int = 5,
                     cap: int = DEFAULT_WITNESS_CAP, batch: int = 8192) -> WeightSpectrum:
    """Weight histogram over uniformly sampled nonzero forms (raw sample counts)."""
    coeffs = sample_coefficients(code.basis_size, code.field.q, samples, seed)
    counts: dict[int, int] = {}
    firsts: dict[int, list[Form]] = {}
    for start in range(0, samples, batch):
        block = coeffs[start:start + batch]
        weights = np.count_nonzero(combine(block, code.table, code.field), axis=1)
        for w, c in zip(*np.unique(weights, return_counts=True)):
            counts[int(w)] = counts.get(int(w), 0) + int(c)
        for i, w in enumerate(weights.tolist()):
            lst = firsts.setdefault(w, [])
            if len(lst) < cap:
                lst.append(Form(code.basis, tuple(int(c) for c in block[i])).normalized(code.field))
    counts.pop(0, None)
    keep = sorted(counts)[:witnesses]
    wit = {w: firsts[w] for w in keep}
    return WeightSpectrum(code.length, code.dimension, counts, "sampled", samples, seed, wit)


def hyperplane_pair_weights(code: FunctionalCode) -> dict[int, list[tuple[int, int]]]:
    """Weights of all products of two distinct hyperplanes (h = 2 only),
    keyed by weight, each with its hyperplane index pairs in order."""
    if code.h != 2:
        raise ValueError("hyperplane pairs give quadrics only")
    X = code.variety
    inc = X.space.hyperplane_incidence[:, X.points.mask]
    n_planes = len(inc)
    out: dict[int, list[tuple[int, int]]] = {}
    for i in range(n_planes - 1):
        union = (inc[i][None, :] | inc[i + 1:]).sum(axis=1)
        weights = len(X) - union
        for w in np.unique(weights):
            js = np.nonzero(weights == w)[0] + i + 1
            out.setdefault(int(w), []).extend((i, int(j)) for j in js)
    return out


def min_weight_search(code: FunctionalCode, strategy: str = "exhaustive", workers: int = 1,
                      cap: int = DEFAULT_WITNESS_CAP) -> tuple[int, list[Form]]:
    """Minimum distance (exhaustive) or the minimum over unions of two
    distinct hyperplanes (plane-pairs; an upper bound on d)."""
    if strategy == "exhaustive":
        spec = full_spectrum(code, workers=workers, witnesses=1, cap=cap)
        w = spec.smallest(1)[0]
        return w, spec.witnesses[w]
    if strategy == "plane-pairs":
        pairs = hyperplane_pair_weights(code)
        w = min(pairs)
        space = code.variety.space
        forms = [
            product_of_linear_forms([space.hyperplane(i), space.hyperplane(j)], code.field)
            for i, j in pairs[w][:cap]
        ]
        return w, forms
    raise ValueError(f"unknown strategy {strategy!r}")
