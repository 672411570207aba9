"""Exhaustive scans over forms modulo scalars.

The coefficient vector of a form is split into a prefix and a suffix of
``m`` coordinates.  All q^m suffix codewords are materialised once as a
matrix ``S``; for a fixed prefix with codeword ``v`` the codeword of
(prefix, suffix row i) is ``v + S[i]``, which vanishes exactly where
``S[i] == -v``.  So a block of q^m forms costs one comparison against a
broadcast row and no field arithmetic.

Chunks are the zero prefix (forms whose leading coefficient sits in the
suffix) followed by the normalised prefixes in lexicographic order, which
makes the chunk sequence the lexicographic form order.  Kernels see
chunks in that order and their partial results merge associatively, so a
parallel scan returns exactly what a serial one does.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .field import FieldSpec, make_field
from .forms import combine, normalized_vectors

DEFAULT_BLOCK_ELEMENTS = 1 << 21
THREADS_ENV = "HERMCODES_THREADS"


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


class FormScanner:
    """Block enumeration of all normalised coefficient vectors over a table."""

    def __init__(self, table: np.ndarray, field: FieldSpec, block_elements: int = DEFAULT_BLOCK_ELEMENTS):
        self.table = np.asarray(table, dtype=np.int64)
        self.field = field
        self.dim, self.length = self.table.shape
        q = field.q
        m = 1
        while m < self.dim and q ** (m + 1) * self.length <= block_elements:
            m += 1
        self.m = m
        self.prefix_len = self.dim - m
        self.suffix = self._suffix_block().astype(field.dtype)
        digits = np.indices((q,) * m).reshape(m, -1).T
        self.suffix_digits = digits
        nz = digits != 0
        lead = nz.argmax(axis=1)
        has = nz.any(axis=1)
        self.normalized_rows = np.nonzero(has & (digits[np.arange(len(digits)), lead] == 1))[0]

    def _suffix_block(self) -> np.ndarray:
        f = self.field
        block = np.zeros((1, self.length), dtype=np.int64)
        # the last processed position becomes the most significant digit
        for pos in range(self.dim - 1, self.prefix_len - 1, -1):
            scaled = f.mul(np.arange(f.q)[:, None], self.table[pos][None, :])
            block = f.add(scaled[:, None, :], block[None, :, :]).reshape(-1, self.length)
        return block

    def chunks(self) -> list[tuple[int, ...]]:
        zero = (0,) * self.prefix_len
        return [zero] + list(normalized_vectors(self.prefix_len, self.field.q))

    def zero_mask(self, prefix: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
        """(row ids, boolean zero mask [row, position]) for one chunk."""
        if any(prefix):
            vec = combine(np.array(prefix + (0,) * self.m), self.table, self.field)
            target = self.field.neg[vec].astype(self.field.dtype)
            return np.arange(len(self.suffix)), self.suffix == target[None, :]
        rows = self.normalized_rows
        return rows, self.suffix[rows] == 0

    def coeffs(self, prefix: tuple[int, ...], row: int) -> tuple[int, ...]:
        return tuple(prefix) + tuple(int(d) for d in self.suffix_digits[row])


def _run_chunks(kernel_cls, kernel_args, table, p, a, block_elements, chunk_range):
    field = make_field(p, a)
    scanner = FormScanner(table, field, block_elements)
    chunks = scanner.chunks()[chunk_range[0]:chunk_range[1]]
    kernel = kernel_cls(scanner, **kernel_args)
    for prefix in chunks:
        rows, mask = scanner.zero_mask(prefix)
        kernel.process(prefix, rows, mask)
    return kernel.partial()


def scan(kernel_cls, table, field: FieldSpec, workers: int = 1,
         block_elements: int = DEFAULT_BLOCK_ELEMENTS, **kernel_args):
    """Run a kernel over every normalised form; returns the merged partial."""
    scanner = FormScanner(table, field, block_elements)
    n_chunks = len(scanner.chunks())
    if workers <= 1:
        return kernel_cls.merge([
            _run_chunks(kernel_cls, kernel_args, table, field.p, field.a, block_elements, (0, n_chunks))
        ])
    n_tasks = min(n_chunks, workers * 4)
    bounds = np.linspace(0, n_chunks, n_tasks + 1).astype(int)
    ranges = [(int(bounds[i]), int(bounds[i + 1])) for i in range(n_tasks)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_run_chunks, kernel_cls, kernel_args, table, field.p, field.a, block_elements, r)
            for r in ranges
        ]
        partials = [fut.result() for fut in futures]
    return kernel_cls.merge(partials)


class SpectrumKernel:
    """Weight histogram over scalar classes plus lexicographically first
    witnesses for the ``k`` smallest nonzero weights."""

    def __init__(self, scanner: FormScanner, k: int = 5, cap: int = 32):
        self.scanner = scanner
        self.k = k
        self.cap = cap
        self.hist = np.zeros(scanner.length + 1, dtype=np.int64)
        self.witnesses: dict[int, list[tuple[int, ...]]] = {}

    def _smallest(self) -> list[int]:
        nz = np.nonzero(self.hist[1:])[0] + 1
        return [int(w) for w in nz[: self.k]]

    def process(self, prefix, rows, mask):
        weights = self.scanner.length - np.count_nonzero(mask, axis=1)
        self.hist += np.bincount(weights, minlength=self.scanner.length + 1)
        if not self.k:
            return
        keep = self._smallest()
        for w in list(self.witnesses):
            if w not in keep:
                del self.witnesses[w]
        for w in keep:
            have = self.witnesses.setdefault(w, [])
            if len(have) >= self.cap:
                continue
            hits = np.nonzero(weights == w)[0][: self.cap - len(have)]
            have.extend(self.scanner.coeffs(prefix, int(rows[i])) for i in hits)

    def partial(self):
        return self.hist, self.witnesses, self.k, self.cap

    @staticmethod
    def merge(partials):
        hist = sum(p[0] for p in partials)
        k, cap = partials[0][2], partials[0][3]
        nz = np.nonzero(hist[1:])[0] + 1
        keep = [int(w) for w in nz[:k]]
        witnesses = {}
        for w in keep:
            out = []
            for p in partials:
                out.extend(p[1].get(w, []))
            witnesses[w] = out[:cap]
        return hist, witnesses
