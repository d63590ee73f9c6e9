"""The spectral sequence of a double complex filtered by the base degree.

Over a field ``k`` (``F_p`` or Q) every page is computed from
representatives in ``Tot ⊗ k``.  With ``F_p`` the span of chains of
filtration ``<= p`` and ``Z^r_p = {x ∈ F_p : dx ∈ F_{p-r}}``,

    E^r_p = Z^r_p / (Z^{r-1}_{p-1} + d Z^{r-1}_{p+r-1}).

Entries are indexed ``(m, n)`` with ``n`` the filtration (base) degree;
``d_r: E^r_{m,n} -> E^r_{m+r-1, n-r}``.  Only total degrees ``<= cap-1``
are reported.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

from .bicomplex import Bicomplex
from .chains import (
    DegreeAboveGuarantee,
    homology_data,
    homology_over_field,
    induced_matrix,
    kernel_basis,
    parse_coeff,
    rank_mod,
    row_reduce,
    solve_over_field,
)
from .modules import (
    PresentedComplex,
    PresentedGroup,
    coefficient_homology,
    fiber_homology_module,
    field_coefficient_homology,
)


class NotStabilized(RuntimeError):
    pass


class PageInconsistency(RuntimeError):
    pass


class _Filtered:
    """``Tot`` with dense boundary columns and filtration bookkeeping."""

    def __init__(self, B: Bicomplex, p: int):
        self.B, self.p = B, p
        self.T = B.total_complex()
        self.blocks = {k: B.blocks(k) for k in range(B.cap + 1)}
        self._pages: dict = {}
        self._Z: dict = {}

    def dim(self, k: int) -> int:
        return len(self.T.basis[k]) if 0 <= k <= self.T.top else 0

    def filt_range(self, k: int, p: int) -> int:
        """Number of leading coordinates of ``Tot_k`` with filtration ``<= p``."""
        total = 0
        for (m, n, off, s) in self.blocks.get(k, ()):
            if n <= p:
                total = off + s
        return total if p >= 0 else 0

    def d(self, k: int, vec: list) -> list:
        out = [0] * self.dim(k - 1)
        if k < 1:
            return out
        for j, a in enumerate(vec):
            if a:
                for i, v in self.T.boundary[k][j].items():
                    out[i] += a * v
        return self._mod(out)

    def _mod(self, v):
        return [a % self.p for a in v] if self.p else v

    def Z(self, r: int, p: int, k: int) -> list:
        """Basis of ``Z^r_{p}`` in total degree ``k``."""
        key = (r, p, k)
        if key not in self._Z:
            self._Z[key] = self._cycles(r, p, k)
        return self._Z[key]

    def _cycles(self, r: int, p: int, k: int) -> list:
        a = self.filt_range(k, p)
        if a == 0:
            return []
        n = self.dim(k)
        if k == 0:
            return [[int(i == j) for i in range(n)] for j in range(a)]
        lo = self.filt_range(k - 1, p - r)
        rows_total = self.dim(k - 1)
        M = [[0] * a for _ in range(rows_total - lo)]
        for j in range(a):
            for i, v in self.T.boundary[k][j].items():
                if i >= lo:
                    M[i - lo][j] += v
        K = kernel_basis(M, a, self.p) if M else \
            [[int(i == j) for i in range(a)] for j in range(a)]
        return [list(v) + [0] * (n - a) for v in K]

    def dZ(self, r: int, p: int, k: int) -> list:
        """``d Z^r_p`` from degree ``k`` (lands in degree ``k-1``)."""
        if k > self.T.top or k < 1:
            return []
        return [self.d(k, z) for z in self.Z(r, p, k)]

    def denominator(self, r: int, p: int, k: int) -> list:
        return self.Z(r - 1, p - 1, k) + self.dZ(r - 1, p + r - 1, k + 1)

    def page_basis(self, r: int, p: int, k: int) -> tuple:
        """Representatives of a basis of ``E^r_p`` in degree ``k`` and an
        echelon basis of the denominator."""
        key = (r, p, k)
        if key not in self._pages:
            den = row_reduce(self.denominator(r, p, k), self.p)
            cur, reps = list(den), []
            for z in self.Z(r, p, k):
                ext = row_reduce(cur + [z], self.p)
                if len(ext) > len(cur):
                    reps.append(z)
                    cur = ext
            self._pages[key] = (reps, den)
        return self._pages[key]

    def entry(self, r: int, p: int, k: int) -> int:
        return len(self.page_basis(r, p, k)[0])

    def d_matrix(self, r: int, p: int, k: int) -> list:
        """``d_r: E^r_p -> E^r_{p-r}`` from total degree ``k``, in the bases
        of ``page_basis``."""
        src, _ = self.page_basis(r, p, k)
        if k < 1 or p - r < 0:
            return []
        reps, den = self.page_basis(r, p - r, k - 1)
        cols = []
        for x in src:
            c = solve_over_field(reps + den, self.d(k, x), self.p)
            if c is None:
                raise PageInconsistency("d_r of a representative leaves Z^r")
            cols.append(c[:len(reps)])
        return [[col[i] for col in cols] for i in range(len(reps))]


@dataclass
class SpectralSequence:
    """Pages ``pages[r][(m, n)]`` (dimensions) for ``r >= 1``, ``E∞``, and the
    differentials ``differentials[r][(m, n)]`` as matrices."""
    coeff: str
    cap: int
    pages: dict
    einf: dict
    differentials: dict
    total: dict = field(default_factory=dict)

    def page(self, r: int) -> dict:
        return self.pages[r]

    def collapses_at(self) -> int:
        """Smallest ``r`` with ``E^r = E∞``."""
        for r in sorted(self.pages):
            if self.pages[r] == self.einf:
                return r
        return max(self.pages) + 1

    def converges(self) -> bool:
        return all(sum(v for (m, n), v in self.einf.items() if m + n == k) == self.total[k]
                   for k in self.total)


def spectral_sequence(B: Bicomplex, coeff="F2", max_page: int | None = None) -> SpectralSequence:
    """Pages ``E^1 .. E^{max_page}`` and ``E∞`` over a field.

    Each page is checked against the homology of the previous one with
    its differential, ``d_r∘d_r = 0`` is checked, and ``E∞`` is compared
    with ``H(Tot ⊗ k)``.
    """
    p = parse_coeff(coeff)
    if p is None:
        raise ValueError("pages are computed over a field; use integral_e2 for Z")
    F = _Filtered(B, p)
    top = B.cap - 1
    stable = top + 2          # filtration length bound: E^r = E∞ for r >= k + 2
    last = max(max_page if max_page is not None else stable, 1)
    spots = [(k - n, n) for k in range(top + 1) for n in range(k + 1)]
    pages, diffs, ranks = {}, {}, {}
    for r in range(1, max(last, stable) + 2):
        pages[r] = {(m, n): F.entry(r, n, m + n) for (m, n) in spots}
    for r in range(1, max(last, stable) + 1):
        diffs[r] = {(k - n, n): F.d_matrix(r, n, k)
                    for k in range(top + 2) for n in range(k + 1)}
        ranks[r] = {key: rank_mod(M, p) for key, M in diffs[r].items()}
        for (m, n), M in diffs[r].items():
            tgt = (m + r - 1, n - r)
            nxt = diffs[r].get(tgt)
            if M and nxt and any(any(row) for row in _mul(nxt, M, p)):
                raise PageInconsistency(f"d_{r}∘d_{r} != 0 at {(m, n)}")
        for (m, n), e in pages[r].items():
            out = ranks[r].get((m, n), 0)
            into = ranks[r].get((m - r + 1, n + r), 0)
            if pages[r + 1][(m, n)] != e - out - into:
                raise PageInconsistency(f"E^{r + 1} at {(m, n)} is not the homology of E^{r}")
    if last < stable and pages[last] != pages[last + 1]:
        raise NotStabilized(f"pages still change after r = {last}")
    einf = pages[max(last, stable) + 1]
    total = {k: homology_over_field(F.T, k, p) for k in range(top + 1)}
    shown = {r: pages[r] for r in range(1, last + 1)}
    ss = SpectralSequence(str(coeff), B.cap, shown, einf,
                          {r: diffs[r] for r in range(1, last + 1) if r in diffs}, total)
    if not ss.converges():
        raise NotStabilized("E∞ does not add up to H(Tot)")
    return ss


def _mul(A: list, B: list, p: int) -> list:
    inner = len(B)
    cols = len(B[0]) if B else 0
    out = [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]
    return [[x % p for x in row] for row in out] if p else out


def e2_oracle(c, cap: int, coeff="F2") -> dict:
    """``H_n(B, H_m(F) ⊗ k)`` for ``m + n <= cap - 1``, computed from fiber
    homology and coefficient homology only."""
    p = parse_coeff(coeff)
    top = cap - 1
    out = {}
    for m in range(top + 1):
        A = fiber_homology_module(c, m, cap)
        dims = field_coefficient_homology(A.category, A.tensor_field(p), cap, top - m)
        for n in range(top - m + 1):
            out[(m, n)] = dims[n]
    return out


def integral_e2(B: Bicomplex) -> dict:
    """``E²_{m,n}`` over Z: vertical homology of each column as presented
    groups, then homology of the complex induced by ``d^h``."""
    top = B.cap - 1
    cols = {n: B.column(n) for n in range(B.cap + 1)}
    out = {}
    with warnings.catch_warnings():
        # the last column only feeds the image of d^h; cycles suffice there
        warnings.simplefilter("ignore", DegreeAboveGuarantee)
        for m in range(top + 1):
            out.update(_integral_row(B, cols, m, top))
    return out


def _integral_row(B: Bicomplex, cols: dict, m: int, top: int) -> dict:
    out = {}
    groups, maps = [], {}
    nmax = top - m + 1
    for n in range(nmax + 1):
        if m > cols[n].top:
            groups.append(PresentedGroup(0))
            continue
        groups.append(PresentedGroup.with_orders(homology_data(cols[n], m).orders))
    for n in range(1, nmax + 1):
        rows = groups[n - 1].ngens
        if groups[n].ngens == 0 or rows == 0:
            maps[n] = [[0] * groups[n].ngens for _ in range(rows)]
            continue
        M, _, _ = induced_matrix(B.horizontal_map(n, cols), m)
        maps[n] = M
    Pc = PresentedComplex(groups, maps, guaranteed=nmax - 1)
    for n in range(top - m + 1):
        out[(m, n)] = Pc.homology(n)
    return out


def integral_e2_oracle(c, cap: int) -> dict:
    top = cap - 1
    out = {}
    for m in range(top + 1):
        A = fiber_homology_module(c, m, cap)
        hs = coefficient_homology(A.category, A, cap, upto=top - m)
        for n in range(top - m + 1):
            out[(m, n)] = hs[n]
    return out
