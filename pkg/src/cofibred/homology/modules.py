"""Modules over finite categories and homology with coefficients.

A module ``A: C -> Ab`` assigns a finitely presented group to each object
and an integer matrix (on generators) to each arrow.  ``H_*(C, A)`` is
computed from the normalized complex ``⊕_{c_0 -> ... -> c_n} A(c_0)`` whose
``d_0`` uses ``A(c_0 -> c_1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from ..category import FiniteCategory
from ..fibration import Cleavage, base_change
from ..category import fiber
from ..simplicial import functor_nerve_map, nerve
from .chains import (
    AbelianGroup,
    _guard,
    homology_data,
    induced_matrix,
    normalized_chain_complex,
    parse_coeff,
    rank_mod,
    simplicial_chain_map,
)
from .snf import identity, matmul, smith


class FunctorialityFailure(ValueError):
    pass


@dataclass(frozen=True)
class PresentedGroup:
    """``Z^ngens / span(relations)``; each relation is a length-``ngens`` vector."""
    ngens: int
    relations: tuple = ()

    @classmethod
    def of(cls, group: AbelianGroup) -> "PresentedGroup":
        """Generators: the free ones, then one per torsion factor."""
        n = group.rank + len(group.torsion)
        rels = []
        for k, t in enumerate(group.torsion):
            v = [0] * n
            v[group.rank + k] = t
            rels.append(tuple(v))
        return cls(n, tuple(rels))

    @classmethod
    def with_orders(cls, orders) -> "PresentedGroup":
        """One generator per entry; order ``0`` means infinite."""
        n = len(orders)
        rels = []
        for k, d in enumerate(orders):
            if d:
                v = [0] * n
                v[k] = d
                rels.append(tuple(v))
        return cls(n, tuple(rels))

    def group(self) -> AbelianGroup:
        if not self.relations:
            return AbelianGroup(self.ngens)
        M = [list(r) for r in zip(*self.relations)]
        return AbelianGroup.from_factors(smith(M).diagonal, self.ngens)

    def contains(self, v) -> bool:
        """Is ``v`` in the span of the relations (i.e. zero in the group)?"""
        if not any(v):
            return True
        if not self.relations:
            return False
        return _solve(_columns(self.relations, self.ngens), list(v)) is not None


def _columns(vectors, n) -> list:
    """Matrix ``n x len(vectors)`` with the vectors as columns."""
    return [[v[i] for v in vectors] for i in range(n)]


def _solve(M: list, v: list):
    """An integer solution of ``M c = v`` or None."""
    rows = len(M)
    cols = len(M[0]) if rows else 0
    S = smith(M, cols)
    y = [sum(a * b for a, b in zip(row, v)) for row in S.U]
    w = [0] * cols
    diag = S.diagonal
    for i in range(rows):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if y[i]:
                return None
        else:
            if y[i] % d:
                return None
            w[i] = y[i] // d
    return [sum(S.V[i][j] * w[j] for j in range(cols)) for i in range(cols)]


def lattice_basis(vectors: list, n: int) -> list:
    """A basis of the subgroup of ``Z^n`` spanned by ``vectors``."""
    if not vectors:
        return []
    M = _columns(vectors, n)
    S = smith(M, len(vectors))
    out = []
    for i, d in enumerate(S.diagonal):
        if d:
            out.append([S.Uinv[r][i] * d for r in range(n)])
    return out


def integer_kernel(M: list, ncols: int) -> list:
    """A basis of ``{x in Z^ncols : M x = 0}``."""
    if not M:
        return [[int(i == j) for i in range(ncols)] for j in range(ncols)]
    S = smith(M, ncols)
    r = S.rank
    return [[S.V[i][j] for i in range(ncols)] for j in range(r, ncols)]


@dataclass
class PresentedComplex:
    """``groups[n]`` presented groups, ``maps[n]`` integer matrices on generators
    ``groups[n] -> groups[n-1]`` (``n >= 1``)."""
    groups: list
    maps: dict
    guaranteed: int | None = None
    name: str = ""

    def __post_init__(self):
        if self.guaranteed is None:
            self.guaranteed = len(self.groups) - 2

    @property
    def top(self) -> int:
        return len(self.groups) - 1

    def check(self) -> None:
        for n in range(1, self.top + 1):
            G, H = self.groups[n], self.groups[n - 1]
            d = self.maps[n]
            for rel in G.relations:
                img = [sum(a * b for a, b in zip(row, rel)) for row in d]
                if not H.contains(img):
                    raise ValueError(f"d_{n} does not preserve relations")
        for n in range(2, self.top + 1):
            dd = matmul(self.maps[n - 1], self.maps[n]) if self.groups[n - 1].ngens else []
            for j in range(self.groups[n].ngens):
                col = [row[j] for row in dd] if dd else [0] * self.groups[n - 2].ngens
                if not self.groups[n - 2].contains(col):
                    raise ValueError(f"d_{n - 1} d_{n} is not zero")

    def homology(self, n: int) -> AbelianGroup:
        """``H_n = Z / (B + R)`` with ``Z = {x : d x ∈ R_{n-1}}``."""
        _guard(self, n)
        G = self.groups[n]
        g = G.ngens
        if g == 0:
            return AbelianGroup()
        if n >= 1 and self.groups[n - 1].ngens:
            Hprev = self.groups[n - 1]
            d = self.maps[n]
            rel = _columns(Hprev.relations, Hprev.ngens) if Hprev.relations else [[] for _ in range(Hprev.ngens)]
            aug = [list(d[i]) + list(rel[i]) for i in range(Hprev.ngens)]
            ker = integer_kernel(aug, g + len(Hprev.relations))
            Z = lattice_basis([k[:g] for k in ker], g)
        else:
            Z = [[int(i == j) for i in range(g)] for j in range(g)]
        if not Z:
            return AbelianGroup()
        Zm = _columns(Z, g)
        rels = [list(r) for r in G.relations]
        if n + 1 <= self.top:
            d1 = self.maps[n + 1]
            for j in range(self.groups[n + 1].ngens):
                rels.append([d1[i][j] for i in range(g)])
        coords = []
        for v in rels:
            c = _solve(Zm, v)
            if c is None:
                raise ValueError("boundary not contained in cycles")
            coords.append(c)
        z = len(Z)
        if not coords:
            return AbelianGroup(z)
        return AbelianGroup.from_factors(smith(_columns(coords, z), len(coords)).diagonal, z)

    def dim_over_field(self, n: int, p: int) -> int:
        """``dim H_n(C ⊗ k)`` for a complex of free groups over ``F_p``/Q."""
        _guard(self, n)
        g = self.groups[n].ngens
        r_out = rank_mod(self.maps[n], p) if n >= 1 and self.groups[n - 1].ngens else 0
        r_in = rank_mod(self.maps[n + 1], p) if n + 1 <= self.top and g else 0
        return g - r_out - r_in


@dataclass
class ModuleOverCategory:
    """``A: C -> Ab``: ``values[x]`` a PresentedGroup, ``maps[f]`` a matrix
    ``ngens(dst) x ngens(src)``.  Identity matrices may be omitted."""
    category: FiniteCategory
    values: Mapping
    maps: Mapping
    name: str = ""

    def __post_init__(self):
        maps = dict(self.maps)
        for x in self.category.objects:
            maps.setdefault(self.category.identity[x], identity(self.values[x].ngens))
        self.maps = maps

    def equal_maps(self, M1, M2, target: PresentedGroup) -> bool:
        ncols = len(M1[0]) if M1 else 0
        for j in range(ncols):
            diff = [M1[i][j] - M2[i][j] for i in range(target.ngens)]
            if not target.contains(diff):
                return False
        return True

    def check(self) -> None:
        C = self.category
        for f in C.arrows:
            M = self.maps[f]
            src, dst = self.values[C.src[f]], self.values[C.dst[f]]
            if len(M) != dst.ngens or any(len(r) != src.ngens for r in M):
                raise FunctorialityFailure(f"A({f!r}) has the wrong shape")
            for rel in src.relations:
                img = [sum(a * b for a, b in zip(row, rel)) for row in M]
                if not dst.contains(img):
                    raise FunctorialityFailure(f"A({f!r}) is not well defined on relations")
        for x in C.objects:
            if not self.equal_maps(self.maps[C.identity[x]], identity(self.values[x].ngens), self.values[x]):
                raise FunctorialityFailure(f"A(id_{x!r}) is not the identity")
        for g, f in C.composable_pairs():
            lhs = self.maps[C.comp[(g, f)]]
            target = self.values[C.dst[g]]
            mid = self.values[C.dst[f]].ngens
            nsrc = self.values[C.src[f]].ngens
            A, Bm = self.maps[g], self.maps[f]
            rhs = [[sum(A[i][k] * Bm[k][j] for k in range(mid)) for j in range(nsrc)]
                   for i in range(target.ngens)]
            if target.ngens and nsrc and not self.equal_maps(lhs, rhs, target):
                raise FunctorialityFailure(f"A({g!r}∘{f!r}) != A({g!r})A({f!r})")

    def tensor_field(self, p: int) -> "FieldModule":
        """``A ⊗ F_p`` (``p = 0``: ``A ⊗ Q``)."""
        keep = {}
        for x, G in self.values.items():
            orders = _generator_orders(G)
            keep[x] = [i for i, d in enumerate(orders)
                       if d == 0 or (p and d % p == 0)]
        conv = (lambda a: Fraction(a)) if p == 0 else (lambda a: a % p)
        maps = {}
        for f, M in self.maps.items():
            s, t = self.category.src[f], self.category.dst[f]
            maps[f] = [[conv(M[i][j]) for j in keep[s]] for i in keep[t]]
        return FieldModule(self.category, {x: len(v) for x, v in keep.items()}, maps, p)


def _generator_orders(G: PresentedGroup) -> list:
    """Orders of generators for presentations with diagonal relations."""
    orders = [0] * G.ngens
    for rel in G.relations:
        nz = [(i, v) for i, v in enumerate(rel) if v]
        if len(nz) != 1:
            raise ValueError("tensor_field needs a diagonal presentation")
        i, v = nz[0]
        orders[i] = abs(v)
    return orders


@dataclass
class FieldModule:
    category: FiniteCategory
    dims: Mapping
    maps: Mapping
    p: int


def _coefficient_blocks(C: FiniteCategory, ngens, cap: int):
    NC = nerve(C, cap)
    basis = [list(NC.nondegenerate(n)) for n in range(cap + 1)]
    offsets = []
    for n in range(cap + 1):
        off, acc = {}, 0
        for ch in basis[n]:
            off[ch] = acc
            acc += ngens(ch.objects[0])
        offsets.append((off, acc))
    return NC, basis, offsets


def coefficient_complex(C: FiniteCategory, A: ModuleOverCategory, cap: int = 4) -> PresentedComplex:
    NC, basis, offsets = _coefficient_blocks(C, lambda x: A.values[x].ngens, cap)
    groups = []
    for n in range(cap + 1):
        off, total = offsets[n]
        rels = []
        for ch in basis[n]:
            G = A.values[ch.objects[0]]
            for r in G.relations:
                v = [0] * total
                v[off[ch]:off[ch] + G.ngens] = r
                rels.append(tuple(v))
        groups.append(PresentedGroup(total, tuple(rels)))
    maps = {}
    for n in range(1, cap + 1):
        off, total = offsets[n]
        off1, total1 = offsets[n - 1]
        M = [[0] * total for _ in range(total1)]
        for ch in basis[n]:
            g = A.values[ch.objects[0]].ngens
            for i in range(n + 1):
                face = NC.face(n, i, ch)
                if face not in off1:
                    continue
                sign = -1 if i % 2 else 1
                o, o1 = off[ch], off1[face]
                if i == 0:
                    F = A.maps[ch.arrows[0]]
                    for r in range(len(F)):
                        for c in range(g):
                            if F[r][c]:
                                M[o1 + r][o + c] += sign * F[r][c]
                else:
                    for c in range(g):
                        M[o1 + c][o + c] += sign
        maps[n] = M
    return PresentedComplex(groups, maps, guaranteed=cap - 1, name=f"C({C.name}, {A.name})")


def coefficient_homology(C: FiniteCategory, A: ModuleOverCategory, cap: int = 4,
                         coeff=None, upto: int | None = None) -> list:
    """``H_n(C, A)`` for ``n <= upto`` (default ``cap - 1``).  Integral
    groups, or dimensions of ``H_n(C, A ⊗ k)`` for a field ``k``."""
    upto = cap - 1 if upto is None else upto
    p = parse_coeff(coeff)
    if p is None:
        K = coefficient_complex(C, A, cap)
        return [K.homology(n) for n in range(upto + 1)]
    Fm = A.tensor_field(p)
    return field_coefficient_homology(C, Fm, cap, upto)


def field_coefficient_homology(C: FiniteCategory, A: FieldModule, cap: int, upto: int) -> list:
    NC, basis, offsets = _coefficient_blocks(C, lambda x: A.dims[x], cap)
    p = A.p
    mats = {}
    for n in range(1, cap + 1):
        off, total = offsets[n]
        off1, total1 = offsets[n - 1]
        M = [[0] * total for _ in range(total1)]
        for ch in basis[n]:
            g = A.dims[ch.objects[0]]
            for i in range(n + 1):
                face = NC.face(n, i, ch)
                if face not in off1:
                    continue
                sign = -1 if i % 2 else 1
                o, o1 = off[ch], off1[face]
                if i == 0:
                    F = A.maps[ch.arrows[0]]
                    for r in range(len(F)):
                        for c in range(g):
                            if F[r][c]:
                                M[o1 + r][o + c] += sign * F[r][c]
                else:
                    for c in range(g):
                        M[o1 + c][o + c] += sign
        mats[n] = M
    out = []
    for n in range(upto + 1):
        total = offsets[n][1]
        r_out = rank_mod(mats[n], p) if n >= 1 and offsets[n - 1][1] else 0
        r_in = rank_mod(mats[n + 1], p) if n + 1 <= cap and total else 0
        out.append(total - r_out - r_in)
    return out


def constant_module(C: FiniteCategory, G: AbelianGroup | None = None) -> ModuleOverCategory:
    G = G or AbelianGroup(1)
    P = PresentedGroup.of(G)
    return ModuleOverCategory(C, {x: P for x in C.objects},
                              {f: identity(P.ngens) for f in C.arrows}, name=str(G))


def fiber_homology_module(c: Cleavage, m: int, cap: int | None = None,
                          check: bool = True) -> ModuleOverCategory:
    """``H_m(F)``: ``b -> H_m(N E_b)``, ``φ -> H_m(φ_*)`` through the
    base-change functors of the cleavage."""
    p = c.functor
    B = p.cod
    cap = cap if cap is not None else m + 1
    nerves, data = {}, {}
    for b in B.objects:
        Fb, _ = fiber(p, b)
        nerves[b] = nerve(Fb, cap)
        data[b] = homology_data(normalized_chain_complex(nerves[b]), m)
    values = {b: PresentedGroup.with_orders(data[b].orders) for b in B.objects}
    maps = {}
    for phi in B.arrows:
        f = functor_nerve_map(base_change(c, phi), nerves[B.src[phi]], nerves[B.dst[phi]])
        M, _, _ = induced_matrix(simplicial_chain_map(f), m)
        if not M:
            M = [[] for _ in range(values[B.dst[phi]].ngens)]
        maps[phi] = M
    A = ModuleOverCategory(B, values, maps, name=f"H_{m}(F)")
    if check:
        A.check()
    return A
