"""Free chain complexes over the integers and their homology.

Large complexes are first shrunk by Gaussian elimination on unit
entries of the boundary; the elimination records a chain homotopy
equivalence (projection ``f`` and inclusion ``g``) so that cycles and
chain maps can be carried to the small complex.  The small complex is
then handled by Smith normal form.

Homology of a complex built from a cap-``D`` truncation is only
guaranteed in degrees ``<= D - 1``; asking for more emits
DegreeAboveGuarantee.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Sequence

from .snf import matmul, smith


class DegreeAboveGuarantee(UserWarning):
    pass


# -- abelian groups ----------------------------------------------------------

@dataclass(frozen=True)
class AbelianGroup:
    """``Z^rank + Z/t_1 + ... + Z/t_k`` with ``t_1 | t_2 | ...``, all ``t_i > 1``."""
    rank: int = 0
    torsion: tuple = ()

    @classmethod
    def from_factors(cls, factors: Sequence[int], ngens: int) -> "AbelianGroup":
        """The cokernel of a relation matrix with the given nonzero invariant
        factors on ``ngens`` generators."""
        fs = [abs(d) for d in factors if d]
        return cls(ngens - len(fs), tuple(sorted(d for d in fs if d != 1)))

    def __str__(self):
        if self.rank == 0 and not self.torsion:
            return "0"
        parts = []
        if self.rank:
            parts.append("Z" if self.rank == 1 else f"Z^{self.rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts)

    @property
    def is_trivial(self) -> bool:
        return self.rank == 0 and not self.torsion

    def dim_tensor(self, p: int) -> int:
        """``dim (G ⊗ k)`` for ``k = F_p`` (``p = 0``: the rationals)."""
        if p == 0:
            return self.rank
        return self.rank + sum(1 for t in self.torsion if t % p == 0)


# -- chain complexes ---------------------------------------------------------

@dataclass
class ChainComplex:
    """Free complex ``C_0 <- C_1 <- ... <- C_top``.

    ``basis[n]`` lists labels; ``boundary[n]`` (``n >= 1``) is a list of
    sparse columns ``{row index: coefficient}`` for ``∂_n: C_n -> C_{n-1}``.
    ``guaranteed`` is the largest degree whose homology is trusted.
    """
    basis: list
    boundary: dict
    guaranteed: int | None = None
    name: str = ""

    def __post_init__(self):
        if self.guaranteed is None:
            self.guaranteed = self.top - 1

    @property
    def top(self) -> int:
        return len(self.basis) - 1

    def rank(self, n: int) -> int:
        return len(self.basis[n]) if 0 <= n <= self.top else 0

    def dense(self, n: int) -> list:
        """``∂_n`` as a dense ``rank(n-1) x rank(n)`` matrix."""
        rows, cols = self.rank(n - 1), self.rank(n)
        M = [[0] * cols for _ in range(rows)]
        if 1 <= n <= self.top:
            for j, col in enumerate(self.boundary[n]):
                for i, v in col.items():
                    M[i][j] = v
        return M

    def check_d_squared(self) -> bool:
        for n in range(2, self.top + 1):
            cols_prev = self.boundary[n - 1]
            for col in self.boundary[n]:
                acc: dict = {}
                for i, v in col.items():
                    for k, w in cols_prev[i].items():
                        acc[k] = acc.get(k, 0) + v * w
                if any(acc.values()):
                    return False
        return True

    @cached_property
    def reduced(self) -> "Reduction":
        return reduce_complex(self)


def normalized_chain_complex(X, upto: int | None = None) -> ChainComplex:
    """Normalized chains of a truncated simplicial set: nondegenerate
    simplices, ``∂ = Σ (-1)^i d_i`` with degenerate faces dropped."""
    cache = X.__dict__.setdefault("_chain_complex_cache", {})
    top = X.cap if upto is None else min(upto, X.cap)
    if top in cache:
        return cache[top]
    basis = [list(X.nondegenerate(n)) for n in range(top + 1)]
    boundary = {}
    for n in range(1, top + 1):
        idx = {x: k for k, x in enumerate(basis[n - 1])}
        cols = []
        for x in basis[n]:
            col: dict = {}
            for i in range(n + 1):
                k = idx.get(X.face(n, i, x))
                if k is not None:
                    col[k] = col.get(k, 0) + (-1 if i % 2 else 1)
            cols.append({k: v for k, v in col.items() if v})
        boundary[n] = cols
    C = ChainComplex(basis, boundary, guaranteed=X.cap - 1, name=getattr(X, "name", ""))
    cache[top] = C
    return C


# -- reduction ---------------------------------------------------------------

@dataclass
class _Elim:
    n: int
    a: int
    b: int
    phi: int
    gamma: dict   # column a without b, in C_{n-1}
    delta: dict   # row b without a, over C_n


@dataclass
class Reduction:
    """A smaller complex ``R`` with chain maps ``f: C -> R``, ``g: R -> C``."""
    source: ChainComplex
    alive: list          # alive[n]: original indices kept, in order
    matrices: dict       # dense ∂_n of R
    elims: list = field(default_factory=list)

    def project(self, n: int, chain: dict) -> list:
        """``f_n``: an original chain ``{index: coeff}`` to R-coordinates."""
        x = dict(chain)
        for e in self.elims:
            if e.n == n:
                x.pop(e.a, None)
            elif e.n - 1 == n:
                xb = x.pop(e.b, 0)
                if xb:
                    for r, c in e.gamma.items():
                        x[r] = x.get(r, 0) - xb * e.phi * c
        return [x.get(i, 0) for i in self.alive[n]]

    def include(self, n: int, coords: Sequence[int]) -> dict:
        """``g_n``: R-coordinates to an original chain."""
        x = {i: v for i, v in zip(self.alive[n], coords) if v}
        for e in reversed(self.elims):
            if e.n == n:
                s = sum(c * x.get(k, 0) for k, c in e.delta.items())
                if s:
                    x[e.a] = -e.phi * s
        return x

    def rank(self, n: int) -> int:
        return len(self.alive[n]) if 0 <= n < len(self.alive) else 0

    def matrix(self, n: int) -> list:
        if n in self.matrices:
            return self.matrices[n]
        return [[0] * self.rank(n) for _ in range(self.rank(n - 1))]


def reduce_complex(C: ChainComplex) -> Reduction:
    top = C.top
    cols = {n: {j: dict(col) for j, col in enumerate(C.boundary[n])} for n in range(1, top + 1)}
    rows = {}
    for n in range(1, top + 1):
        r: dict = {}
        for j, col in cols[n].items():
            for i in col:
                r.setdefault(i, set()).add(j)
        rows[n] = r
    alive = [set(range(C.rank(n))) for n in range(top + 1)]
    elims = []

    def remove_row(n, i):
        # drop basis element i of C_{n} from the rows of ∂_{n+1}
        if n + 1 in cols:
            for j in rows[n + 1].pop(i, ()):
                cols[n + 1][j].pop(i, None)

    def remove_col(n, j):
        # drop basis element j of C_{n-1} from the columns of ∂_{n-1}... i.e. column j of ∂_n
        if n in cols:
            col = cols[n].pop(j, {})
            for i in col:
                rows[n][i].discard(j)

    for n in range(top, 0, -1):
        colsn, rowsn = cols[n], rows[n]
        progress = True
        while progress:
            progress = False
            for a in sorted(colsn, key=lambda j: len(colsn[j])):
                col = colsn.get(a)
                if not col:
                    continue
                best = None
                for b, v in col.items():
                    if v in (1, -1):
                        w = len(rowsn[b])
                        if best is None or w < best[0]:
                            best = (w, b, v)
                if best is None:
                    continue
                _, b, phi = best
                gamma = {i: v for i, v in col.items() if i != b}
                delta = {j: colsn[j][b] for j in rowsn[b] if j != a}
                for j, dj in delta.items():
                    cj = colsn[j]
                    q = dj * phi
                    for i, v in col.items():
                        nv = cj.get(i, 0) - q * v
                        if nv:
                            if i not in cj:
                                rowsn[i].add(j)
                            cj[i] = nv
                        elif i in cj:
                            del cj[i]
                            rowsn[i].discard(j)
                # drop column a of ∂_n and row a of ∂_{n+1}
                remove_col(n, a)
                remove_row(n, a)
                # drop row b of ∂_n and column b of ∂_{n-1}
                rowsn.pop(b, None)
                remove_col(n - 1, b)
                alive[n].discard(a)
                alive[n - 1].discard(b)
                elims.append(_Elim(n, a, b, phi, gamma, delta))
                progress = True
    alive_sorted = [sorted(s) for s in alive]
    matrices = {}
    for n in range(1, top + 1):
        pos = {i: k for k, i in enumerate(alive_sorted[n - 1])}
        M = [[0] * len(alive_sorted[n]) for _ in alive_sorted[n - 1]]
        for k, j in enumerate(alive_sorted[n]):
            for i, v in cols[n].get(j, {}).items():
                M[pos[i]][k] = v
        matrices[n] = M
    return Reduction(C, alive_sorted, matrices, elims)


# -- integral homology -------------------------------------------------------

@dataclass
class HomologyData:
    """``H_n`` of the reduced complex with explicit generators.

    Generators: ``orders[k]`` is the order of generator ``k`` (``0`` for
    infinite order); ``coordinates(y)`` returns the coordinates of a cycle
    ``y`` given in reduced coordinates.
    """
    degree: int
    group: AbelianGroup
    orders: list
    generators: list          # reduced-coordinate cycles
    _U: list
    _r: int
    _tors_idx: list
    _V2inv: list
    _s: int

    def coordinates(self, y: Sequence[int]) -> list:
        z = [sum(u * v for u, v in zip(row, y)) for row in self._U]
        out = []
        for i, d in self._tors_idx:
            out.append(z[i] % d)
        rest = z[self._r:]
        w = [sum(a * b for a, b in zip(row, rest)) for row in self._V2inv]
        out += w[self._s:]
        return out


def _guard(C: ChainComplex, n: int, strict: bool = False):
    if n > C.guaranteed:
        msg = f"H_{n} is above the guaranteed range (degrees <= {C.guaranteed}) of {C.name or 'complex'}"
        if strict:
            raise ValueError(msg)
        warnings.warn(msg, DegreeAboveGuarantee, stacklevel=3)


def homology_data(C: ChainComplex, n: int) -> HomologyData:
    _guard(C, n)
    cache = C.__dict__.setdefault("_hdata", {})
    if n in cache:
        return cache[n]
    R = C.reduced
    k = R.rank(n)
    below = R.rank(n - 1) if n >= 1 else 0
    Mn = R.matrix(n) if n >= 1 else []
    Mn1 = R.matrix(n + 1) if n + 1 <= C.top else [[] for _ in range(k)]
    cols_next = len(Mn1[0]) if Mn1 and Mn1[0] else (R.rank(n + 1) if n + 1 <= C.top else 0)
    S = smith(Mn1, cols_next) if k else None
    if k == 0:
        data = HomologyData(n, AbelianGroup(), [], [], [], 0, [], [], 0)
        cache[n] = data
        return data
    diag = S.diagonal
    r = sum(1 for d in diag if d)
    tors_idx = [(i, diag[i]) for i in range(r) if diag[i] > 1]
    # kernel of ∂_n restricted to the complement of the image directions
    W = matmul(Mn, [row[r:] for row in S.Uinv]) if n >= 1 and below else []
    ncols = k - r
    if W and ncols:
        S2 = smith(W, ncols)
        s = S2.rank
        V2, V2inv = S2.V, S2.Vinv
    else:
        s = 0
        V2 = [[int(i == j) for j in range(ncols)] for i in range(ncols)]
        V2inv = V2
    gens, orders = [], []
    for i, d in tors_idx:
        gens.append([row[i] for row in S.Uinv])
        orders.append(d)
    for j in range(s, ncols):
        z = [0] * k
        for t in range(ncols):
            if V2[t][j]:
                z[r + t] = V2[t][j]
        gens.append([sum(S.Uinv[a][b] * z[b] for b in range(k)) for a in range(k)])
        orders.append(0)
    group = AbelianGroup(ncols - s, tuple(d for _, d in tors_idx))
    data = HomologyData(n, group, orders, gens, S.U, r, tors_idx, V2inv, s)
    cache[n] = data
    return data


def homology(C: ChainComplex, n: int) -> AbelianGroup:
    return homology_data(C, n).group


def homology_groups(C: ChainComplex, upto: int | None = None) -> list:
    top = C.guaranteed if upto is None else upto
    return [homology(C, n) for n in range(top + 1)]


def simplicial_homology(X, n: int) -> AbelianGroup:
    return homology(normalized_chain_complex(X), n)


# -- fields ------------------------------------------------------------------

def _field(p: int):
    if p == 0:
        return Fraction, (lambda a: Fraction(a)), (lambda a: 1 / a)
    return int, (lambda a: a % p), (lambda a: pow(a, p - 2, p))


def row_reduce(vectors: list, p: int) -> list:
    """Echelon basis of the span of ``vectors`` over ``F_p`` (``p = 0``: Q)."""
    _, conv, inv = _field(p)
    mod = (lambda a: a % p) if p else (lambda a: a)
    basis: list = []    # list of (pivot, vector)
    for v in vectors:
        w = [conv(a) for a in v]
        for piv, b in basis:
            if w[piv]:
                q = w[piv]
                w = [mod(x - q * y) for x, y in zip(w, b)]
        piv = next((i for i, x in enumerate(w) if x), None)
        if piv is None:
            continue
        q = inv(w[piv])
        w = [mod(x * q) for x in w]
        new = []
        for bp, b in basis:
            if b[piv]:
                c = b[piv]
                b = [mod(x - c * y) for x, y in zip(b, w)]
            new.append((bp, b))
        new.append((piv, w))
        basis = new
    return [b for _, b in basis]


def solve_over_field(vectors: list, v: list, p: int):
    """Coefficients ``c`` with ``Σ c_i vectors[i] = v`` over ``F_p``/Q, or None."""
    _, conv, inv = _field(p)
    mod = (lambda a: a % p) if p else (lambda a: a)
    k = len(vectors)
    n = len(v)
    rows = [[conv(vectors[j][i]) for j in range(k)] + [conv(v[i])] for i in range(n)]
    piv_cols, r = [], 0
    for c in range(k):
        piv = next((i for i in range(r, n) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        q = inv(rows[r][c])
        rows[r] = [mod(x * q) for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [mod(x - f * y) for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(rows[i][k] for i in range(r, n)):
        return None
    out = [conv(0)] * k
    for i, c in enumerate(piv_cols):
        out[c] = rows[i][k]
    return out


def rank_mod(M: list, p: int) -> int:
    return len(row_reduce(M, p))


def kernel_basis(M: list, ncols: int, p: int) -> list:
    """Basis of ``{x : M x = 0}`` over ``F_p`` or Q."""
    _, conv, inv = _field(p)
    mod = (lambda a: a % p) if p else (lambda a: a)
    rows = [[conv(a) for a in r] for r in M]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        q = inv(rows[r][c])
        rows[r] = [mod(x * q) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [mod(x - f * y) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [conv(0)] * ncols
        v[fc] = conv(1)
        for i, pc in enumerate(pivots):
            v[pc] = mod(-rows[i][fc])
        basis.append(v)
    return basis


def homology_over_field(C: ChainComplex, n: int, p: int) -> int:
    """``dim H_n(C ⊗ F_p)`` (``p = 0``: rational Betti number)."""
    _guard(C, n)
    R = C.reduced
    k = R.rank(n)
    r_out = rank_mod(R.matrix(n), p) if n >= 1 else 0
    r_in = rank_mod(R.matrix(n + 1), p) if n + 1 <= C.top else 0
    return k - r_out - r_in


def parse_coeff(coeff) -> int | None:
    """``None``/``'Z'`` -> None; ``'Q'`` -> 0; ``'F2'``/``2`` -> 2."""
    if coeff is None or coeff == "Z":
        return None
    if coeff == "Q":
        return 0
    p = None
    if isinstance(coeff, int):
        p = coeff
    elif isinstance(coeff, str) and coeff.startswith("F") and coeff[1:].isdigit():
        p = int(coeff[1:])
    if p is None or p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"unknown coefficients {coeff!r} (use Z, Q or F<prime>)")
    return p


# -- chain maps and induced maps ---------------------------------------------

@dataclass
class ChainMap:
    """``func(n, i)`` sends basis element ``i`` of ``dom`` to a chain of ``cod``."""
    dom: ChainComplex
    cod: ChainComplex
    func: Callable

    def apply(self, n: int, chain: dict) -> dict:
        out: dict = {}
        for i, v in chain.items():
            for j, w in self.func(n, i).items():
                out[j] = out.get(j, 0) + v * w
        return {j: w for j, w in out.items() if w}

    def check(self) -> bool:
        top = min(self.dom.top, self.cod.top)
        for n in range(1, top + 1):
            for i, col in enumerate(self.dom.boundary[n]):
                lhs = self.apply(n - 1, col)
                rhs: dict = {}
                for j, w in self.func(n, i).items():
                    for k, u in self.cod.boundary[n][j].items():
                        rhs[k] = rhs.get(k, 0) + w * u
                if {a: b for a, b in rhs.items() if b} != lhs:
                    return False
        return True


def simplicial_chain_map(f, C: ChainComplex | None = None, D: ChainComplex | None = None) -> ChainMap:
    """Chain map of normalized complexes induced by a SimplicialMap."""
    C = C or normalized_chain_complex(f.dom)
    D = D or normalized_chain_complex(f.cod)
    idx = [{x: k for k, x in enumerate(D.basis[n])} for n in range(D.top + 1)]

    def func(n, i):
        if n > D.top:
            return {}
        k = idx[n].get(f(n, C.basis[n][i]))
        return {} if k is None else {k: 1}

    return ChainMap(C, D, func)


def induced_matrix(phi: ChainMap, n: int) -> tuple:
    """Matrix of ``H_n(phi)`` in the generators of ``homology_data``;
    returns ``(matrix, source data, target data)``."""
    hs = homology_data(phi.dom, n)
    ht = homology_data(phi.cod, n)
    Rs, Rt = phi.dom.reduced, phi.cod.reduced
    cols = []
    for gen in hs.generators:
        chain = Rs.include(n, gen)
        img = phi.apply(n, chain)
        y = Rt.project(n, img)
        cols.append(ht.coordinates(y))
    rows = len(ht.orders)
    M = [[cols[j][i] for j in range(len(cols))] for i in range(rows)]
    return M, hs, ht


def is_iso_on_groups(M: list, hs: HomologyData, ht: HomologyData) -> bool:
    """Equal invariants and surjective on ``Z^k / (torsion relations)``."""
    if hs.group != ht.group:
        return False
    rows = len(ht.orders)
    if rows == 0:
        return True
    rel_cols = [d for d in ht.orders]
    aug = [list(M[i]) + [rel_cols[i] if j == i else 0 for j in range(rows)] for i in range(rows)]
    diag = smith(aug).diagonal
    return len(diag) == rows and all(d == 1 for d in diag)


def induced_map_is_iso(f, n: int, coeff=None) -> bool:
    """Does the simplicial (or chain) map ``f`` induce an isomorphism on
    ``H_n``?  Integral by default; ``coeff`` in ``'Q'``, ``'F2'``, ...
    selects a field."""
    phi = f if isinstance(f, ChainMap) else simplicial_chain_map(f)
    p = parse_coeff(coeff)
    if p is None:
        M, hs, ht = induced_matrix(phi, n)
        return is_iso_on_groups(M, hs, ht)
    return _field_iso(phi, n, p)


def _field_iso(phi: ChainMap, n: int, p: int) -> bool:
    C, D = phi.dom, phi.cod
    dc, dd = homology_over_field(C, n, p), homology_over_field(D, n, p)
    if dc != dd:
        return False
    if dc == 0:
        return True
    Rc, Rd = C.reduced, D.reduced
    Z = kernel_basis(Rc.matrix(n), Rc.rank(n), p) if n >= 1 else \
        [[int(i == j) for j in range(Rc.rank(0))] for i in range(Rc.rank(0))]
    images = []
    for z in Z:
        if p == 0:
            den = 1
            for a in z:
                den = den * a.denominator // _gcd(den, a.denominator)
            zi = [int(a * den) for a in z]
        else:
            zi = [int(a) for a in z]
        chain = Rc.include(n, zi)
        images.append(Rd.project(n, phi.apply(n, chain)))
    B = [list(col) for col in zip(*Rd.matrix(n + 1))] if n + 1 <= D.top and Rd.rank(n + 1) else []
    rb = rank_mod(B, p)
    return rank_mod(B + images, p) - rb == dd


def _field_homology_basis(R: "Reduction", n: int, top: int, p: int) -> tuple:
    """Cycle representatives of a basis of ``H_n(R ⊗ k)`` and an echelon
    basis of the boundaries, both in R-coordinates."""
    Z = kernel_basis(R.matrix(n), R.rank(n), p) if n >= 1 else \
        [[int(i == j) for j in range(R.rank(0))] for i in range(R.rank(0))]
    B = row_reduce([list(col) for col in zip(*R.matrix(n + 1))], p) \
        if n + 1 <= top and R.rank(n + 1) else []
    cur, reps = list(B), []
    for z in Z:
        ext = row_reduce(cur + [z], p)
        if len(ext) > len(cur):
            reps.append(z)
            cur = ext
    return reps, B


def _integral(z: list, p: int) -> list:
    if p:
        return [int(a) for a in z]
    den = 1
    for a in z:
        den = den * a.denominator // _gcd(den, a.denominator)
    return [int(a * den) for a in z]


def induced_map_on_homology(f, n: int, coefficients=None) -> list:
    """Matrix of ``H_n(f)``.

    Over Z the columns are coordinates in the generators of
    ``homology_data`` (torsion coordinates are residues).  Over a field
    the bases are cycle representatives chosen greedily on the reduced
    complexes; the matrix is therefore basis dependent but its rank is not.
    """
    phi = f if isinstance(f, ChainMap) else simplicial_chain_map(f)
    p = parse_coeff(coefficients)
    if p is None:
        return induced_matrix(phi, n)[0]
    _guard(phi.dom, n)
    _guard(phi.cod, n)
    Rc, Rd = phi.dom.reduced, phi.cod.reduced
    src, _ = _field_homology_basis(Rc, n, phi.dom.top, p)
    tgt, bd = _field_homology_basis(Rd, n, phi.cod.top, p)
    cols = []
    for z in src:
        zi = _integral(z, p)
        scale = 1
        if p == 0:
            # z was cleared of denominators; undo the scaling on the image
            nz = next(i for i, a in enumerate(z) if a)
            scale = Fraction(z[nz]) / zi[nz]
        y = Rd.project(n, phi.apply(n, Rc.include(n, zi)))
        c = solve_over_field(tgt + bd, y, p)
        cols.append([(a * scale) if p == 0 else a for a in c[:len(tgt)]])
    return [[col[i] for col in cols] for i in range(len(tgt))]


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def simplicial_map_homology_iso(f, upto: int, coeff=None) -> bool:
    phi = simplicial_chain_map(f)
    return all(induced_map_is_iso(phi, n, coeff) for n in range(upto + 1))
