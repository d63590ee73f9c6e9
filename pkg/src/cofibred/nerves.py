"""Fibred and cleaved nerves of a fibration and the maps relating them to
the ordinary nerve of the total category.

An ``(m, n)``-simplex is a grid ``e_{ij}`` with rows ``i = 0..m`` and
columns ``j = 0..n``.  Vertical arrows ``e_{ij} -> e_{i+1,j}`` lie over
identities; horizontal arrows ``e_{ij} -> e_{i,j+1}`` are cartesian and lie
over the base chain ``b_0 -> ... -> b_n``.  The base is the image of any
row, the mast is column ``0`` (a chain in the fiber over ``b_0``).

Vertical operators change ``m`` (rows), horizontal ones change ``n``
(columns).
"""

from __future__ import annotations

from typing import NamedTuple

from .category import FiniteCategory, Functor, fiber
from .fibration import Cleavage, FibrationCertificate, certify_fibration
from .simplicial import (
    BisimplicialMap,
    BisimplicialSet,
    Chain,
    SimplicialMap,
    SimplicialSet,
    codiagonal,
    diagonal,
    hc,
    nerve,
    nerve_diagram,
    tcp,
    theta,
    ConstantSimplicialGroup,
    apply_functor,
    group_nerve_twisting,
)


class Grid(NamedTuple):
    """``objs[i][j]``, ``vert[i][j]: e_ij -> e_{i+1,j}``, ``horiz[i][j]: e_ij -> e_{i,j+1}``."""
    objs: tuple
    vert: tuple
    horiz: tuple

    @property
    def m(self) -> int:
        return len(self.objs) - 1

    @property
    def n(self) -> int:
        return len(self.objs[0]) - 1


def grid_arrow(E: FiniteCategory, s: Grid, a, b):
    """The image of ``(i,j) -> (i2,j2)``: along row ``i`` first, then down column ``j2``."""
    (i, j), (i2, j2) = a, b
    f = E.identity[s.objs[i][j]]
    for k in range(j, j2):
        f = E.comp[(s.horiz[i][k], f)]
    for k in range(i, i2):
        f = E.comp[(s.vert[k][j2], f)]
    return f


def restrict(E: FiniteCategory, s: Grid, alpha, beta) -> Grid:
    """Precompose with monotone ``alpha: [m'] -> [m]`` (rows) and
    ``beta: [n'] -> [n]`` (columns)."""
    rows, cols = len(alpha), len(beta)
    objs = tuple(tuple(s.objs[alpha[i]][beta[j]] for j in range(cols)) for i in range(rows))
    vert = tuple(tuple(grid_arrow(E, s, (alpha[i], beta[j]), (alpha[i + 1], beta[j]))
                       for j in range(cols)) for i in range(rows - 1))
    horiz = tuple(tuple(grid_arrow(E, s, (alpha[i], beta[j]), (alpha[i], beta[j + 1]))
                        for j in range(cols - 1)) for i in range(rows))
    return Grid(objs, vert, horiz)


def _delta(n, i):
    return tuple(k for k in range(n + 1) if k != i)


def _sigma(n, j):
    return tuple(k if k <= j else k - 1 for k in range(n + 2))


def base(p: Functor, s: Grid) -> Chain:
    return Chain(tuple(p.ob_map[x] for x in s.objs[0]), tuple(p.fl_map[f] for f in s.horiz[0]))


def mast(s: Grid) -> Chain:
    return Chain(tuple(row[0] for row in s.objs), tuple(row[0] for row in s.vert))


def _column_from_chain(ch: Chain):
    return [(x,) for x in ch.objects], [(f,) for f in ch.arrows]


def _grid_operators(E: FiniteCategory):
    ident = tuple(range(64))

    comp = E.comp

    def hface(m, n, i, s):
        objs, vert, horiz = s
        objs = tuple(row[:i] + row[i + 1:] for row in objs)
        vert = tuple(row[:i] + row[i + 1:] for row in vert)
        if i == 0:
            horiz = tuple(row[1:] for row in horiz)
        elif i == n:
            horiz = tuple(row[:-1] for row in horiz)
        else:
            horiz = tuple(row[:i - 1] + (comp[(row[i], row[i - 1])],) + row[i + 1:]
                          for row in horiz)
        return Grid(objs, vert, horiz)

    def vface(m, n, i, s):
        objs, vert, horiz = s
        objs = objs[:i] + objs[i + 1:]
        horiz = horiz[:i] + horiz[i + 1:]
        if i == 0:
            vert = vert[1:]
        elif i == m:
            vert = vert[:-1]
        else:
            merged = tuple(comp[(b, a)] for a, b in zip(vert[i - 1], vert[i]))
            vert = vert[:i - 1] + (merged,) + vert[i + 1:]
        return Grid(objs, vert, horiz)

    def hdeg(m, n, j, s):
        return restrict(E, s, ident[:m + 1], _sigma(n, j))

    def vdeg(m, n, j, s):
        return restrict(E, s, _sigma(m, j), ident[:n + 1])

    return hface, vface, hdeg, vdeg


def _extend(cert: FibrationCertificate, s: Grid, phi, choices):
    """Add a column over ``phi`` using the given cartesian arrow per row;
    verticals are forced by factorisation over the identity."""
    E = cert.total
    m = s.m
    hs = choices
    new_objs = [E.dst[h] for h in hs]
    new_vert = []
    for i in range(m):
        g = E.comp[(hs[i + 1], s.vert[i][-1])]
        new_vert.append(cert.factor(hs[i], g))
    objs = tuple(row + (new_objs[i],) for i, row in enumerate(s.objs))
    vert = tuple(row + (new_vert[i],) for i, row in enumerate(s.vert))
    horiz = tuple(row + (hs[i],) for i, row in enumerate(s.horiz))
    return Grid(objs, vert, horiz)


def _product_choices(options):
    if not options:
        yield ()
        return
    head, rest = options[0], options[1:]
    for x in head:
        for tail in _product_choices(rest):
            yield (x,) + tail


def _horizontal_composites_ok(E: FiniteCategory, s: Grid, allowed) -> bool:
    for i in range(s.m + 1):
        for j in range(s.n + 1):
            for k in range(j + 1, s.n + 1):
                if grid_arrow(E, s, (i, j), (i, k)) not in allowed:
                    return False
    return True


class FibredNerve(BisimplicialSet):
    """``N_f E`` truncated at ``cap`` in both directions."""

    def __init__(self, cert: FibrationCertificate, levels, cap: int, name: str, cleavage=None):
        E = cert.total
        ids = frozenset(E.identity.values())

        def hdeg_at(s, j):
            return all(row[j] in ids for row in s.horiz)

        def vdeg_at(s, j):
            return all(f in ids for f in s.vert[j])

        super().__init__(levels, *_grid_operators(E), cap=cap, name=name,
                         hdeg_at=hdeg_at, vdeg_at=vdeg_at)
        self.cert = cert
        self.cleavage = cleavage

    @property
    def functor(self) -> Functor:
        return self.cert.functor

    def base(self, s: Grid) -> Chain:
        return base(self.cert.functor, s)

    def mast(self, s: Grid) -> Chain:
        return mast(s)


def _fiber_nerves(p: Functor, cap: int) -> dict:
    return {b: nerve(fiber(p, b)[0], cap) for b in p.cod.objects}


def fibred_nerve(cert: FibrationCertificate | Functor, cap: int = 4) -> FibredNerve:
    """Enumerate grids by base, mast and a cartesian lift per row and column."""
    if isinstance(cert, Functor):
        cert = certify_fibration(cert)
    p, E = cert.functor, cert.total
    NB = nerve(p.cod, cap)
    fibers = _fiber_nerves(p, cap)
    cart = cert.cartesian

    def level(m, n):
        out = []
        for bbar in NB.levels[n]:
            for abar in fibers[bbar.objects[0]].levels[m]:
                objs, vert = _column_from_chain(abar)
                start = Grid(tuple(objs), tuple(vert), tuple(() for _ in objs))
                frontier = [start]
                for phi in bbar.arrows:
                    nxt = []
                    for s in frontier:
                        options = [cert.lifts[(row[-1], phi)] for row in s.objs]
                        for ch in _product_choices(options):
                            nxt.append(_extend(cert, s, phi, ch))
                    frontier = nxt
                if not cert.is_fibration:
                    frontier = [s for s in frontier if _horizontal_composites_ok(E, s, cart)]
                out.extend(frontier)
        return out

    return FibredNerve(cert, level, cap, name=f"N_f({p.name or 'p'})")


def nu(c: Cleavage, bbar: Chain, abar: Chain) -> Grid:
    """The grid with base ``bbar``, mast ``abar`` and unit horizontals in Σ."""
    cert = c.cert
    objs, vert = _column_from_chain(abar)
    s = Grid(tuple(objs), tuple(vert), tuple(() for _ in objs))
    for phi in bbar.arrows:
        s = _extend(cert, s, phi, tuple(c.lift[(row[-1], phi)] for row in s.objs))
    return s


def cleaved_nerve(c: Cleavage, cap: int = 4) -> FibredNerve:
    """``N_c E``: grids all of whose horizontal composites lie in Σ."""
    p, E = c.functor, c.total
    NB = nerve(p.cod, cap)
    fibers = _fiber_nerves(p, cap)
    sigma = c.arrows
    closed = c.is_closed

    def level(m, n):
        out = []
        for bbar in NB.levels[n]:
            for abar in fibers[bbar.objects[0]].levels[m]:
                s = nu(c, bbar, abar)
                if closed or _horizontal_composites_ok(E, s, sigma):
                    out.append(s)
        return out

    return FibredNerve(c.cert, level, cap, name=f"N_c({p.name or 'p'},{c.name})", cleavage=c)


def inclusion(nc: FibredNerve, nf: FibredNerve) -> BisimplicialMap:
    """``i: N_c E -> N_f E``, the identity on grids."""
    return BisimplicialMap(nc, nf, lambda m, n, s: s, name="i")


def base_slice(nf: FibredNerve, bbar: Chain) -> SimplicialSet:
    """``N_f E_{b̄}``: the simplicial set ``m -> {grids with base b̄}``."""
    n = bbar.dim
    levels = [[s for s in nf.levels[(m, n)] if nf.base(s) == bbar] for m in range(nf.cap + 1)]
    return SimplicialSet(levels,
                         lambda m, i, s: nf.vface(m, n, i, s),
                         lambda m, j, s: nf.vdeg(m, n, j, s),
                         name=f"{nf.name}_{bbar.objects}")


def mu(nf: FibredNerve, bbar: Chain, X: SimplicialSet | None = None,
       fiber_nerve: SimplicialSet | None = None) -> SimplicialMap:
    """``μ: N_f E_{b̄} -> N(E_{b_0})``, the mast."""
    X = X or base_slice(nf, bbar)
    Y = fiber_nerve or nerve(fiber(nf.functor, bbar.objects[0])[0], nf.cap)
    return SimplicialMap(X, Y, lambda m, s: mast(s), name="μ")


def nu_map(c: Cleavage, nf: FibredNerve, bbar: Chain, X: SimplicialSet | None = None,
           fiber_nerve: SimplicialSet | None = None) -> SimplicialMap:
    """``ν: N(E_{b_0}) -> N_f E_{b̄}``, a section of μ."""
    Y = X or base_slice(nf, bbar)
    F = fiber_nerve or nerve(fiber(nf.functor, bbar.objects[0])[0], nf.cap)
    return SimplicialMap(F, Y, lambda m, a: nu(c, bbar, a), name="ν")


# -- comparison with the nerve of E ----------------------------------------

def diagonal_chain(E: FiniteCategory, s: Grid) -> Chain:
    n = s.m
    return Chain(tuple(s.objs[i][i] for i in range(n + 1)),
                 tuple(E.comp[(s.vert[i][i + 1], s.horiz[i][i])] for i in range(n)))


def k_map(nf: FibredNerve, dK: SimplicialSet | None = None,
          NE: SimplicialSet | None = None) -> SimplicialMap:
    """``k: d(N_f E) -> N E``, the diagonal chain ``e_00 -> e_11 -> ... -> e_nn``."""
    E = nf.cert.total
    dK = dK or diagonal(nf)
    NE = NE or nerve(E, nf.cap)
    return SimplicialMap(dK, NE, lambda n, s: diagonal_chain(E, s), name="k")


class TnSimplex(NamedTuple):
    """A fibred functor out of ``T_n``: objects at ``(i, j)``, ``i <= j``;
    ``horiz`` at ``(i, j)`` for ``j < n``, ``vert`` at ``(i, j)`` for ``i < j``.
    Each field is a tuple of ``((i, j), value)`` in lexicographic order."""
    n: int
    obj: tuple
    horiz: tuple
    vert: tuple

    def at(self, field: str, i: int, j: int):
        return dict(getattr(self, field))[(i, j)]


def tn_from_tuple(xs: tuple) -> TnSimplex:
    """``(x_0, ..., x_n) ∈ ∇(N_f E)_n`` as data on ``T_n``; ``x_k`` covers
    rows ``0..k`` and columns ``k..n``."""
    n = len(xs) - 1
    obj, hor, ver = [], [], []
    for i in range(n + 1):
        for j in range(i, n + 1):
            obj.append(((i, j), xs[i].objs[i][j - i]))
            if j < n:
                hor.append(((i, j), xs[i].horiz[i][j - i]))
            if i < j:
                ver.append(((i, j), xs[i + 1].vert[i][j - i - 1]))
    return TnSimplex(n, tuple(obj), tuple(hor), tuple(ver))


def tuple_from_tn(t: TnSimplex) -> tuple:
    n = t.n
    obj, hor, ver = dict(t.obj), dict(t.horiz), dict(t.vert)
    out = []
    for k in range(n + 1):
        cols = n - k + 1
        objs = tuple(tuple(obj[(i, j + k)] for j in range(cols)) for i in range(k + 1))
        vert = tuple(tuple(ver[(i, j + k)] for j in range(cols)) for i in range(k))
        horiz = tuple(tuple(hor[(i, j + k)] for j in range(cols - 1)) for i in range(k + 1))
        out.append(Grid(objs, vert, horiz))
    return tuple(out)


def kbar_chain(E: FiniteCategory, xs: tuple) -> Chain:
    t = tn_from_tuple(xs)
    obj, hor, ver = dict(t.obj), dict(t.horiz), dict(t.vert)
    n = t.n
    return Chain(tuple(obj[(i, i)] for i in range(n + 1)),
                 tuple(E.comp[(ver[(i, i + 1)], hor[(i, i)])] for i in range(n)))


def kbar(nf: FibredNerve, cK: SimplicialSet | None = None,
         NE: SimplicialSet | None = None) -> SimplicialMap:
    """``k̄: ∇(N_f E) -> N E`` through the ``T_n`` description."""
    E = nf.cert.total
    cK = cK or codiagonal(nf)
    NE = NE or nerve(E, nf.cap)
    return SimplicialMap(cK, NE, lambda n, xs: kbar_chain(E, xs), name="k̄")


# -- Grothendieck constructions --------------------------------------------

def cleaved_to_hc(F, cap: int = 3):
    """``N_c(F⋊B) -> hc(NF)``: a grid goes to ``(base, mast)`` with the mast
    read inside ``F(b_0)``.  Returns ``(map, N_c, hc)``."""
    from .fibration import grothendieck
    p, c = grothendieck(F)
    nc = cleaved_nerve(c, cap)
    H = hc(nerve_diagram(F, cap), cap)

    def func(m, n, s):
        b = base(p, s)
        a = mast(s)
        return (b, Chain(tuple(x[0] for x in a.objects), tuple(f[2] for f in a.arrows)))

    return BisimplicialMap(nc, H, func, name="N_c→hc"), nc, H


def action_group(F, cap: int) -> tuple[ConstantSimplicialGroup, SimplicialSet]:
    """``G`` acting levelwise on ``N A`` for a one-object diagram ``F``."""
    G = F.base
    (star,) = G.objects
    A = F.values[star]
    NA = nerve(A, cap)
    grp = ConstantSimplicialGroup(
        elements=G.arrows,
        mult=lambda g, h: G.comp[(g, h)],
        unit=G.identity[star],
        act=lambda g, n, ch: apply_functor(F.maps[g], ch),
        space=NA)
    return grp, NA


def cleaved_to_tcp(F, cap: int = 3):
    """``d N_c(G⋉A) -> NA ×_τ NG``, ``s -> (mast, base)``; returns
    ``(map, dN_c, tcp)``."""
    from .fibration import grothendieck
    p, c = grothendieck(F)
    nc = cleaved_nerve(c, cap)
    dN = diagonal(nc)
    grp, NA = action_group(F, cap)
    NG = nerve(F.base, cap)
    T = tcp(NA, grp, NG, group_nerve_twisting())

    def func(n, s):
        a = mast(s)
        return (Chain(tuple(x[0] for x in a.objects), tuple(f[2] for f in a.arrows)), base(p, s))

    return SimplicialMap(dN, T, func, name="dN_c→TCP"), dN, T


__all__ = [
    "FibredNerve", "Grid", "TnSimplex", "base", "base_slice", "cleaved_nerve",
    "cleaved_to_hc", "cleaved_to_tcp", "diagonal_chain", "fibred_nerve", "grid_arrow",
    "inclusion", "k_map", "kbar", "kbar_chain", "mast", "mu", "nu", "nu_map", "restrict",
    "tn_from_tuple", "tuple_from_tn", "theta",
]
