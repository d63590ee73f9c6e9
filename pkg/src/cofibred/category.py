"""Finite categories, functors and the standard constructions on them.

Objects and arrows are arbitrary hashable ids (strings, ints or nested
tuples of those).  Every category stores a total composition table, so
all the category and functor laws can be checked exhaustively.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Mapping

Id = Hashable


class CategoryError(ValueError):
    """Base class for malformed categories and functors."""


class MissingComposite(CategoryError):
    pass


class NonAssociative(CategoryError):
    pass


class BadIdentity(CategoryError):
    pass


class ObjectNotInCodomain(CategoryError):
    pass


class FunctorError(CategoryError):
    pass


def sort_key(x: Any):
    """Total order on ids: ints < strings < tuples, tuples compared
    recursively.  Used everywhere an enumeration order matters."""
    if isinstance(x, bool):
        return (0, int(x))
    if isinstance(x, int):
        return (0, x)
    if isinstance(x, str):
        return (1, x)
    if isinstance(x, tuple):
        return (2, tuple(sort_key(y) for y in x))
    if x is None:
        return (-1,)
    return (3, repr(x))


def _sorted(xs: Iterable) -> tuple:
    return tuple(sorted(xs, key=sort_key))


class FiniteCategory:
    """A finite category given by a complete composition table.

    Parameters
    ----------
    objects, arrows : iterables of ids
    src, dst : mappings arrow -> object
    identity : mapping object -> arrow
    composition : mapping ``(g, f) -> g∘f`` defined exactly on the pairs
        with ``dst(f) == src(g)``.  Pairs involving an identity may be
        omitted; they are filled in.
    check : run the exhaustive law check (default True).
    """

    def __init__(self, objects, arrows, src: Mapping, dst: Mapping,
                 identity: Mapping, composition: Mapping, name: str = "",
                 check: bool = True):
        self.name = name
        self.objects = _sorted(set(objects))
        self.arrows = _sorted(set(arrows))
        self.src = dict(src)
        self.dst = dict(dst)
        self.identity = dict(identity)
        comp = dict(composition)
        for f in self.arrows:
            comp.setdefault((f, self.identity[self.src[f]]), f)
            comp.setdefault((self.identity[self.dst[f]], f), f)
        self.comp = comp

        hom: dict = {}
        out: dict = {x: [] for x in self.objects}
        inc: dict = {x: [] for x in self.objects}
        for f in self.arrows:
            hom.setdefault((self.src[f], self.dst[f]), []).append(f)
            out[self.src[f]].append(f)
            inc[self.dst[f]].append(f)
        self._hom = {k: tuple(v) for k, v in hom.items()}
        self.out = {k: tuple(v) for k, v in out.items()}
        self.inc = {k: tuple(v) for k, v in inc.items()}
        self._identities = frozenset(self.identity.values())
        if check:
            self.check_laws()

    # -- basic structure -------------------------------------------------

    def hom(self, x, y) -> tuple:
        return self._hom.get((x, y), ())

    def compose(self, g, f):
        """``g∘f``; raises MissingComposite when undefined."""
        try:
            return self.comp[(g, f)]
        except KeyError:
            if self.dst[f] != self.src[g]:
                raise MissingComposite(
                    f"{g!r}∘{f!r} is not composable in {self.name or 'category'}")
            raise MissingComposite(f"composite {g!r}∘{f!r} missing")

    def compose_chain(self, arrows):
        """Compose ``f_1, f_2, ..., f_k`` (applied left to right)."""
        arrows = list(arrows)
        h = arrows[0]
        for g in arrows[1:]:
            h = self.comp[(g, h)]
        return h

    def is_identity(self, f) -> bool:
        return f in self._identities

    def composable_pairs(self):
        for f in self.arrows:
            for g in self.out[self.dst[f]]:
                yield g, f

    def __len__(self):
        return len(self.arrows)

    def __repr__(self):
        label = self.name or "FiniteCategory"
        return f"<{label}: {len(self.objects)} objects, {len(self.arrows)} arrows>"

    def __eq__(self, other):
        if not isinstance(other, FiniteCategory):
            return NotImplemented
        return (self.objects == other.objects and self.arrows == other.arrows
                and self.src == other.src and self.dst == other.dst
                and self.identity == other.identity and self.comp == other.comp)

    def __hash__(self):
        return hash((self.objects, self.arrows))

    # -- validation ------------------------------------------------------

    def check_laws(self) -> None:
        objs = set(self.objects)
        for f in self.arrows:
            if self.src.get(f) not in objs or self.dst.get(f) not in objs:
                raise CategoryError(f"arrow {f!r} has unknown endpoints")
        for x in self.objects:
            i = self.identity.get(x)
            if i is None or self.src.get(i) != x or self.dst.get(i) != x:
                raise BadIdentity(f"identity of {x!r} is missing or has wrong endpoints")
        for (g, f), h in self.comp.items():
            if g not in self.src or f not in self.src:
                raise CategoryError(f"composite of unknown arrows {g!r}, {f!r}")
            if self.dst[f] != self.src[g]:
                raise CategoryError(f"composite {g!r}∘{f!r} given for a non-composable pair")
            if h not in self.src or self.src[h] != self.src[f] or self.dst[h] != self.dst[g]:
                raise CategoryError(f"{g!r}∘{f!r} = {h!r} has wrong endpoints")
        for g, f in self.composable_pairs():
            if (g, f) not in self.comp:
                raise MissingComposite(f"composite {g!r}∘{f!r} missing")
        for f in self.arrows:
            if (self.comp[(f, self.identity[self.src[f]])] != f
                    or self.comp[(self.identity[self.dst[f]], f)] != f):
                raise BadIdentity(f"identity law fails at {f!r}")
        for f in self.arrows:
            for g in self.out[self.dst[f]]:
                gf = self.comp[(g, f)]
                for h in self.out[self.dst[g]]:
                    if self.comp[(h, gf)] != self.comp[(self.comp[(h, g)], f)]:
                        raise NonAssociative(f"associativity fails at ({h!r}, {g!r}, {f!r})")


def validate_category(raw: Mapping, name: str = "") -> FiniteCategory:
    """Build a category from a raw description.

    ``raw`` has keys ``objects`` (list), ``arrows`` (mapping id ->
    (src, dst)), optionally ``identities`` (mapping object -> arrow id;
    missing identities are named ``id:OBJ``) and ``compose`` (mapping
    ``(g, f) -> h``).  Composites with identities are implicit.
    """
    objects = list(raw["objects"])
    src, dst = {}, {}
    for f, (a, b) in dict(raw.get("arrows", {})).items():
        src[f], dst[f] = a, b
    identity = dict(raw.get("identities", {}))
    for x in objects:
        if x not in identity:
            identity[x] = f"id:{x}"
        i = identity[x]
        if i in src and (src[i], dst[i]) != (x, x):
            raise BadIdentity(f"identity {i!r} of {x!r} declared with other endpoints")
        src[i] = dst[i] = x
    return FiniteCategory(objects, src.keys(), src, dst, identity,
                          dict(raw.get("compose", {})), name=name)


class Functor:
    """A functor between finite categories, given by its object and arrow
    maps.  Identities may be left out of ``fl_map``."""

    def __init__(self, dom: FiniteCategory, cod: FiniteCategory,
                 ob_map: Mapping, fl_map: Mapping, name: str = "",
                 check: bool = True):
        self.dom, self.cod, self.name = dom, cod, name
        self.ob_map = dict(ob_map)
        fl = dict(fl_map)
        for x in dom.objects:
            if x in self.ob_map:
                fl.setdefault(dom.identity[x], cod.identity[self.ob_map[x]])
        self.fl_map = fl
        if check:
            self.check_laws()

    def ob(self, x):
        return self.ob_map[x]

    def fl(self, f):
        return self.fl_map[f]

    def check_laws(self) -> None:
        D, C = self.dom, self.cod
        for x in D.objects:
            if self.ob_map.get(x) not in C.identity:
                raise FunctorError(f"object {x!r} not mapped into the codomain")
        for f in D.arrows:
            g = self.fl_map.get(f)
            if g not in C.src:
                raise FunctorError(f"arrow {f!r} not mapped into the codomain")
            if C.src[g] != self.ob_map[D.src[f]] or C.dst[g] != self.ob_map[D.dst[f]]:
                raise FunctorError(f"{f!r} ↦ {g!r} does not preserve endpoints")
        for x in D.objects:
            if self.fl_map[D.identity[x]] != C.identity[self.ob_map[x]]:
                raise FunctorError(f"identity of {x!r} not preserved")
        for g, f in D.composable_pairs():
            if self.fl_map[D.comp[(g, f)]] != C.comp[(self.fl_map[g], self.fl_map[f])]:
                raise FunctorError(f"composite {g!r}∘{f!r} not preserved")

    def __eq__(self, other):
        if not isinstance(other, Functor):
            return NotImplemented
        return (self.dom == other.dom and self.cod == other.cod
                and all(self.ob_map[x] == other.ob_map[x] for x in self.dom.objects)
                and all(self.fl_map[f] == other.fl_map[f] for f in self.dom.arrows))

    def __hash__(self):
        return hash((self.dom, self.cod))

    def __repr__(self):
        return f"<Functor {self.name or ''}: {self.dom!r} -> {self.cod!r}>"

    def then(self, other: "Functor") -> "Functor":
        """``other ∘ self``."""
        return compose_functors(other, self)

    def is_injective_on_objects(self) -> bool:
        return len(set(self.ob_map.values())) == len(self.dom.objects)

    def is_fully_faithful(self) -> bool:
        for x in self.dom.objects:
            for y in self.dom.objects:
                image = [self.fl_map[f] for f in self.dom.hom(x, y)]
                target = self.cod.hom(self.ob_map[x], self.ob_map[y])
                if len(set(image)) != len(image) or set(image) != set(target):
                    return False
        return True

    def is_isomorphism(self) -> bool:
        return (len(set(self.ob_map.values())) == len(self.cod.objects) == len(self.dom.objects)
                and len(set(self.fl_map[f] for f in self.dom.arrows)) == len(self.cod.arrows)
                == len(self.dom.arrows))


def compose_functors(g: Functor, f: Functor, name: str = "") -> Functor:
    """``g∘f``."""
    if f.cod != g.dom:
        raise FunctorError("functors are not composable")
    return Functor(f.dom, g.cod,
                   {x: g.ob_map[f.ob_map[x]] for x in f.dom.objects},
                   {a: g.fl_map[f.fl_map[a]] for a in f.dom.arrows},
                   name=name, check=False)


def identity_functor(C: FiniteCategory) -> Functor:
    return Functor(C, C, {x: x for x in C.objects}, {f: f for f in C.arrows},
                   name=f"id_{C.name}", check=False)


@dataclass(frozen=True)
class ArrowOverWitness:
    """Classification of an arrow ``f`` of ``dom(p)`` relative to ``p``."""
    functor: Functor
    arrow: Any
    image: Any
    over_object: Any = None

    def is_over(self, phi) -> bool:
        return self.image == phi

    def is_over_object(self, b) -> bool:
        return self.over_object == b


def over(p: Functor, f) -> ArrowOverWitness:
    phi = p.fl_map[f]
    b = p.cod.src[phi] if p.cod.is_identity(phi) else None
    return ArrowOverWitness(p, f, phi, b)


# -- standard categories ---------------------------------------------------

def ordinal(n: int) -> FiniteCategory:
    """The poset ``[n] = {0 < 1 < ... < n}``; the arrow ``i -> j`` is ``(i, j)``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    objs = range(n + 1)
    arrows = [(i, j) for i in objs for j in objs if i <= j]
    comp = {((j, k), (i, j)): (i, k)
            for (i, j) in arrows for k in range(j, n + 1)}
    return FiniteCategory(objs, arrows, {a: a[0] for a in arrows},
                          {a: a[1] for a in arrows}, {i: (i, i) for i in objs},
                          comp, name=f"[{n}]", check=False)


def discrete(objects, name: str = "") -> FiniteCategory:
    objs = list(objects)
    ids = {x: ("id", x) for x in objs}
    return FiniteCategory(objs, ids.values(), {ids[x]: x for x in objs},
                          {ids[x]: x for x in objs}, ids, {}, name=name, check=False)


def group_category(elements, mult, unit, name: str = "", obj="*") -> FiniteCategory:
    """A group as a one-object category; ``g∘h`` is the product ``g·h``."""
    els = list(elements)
    comp = {(g, h): mult(g, h) for g in els for h in els}
    return FiniteCategory([obj], els, {g: obj for g in els}, {g: obj for g in els},
                          {obj: unit}, comp, name=name)


def cyclic_group(n: int) -> FiniteCategory:
    return group_category(range(n), lambda a, b: (a + b) % n, 0, name=f"Z/{n}")


def product(C: FiniteCategory, D: FiniteCategory) -> FiniteCategory:
    objs = [(x, y) for x in C.objects for y in D.objects]
    arrows = [(f, g) for f in C.arrows for g in D.arrows]
    comp = {}
    for f2, f1 in C.composable_pairs():
        for g2, g1 in D.composable_pairs():
            comp[((f2, g2), (f1, g1))] = (C.comp[(f2, f1)], D.comp[(g2, g1)])
    return FiniteCategory(
        objs, arrows, {(f, g): (C.src[f], D.src[g]) for f, g in arrows},
        {(f, g): (C.dst[f], D.dst[g]) for f, g in arrows},
        {(x, y): (C.identity[x], D.identity[y]) for x, y in objs}, comp,
        name=f"{C.name}×{D.name}", check=False)


def projection(C: FiniteCategory, D: FiniteCategory, which: int = 2) -> Functor:
    """Projection ``C×D -> D`` (``which=2``) or ``C×D -> C`` (``which=1``)."""
    P = product(C, D)
    k = which - 1
    target = D if which == 2 else C
    return Functor(P, target, {x: x[k] for x in P.objects},
                   {f: f[k] for f in P.arrows}, name=f"pr{which}", check=False)


def arrow_category(B: FiniteCategory) -> tuple[FiniteCategory, Functor, Functor]:
    """``B^I`` with its ``dom`` and ``cod`` functors.

    Objects are arrows of ``B``; the arrow ``(f, g, u, v): f -> g`` is the
    commutative square ``v∘f = g∘u``.
    """
    objs = list(B.arrows)
    arrows = []
    for f in objs:
        for g in objs:
            for u in B.hom(B.src[f], B.src[g]):
                for v in B.hom(B.dst[f], B.dst[g]):
                    if B.comp[(v, f)] == B.comp[(g, u)]:
                        arrows.append((f, g, u, v))
    comp = {}
    for a in arrows:
        for b in arrows:
            if a[1] == b[0]:
                comp[(b, a)] = (a[0], b[1], B.comp[(b[2], a[2])], B.comp[(b[3], a[3])])
    BI = FiniteCategory(
        objs, arrows, {a: a[0] for a in arrows}, {a: a[1] for a in arrows},
        {f: (f, f, B.identity[B.src[f]], B.identity[B.dst[f]]) for f in objs},
        comp, name=f"{B.name}^I", check=False)
    dom = Functor(BI, B, {f: B.src[f] for f in objs}, {a: a[2] for a in arrows},
                  name="dom", check=False)
    cod = Functor(BI, B, {f: B.dst[f] for f in objs}, {a: a[3] for a in arrows},
                  name="cod", check=False)
    return BI, dom, cod


def fiber(u: Functor, b) -> tuple[FiniteCategory, Functor]:
    """The subcategory of arrows over ``b`` and its inclusion."""
    B = u.cod
    if b not in B.identity:
        raise ObjectNotInCodomain(f"{b!r} is not an object of the codomain")
    A = u.dom
    idb = B.identity[b]
    objs = [a for a in A.objects if u.ob_map[a] == b]
    arrows = [f for f in A.arrows if u.fl_map[f] == idb]
    aset = set(arrows)
    comp = {(g, f): h for (g, f), h in A.comp.items() if g in aset and f in aset}
    F = FiniteCategory(objs, arrows, {f: A.src[f] for f in arrows},
                       {f: A.dst[f] for f in arrows},
                       {a: A.identity[a] for a in objs}, comp,
                       name=f"{A.name}_{b}", check=False)
    inc = Functor(F, A, {a: a for a in objs}, {f: f for f in arrows},
                  name="incl", check=False)
    return F, inc


def homotopy_fiber(u: Functor, b) -> tuple[FiniteCategory, Functor]:
    """The comma category ``u/b`` with the inclusion of the fiber.

    Objects are pairs ``(a, φ)`` with ``φ: u(a) -> b``; the arrow
    ``(f, φ, φ')`` is ``f: a -> a'`` with ``φ'∘u(f) = φ``.
    """
    B, A = u.cod, u.dom
    if b not in B.identity:
        raise ObjectNotInCodomain(f"{b!r} is not an object of the codomain")
    objs = [(a, phi) for a in A.objects for phi in B.hom(u.ob_map[a], b)]
    arrows = []
    for (a, phi) in objs:
        for (a2, phi2) in objs:
            for f in A.hom(a, a2):
                if B.comp[(phi2, u.fl_map[f])] == phi:
                    arrows.append((f, phi, phi2))
    comp = {}
    by_src: dict = {}
    for ar in arrows:
        by_src.setdefault((A.src[ar[0]], ar[1]), []).append(ar)
    for f in arrows:
        for g in by_src.get((A.dst[f[0]], f[2]), ()):
            comp[(g, f)] = (A.comp[(g[0], f[0])], f[1], g[2])
    H = FiniteCategory(
        objs, arrows, {ar: (A.src[ar[0]], ar[1]) for ar in arrows},
        {ar: (A.dst[ar[0]], ar[2]) for ar in arrows},
        {(a, phi): (A.identity[a], phi, phi) for (a, phi) in objs}, comp,
        name=f"{A.name}/{b}", check=False)
    F, _ = fiber(u, b)
    idb = B.identity[b]
    inc = Functor(F, H, {a: (a, idb) for a in F.objects},
                  {f: (f, idb, idb) for f in F.arrows}, name="incl", check=False)
    return H, inc


@dataclass
class MappingCategory:
    """The factorisation ``u = π∘i`` through ``E^u = A ×_B B^I``."""
    category: FiniteCategory
    i: Functor
    pi: Functor
    r: Functor
    u: Functor

    def __iter__(self):
        return iter((self.category, self.i, self.pi, self.r))


def mapping_category(u: Functor) -> MappingCategory:
    """``E^u``: objects ``(a, φ: u(a) -> b)``; arrows ``(f, β, φ, φ')`` with
    ``φ'∘u(f) = β∘φ``."""
    A, B = u.dom, u.cod
    objs = [(a, phi) for a in A.objects for phi in B.out[u.ob_map[a]]]
    by_src: dict = {}
    arrows = []
    for (a, phi) in objs:
        for f in A.out[a]:
            a2 = A.dst[f]
            for phi2 in B.out[u.ob_map[a2]]:
                target = B.comp[(phi2, u.fl_map[f])]
                for beta in B.hom(B.dst[phi], B.dst[phi2]):
                    if B.comp[(beta, phi)] == target:
                        ar = (f, beta, phi, phi2)
                        arrows.append(ar)
                        by_src.setdefault((a, phi), []).append(ar)
    comp = {}
    for f in arrows:
        for g in by_src.get((A.dst[f[0]], f[3]), ()):
            comp[(g, f)] = (A.comp[(g[0], f[0])], B.comp[(g[1], f[1])], f[2], g[3])
    E = FiniteCategory(
        objs, arrows, {ar: (A.src[ar[0]], ar[2]) for ar in arrows},
        {ar: (A.dst[ar[0]], ar[3]) for ar in arrows},
        {(a, phi): (A.identity[a], B.identity[B.dst[phi]], phi, phi) for (a, phi) in objs},
        comp, name=f"E^{u.name or 'u'}", check=False)
    i = Functor(A, E, {a: (a, B.identity[u.ob_map[a]]) for a in A.objects},
                {f: (f, u.fl_map[f], B.identity[u.ob_map[A.src[f]]],
                     B.identity[u.ob_map[A.dst[f]]]) for f in A.arrows},
                name="i", check=False)
    pi = Functor(E, B, {(a, phi): B.dst[phi] for (a, phi) in objs},
                 {ar: ar[1] for ar in arrows}, name="π", check=False)
    r = Functor(E, A, {(a, phi): a for (a, phi) in objs},
                {ar: ar[0] for ar in arrows}, name="r", check=False)
    return MappingCategory(E, i, pi, r, u)


def find_isomorphism(C: FiniteCategory, D: FiniteCategory):
    """Search for an isomorphism ``C -> D``; returns a Functor or None.

    Backtracking over object bijections that preserve hom-set sizes, then
    over arrow bijections hom-set by hom-set with composition checked as
    soon as both factors are assigned.  Meant for small categories.
    """
    if len(C.objects) != len(D.objects) or len(C.arrows) != len(D.arrows):
        return None

    def profile(K, x):
        return (len(K.hom(x, x)), sorted(len(K.hom(x, y)) for y in K.objects),
                sorted(len(K.hom(y, x)) for y in K.objects))

    cprof = {x: profile(C, x) for x in C.objects}
    dprof = {y: profile(D, y) for y in D.objects}
    cobjs = list(C.objects)

    def object_maps(k, used, acc):
        if k == len(cobjs):
            yield dict(acc)
            return
        x = cobjs[k]
        for y in D.objects:
            if y in used or dprof[y] != cprof[x]:
                continue
            if all(len(C.hom(x, x2)) == len(D.hom(y, acc[x2])) and
                   len(C.hom(x2, x)) == len(D.hom(acc[x2], y)) for x2 in acc):
                acc[x] = y
                used.add(y)
                yield from object_maps(k + 1, used, acc)
                used.discard(y)
                del acc[x]

    for obmap in object_maps(0, set(), {}):
        homs = [(x, y) for x in C.objects for y in C.objects if C.hom(x, y)]
        fl = {C.identity[x]: D.identity[obmap[x]] for x in C.objects}

        def consistent(fl):
            for (g, f), h in C.comp.items():
                if g in fl and f in fl and h in fl:
                    if D.comp[(fl[g], fl[f])] != fl[h]:
                        return False
            return True

        def assign(k):
            if k == len(homs):
                yield dict(fl)
                return
            x, y = homs[k]
            src_arrows = [f for f in C.hom(x, y) if f not in fl]
            taken = {fl[f] for f in C.hom(x, y) if f in fl}
            free = [g for g in D.hom(obmap[x], obmap[y]) if g not in taken]
            for perm in itertools.permutations(free):
                for f, g in zip(src_arrows, perm):
                    fl[f] = g
                if consistent(fl):
                    yield from assign(k + 1)
                for f in src_arrows:
                    del fl[f]

        for flmap in assign(0):
            F = Functor(C, D, obmap, flmap, check=False)
            try:
                F.check_laws()
            except FunctorError:
                continue
            return F
    return None


def is_isomorphic(C: FiniteCategory, D: FiniteCategory) -> bool:
    return find_isomorphism(C, D) is not None
