"""Cartesian arrows, fibrations, cleavages, good maps and the Grothendieck
construction.

Conventions follow cofibred categories: a lift of ``(e, φ: p(e) -> b)`` is
an arrow *out of* ``e``.  An arrow ``f: e -> e'`` is cartesian when every
``g: e -> e''`` over ``p(f)`` factors as ``h∘f`` for a unique ``h`` over
the identity of ``p(e')``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import prod
from typing import Any, Mapping

from .category import (
    CategoryError,
    FiniteCategory,
    Functor,
    FunctorError,
    compose_functors,
    fiber,
    identity_functor,
    mapping_category,
    sort_key,
)


class NotNormal(ValueError):
    pass


class NotGood(ValueError):
    pass


class LimitExceeded(RuntimeError):
    def __init__(self, total: int | None, limit: int):
        self.total = total
        self.limit = limit
        shown = str(total) if total is not None else ">= 10^6"
        super().__init__(f"{shown} cleavages exceed the limit {limit}")


# -- cartesian arrows ------------------------------------------------------

@dataclass(frozen=True)
class CartesianReport:
    """Outcome of the universal-property check for one arrow.

    ``witnesses`` maps each tested ``g`` to its factorisation ``h``;
    ``violation`` is ``(g, candidates)`` for the first failing ``g`` (no
    candidate, or several).
    """
    arrow: Any
    cartesian: bool
    witnesses: Mapping = field(default_factory=dict)
    violation: tuple | None = None

    def __bool__(self):
        return self.cartesian


def is_cartesian(p: Functor, f) -> CartesianReport:
    E, B = p.dom, p.cod
    e, e1 = E.src[f], E.dst[f]
    phi = p.fl_map[f]
    id_b1 = B.identity[p.ob_map[e1]]
    witnesses = {}
    for g in E.out[e]:
        if p.fl_map[g] != phi:
            continue
        cands = [h for h in E.hom(e1, E.dst[g])
                 if p.fl_map[h] == id_b1 and E.comp[(h, f)] == g]
        if len(cands) != 1:
            return CartesianReport(f, False, witnesses, (g, tuple(cands)))
        witnesses[g] = cands[0]
    return CartesianReport(f, True, witnesses)


def is_strongly_cartesian(p: Functor, f) -> bool:
    """Factorisation through ``f`` over every base arrow ``ψ`` with
    ``p(g) = ψ∘p(f)``, uniquely."""
    E, B = p.dom, p.cod
    e, e1 = E.src[f], E.dst[f]
    phi = p.fl_map[f]
    b1 = p.ob_map[e1]
    for g in E.out[e]:
        e2 = E.dst[g]
        for psi in B.hom(b1, p.ob_map[e2]):
            if B.comp[(psi, phi)] != p.fl_map[g]:
                continue
            cands = [h for h in E.hom(e1, e2)
                     if p.fl_map[h] == psi and E.comp[(h, f)] == g]
            if len(cands) != 1:
                return False
    return True


# -- certification ---------------------------------------------------------

NOT_PREFIBRATION = "not-prefibration"
PREFIBRATION = "prefibration-only"
FIBRATION = "fibration"


@dataclass
class FibrationCertificate:
    """Classification of a functor with the data needed downstream.

    ``lifts[(e, φ)]`` lists every cartesian arrow out of ``e`` over ``φ``.
    """
    functor: Functor
    kind: str
    cartesian: frozenset
    lifts: dict
    missing: tuple | None = None
    non_closed: tuple | None = None

    @property
    def total(self) -> FiniteCategory:
        return self.functor.dom

    @property
    def base(self) -> FiniteCategory:
        return self.functor.cod

    @property
    def is_fibration(self) -> bool:
        return self.kind == FIBRATION

    @property
    def is_prefibration(self) -> bool:
        return self.kind != NOT_PREFIBRATION

    def lift_pairs(self):
        """All ``(e, φ)`` with ``src(φ) = p(e)``, in canonical order."""
        p = self.functor
        for e in p.dom.objects:
            for phi in p.cod.out[p.ob_map[e]]:
                yield e, phi

    def factor(self, f, g, psi=None):
        """The unique ``h`` over ``psi`` (default: identity) with ``h∘f = g``,
        for a cartesian ``f``."""
        E, p = self.total, self.functor
        b1 = p.ob_map[E.dst[f]]
        if psi is None:
            psi = self.base.identity[b1]
        return self._factor(f, g, psi)

    @cached_property
    def _factor_cache(self):
        return {}

    def _factor(self, f, g, psi):
        key = (f, g, psi)
        cache = self._factor_cache
        if key in cache:
            return cache[key]
        E, p = self.total, self.functor
        cands = [h for h in E.hom(E.dst[f], E.dst[g])
                 if p.fl_map[h] == psi and E.comp[(h, f)] == g]
        if len(cands) != 1:
            raise ValueError(f"no unique factorisation of {g!r} through {f!r} over {psi!r}")
        cache[key] = cands[0]
        return cands[0]


def certify_fibration(p: Functor) -> FibrationCertificate:
    E, B = p.dom, p.cod
    cart = frozenset(f for f in E.arrows if is_cartesian(p, f))
    lifts = {}
    missing = None
    for e in E.objects:
        for phi in B.out[p.ob_map[e]]:
            ls = tuple(f for f in E.out[e] if f in cart and p.fl_map[f] == phi)
            lifts[(e, phi)] = ls
            if not ls and missing is None:
                missing = (e, phi)
    if missing is not None:
        return FibrationCertificate(p, NOT_PREFIBRATION, cart, lifts, missing=missing)
    for f in E.arrows:
        if f not in cart:
            continue
        for g in E.out[E.dst[f]]:
            if g in cart and E.comp[(g, f)] not in cart:
                return FibrationCertificate(p, PREFIBRATION, cart, lifts, non_closed=(g, f))
    return FibrationCertificate(p, FIBRATION, cart, lifts)


# -- cleavages -------------------------------------------------------------

@dataclass
class Cleavage:
    """A choice ``lift[(e, φ)]`` of one cartesian arrow per lifting problem."""
    cert: FibrationCertificate
    lift: dict
    name: str = ""

    def __post_init__(self):
        p = self.cert.functor
        for (e, phi) in self.cert.lift_pairs():
            f = self.lift.get((e, phi))
            if f is None:
                raise ValueError(f"cleavage has no lift for ({e!r}, {phi!r})")
            if f not in self.cert.cartesian:
                raise ValueError(f"lift {f!r} of ({e!r}, {phi!r}) is not cartesian")
            if p.dom.src[f] != e or p.fl_map[f] != phi:
                raise ValueError(f"lift {f!r} does not start at {e!r} over {phi!r}")

    @property
    def functor(self) -> Functor:
        return self.cert.functor

    @property
    def total(self) -> FiniteCategory:
        return self.cert.functor.dom

    @property
    def base(self) -> FiniteCategory:
        return self.cert.functor.cod

    def __call__(self, e, phi):
        return self.lift[(e, phi)]

    @cached_property
    def arrows(self) -> frozenset:
        return frozenset(self.lift.values())

    def __contains__(self, f):
        return f in self.arrows

    @property
    def is_normal(self) -> bool:
        E, p = self.total, self.functor
        return all(self.lift[(e, self.base.identity[p.ob_map[e]])] == E.identity[e]
                   for e in E.objects)

    @property
    def is_closed(self) -> bool:
        return is_closed(self)

    def key(self):
        return tuple(self.lift[k] for k in self.cert.lift_pairs())

    def __eq__(self, other):
        if not isinstance(other, Cleavage):
            return NotImplemented
        return self.cert.functor == other.cert.functor and self.lift == other.lift

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"<Cleavage {self.name or ''} on {self.cert.functor.name or 'p'}: {len(self.arrows)} arrows>"


def cleavage_from_arrows(cert: FibrationCertificate, arrows, name: str = "") -> Cleavage:
    """A cleavage given as a subset Σ of arrows (identity lifts implicit)."""
    p = cert.functor
    E = p.dom
    chosen = set(arrows) | set(E.identity.values())
    lift = {}
    for (e, phi) in cert.lift_pairs():
        cands = [f for f in E.out[e] if f in chosen and p.fl_map[f] == phi]
        if len(cands) != 1:
            raise ValueError(f"Σ must contain exactly one arrow out of {e!r} over {phi!r}")
        lift[(e, phi)] = cands[0]
    return Cleavage(cert, lift, name=name)


def default_cleavage(cert: FibrationCertificate) -> Cleavage:
    """The lexicographically least normal cleavage."""
    return next(iter(enumerate_cleavages(cert, normal_only=True, limit=None)))


def count_cleavages(cert: FibrationCertificate, normal_only: bool = True) -> int:
    B, p = cert.base, cert.functor
    counts = []
    for (e, phi) in cert.lift_pairs():
        if normal_only and phi == B.identity[p.ob_map[e]]:
            counts.append(1)
        else:
            counts.append(len(cert.lifts[(e, phi)]))
    return prod(counts)


def enumerate_cleavages(cert: FibrationCertificate, normal_only: bool = True,
                        limit: int | None = 1000) -> list[Cleavage]:
    """All (normal) cleavages, in lexicographic order of the lift choices.

    Raises LimitExceeded when more than ``limit`` exist.
    """
    if not cert.is_prefibration:
        raise ValueError("functor is not a prefibration")
    B, E, p = cert.base, cert.total, cert.functor
    pairs = list(cert.lift_pairs())
    choices = []
    for (e, phi) in pairs:
        if normal_only and phi == B.identity[p.ob_map[e]]:
            choices.append((E.identity[e],))
        else:
            choices.append(tuple(sorted(cert.lifts[(e, phi)], key=sort_key)))
    total = prod(len(c) for c in choices)
    if limit is not None and total > limit:
        raise LimitExceeded(total if total < 10**6 else None, limit)
    return [Cleavage(cert, dict(zip(pairs, combo)))
            for combo in itertools.product(*choices)]


def is_closed(c: Cleavage) -> bool:
    E = c.total
    sigma = c.arrows
    for f in sigma:
        for g in E.out[E.dst[f]]:
            if g in sigma and E.comp[(g, f)] not in sigma:
                return False
    return True


def coro_equivalent(c: Cleavage) -> bool:
    """``f ∈ Σ`` and ``f'∘f ∈ Σ`` imply ``f' ∈ Σ``, for all composable pairs."""
    E = c.total
    sigma = c.arrows
    for f in sigma:
        for g in E.out[E.dst[f]]:
            if E.comp[(g, f)] in sigma and g not in sigma:
                return False
    return True


# -- good maps -------------------------------------------------------------

def good_map_from_cleavage(c: Cleavage, mc=None) -> Functor:
    """The good map ``s: E^p -> E`` of a normal cleavage.

    ``s(e, φ)`` is the codomain of ``Σ_{e,φ}``; ``s(α, β)`` is the unique
    arrow over ``β`` with ``s(α,β)∘Σ_{e,φ} = Σ_{e',φ'}∘α``.
    """
    if not c.is_normal:
        raise NotNormal("good maps correspond to normal cleavages only")
    p = c.functor
    E = p.dom
    if mc is None:
        mc = mapping_category(p)
    Ep = mc.category
    ob = {(e, phi): E.dst[c.lift[(e, phi)]] for (e, phi) in Ep.objects}
    fl = {}
    for ar in Ep.arrows:
        alpha, beta, phi, phi2 = ar
        e, e2 = E.src[alpha], E.dst[alpha]
        g = E.comp[(c.lift[(e2, phi2)], alpha)]
        fl[ar] = c.cert.factor(c.lift[(e, phi)], g, beta)
    return Functor(Ep, E, ob, fl, name="s", check=False)


def _cartesian_of(p: Functor) -> frozenset:
    return frozenset(f for f in p.dom.arrows if is_cartesian(p, f))


def check_good(s: Functor, cert: FibrationCertificate, mc=None):
    """Return None if ``s`` is good, else the violated clause."""
    p = cert.functor
    if mc is None:
        mc = mapping_category(p)
    if s.dom != mc.category or s.cod != p.dom:
        return "s must be a functor E^p -> E"
    try:
        s.check_laws()
    except FunctorError as exc:
        return f"s is not a functor ({exc})"
    if compose_functors(s, mc.i) != identity_functor(p.dom):
        return "s∘i = id fails"
    if compose_functors(p, s) != mc.pi:
        return "p∘s = π fails"
    for f in _cartesian_of(mc.pi):
        if s.fl_map[f] not in cert.cartesian:
            return f"s does not preserve the cartesian arrow {f!r}"
    return None


def cleavage_from_good_map(s: Functor, cert: FibrationCertificate, mc=None) -> Cleavage:
    """``Σ = {s(id_e, φ)}``; raises NotGood naming the violated clause."""
    p = cert.functor
    if mc is None:
        mc = mapping_category(p)
    problem = check_good(s, cert, mc)
    if problem is not None:
        raise NotGood(problem)
    E, B = p.dom, p.cod
    lift = {}
    for (e, phi) in cert.lift_pairs():
        b = p.ob_map[e]
        lift[(e, phi)] = s.fl_map[(E.identity[e], phi, B.identity[b], phi)]
    return Cleavage(cert, lift)


def mapping_cleavage_arrows(mc) -> frozenset:
    """``Σ^u``: arrows of ``E^u`` whose first coordinate is an identity."""
    A = mc.u.dom
    return frozenset(ar for ar in mc.category.arrows if A.is_identity(ar[0]))


def mapping_cleavage(mc, cert: FibrationCertificate | None = None) -> Cleavage:
    if cert is None:
        cert = certify_fibration(mc.pi)
    return cleavage_from_arrows(cert, mapping_cleavage_arrows(mc), name="Σ^u")


def is_very_good(s: Functor, c: Cleavage, mc=None) -> bool:
    if mc is None:
        mc = mapping_category(c.functor)
    return all(s.fl_map[ar] in c.arrows for ar in mapping_cleavage_arrows(mc))


# -- base change -----------------------------------------------------------

def base_change(c: Cleavage, phi) -> Functor:
    """``φ_*: E_b -> E_b'`` with ``φ_*(f)∘Σ_{e,φ} = Σ_{e',φ}∘f``."""
    p = c.functor
    E, B = p.dom, p.cod
    b, b2 = B.src[phi], B.dst[phi]
    Fb, _ = fiber(p, b)
    Fb2, _ = fiber(p, b2)
    ob = {e: E.dst[c.lift[(e, phi)]] for e in Fb.objects}
    fl = {}
    for f in Fb.arrows:
        e, e2 = E.src[f], E.dst[f]
        g = E.comp[(c.lift[(e2, phi)], f)]
        fl[f] = c.cert.factor(c.lift[(e, phi)], g)
    return Functor(Fb, Fb2, ob, fl, name=f"{phi}_*", check=False)


# -- diagrams and the Grothendieck construction ----------------------------

class DiagramOfCategories:
    """A strict functor ``F: B -> Cat`` with finite values."""

    def __init__(self, base: FiniteCategory, values: Mapping, maps: Mapping,
                 name: str = "", check: bool = True):
        self.base = base
        self.values = dict(values)
        maps = dict(maps)
        for b in base.objects:
            maps.setdefault(base.identity[b], identity_functor(self.values[b]))
        self.maps = maps
        self.name = name
        if check:
            self.check()

    def __call__(self, x):
        if x in self.values:
            return self.values[x]
        return self.maps[x]

    def check(self) -> None:
        B = self.base
        for b in B.objects:
            if b not in self.values:
                raise CategoryError(f"diagram has no value at {b!r}")
        for phi in B.arrows:
            F = self.maps.get(phi)
            if F is None:
                raise CategoryError(f"diagram has no functor for {phi!r}")
            if F.dom != self.values[B.src[phi]] or F.cod != self.values[B.dst[phi]]:
                raise CategoryError(f"functor for {phi!r} has wrong endpoints")
            F.check_laws()
        for b in B.objects:
            if self.maps[B.identity[b]] != identity_functor(self.values[b]):
                raise CategoryError(f"F(id_{b!r}) is not the identity")
        for psi, phi in B.composable_pairs():
            if compose_functors(self.maps[psi], self.maps[phi]) != self.maps[B.comp[(psi, phi)]]:
                raise CategoryError(f"F({psi!r}∘{phi!r}) != F({psi!r})F({phi!r})")


def grothendieck(F: DiagramOfCategories) -> tuple[Functor, Cleavage]:
    """The Grothendieck construction ``F⋊B -> B`` and its distinguished
    closed cleavage ``{(id, φ)}``.

    Objects are ``(x, b)``; the arrow ``(x, φ, f): (x, b) -> (x', b')`` has
    ``f: F(φ)(x) -> x'`` in ``F(b')``, and
    ``(y, ψ, g)∘(x, φ, f) = (x, ψφ, g∘F(ψ)(f))``.
    """
    B = F.base
    objs = [(x, b) for b in B.objects for x in F.values[b].objects]
    arrows = []
    out: dict = {}
    for (x, b) in objs:
        for phi in B.out[b]:
            Fb2 = F.values[B.dst[phi]]
            y = F.maps[phi].ob_map[x]
            for f in Fb2.out[y]:
                ar = (x, phi, f)
                arrows.append(ar)
                out.setdefault((x, b), []).append(ar)
    src = {ar: (ar[0], B.src[ar[1]]) for ar in arrows}
    dst = {ar: (F.values[B.dst[ar[1]]].dst[ar[2]], B.dst[ar[1]]) for ar in arrows}
    comp = {}
    for a1 in arrows:
        x, phi, f = a1
        for a2 in out.get(dst[a1], ()):
            _, psi, g = a2
            Fc = F.values[B.dst[psi]]
            comp[(a2, a1)] = (x, B.comp[(psi, phi)], Fc.comp[(g, F.maps[psi].fl_map[f])])
    ident = {(x, b): (x, B.identity[b], F.values[b].identity[x]) for (x, b) in objs}
    total = FiniteCategory(objs, arrows, src, dst, ident, comp,
                           name=f"{F.name or 'F'}⋊{B.name}", check=False)
    p = Functor(total, B, {o: o[1] for o in objs}, {ar: ar[1] for ar in arrows},
                name="p", check=False)
    cert = certify_fibration(p)
    lift = {}
    for (x, b) in objs:
        for phi in B.out[b]:
            y = F.maps[phi].ob_map[x]
            lift[((x, b), phi)] = (x, phi, F.values[B.dst[phi]].identity[y])
    return p, Cleavage(cert, lift, name="(id,φ)")


def group_action_diagram(G: FiniteCategory, A: FiniteCategory, action: Mapping,
                         name: str = "") -> DiagramOfCategories:
    """A group ``G`` (one-object category) acting on ``A``: ``action[g]`` is the
    automorphism ``u_g``."""
    (star,) = G.objects
    return DiagramOfCategories(G, {star: A}, dict(action), name=name)


def fibration_of(F: DiagramOfCategories):
    """Certificate plus distinguished cleavage of ``F⋊B -> B``."""
    p, c = grothendieck(F)
    return c.cert, c


# -- homological Quillen-fibration surrogate -------------------------------

def is_quillen_fibration_homology(c: Cleavage, max_degree: int, coeff=None) -> dict:
    """H≤d-Quillen check: does every base change induce isomorphisms on
    ``H_k`` of the fiber nerves for ``k <= max_degree``?

    This is a necessary condition for being a Quillen fibration, not an
    equivalent one.  Returns ``{"holds": bool, "arrows": {φ: bool}}``.
    """
    from .homology.chains import induced_map_is_iso
    from .simplicial import nerve, functor_nerve_map

    p = c.functor
    B = p.cod
    cap = max_degree + 1
    nerves = {}
    for b in B.objects:
        Fb, _ = fiber(p, b)
        nerves[b] = nerve(Fb, cap)
    verdict = {}
    for phi in B.arrows:
        if B.is_identity(phi):
            continue
        fphi = base_change(c, phi)
        X, Y = nerves[B.src[phi]], nerves[B.dst[phi]]
        f = functor_nerve_map(fphi, X, Y)
        verdict[phi] = all(induced_map_is_iso(f, k, coeff) for k in range(max_degree + 1))
    return {"holds": all(verdict.values()), "arrows": verdict,
            "label": f"H<={max_degree}-Quillen"}
