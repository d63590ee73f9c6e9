"""Named desk-scale fixtures used by the tests, the demos and ``verify``."""

from __future__ import annotations

from dataclasses import dataclass, field

from .category import (
    FiniteCategory,
    Functor,
    arrow_category,
    cyclic_group,
    discrete,
    identity_functor,
    mapping_category,
    ordinal,
    projection,
    validate_category,
)
from .fibration import (
    Cleavage,
    DiagramOfCategories,
    FibrationCertificate,
    certify_fibration,
    cleavage_from_arrows,
    default_cleavage,
    grothendieck,
    group_action_diagram,
)


def preorder(objects, leq, name: str = "") -> FiniteCategory:
    """The preorder with an arrow ``(a, b)`` whenever ``leq(a, b)``."""
    objs = list(objects)
    arrows = [(a, b) for a in objs for b in objs if leq(a, b)]
    comp = {((b, c), (a, b)): (a, c)
            for (a, b) in arrows for c in objs if leq(b, c)}
    return FiniteCategory(objs, arrows, {f: f[0] for f in arrows}, {f: f[1] for f in arrows},
                          {a: (a, a) for a in objs}, comp, name=name)


def preorder_functor(E: FiniteCategory, B: FiniteCategory, ob: dict, name: str = "p") -> Functor:
    """A monotone map between preorders whose arrows are pairs."""
    return Functor(E, B, ob, {(a, b): (ob[a], ob[b]) for (a, b) in E.arrows}, name=name)


def circ() -> FiniteCategory:
    """Two parallel arrows ``f, g: x -> y``."""
    return validate_category({"objects": ["x", "y"],
                              "arrows": {"f": ("x", "y"), "g": ("x", "y")}}, name="CIRC")


def stair() -> Functor:
    """``[2] -> [1]`` taking ``0 -> 0`` and ``1, 2 -> 1``."""
    return preorder_functor(ordinal(2), ordinal(1), {0: 0, 1: 1, 2: 1}, name="STAIR")


def loop3_total() -> FiniteCategory:
    """``0 <= 1 <= 2 ≅ 3``: the ordinal ``[3]`` with ``2 -> 3`` inverted."""
    return preorder(range(4), lambda a, b: a <= b or (a, b) == (3, 2), name="LOOP3-TOTAL")


def loop3() -> Functor:
    return preorder_functor(loop3_total(), ordinal(2), {0: 0, 1: 1, 2: 2, 3: 2}, name="LOOP3")


LOOP3_BAD_SIGMA = ((0, 1), (0, 3), (1, 2))


def loop3_bad_cleavage(cert: FibrationCertificate | None = None) -> Cleavage:
    """The non-closed normal cleavage ``{ids, 0->1, 0->3, 1->2}``."""
    cert = cert or certify_fibration(loop3())
    return cleavage_from_arrows(cert, LOOP3_BAD_SIGMA, name="Σ_bad")


def cod_fibration(n: int = 2) -> Functor:
    BI, dom, cod = arrow_category(ordinal(n))
    cod.name = f"cod:[{n}]^I->[{n}]"
    return cod


def circ_times(n: int = 1) -> Functor:
    p = projection(circ(), ordinal(n), which=2)
    p.name = f"CIRC×[{n}]->[{n}]"
    return p


def z2() -> FiniteCategory:
    return cyclic_group(2)


def swap_action_on_circ() -> DiagramOfCategories:
    """``Z/2`` acting on CIRC by exchanging ``f`` and ``g``."""
    G, A = z2(), circ()
    u1 = Functor(A, A, {"x": "x", "y": "y"}, {"f": "g", "g": "f"}, name="swap")
    return group_action_diagram(G, A, {0: identity_functor(A), 1: u1}, name="Z/2⋉CIRC")


def swap_action_on_points() -> DiagramOfCategories:
    """``Z/2`` exchanging the two objects of a discrete category."""
    G, A = z2(), discrete(["a", "b"], name="{a,b}")
    ida, idb = A.identity["a"], A.identity["b"]
    u1 = Functor(A, A, {"a": "b", "b": "a"}, {ida: idb, idb: ida}, name="swap")
    return group_action_diagram(G, A, {0: identity_functor(A), 1: u1}, name="Z/2⋉{a,b}")


def trivial_action_on_point(order: int = 2) -> DiagramOfCategories:
    G, A = cyclic_group(order), ordinal(0)
    return group_action_diagram(G, A, {g: identity_functor(A) for g in G.arrows},
                                name=f"Z/{order}⋉[0]")


def _to_point(C: FiniteCategory) -> Functor:
    P = ordinal(0)
    return Functor(C, P, {x: 0 for x in C.objects}, {f: (0, 0) for f in C.arrows},
                   name="!", check=False)


def segment_diagram() -> DiagramOfCategories:
    """``F: [1] -> Cat`` with ``F(0) = [1]``, ``F(1) = [0]``."""
    B = ordinal(1)
    return DiagramOfCategories(B, {0: ordinal(1), 1: ordinal(0)},
                               {(0, 1): _to_point(ordinal(1))}, name="F[1]→[0]")


def circ_collapse_diagram() -> DiagramOfCategories:
    """``F: [1] -> Cat`` with ``F(0) = CIRC``, ``F(1) = [0]``."""
    B = ordinal(1)
    return DiagramOfCategories(B, {0: circ(), 1: ordinal(0)},
                               {(0, 1): _to_point(circ())}, name="FCIRC→[0]")


def chain_diagram() -> DiagramOfCategories:
    """``F: [2] -> Cat`` with values ``[1] -> [1] -> [0]``; the first map is
    the constant functor at ``1``."""
    B = ordinal(2)
    one, pt = ordinal(1), ordinal(0)
    const1 = Functor(one, one, {0: 1, 1: 1}, {(0, 0): (1, 1), (0, 1): (1, 1), (1, 1): (1, 1)},
                     name="c1")
    return DiagramOfCategories(B, {0: one, 1: one, 2: pt},
                               {(0, 1): const1, (1, 2): _to_point(one), (0, 2): _to_point(one)},
                               name="F[2]")


@dataclass
class FibrationFixture:
    name: str
    functor: Functor
    cleavage_arrows: tuple | None = None
    diagram: DiagramOfCategories | None = None
    tags: frozenset = field(default_factory=frozenset)

    def cert(self) -> FibrationCertificate:
        return certify_fibration(self.functor)

    def cleavage(self, cert: FibrationCertificate | None = None) -> Cleavage:
        cert = cert or self.cert()
        if self.diagram is not None:
            return grothendieck(self.diagram)[1]
        if self.cleavage_arrows is not None:
            return cleavage_from_arrows(cert, self.cleavage_arrows, name=self.name)
        return default_cleavage(cert)


def _groth(F: DiagramOfCategories, tags=()) -> FibrationFixture:
    p, _ = grothendieck(F)
    p.name = F.name
    return FibrationFixture(F.name, p, diagram=F, tags=frozenset(tags) | {"grothendieck", "closed"})


def _mapping_fibration(u: Functor, name: str) -> FibrationFixture:
    mc = mapping_category(u)
    mc.pi.name = name
    return FibrationFixture(name, mc.pi, tags=frozenset({"mapping", "closed"}))


def stair_to_point() -> Functor:
    return _to_point(ordinal(2))


def fibrations() -> dict[str, FibrationFixture]:
    """All corpus fibrations, keyed by name."""
    idB = identity_functor(ordinal(2))
    idB.name = "id_[2]"
    fx = [
        FibrationFixture("STAIR", stair(), tags=frozenset({"closed", "trivial-fibers"})),
        FibrationFixture("id_[2]", idB, tags=frozenset({"closed", "trivial-fibers"})),
        FibrationFixture("cod_[2]", cod_fibration(2), tags=frozenset({"closed", "trivial-fibers"})),
        FibrationFixture("CIRC×[1]", circ_times(1), tags=frozenset({"closed", "product"})),
        FibrationFixture("LOOP3", loop3(), cleavage_arrows=((0, 1), (0, 2), (1, 2)),
                         tags=frozenset({"closed", "trivial-fibers"})),
        _groth(segment_diagram(), tags={"trivial-fibers"}),
        _groth(chain_diagram(), tags={"trivial-fibers"}),
        _groth(circ_collapse_diagram()),
        _groth(swap_action_on_circ(), tags={"action"}),
        _groth(swap_action_on_points(), tags={"action"}),
        _groth(trivial_action_on_point(2), tags={"action", "trivial-fibers"}),
        _mapping_fibration(stair(), "π:[2]^STAIR"),
        _mapping_fibration(stair_to_point(), "π:[2]^!"),
    ]
    return {f.name: f for f in fx}


def functors_with_trivial_homotopy_fibers() -> dict[str, Functor]:
    """Functors whose homotopy fibers all have the homology of a point."""
    one_to_pt = _to_point(ordinal(1))
    one_to_pt.name = "[1]->[0]"
    return {"STAIR": stair(), "[2]->[0]": stair_to_point(), "[1]->[0]": one_to_pt}


def diagrams() -> dict[str, DiagramOfCategories]:
    ds = [segment_diagram(), chain_diagram(), circ_collapse_diagram(), swap_action_on_circ(),
          swap_action_on_points(), trivial_action_on_point(2)]
    return {d.name: d for d in ds}


def actions() -> dict[str, DiagramOfCategories]:
    ds = [swap_action_on_circ(), swap_action_on_points(), trivial_action_on_point(2)]
    return {d.name: d for d in ds}


def categories() -> dict[str, FiniteCategory]:
    return {"CIRC": circ(), "[0]": ordinal(0), "[1]": ordinal(1), "[2]": ordinal(2),
            "LOOP3-TOTAL": loop3_total(), "Z/2": z2(), "Z/3": cyclic_group(3)}
