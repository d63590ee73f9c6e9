import pytest

from cofibred import corpus
from cofibred.category import (
    Functor,
    cyclic_group,
    identity_functor,
    is_isomorphic,
    mapping_category,
    ordinal,
    product,
    projection,
)
from cofibred.corpus import preorder, preorder_functor
from cofibred.fibration import (
    NotGood,
    base_change,
    certify_fibration,
    cleavage_from_arrows,
    cleavage_from_good_map,
    count_cleavages,
    default_cleavage,
    enumerate_cleavages,
    good_map_from_cleavage,
    grothendieck,
    is_cartesian,
    is_quillen_fibration_homology,
    is_strongly_cartesian,
    is_very_good,
)


def test_stair_cartesian_arrows():
    p = corpus.stair()
    assert is_cartesian(p, (0, 1))
    rep = is_cartesian(p, (0, 2))
    assert not rep
    assert rep.violation[0] == (0, 1)
    assert is_strongly_cartesian(p, (0, 1))


def test_isomorphisms_and_identities_are_cartesian():
    p = corpus.loop3()
    E = p.dom
    for f in [(2, 3), (3, 2)] + [E.identity[x] for x in E.objects]:
        assert is_cartesian(p, f)
        assert is_strongly_cartesian(p, f)


def test_cartesian_but_not_strongly():
    # a below b and c, nothing between b and c
    E = preorder("abc", lambda x, y: x == y or x == "a")
    p = preorder_functor(E, ordinal(2), {"a": 0, "b": 1, "c": 2})
    assert is_cartesian(p, ("a", "b"))
    assert not is_strongly_cartesian(p, ("a", "b"))
    assert certify_fibration(p).kind != "fibration"


def test_fibrations_certified():
    assert certify_fibration(corpus.stair()).is_fibration
    assert certify_fibration(corpus.cod_fibration(2)).is_fibration
    cert = certify_fibration(corpus.circ_times(1))
    assert cert.is_fibration
    # in a product the arrows (id, φ) are cartesian
    C = corpus.circ()
    for f in C.arrows:
        if C.is_identity(f):
            assert (f, (0, 1)) in cert.cartesian
    # cod: B^I -> B for a few more bases
    for n in (0, 1):
        assert certify_fibration(corpus.cod_fibration(n)).is_fibration


def test_every_corpus_entry_is_a_fibration():
    for name, fx in corpus.fibrations().items():
        assert fx.cert().is_fibration, name


def test_cleavage_counts():
    stair = certify_fibration(corpus.stair())
    (c,) = enumerate_cleavages(stair)
    assert c.arrows == frozenset({(0, 0), (1, 1), (2, 2), (0, 1)})
    assert c.is_closed

    loop = certify_fibration(corpus.loop3())
    cs = list(enumerate_cleavages(loop))
    assert len(cs) == count_cleavages(loop) == 4
    choices = {(c.lift[(0, (0, 2))], c.lift[(1, (1, 2))]) for c in cs}
    assert choices == {(a, b) for a in [(0, 2), (0, 3)] for b in [(1, 2), (1, 3)]}


def test_group_epimorphism_cleavages():
    Z4, Z2 = cyclic_group(4), cyclic_group(2)
    p = Functor(Z4, Z2, {"*": "*"}, {k: k % 2 for k in Z4.arrows})
    cert = certify_fibration(p)
    assert cert.is_fibration
    assert count_cleavages(cert) == 2


def test_closedness():
    cert = certify_fibration(corpus.loop3())
    bad = corpus.loop3_bad_cleavage(cert)
    assert bad.is_normal and not bad.is_closed
    for F in corpus.diagrams().values():
        _, c = grothendieck(F)
        assert c.is_closed


def test_good_map_roundtrip_stair():
    cert = certify_fibration(corpus.stair())
    c = default_cleavage(cert)
    s = good_map_from_cleavage(c)
    assert s.ob((0, (0, 1))) == 1
    assert cleavage_from_good_map(s, cert) == c
    assert is_very_good(s, c)


def test_retraction_is_not_good():
    cert = certify_fibration(corpus.stair())
    mc = mapping_category(corpus.stair())
    with pytest.raises(NotGood):
        cleavage_from_good_map(mc.r, cert, mc)


def test_identity_fibration_cleavage_is_everything():
    B = ordinal(2)
    cert = certify_fibration(identity_functor(B))
    c = default_cleavage(cert)
    s = good_map_from_cleavage(c)
    assert cleavage_from_good_map(s, cert).arrows == frozenset(B.arrows)


def test_very_good_iff_closed_on_loop3():
    cert = certify_fibration(corpus.loop3())
    mc = mapping_category(corpus.loop3())
    for c in enumerate_cleavages(cert):
        s = good_map_from_cleavage(c, mc)
        assert cleavage_from_good_map(s, cert, mc) == c
        assert is_very_good(s, c, mc) == c.is_closed


def test_base_change():
    cert = certify_fibration(corpus.stair())
    c = default_cleavage(cert)
    phi = base_change(c, (0, 1))
    assert phi.ob(0) == 1
    ident = base_change(c, (1, 1))
    assert all(ident.ob(x) == x for x in ident.dom.objects)


def test_base_change_of_grothendieck_matches_diagram():
    F = corpus.chain_diagram()
    _, c = grothendieck(F)
    for phi in F.base.arrows:
        g = base_change(c, phi)
        Fphi = F.maps[phi]
        b2 = F.base.dst[phi]
        for (x, b) in g.dom.objects:
            assert g.ob((x, b)) == (Fphi.ob(x), b2)


def test_grothendieck_sizes():
    p, c = grothendieck(corpus.segment_diagram())
    assert len(p.dom.objects) == 3 and len(p.dom.arrows) == 6
    p, _ = grothendieck(corpus.trivial_action_on_point(2))
    assert is_isomorphic(p.dom, cyclic_group(2))


def test_constant_diagram_is_product():
    from cofibred.fibration import DiagramOfCategories
    A, B = corpus.circ(), ordinal(1)
    F = DiagramOfCategories(B, {0: A, 1: A}, {(0, 1): identity_functor(A)})
    p, _ = grothendieck(F)
    assert is_isomorphic(p.dom, product(A, B))


def test_cleavage_must_be_cartesian():
    cert = certify_fibration(corpus.stair())
    with pytest.raises(ValueError):
        cleavage_from_arrows(cert, [(0, 2)])


def test_quillen_surrogate():
    cert = certify_fibration(corpus.circ_times(1))
    assert is_quillen_fibration_homology(default_cleavage(cert), 3)["holds"]
    cert = certify_fibration(corpus.stair())
    assert is_quillen_fibration_homology(default_cleavage(cert), 3)["holds"]
    _, c = grothendieck(corpus.circ_collapse_diagram())
    res = is_quillen_fibration_homology(c, 3)
    assert not res["holds"]
    assert res["arrows"][(0, 1)] is False


def test_projection_helper():
    p = projection(corpus.circ(), ordinal(1), which=2)
    assert p.ob(("x", 1)) == 1
