from cofibred import corpus
from cofibred.category import fiber, ordinal
from cofibred.fibration import certify_fibration, default_cleavage, grothendieck
from cofibred.homology import induced_map_is_iso
from cofibred.nerves import (
    Grid,
    base,
    base_slice,
    cleaved_nerve,
    cleaved_to_hc,
    cleaved_to_tcp,
    fibred_nerve,
    inclusion,
    k_map,
    kbar,
    mast,
    mu,
    nu,
    nu_map,
    tn_from_tuple,
    tuple_from_tn,
)
from cofibred.simplicial import Chain, codiagonal, diagonal, nerve, theta


def _stair():
    cert = certify_fibration(corpus.stair())
    return cert, default_cleavage(cert)


def test_grid_sizes_of_product():
    cert = certify_fibration(corpus.circ_times(1))
    nf = fibred_nerve(cert, 2)
    # CIRC has 4 arrows, [1] has 3
    assert len(nf.level(1, 1)) == 12
    nf.check_identities()


def test_cleaved_nerve_is_sub_bisimplicial():
    cert, c = _stair()
    nf, nc = fibred_nerve(cert, 3), cleaved_nerve(c, 3)
    nc.check_identities()
    i = inclusion(nc, nf)
    i.check()
    for m in range(4):
        for n in range(4 - m):
            assert set(nc.level(m, n)) <= set(nf.level(m, n))


def test_loop3_bad_cleavage_masts_trivial():
    cert = certify_fibration(corpus.loop3())
    c = corpus.loop3_bad_cleavage(cert)
    nc = cleaved_nerve(c, 3)
    p = c.functor
    for m in range(4):
        for n in range(4 - m):
            for s in nc.level(m, n):
                if {p.ob(x) for row in s.objs for x in row} != {2}:
                    assert all(c.total.is_identity(f) for f in mast(s).arrows)


def test_degenerate_grid_from_object():
    cert, c = _stair()
    nf = fibred_nerve(cert, 2)
    s0 = Grid(((1,),), (), ((),))
    s = nf.hdeg(0, 0, 0, s0)
    s = nf.vdeg(0, 1, 0, s)
    assert base(cert.functor, s) == Chain((1, 1), ((1, 1),))
    assert mast(s) == Chain((1, 1), ((1, 1),))


def test_nu_on_stair():
    cert, c = _stair()
    s = nu(c, Chain((0, 1), ((0, 1),)), Chain((0,), ()))
    assert s.horiz == (((0, 1),),)
    assert base(c.functor, s) == Chain((0, 1), ((0, 1),))
    assert mast(s) == Chain((0,), ())


def test_mu_nu_and_mu_homology():
    cert, c = _stair()
    nf = fibred_nerve(cert, 3)
    bbar = Chain((0, 1), ((0, 1),))
    X = base_slice(nf, bbar)
    Y = nerve(fiber(c.functor, 0)[0], 3)
    m = mu(nf, bbar, X, Y)
    n = nu_map(c, nf, bbar, X, Y)
    assert m.is_simplicial() and n.is_simplicial()
    for k in range(4):
        for a in Y.levels[k]:
            assert m(k, n(k, a)) == a
    for k in range(3):
        assert induced_map_is_iso(m, k)


def test_k_is_homology_iso_on_stair():
    cert, c = _stair()
    nf = fibred_nerve(cert, 3)
    k = k_map(nf)
    assert k.is_simplicial()
    for d in range(3):
        assert induced_map_is_iso(k, d)


def test_codiagonal_of_cleaved_nerve_is_nerve():
    cert, c = _stair()
    nc = cleaved_nerve(c, 3)
    cK = codiagonal(nc)
    kb = kbar(nc, cK)
    assert kb.is_simplicial()
    assert kb.is_levelwise_bijection()
    assert cK.sizes() == nerve(c.total, 3).sizes()


def test_theta_matches_tn_restriction():
    cert = certify_fibration(corpus.stair())
    nf = fibred_nerve(cert, 2)
    dK, cK = diagonal(nf), codiagonal(nf)
    t = theta(nf, dK, cK)
    assert t.is_simplicial()
    for n in range(3):
        for s in dK.levels[n]:
            xs = t(n, s)
            assert tuple_from_tn(tn_from_tuple(xs)) == xs
            T = tn_from_tuple(xs)
            for (i, j), e in T.obj:
                assert e == s.objs[i][j]


def test_theta_on_identity_fibration():
    from cofibred.category import identity_functor
    cert = certify_fibration(identity_functor(ordinal(1)))
    nf = fibred_nerve(cert, 2)
    t = theta(nf)
    for n in range(3):
        for s in diagonal(nf).levels[n]:
            T = tn_from_tuple(t(n, s))
            assert all(e == s.objs[i][j] for (i, j), e in T.obj)


def test_cleaved_to_hc_segment():
    f, nc, H = cleaved_to_hc(corpus.segment_diagram(), 3)
    f.check()
    assert f.is_levelwise_bijection()
    for m in range(4):
        for n in range(4 - m):
            assert len(nc.level(m, n)) == len(H.level(m, n))


def test_cleaved_to_hc_over_point():
    from cofibred.fibration import DiagramOfCategories
    F = DiagramOfCategories(ordinal(0), {0: ordinal(1)}, {})
    f, nc, H = cleaved_to_hc(F, 2)
    assert f.is_levelwise_bijection()


def test_cleaved_to_tcp_trivial_action():
    f, dN, T = cleaved_to_tcp(corpus.trivial_action_on_point(1), 2)
    assert f.is_simplicial() and f.is_levelwise_bijection()


def test_cleaved_to_tcp_swap():
    f, dN, T = cleaved_to_tcp(corpus.swap_action_on_circ(), 3)
    assert f.is_simplicial() and f.is_levelwise_bijection()


def test_grothendieck_nerves_agree_on_closed_cleavage():
    p, c = grothendieck(corpus.chain_diagram())
    nc = cleaved_nerve(c, 2)
    nf = fibred_nerve(c.cert, 2)
    for m in range(3):
        for n in range(3 - m):
            assert set(nc.level(m, n)) <= set(nf.level(m, n))
            assert all(f in c.arrows for s in nc.level(m, n) for row in s.horiz for f in row)
