import pytest

from cofibred import corpus
from cofibred.category import cyclic_group, ordinal
from cofibred.simplicial import (
    Chain,
    ConstantSimplicialGroup,
    InvalidTwisting,
    SimplicialIdentityError,
    SimplicialMap,
    SimplicialSet,
    TwistingFunction,
    codiagonal,
    constant_bisimplicial,
    diagonal,
    group_nerve_twisting,
    hc,
    nerve,
    nerve_diagram,
    product_sset,
    tcp,
    theta,
)


def test_nerve_of_ordinal():
    X = nerve(ordinal(2), cap=3)
    assert [len(X.nondegenerate(n)) for n in range(4)] == [3, 3, 1, 0]
    X.check_identities()


def test_nerve_faces_compose():
    X = nerve(ordinal(2), cap=2)
    top = Chain((0, 1, 2), ((0, 1), (1, 2)))
    assert X.face(2, 1, top) == Chain((0, 2), ((0, 2),))
    assert X.face(2, 0, top) == Chain((1, 2), ((1, 2),))
    assert X.face(2, 2, top) == Chain((0, 1), ((0, 1),))


def test_nerve_sizes_circ_and_group():
    X = nerve(corpus.circ(), cap=3)
    assert X.sizes()[:2] == [2, 4]
    G = nerve(cyclic_group(2), cap=3)
    assert G.sizes() == [1, 2, 4, 8]
    assert len(G.nondegenerate(3)) == 1


def test_broken_face_detected():
    X = nerve(ordinal(1), cap=2)
    bad = SimplicialSet(X.levels, lambda n, i, x: X.face(n, 0, x), X.degeneracy)
    with pytest.raises(SimplicialIdentityError):
        bad.check_identities()


def test_diagonal_of_constant_is_original():
    X = nerve(corpus.circ(), cap=3)
    for direction in "hv":
        K = constant_bisimplicial(X, direction)
        K.check_identities()
        d = diagonal(K)
        assert d.sizes() == X.sizes()
        iso = SimplicialMap(d, X, lambda n, x: x)
        assert iso.is_simplicial() and iso.is_levelwise_bijection()


def test_codiagonal_of_constant_is_original():
    X = nerve(ordinal(1), cap=3)
    K = constant_bisimplicial(X, "v")
    C = codiagonal(K)
    assert C.sizes() == X.sizes()
    C.check_identities()
    t = theta(K)
    assert t.is_simplicial()


def test_hc_over_point_is_constant():
    from cofibred.fibration import DiagramOfCategories
    F = DiagramOfCategories(ordinal(0), {0: corpus.circ()}, {})
    H = hc(nerve_diagram(F, 2))
    X = nerve(corpus.circ(), 2)
    for m in range(3):
        for n in range(3):
            assert len(H.level(m, n)) == len(X.levels[m])


def test_hc_segment_level_sizes():
    H = hc(nerve_diagram(corpus.segment_diagram(), 3))
    assert len(H.level(0, 0)) == 3
    H.check_identities()


def test_trivial_twisting_is_product():
    A, B = nerve(ordinal(1), 2), nerve(ordinal(1), 2)
    G = ConstantSimplicialGroup((0,), lambda g, h: 0, 0, lambda g, n, x: x, A)
    T = tcp(A, G, B, TwistingFunction(lambda n, b: 0))
    P = product_sset(A, B)
    assert T.sizes() == P.sizes()
    for n in range(1, 3):
        for x in T.levels[n]:
            assert T.faces(n, x) == P.faces(n, x)


def test_group_twisting_valid_and_bad_twisting_rejected():
    from cofibred.nerves import action_group
    F = corpus.swap_action_on_circ()
    grp, NA = action_group(F, 3)
    grp.check()
    NG = nerve(F.base, 3)
    tcp(NA, grp, NG, group_nerve_twisting())
    # τ = last letter instead of the first breaks d_0 d_0 = d_0 d_1
    last = TwistingFunction(lambda n, ch: ch.arrows[-1])
    with pytest.raises(InvalidTwisting):
        tcp(NA, grp, NG, last)
