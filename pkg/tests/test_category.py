import pytest

from cofibred import corpus
from cofibred.category import (
    CategoryError,
    Functor,
    MissingComposite,
    arrow_category,
    compose_functors,
    cyclic_group,
    fiber,
    homotopy_fiber,
    identity_functor,
    is_isomorphic,
    mapping_category,
    ordinal,
    product,
    validate_category,
)


def test_ordinal_sizes():
    for n, arrows in [(0, 1), (1, 3), (2, 6), (3, 10)]:
        C = ordinal(n)
        assert len(C.objects) == n + 1
        assert len(C.arrows) == arrows


def test_validate_ordinal_description():
    raw = {"objects": [0, 1, 2],
           "arrows": {"a": (0, 1), "b": (1, 2), "c": (0, 2)},
           "compose": {("b", "a"): "c"}}
    C = validate_category(raw)
    assert len(C.arrows) == 6
    assert is_isomorphic(C, ordinal(2))


def test_missing_composite_is_reported():
    raw = {"objects": [0, 1, 2], "arrows": {"a": (0, 1), "b": (1, 2), "c": (0, 2)}}
    with pytest.raises(MissingComposite):
        validate_category(raw)


def test_nonassociative_or_bad_table_rejected():
    # the composite lands in the wrong hom-set
    raw = {"objects": [0, 1, 2], "arrows": {"a": (0, 1), "b": (1, 2), "c": (0, 2)},
           "compose": {("b", "a"): "a"}}
    with pytest.raises(CategoryError):
        validate_category(raw)


def test_circ():
    C = corpus.circ()
    assert len(C.objects) == 2 and len(C.arrows) == 4


def test_products():
    assert len(product(ordinal(1), ordinal(1)).arrows) == 9
    P = product(corpus.circ(), ordinal(1))
    assert len(P.objects) == 4 and len(P.arrows) == 12


def test_arrow_category():
    BI, dom, cod = arrow_category(ordinal(1))
    assert len(BI.objects) == 3 and len(BI.arrows) == 6
    BI0, _, _ = arrow_category(ordinal(0))
    assert is_isomorphic(BI0, ordinal(0))
    cod.check_laws()
    dom.check_laws()


def test_fibers():
    p = corpus.stair()
    assert is_isomorphic(fiber(p, 1)[0], ordinal(1))
    assert is_isomorphic(fiber(p, 0)[0], ordinal(0))
    q = corpus.circ_times(1)
    assert is_isomorphic(fiber(q, 0)[0], corpus.circ())


def test_homotopy_fibers():
    u = identity_functor(ordinal(1))
    H, _ = homotopy_fiber(u, 1)
    assert is_isomorphic(H, ordinal(1))
    H, _ = homotopy_fiber(corpus.stair(), 1)
    assert len(H.objects) == 3
    # nothing maps into 0 except from the fiber itself
    H0, _ = homotopy_fiber(corpus.stair(), 0)
    assert len(H0.objects) == len(fiber(corpus.stair(), 0)[0].objects)


def test_mapping_category():
    mc = mapping_category(identity_functor(ordinal(1)))
    assert len(mc.category.objects) == 3
    BI, _, _ = arrow_category(ordinal(1))
    assert is_isomorphic(mc.category, BI)
    u = Functor(ordinal(0), ordinal(1), {0: 0}, {})
    mc = mapping_category(u)
    assert is_isomorphic(mc.category, ordinal(1))
    assert compose_functors(mc.pi, mc.i) == u


def test_functor_laws_checked():
    with pytest.raises(CategoryError):
        # sends 0 -> 1 to an arrow with the wrong endpoints
        Functor(ordinal(1), ordinal(1), {0: 0, 1: 1}, {(0, 1): (1, 1)})


def test_cyclic_group():
    G = cyclic_group(3)
    assert len(G.objects) == 1 and len(G.arrows) == 3
    assert G.compose(2, 2) == 1
