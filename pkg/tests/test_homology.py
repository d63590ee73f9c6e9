import warnings
from fractions import Fraction

import pytest

from cofibred import corpus
from cofibred.category import Functor, cyclic_group, identity_functor, ordinal
from cofibred.fibration import certify_fibration, default_cleavage, grothendieck
from cofibred.homology import (
    AbelianGroup,
    Bicomplex,
    ChainComplex,
    DegreeAboveGuarantee,
    ModuleOverCategory,
    PresentedGroup,
    coefficient_homology,
    constant_module,
    eilenberg_zilber_check,
    fiber_homology_module,
    homology,
    homology_over_field,
    induced_map_is_iso,
    induced_map_on_homology,
    normalized_chain_complex,
    simplicial_chain_map,
    simplicial_homology,
    total_complex,
)
from cofibred.homology.chains import parse_coeff
from cofibred.nerves import cleaved_nerve, fibred_nerve, inclusion
from cofibred.simplicial import (
    SimplicialMap,
    constant_bisimplicial,
    diagonal,
    diagonal_map,
    functor_nerve_map,
    nerve,
)

Z = AbelianGroup(1)
ZERO = AbelianGroup()


def test_group_string_forms():
    assert str(AbelianGroup(2, (2, 6))) == "Z^2 + Z/2 + Z/6"
    assert str(ZERO) == "0"
    assert AbelianGroup(1, (4,)).dim_tensor(2) == 2
    assert AbelianGroup(1, (4,)).dim_tensor(0) == 1


def test_terminal_object_is_contractible():
    X = nerve(ordinal(3), cap=4)
    assert simplicial_homology(X, 0) == Z
    for k in range(1, 4):
        assert simplicial_homology(X, k) == ZERO


def test_circle_and_z2():
    X = nerve(corpus.circ(), cap=3)
    assert [simplicial_homology(X, k) for k in range(3)] == [Z, Z, ZERO]
    G = nerve(cyclic_group(2), cap=4)
    got = [str(simplicial_homology(G, k)) for k in range(4)]
    assert got == ["Z", "Z/2", "0", "Z/2"]


def test_z3_over_fields():
    C = normalized_chain_complex(nerve(cyclic_group(3), cap=4))
    assert [homology_over_field(C, k, 3) for k in range(4)] == [1, 1, 1, 1]
    assert [homology_over_field(C, k, 2) for k in range(4)] == [1, 0, 0, 0]
    assert [homology_over_field(C, k, 0) for k in range(4)] == [1, 0, 0, 0]


def test_boundary_squares_to_zero():
    for C in [corpus.circ(), corpus.loop3_total(), cyclic_group(3)]:
        assert normalized_chain_complex(nerve(C, 4)).check_d_squared()


def test_guarantee_warning():
    C = normalized_chain_complex(nerve(ordinal(1), cap=2))
    with pytest.warns(DegreeAboveGuarantee):
        homology(C, 2)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        homology(C, 1)


def test_hand_built_complex():
    # Z <-2- Z : H_0 = Z/2, H_1 = 0
    C = ChainComplex([["a"], ["b"], []], {1: [{0: 2}], 2: []})
    assert homology(C, 0) == AbelianGroup(0, (2,))
    assert homology(C, 1) == ZERO


def test_identity_induces_identity():
    X = nerve(corpus.circ(), cap=3)
    f = SimplicialMap(X, X, lambda n, x: x)
    assert induced_map_on_homology(f, 1) == [[1]]
    assert induced_map_on_homology(f, 0) == [[1]]
    assert induced_map_on_homology(f, 1, "F2") == [[1]]
    assert induced_map_on_homology(f, 1, "Q") == [[Fraction(1)]]


def test_swap_acts_by_minus_one():
    A = corpus.circ()
    X = nerve(A, cap=3)
    swap = Functor(A, A, {"x": "x", "y": "y"}, {"f": "g", "g": "f"})
    f = functor_nerve_map(swap, X, X)
    assert induced_map_on_homology(f, 1) == [[-1]]
    assert induced_map_on_homology(f, 1, "F3") == [[2]]
    assert induced_map_on_homology(f, 1, "Q") == [[-1]]


def test_loop3_inclusion_kills_h1():
    cert = certify_fibration(corpus.loop3())
    c = corpus.loop3_bad_cleavage(cert)
    nc, nf = cleaved_nerve(c, 3), fibred_nerve(cert, 3)
    dc, df = diagonal(nc), diagonal(nf)
    i = diagonal_map(inclusion(nc, nf), dc, df)
    assert simplicial_homology(dc, 1) == Z
    assert simplicial_homology(df, 1) == ZERO
    assert not induced_map_is_iso(i, 1)
    assert induced_map_on_homology(i, 1) == []


def test_chain_map_commutes():
    cert = certify_fibration(corpus.stair())
    nf = fibred_nerve(cert, 3)
    from cofibred.nerves import k_map
    phi = simplicial_chain_map(k_map(nf))
    assert phi.check()


def test_coeff_parsing():
    assert parse_coeff("Z") is None
    assert parse_coeff("Q") == 0
    assert parse_coeff("F3") == 3
    with pytest.raises(ValueError):
        parse_coeff("F4")


# -- coefficient systems ----------------------------------------------------

def test_constant_coefficients_give_nerve_homology():
    for C in [corpus.circ(), ordinal(2), cyclic_group(2)]:
        got = coefficient_homology(C, constant_module(C), cap=4)
        X = nerve(C, 4)
        assert got == [simplicial_homology(X, k) for k in range(4)]


def test_terminal_object_h0_is_value_there():
    B = ordinal(1)
    A = ModuleOverCategory(B, {0: PresentedGroup.of(Z), 1: PresentedGroup.of(AbelianGroup(0, (3,)))},
                           {(0, 1): [[1]]})
    A.check()
    H = coefficient_homology(B, A, cap=3)
    assert H[0] == AbelianGroup(0, (3,))
    assert H[1] == ZERO


def test_fiber_homology_of_product_is_constant():
    cert = certify_fibration(corpus.circ_times(1))
    A = fiber_homology_module(default_cleavage(cert), 1, cap=3)
    for b in (0, 1):
        assert A.values[b].group() == Z
    assert A.maps[(0, 1)] == [[1]]


def test_fiber_homology_of_swap_is_sign():
    _, c = grothendieck(corpus.swap_action_on_circ())
    A = fiber_homology_module(c, 1, cap=3)
    assert A.maps[1] == [[-1]]
    H = coefficient_homology(A.category, A, cap=4)
    # Z with the sign action: H_0 = Z/2, H_1 = 0, H_2 = Z/2
    assert [str(g) for g in H[:3]] == ["Z/2", "0", "Z/2"]


def test_non_functorial_module_rejected():
    from cofibred.homology import FunctorialityFailure
    G = cyclic_group(2)
    A = ModuleOverCategory(G, {"*": PresentedGroup.of(Z)}, {1: [[2]]})
    with pytest.raises(FunctorialityFailure):
        A.check()


# -- bicomplexes ------------------------------------------------------------

def test_total_complex_squares_to_zero():
    for name in ["STAIR", "CIRC×[1]", "Z/2⋉CIRC"]:
        fx = corpus.fibrations()[name]
        nc = cleaved_nerve(fx.cleavage(), 3)
        B = Bicomplex(nc)
        assert B.check_commute()
        assert total_complex(B).check_d_squared()


def test_eilenberg_zilber_on_constant():
    X = nerve(corpus.circ(), 3)
    K = constant_bisimplicial(X, "h")
    res = eilenberg_zilber_check(K)
    assert res["holds"]
    assert res["degrees"][1] == (Z, Z)


def test_eilenberg_zilber_on_fibred_nerves():
    cert = certify_fibration(corpus.circ_times(1))
    assert eilenberg_zilber_check(fibred_nerve(cert, 3))["holds"]
    cert = certify_fibration(corpus.stair())
    assert eilenberg_zilber_check(cleaved_nerve(default_cleavage(cert), 3))["holds"]


def test_identity_fibration_module():
    cert = certify_fibration(identity_functor(ordinal(2)))
    A = fiber_homology_module(default_cleavage(cert), 0, cap=2)
    assert all(A.values[b].group() == Z for b in range(3))
