import pytest

from cofibred import corpus
from cofibred.fibration import grothendieck
from cofibred.homology import (
    Bicomplex,
    coefficient_homology,
    e2_oracle,
    fiber_homology_module,
    integral_e2,
    integral_e2_oracle,
    spectral_sequence,
)
from cofibred.homology.spectral import _mul
from cofibred.nerves import cleaved_nerve


def _bicomplex(name, cap=4):
    fx = corpus.fibrations()[name]
    c = fx.cleavage()
    return c, Bicomplex(cleaved_nerve(c, cap))


def test_product_over_segment_collapses():
    c, B = _bicomplex("CIRC×[1]")
    ss = spectral_sequence(B, "Q")
    E2 = ss.page(2)
    assert E2[(0, 0)] == 1 and E2[(1, 0)] == 1
    assert all(v == 0 for (m, n), v in E2.items() if n > 0)
    assert ss.collapses_at() <= 2
    assert ss.converges()


@pytest.mark.parametrize("name", ["CIRC×[1]", "Z/2⋉CIRC"])
@pytest.mark.parametrize("coeff", ["F2", "Q", "F3"])
def test_e2_matches_oracle(name, coeff):
    c, B = _bicomplex(name)
    ss = spectral_sequence(B, coeff)
    oracle = e2_oracle(c, 4, coeff)
    assert ss.page(2) == {k: oracle[k] for k in ss.page(2)}


def test_einf_totals_match_tot():
    c, B = _bicomplex("Z/2⋉CIRC")
    ss = spectral_sequence(B, "F2", max_page=4)
    for k, dim in ss.total.items():
        assert sum(v for (m, n), v in ss.einf.items() if m + n == k) == dim


def test_differentials_square_to_zero():
    c, B = _bicomplex("Z/2⋉CIRC")
    ss = spectral_sequence(B, "F2", max_page=4)
    for r, diffs in ss.differentials.items():
        for (m, n), M in diffs.items():
            nxt = diffs.get((m + r - 1, n - r))
            if M and nxt:
                assert all(x == 0 for row in _mul(nxt, M, 2) for x in row)


def test_integral_e2_matches_coefficient_homology():
    for name in ["CIRC×[1]", "Z/2⋉CIRC"]:
        c, B = _bicomplex(name)
        assert integral_e2(B) == integral_e2_oracle(c, 4)


def test_integral_e2_row_one_of_swap():
    _, c = grothendieck(corpus.swap_action_on_circ())
    A = fiber_homology_module(c, 1, cap=4)
    H = coefficient_homology(A.category, A, cap=3)
    c2, B = _bicomplex("Z/2⋉CIRC")
    E2 = integral_e2(B)
    for n in range(2):
        assert E2[(1, n)] == H[n]


def test_integral_pages_are_refused():
    _, B = _bicomplex("STAIR", 3)
    with pytest.raises(ValueError):
        spectral_sequence(B, "Z")
